use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use super::Rational;
use crate::{Error, Result};

/// Backing store for the partial quotients `a_1, a_2, ...`.
#[derive(Clone)]
enum Partials {
    Finite(Vec<u64>),
    Periodic {
        prefix: Vec<u64>,
        period: Vec<u64>,
    },
    /// `a_m = rule(m + offset)`, for quotient sequences given by a formula.
    Rule {
        rule: fn(usize) -> u64,
        offset: usize,
    },
}

/// Continued fraction `[a0; a1, a2, ...]`, finite or infinite.
///
/// Finite expansions are kept in the shorter canonical form `a_L > 1`
/// (except for `L = 1`).
#[derive(Clone)]
pub struct CFExpansion {
    a0: BigInt,
    partials: Partials,
}

fn e_minus_two(m: usize) -> u64 {
    // e - 2 = [0; 1, 2, 1, 1, 4, 1, 1, 6, ...]
    if m % 3 == 2 {
        2 * (m as u64 + 1) / 3
    } else {
        1
    }
}

impl CFExpansion {
    /// Finite expansion; a trailing quotient 1 is folded into its predecessor.
    pub fn finite(a0: impl Into<BigInt>, mut partials: Vec<u64>) -> Result<Self> {
        if partials.contains(&0) {
            return Err(Error::Parse("partial quotients must be positive".into()));
        }
        if partials.len() >= 2 && partials.last() == Some(&1) {
            partials.pop();
            let last = partials.last_mut().unwrap();
            *last = last
                .checked_add(1)
                .ok_or_else(|| Error::Overflow("partial quotient".into()))?;
        }
        Ok(CFExpansion {
            a0: a0.into(),
            partials: Partials::Finite(partials),
        })
    }

    /// Eventually periodic expansion `[a0; prefix, period, period, ...]`.
    pub fn periodic(a0: impl Into<BigInt>, prefix: Vec<u64>, period: Vec<u64>) -> Result<Self> {
        if period.is_empty() {
            return Err(Error::Parse("empty period".into()));
        }
        if prefix.contains(&0) || period.contains(&0) {
            return Err(Error::Parse("partial quotients must be positive".into()));
        }
        Ok(CFExpansion {
            a0: a0.into(),
            partials: Partials::Periodic { prefix, period },
        })
    }

    /// Infinite expansion with `a_m = rule(m)` for `m >= 1`.
    pub fn from_rule(a0: impl Into<BigInt>, rule: fn(usize) -> u64) -> Self {
        CFExpansion {
            a0: a0.into(),
            partials: Partials::Rule { rule, offset: 0 },
        }
    }

    /// `(sqrt 5 - 1)/2 = [0; 1, 1, 1, ...]`.
    pub fn golden() -> Self {
        Self::periodic(0, vec![], vec![1]).unwrap()
    }

    /// `1/sqrt 2 = [0; 1, 2, 2, 2, ...]`.
    pub fn sqrt2inv() -> Self {
        Self::periodic(0, vec![1], vec![2]).unwrap()
    }

    /// `e - 2 = [0; 1, 2, 1, 1, 4, 1, 1, 6, ...]`.
    pub fn e_minus_2() -> Self {
        Self::from_rule(0, e_minus_two)
    }

    pub fn a0(&self) -> &BigInt {
        &self.a0
    }

    /// Length `L` for finite expansions.
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> Option<usize> {
        match &self.partials {
            Partials::Finite(v) => Some(v.len()),
            _ => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.len().is_some()
    }

    /// `a_m` for `m >= 1`; `None` past the end of a finite expansion
    /// (read as `a_m = infinity`).
    pub fn partial(&self, m: usize) -> Option<u64> {
        assert!(m >= 1, "partial quotients are indexed from 1");
        let i = m - 1;
        match &self.partials {
            Partials::Finite(v) => v.get(i).copied(),
            Partials::Periodic { prefix, period } => Some(if i < prefix.len() {
                prefix[i]
            } else {
                period[(i - prefix.len()) % period.len()]
            }),
            Partials::Rule { rule, offset } => Some(rule(m + offset)),
        }
    }

    /// `a_1, ..., a_n` (shorter if the expansion ends first).
    pub fn prefix(&self, n: usize) -> Vec<u64> {
        (1..=n).map_while(|m| self.partial(m)).collect()
    }

    /// Exact value of a finite expansion.
    pub fn value(&self) -> Option<Rational> {
        let v = match &self.partials {
            Partials::Finite(v) => v,
            _ => return None,
        };
        Some(evaluate(&self.a0, v))
    }

    /// Exact value of `[a0; a_1, ..., a_depth]` (not canonicalised).
    pub fn truncated_value(&self, depth: usize) -> Rational {
        evaluate(&self.a0, &self.prefix(depth))
    }

    /// The expansion of `{1/alpha} = [0; a_2, a_3, ...]`.
    pub fn tail(&self) -> Result<CFExpansion> {
        if !self.a0.is_zero() {
            return Err(Error::Precondition("tail needs a0 = 0".into()));
        }
        let partials = match &self.partials {
            Partials::Finite(v) if v.is_empty() => {
                return Err(Error::Precondition("tail of an integer".into()))
            }
            Partials::Finite(v) => Partials::Finite(v[1..].to_vec()),
            Partials::Periodic { prefix, period } => {
                if prefix.is_empty() {
                    let mut p = period.clone();
                    p.rotate_left(1);
                    Partials::Periodic {
                        prefix: vec![],
                        period: p,
                    }
                } else {
                    Partials::Periodic {
                        prefix: prefix[1..].to_vec(),
                        period: period.clone(),
                    }
                }
            }
            Partials::Rule { rule, offset } => Partials::Rule {
                rule: *rule,
                offset: offset + 1,
            },
        };
        Ok(CFExpansion {
            a0: BigInt::zero(),
            partials,
        })
    }
}

fn evaluate(a0: &BigInt, partials: &[u64]) -> Rational {
    let mut acc: Option<BigRational> = None;
    for &a in partials.iter().rev() {
        let a = BigRational::from_integer(BigInt::from(a));
        acc = Some(match acc {
            None => a,
            Some(t) => a + t.recip(),
        });
    }
    let a0 = BigRational::from_integer(a0.clone());
    Rational::from(match acc {
        None => a0,
        Some(t) => a0 + t.recip(),
    })
}

/// Canonical continued fraction of a rational by the Euclidean algorithm.
pub fn cf_expand(r: &Rational) -> Result<CFExpansion> {
    let a0 = r.floor();
    let mut num = r.num() - &a0 * r.den();
    let mut den = r.den().clone();
    let mut partials = Vec::new();
    while !num.is_zero() {
        let (a, rem) = den.div_rem(&num);
        partials.push(
            a.to_u64()
                .ok_or_else(|| Error::Overflow(format!("partial quotient {a}")))?,
        );
        den = num;
        num = rem;
    }
    // The Euclidean algorithm already ends with a_L >= 2 (or L = 1).
    CFExpansion::finite(a0, partials)
}

impl PartialEq for CFExpansion {
    /// Finite expansions compare exactly; infinite ones on their first 64 quotients.
    fn eq(&self, other: &Self) -> bool {
        if self.a0 != other.a0 || self.len() != other.len() {
            return false;
        }
        let n = self.len().unwrap_or(64);
        self.prefix(n) == other.prefix(n)
    }
}

impl fmt::Debug for CFExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for CFExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}", self.a0)?;
        let shown = self.prefix(self.len().unwrap_or(12));
        for (i, a) in shown.iter().enumerate() {
            write!(f, "{}{a}", if i == 0 { "; " } else { ", " })?;
        }
        if !self.is_finite() {
            write!(f, ", ...")?;
        }
        write!(f, "]")
    }
}

fn parse_digits(s: &str) -> Result<Vec<u64>> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<u64>()
                .map_err(|_| Error::Parse(format!("bad partial quotient {t:?}")))
        })
        .collect()
}

impl FromStr for CFExpansion {
    type Err = Error;

    /// Accepts the presets `golden`, `sqrt2inv`, `e-2`, a literal digit list
    /// `cf:a1,a2,...` with optional `~period:b1,b2,...`, or a rational `p/q`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "golden" => return Ok(Self::golden()),
            "sqrt2inv" => return Ok(Self::sqrt2inv()),
            "e-2" => return Ok(Self::e_minus_2()),
            _ => {}
        }
        if let Some(body) = s.strip_prefix("cf:") {
            return match body.split_once("~period:") {
                Some((prefix, period)) => {
                    Self::periodic(0, parse_digits(prefix)?, parse_digits(period)?)
                }
                None => {
                    let digits = parse_digits(body)?;
                    if digits.is_empty() {
                        return Err(Error::Parse("empty digit list".into()));
                    }
                    Self::finite(0, digits)
                }
            };
        }
        cf_expand(&s.parse::<Rational>()?)
    }
}
