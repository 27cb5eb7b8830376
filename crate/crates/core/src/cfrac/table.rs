use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{CFExpansion, Rational};
use crate::{Error, Result};

/// Precision budget for convergent tables of irrational numbers.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TableConfig {
    /// Relative accuracy target for `theta_l`, in bits.
    pub precision_bits: u32,
    /// Minimum number of extra quotients used beyond the requested depth.
    pub guard_depth: usize,
}

impl Default for TableConfig {
    fn default() -> Self {
        TableConfig {
            precision_bits: 128,
            guard_depth: 8,
        }
    }
}

/// Convergents `p_l/q_l` and signed errors `theta_l = q_l alpha - p_l` for
/// `l = -1, 0, ..., depth`.
///
/// The `theta_l` are exact rationals. For an irrational `alpha` they are
/// exact for a deep rational truncation `alpha_M`, chosen so that the
/// relative error against the true value is below `2^-precision_bits`.
#[derive(Clone, Debug)]
pub struct ConvergentTable {
    cf: CFExpansion,
    alpha: Rational,
    truncation_depth: Option<usize>,
    depth: usize,
    // Row `i` stores index `l = i - 1`.
    p: Vec<BigInt>,
    q: Vec<BigInt>,
    q_small: Vec<Option<u64>>,
    theta_num: Vec<BigInt>,
    theta_den: BigInt,
    theta_f: Vec<f64>,
}

/// Table up to index `upto` with the default precision budget.
pub fn convergents(cf: &CFExpansion, upto: usize) -> Result<ConvergentTable> {
    ConvergentTable::new(cf, upto, TableConfig::default())
}

fn bits(x: &BigInt) -> u64 {
    x.bits()
}

impl ConvergentTable {
    pub fn new(cf: &CFExpansion, upto: usize, config: TableConfig) -> Result<Self> {
        if let Some(len) = cf.len() {
            if upto > len {
                return Err(Error::BeyondLength {
                    requested: upto,
                    len,
                });
            }
        }
        if config.precision_bits < 64 {
            return Err(Error::Precondition("precision_bits must be >= 64".into()));
        }

        let a0 = cf.a0().clone();
        let mut p = vec![BigInt::one(), a0.clone()];
        let mut q = vec![BigInt::zero(), BigInt::one()];
        let push = |p: &mut Vec<BigInt>, q: &mut Vec<BigInt>, a: u64| {
            let n = p.len();
            let a = BigInt::from(a);
            let np = &a * &p[n - 1] + &p[n - 2];
            let nq = &a * &q[n - 1] + &q[n - 2];
            p.push(np);
            q.push(nq);
        };

        let (alpha, truncation_depth) = match cf.value() {
            Some(v) => {
                for m in 1..=upto {
                    push(&mut p, &mut q, cf.partial(m).unwrap());
                }
                (v, None)
            }
            None => {
                // q_M >= 2^(P/2) q_{upto+1} makes the truncation error of
                // theta_l relative to |theta_l| at most 2^-P for l <= upto.
                let mut m = 0;
                let mut target = None;
                loop {
                    if m == upto + 1 {
                        target = Some(bits(&q[m + 1]) + u64::from(config.precision_bits) / 2 + 1);
                    }
                    if m >= upto + config.guard_depth
                        && target.is_some_and(|t| bits(&q[m + 1]) >= t)
                    {
                        break;
                    }
                    m += 1;
                    push(&mut p, &mut q, cf.partial(m).unwrap());
                }
                let v = Rational::from(BigRational::new(p[m + 1].clone(), q[m + 1].clone()));
                (v, Some(m))
            }
        };

        // theta_l = t_l / den with t_{-1} = -den, t_0 = num - a0 den,
        // t_{l+1} = a_{l+1} t_l + t_{l-1}.
        let theta_den = alpha.den().clone();
        let mut theta_num = vec![-theta_den.clone(), alpha.num() - &a0 * &theta_den];
        for m in 1..=upto {
            let a = BigInt::from(cf.partial(m).unwrap());
            let n = theta_num.len();
            let next = &a * &theta_num[n - 1] + &theta_num[n - 2];
            theta_num.push(next);
        }
        p.truncate(upto + 2);
        q.truncate(upto + 2);

        let theta_f = theta_num
            .iter()
            .map(|t| {
                BigRational::new_raw(t.clone(), theta_den.clone())
                    .to_f64()
                    .unwrap_or(f64::NAN)
            })
            .collect();
        let q_small = q.iter().map(|x| x.to_u64()).collect();

        Ok(ConvergentTable {
            cf: cf.clone(),
            alpha,
            truncation_depth,
            depth: upto,
            p,
            q,
            q_small,
            theta_num,
            theta_den,
            theta_f,
        })
    }

    /// Table over the whole of a finite expansion.
    pub fn full(cf: &CFExpansion) -> Result<Self> {
        let len = cf
            .len()
            .ok_or_else(|| Error::Precondition("full table of an infinite expansion".into()))?;
        convergents(cf, len)
    }

    /// Table for a rational, over its whole expansion.
    pub fn of_rational(r: &Rational) -> Result<Self> {
        Self::full(&super::cf_expand(r)?)
    }

    pub fn expansion(&self) -> &CFExpansion {
        &self.cf
    }

    /// Largest index `K` in the table.
    pub fn depth(&self) -> usize {
        self.depth
    }

    /// The exact rational standing in for `alpha` (alpha itself when rational).
    pub fn alpha(&self) -> &Rational {
        &self.alpha
    }

    pub fn is_exact(&self) -> bool {
        self.truncation_depth.is_none()
    }

    /// Depth `M` of the rational truncation used for an irrational `alpha`.
    pub fn truncation_depth(&self) -> Option<usize> {
        self.truncation_depth
    }

    /// `a_m`, `None` (read as infinity) past the end of a finite expansion.
    pub fn a(&self, m: usize) -> Option<u64> {
        self.cf.partial(m)
    }

    fn row(&self, ell: usize) -> usize {
        assert!(
            ell <= self.depth,
            "index {ell} beyond table depth {}",
            self.depth
        );
        ell + 1
    }

    pub fn p(&self, ell: usize) -> &BigInt {
        &self.p[self.row(ell)]
    }

    pub fn q(&self, ell: usize) -> &BigInt {
        &self.q[self.row(ell)]
    }

    /// `p_{l-1}`, with `p_{-1} = 1`.
    pub fn p_prev(&self, ell: usize) -> &BigInt {
        &self.p[self.row(ell) - 1]
    }

    /// `q_{l-1}`, with `q_{-1} = 0`.
    pub fn q_prev(&self, ell: usize) -> &BigInt {
        &self.q[self.row(ell) - 1]
    }

    /// `q_l` as a machine integer.
    pub fn q_u64(&self, ell: usize) -> Result<u64> {
        self.q_small[self.row(ell)].ok_or_else(|| Error::Overflow(format!("q_{ell}")))
    }

    pub fn p_u64(&self, ell: usize) -> Result<u64> {
        self.p(ell)
            .to_u64()
            .ok_or_else(|| Error::Overflow(format!("p_{ell}")))
    }

    /// `q_l` if it fits, else `None` (meaning "larger than any u64").
    pub(crate) fn q_small(&self, ell: usize) -> Option<u64> {
        self.q_small[self.row(ell)]
    }

    /// Exact `theta_l = q_l alpha - p_l`.
    pub fn theta(&self, ell: usize) -> BigRational {
        BigRational::new(
            self.theta_num[self.row(ell)].clone(),
            self.theta_den.clone(),
        )
    }

    /// Exact `theta_{l-1}`, with `theta_{-1} = -1`.
    pub fn theta_prev(&self, ell: usize) -> BigRational {
        BigRational::new(
            self.theta_num[self.row(ell) - 1].clone(),
            self.theta_den.clone(),
        )
    }

    /// Exact `||q_l alpha|| = |theta_l|`.
    pub fn dist(&self, ell: usize) -> BigRational {
        self.theta(ell).abs()
    }

    pub fn theta_f64(&self, ell: usize) -> f64 {
        self.theta_f[self.row(ell)]
    }

    pub fn dist_f64(&self, ell: usize) -> f64 {
        self.theta_f64(ell).abs()
    }

    /// `||q_{l-1} alpha||`, with the value 1 at `l = 0`.
    pub fn dist_prev_f64(&self, ell: usize) -> f64 {
        self.theta_f[self.row(ell) - 1].abs()
    }

    /// `log max_{1 <= m <= k} a_m`, zero for `k = 0`.
    pub fn log_max_a(&self, k: usize) -> f64 {
        (1..=k)
            .filter_map(|m| self.a(m))
            .max()
            .map_or(0.0, |a| (a as f64).ln())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn table(s: &str, upto: usize) -> ConvergentTable {
        convergents(&s.parse().unwrap(), upto).unwrap()
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn small_tables() {
        let t = table("cf:2,2", 2);
        assert_eq!(
            (0..=2).map(|l| t.q(l).clone()).collect::<Vec<_>>(),
            ints(&[1, 2, 5])
        );
        assert_eq!(
            (0..=2).map(|l| t.p(l).clone()).collect::<Vec<_>>(),
            ints(&[0, 1, 2])
        );
        assert!(t.theta(2).is_zero());

        let f = table("cf:1,1,1,1,2", 4);
        let fib: Vec<_> = (0..=4).map(|l| t_u(&f, l)).collect();
        assert_eq!(fib, vec![1, 1, 2, 3, 5]);
        let g = table("golden", 5);
        assert_eq!(
            (0..=5).map(|l| t_u(&g, l)).collect::<Vec<_>>(),
            vec![1, 1, 2, 3, 5, 8]
        );
        assert!(convergents(&"cf:2,2".parse().unwrap(), 3).is_err());
    }

    fn t_u(t: &ConvergentTable, l: usize) -> u64 {
        t.q_u64(l).unwrap()
    }

    #[test]
    fn golden_theta_is_accurate() {
        let g = table("golden", 30);
        let phi = (5f64.sqrt() - 1.0) / 2.0;
        // theta_l = (-phi)^{l+1} for the golden ratio.
        for l in 0..30 {
            let sign = if l % 2 == 0 { 1.0 } else { -1.0 };
            let expect = sign * phi.powi(l as i32 + 1);
            assert!((g.theta_f64(l) / expect - 1.0).abs() < 1e-14, "l = {l}");
        }
    }

    #[test]
    fn irrational_truncation_meets_budget() {
        let t = table("e-2", 10);
        let m = t.truncation_depth().unwrap();
        assert!(m >= 18);
        let e2 = std::f64::consts::E - 2.0;
        assert!((t.alpha().to_f64() - e2).abs() < 4e-16);
        // A much deeper truncation agrees to the precision budget.
        let deep = ConvergentTable::new(
            t.expansion(),
            10,
            TableConfig {
                precision_bits: 400,
                guard_depth: 8,
            },
        )
        .unwrap();
        for l in 0..=10 {
            let rel = (t.theta(l) - deep.theta(l)) / deep.theta(l);
            assert!(
                rel.abs() < BigRational::new(1.into(), BigInt::from(2).pow(128)),
                "l = {l}"
            );
        }
    }

    fn check_identities(t: &ConvergentTable) -> std::result::Result<(), TestCaseError> {
        let one = BigInt::one();
        for l in 0..=t.depth() {
            let det = t.q(l) * t.p_prev(l) - t.p(l) * t.q_prev(l);
            let sign = if l % 2 == 0 {
                one.clone()
            } else {
                -one.clone()
            };
            prop_assert_eq!(det, sign);
            let th = t.theta(l);
            prop_assert_eq!(
                th.clone(),
                BigRational::from_integer(t.q(l).clone()) * t.alpha().as_big()
                    - BigRational::from_integer(t.p(l).clone())
            );
            if l < t.depth() {
                let a = t.a(l + 1).unwrap();
                prop_assert_eq!(t.q(l + 1), &(BigInt::from(a) * t.q(l) + t.q_prev(l)));
                // ||q_{l+1} a|| = -a_{l+1} ||q_l a|| + ||q_{l-1} a||, exactly.
                let lhs = t.dist(l + 1);
                let rhs = -BigRational::from_integer(a.into()) * t.dist(l) + t.theta_prev(l).abs();
                prop_assert_eq!(lhs, rhs);
                // 1/(a+2) <= q_l ||q_l a|| <= 1/a.
                let prod = BigRational::from_integer(t.q(l).clone()) * t.dist(l);
                prop_assert!(prod <= BigRational::new(1.into(), a.into()));
                prop_assert!(prod >= BigRational::new(1.into(), (a + 2).into()));
            }
            if !th.is_zero() {
                prop_assert_eq!(th.is_negative(), l % 2 == 1);
            }
            // q_l ||q_{l-1} a|| + q_{l-1} ||q_l a|| = 1.
            let s = BigRational::from_integer(t.q(l).clone()) * t.theta_prev(l).abs()
                + BigRational::from_integer(t.q_prev(l).clone()) * t.dist(l);
            prop_assert!(s.is_one());
        }
        Ok(())
    }

    proptest! {
        #[test]
        fn identities_hold_exactly(digits in proptest::collection::vec(1u64..50, 1..12)) {
            let cf = CFExpansion::finite(0, digits).unwrap();
            check_identities(&ConvergentTable::full(&cf)?)?;
        }

        #[test]
        fn identities_hold_for_presets(upto in 0usize..25, which in 0usize..3) {
            let cf = [CFExpansion::golden(), CFExpansion::sqrt2inv(), CFExpansion::e_minus_2()][which].clone();
            check_identities(&convergents(&cf, upto)?)?;
        }
    }
}
