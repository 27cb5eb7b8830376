use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};

use super::rotation::ln_f_sum;
use super::LogNumber;
use crate::cfrac::ConvergentTable;
use crate::{Error, Result};

/// `P_{q_l}(alpha, (-1)^l x/q_l)` through the explicit formula
///
/// `f(d + x/q) * f(z)/f(z/q) * prod_{n<q} f((n - y_n - z)/q) / f((n - z)/q)`
///
/// with `d = ||q_l alpha||`, `y_n = ({n q_{l-1}/q_l} - 1/2) q_l d` and
/// `z = x + q_l d/2`. When `z/q` is an integer, `f(z)/f(z/q)` is read as `q`.
pub fn explicit_formula_eval(ell: usize, x: f64, table: &ConvergentTable) -> Result<LogNumber> {
    let q = table.q_u64(ell)?;
    let q_prev = table
        .q_prev(ell)
        .to_u64()
        .ok_or_else(|| Error::Overflow(format!("q_{}", ell as i64 - 1)))?;
    let qf = q as f64;
    let d = table.dist_f64(ell);
    let qd = (BigRational::from_integer(table.q(ell).clone()) * table.dist(ell))
        .to_f64()
        .unwrap_or(f64::NAN);
    let z = x + qd / 2.0;

    let mut acc = ln_f_sum(d, x / qf, q)?;
    let zq = z / qf;
    if zq == zq.round() {
        acc += qf.ln();
    } else {
        acc += ln_f_sum(z, 0.0, 0)? - ln_f_sum(zq, 0.0, 0)?;
    }
    for n in 1..q {
        let frac = (u128::from(n) * u128::from(q_prev) % u128::from(q)) as f64 / qf;
        let y = (frac - 0.5) * qd;
        let nf = n as f64;
        acc += ln_f_sum((nf - y - z) / qf, 0.0, n)? - ln_f_sum((nf - z) / qf, 0.0, n)?;
    }
    Ok(LogNumber::from_ln(acc))
}

/// Both sides of `|q_l ||q_m alpha|| - q'_l ||q'_m alpha'|| | <= 2/(q_{l+1} q'_{m+1})`.
#[derive(Clone, Debug, PartialEq)]
pub struct QlDiff {
    pub lhs: BigRational,
    pub bound: BigRational,
}

impl QlDiff {
    pub fn holds(&self) -> bool {
        self.lhs <= self.bound
    }

    pub fn lhs_f64(&self) -> f64 {
        self.lhs.to_f64().unwrap_or(f64::NAN)
    }

    pub fn bound_f64(&self) -> f64 {
        self.bound.to_f64().unwrap_or(f64::NAN)
    }
}

/// Exact comparison of the convergent data of `alpha` and `alpha' = {1/alpha}`.
///
/// `tail_table` is the table of `alpha'` in its own numbering: the primed
/// index `l` is row `l - 1`.
pub fn ql_diff_check(
    ell: usize,
    m: usize,
    table: &ConvergentTable,
    tail_table: &ConvergentTable,
) -> Result<QlDiff> {
    let len = table.expansion().len().unwrap_or(usize::MAX);
    if !(1 <= ell && ell <= m && m < len) {
        return Err(Error::Precondition(format!(
            "need 1 <= l <= m < L, got l = {ell}, m = {m}"
        )));
    }
    if m == 1 && table.a(2).is_some_and(|a2| a2 == 1) {
        return Err(Error::Precondition("m = 1 requires a_2 > 1".into()));
    }
    if m + 1 > table.depth() || m > tail_table.depth() {
        return Err(Error::BeyondLength {
            requested: m + 1,
            len: table.depth().min(tail_table.depth() + 1),
        });
    }
    let q = |t: &ConvergentTable, i: usize| BigRational::from_integer(t.q(i).clone());
    let lhs =
        (q(table, ell) * table.dist(m) - q(tail_table, ell - 1) * tail_table.dist(m - 1)).abs();
    let bound = BigRational::new(BigInt::from(2), table.q(ell + 1) * tail_table.q(m));
    Ok(QlDiff { lhs, bound })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cfrac::{convergents, CFExpansion};
    use crate::trig::rotation::Rotation;
    use crate::trig::sudler::shifted_ln;
    use num_traits::One;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn direct(table: &ConvergentTable, ell: usize, x: f64) -> f64 {
        let q = table.q_u64(ell).unwrap();
        let sign = if ell.is_multiple_of(2) { 1.0 } else { -1.0 };
        shifted_ln(&Rotation::of_table(table), sign * x / q as f64, q).unwrap()
    }

    fn random_cf(rng: &mut ChaCha8Rng, qmax: u64) -> ConvergentTable {
        loop {
            let len = rng.gen_range(1..8);
            let digits: Vec<u64> = (0..len)
                .map(|_| {
                    if rng.gen_bool(0.2) {
                        rng.gen_range(5..40)
                    } else {
                        rng.gen_range(1..5)
                    }
                })
                .collect();
            let t = ConvergentTable::full(&CFExpansion::finite(0, digits).unwrap()).unwrap();
            if t.q_u64(t.depth()).is_ok_and(|q| q <= qmax) {
                return t;
            }
        }
    }

    #[test]
    fn q_one_reduces_to_single_factor() {
        let t = ConvergentTable::full(&"cf:3,4".parse().unwrap()).unwrap();
        let x = 0.21;
        let e = explicit_formula_eval(0, x, &t).unwrap().ln();
        let alpha = t.alpha().to_f64();
        let want = (2.0 * (std::f64::consts::PI * (alpha + x)).sin())
            .abs()
            .ln();
        assert!((e - want).abs() < 1e-14);
    }

    #[test]
    fn matches_direct_products() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..300 {
            let t = random_cf(&mut rng, 200);
            let ell = rng.gen_range(0..=t.depth());
            let x = rng.gen_range(-0.5..1.0);
            let e = explicit_formula_eval(ell, x, &t).unwrap().ln();
            let d = direct(&t, ell, x);
            assert!(
                (e - d).abs() <= 1e-10 * (1.0 + d.abs()),
                "{:?} l={ell} x={x}",
                t.expansion()
            );
        }
    }

    #[test]
    fn z_zero_branch() {
        let t = convergents(&CFExpansion::e_minus_2(), 8).unwrap();
        for ell in 1..=8 {
            let q = t.q_u64(ell).unwrap() as f64;
            let x = -(q * t.dist_f64(ell)) / 2.0;
            let e = explicit_formula_eval(ell, x, &t).unwrap().ln();
            let d = direct(&t, ell, x);
            assert!((e - d).abs() <= 1e-10 * (1.0 + d.abs()), "l={ell}");
        }
    }

    #[test]
    fn ql_diff_equal_indices_closed_form() {
        // For l = m the difference is 1/((r q_l + q_{l-1})(r q'_l + q'_{l-1})),
        // with r the complete quotient [a_{l+1}; a_{l+2}, ...].
        let t = ConvergentTable::full(&"cf:2,3,1,4,2,5".parse().unwrap()).unwrap();
        let tail = ConvergentTable::full(&t.expansion().tail().unwrap()).unwrap();
        for ell in 1..t.depth() {
            let r = CFExpansion::finite(0, t.expansion().prefix(10)[ell..].to_vec())
                .unwrap()
                .value()
                .unwrap()
                .recip()
                .unwrap();
            let r = r.as_big();
            let big = |x: &BigInt| BigRational::from_integer(x.clone());
            let want = BigRational::one()
                / ((r * big(t.q(ell)) + big(t.q_prev(ell)))
                    * (r * big(tail.q(ell - 1)) + big(tail.q_prev(ell - 1))));
            let got = ql_diff_check(ell, ell, &t, &tail).unwrap();
            assert_eq!(got.lhs, want, "l = {ell}");
            assert!(got.holds());
        }
    }

    #[test]
    fn ql_diff_exhaustive_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..200 {
            let t = random_cf(&mut rng, 10_000);
            let tail = match t.expansion().tail() {
                Ok(cf) if cf.len().unwrap() > 0 => ConvergentTable::full(&cf).unwrap(),
                _ => continue,
            };
            for m in 1..t.depth() {
                for ell in 1..=m {
                    match ql_diff_check(ell, m, &t, &tail) {
                        Ok(d) => assert!(d.holds(), "{:?} l={ell} m={m}", t.expansion()),
                        Err(_) => assert!(m == 1 && t.a(2) == Some(1)),
                    }
                }
            }
        }
    }

    #[test]
    fn golden_rejects_m_one() {
        let g = convergents(&CFExpansion::golden(), 10).unwrap();
        let tail = convergents(&CFExpansion::golden().tail().unwrap(), 10).unwrap();
        assert!(ql_diff_check(1, 1, &g, &tail).is_err());
        assert!(ql_diff_check(1, 2, &g, &tail).unwrap().holds());
    }
}
