use std::f64::consts::PI;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Signed;

use super::vol_41;
use crate::cfrac::{convergents, CFExpansion, Rational};
use crate::trig::{log_sum_exp, prefix_ln, shifted_prefix_ln, LogNumber, Rotation};
use crate::{Error, Result};

/// `ln J(p/q)` for `0 <= p < q` coprime, in one pass over the prefix products.
pub(crate) fn ln_j_pq(p: u64, q: u64) -> f64 {
    if q == 1 {
        return 0.0;
    }
    let mut logs = prefix_ln(p, q, q - 1).expect("n_max < q");
    for v in logs.iter_mut() {
        *v *= 2.0;
    }
    log_sum_exp(&mut logs)
}

fn reduced_pair(r: &Rational) -> Result<(u64, u64)> {
    r.fract()
        .to_u64_pair()
        .ok_or_else(|| Error::Overflow(format!("denominator of {r}")))
}

/// `J(r) = sum_{N<q} P_N(r)^2`, which depends only on `r mod 1`.
pub fn jones_j(r: &Rational) -> Result<LogNumber> {
    let (p, q) = reduced_pair(r)?;
    Ok(LogNumber::from_ln(ln_j_pq(p, q)))
}

/// `h(x)` together with its corrected forms.
#[derive(Clone, Debug, PartialEq)]
pub struct HValue {
    pub x: Rational,
    pub log_j_x: LogNumber,
    pub log_j_inv: LogNumber,
    pub h: f64,
    /// `h - Vol/(2 pi x) + (3/2) log x`, NaN for `x <= 0`.
    pub psi: f64,
    /// `h + (Vol/2pi)(x - 1/x)`.
    pub psi_star: f64,
}

/// `Vol/(2 pi x) - (3/2) log x`, the leading behaviour of `h` as `x -> 0`.
pub fn h_model(x: f64) -> f64 {
    vol_41() / (2.0 * PI * x) - 1.5 * x.ln()
}

pub(crate) fn psi_from_h(h: f64, x: f64) -> f64 {
    h - vol_41() / (2.0 * PI * x) + 1.5 * x.ln()
}

pub(crate) fn psi_star_from_h(h: f64, x: f64) -> f64 {
    h + vol_41() / (2.0 * PI) * (x - 1.0 / x)
}

/// `h(r) = log J(r) - log J({1/r})`, with `{1/r}` computed exactly.
pub fn h_eval(r: &Rational) -> Result<HValue> {
    if r.is_zero() {
        return Err(Error::Precondition("h is undefined at 0".into()));
    }
    let log_j_x = jones_j(r)?;
    let log_j_inv = jones_j(&r.recip()?)?;
    let h = log_j_x.ln() - log_j_inv.ln();
    let x = r.to_f64();
    Ok(HValue {
        x: r.clone(),
        log_j_x,
        log_j_inv,
        h,
        psi: if x > 0.0 { psi_from_h(h, x) } else { f64::NAN },
        psi_star: psi_star_from_h(h, x),
    })
}

/// Both sides of `log J(pbar/q) = sum_{l=1}^L h(q_{l-1}/q_l)` where
/// `pbar = p^{-1} mod q` and `q_l` are the denominators of `p/q`.
pub fn telescoping_log_j(r: &Rational) -> Result<(f64, f64)> {
    if !(r.num().is_positive() && r.num() < r.den()) {
        return Err(Error::Precondition(format!("{r} is not in (0, 1)")));
    }
    let (p, q) = reduced_pair(r)?;
    let inv = BigInt::from(p).extended_gcd(&BigInt::from(q)).x;
    let pbar = inv.mod_floor(&BigInt::from(q));
    let lhs = jones_j(&Rational::new(pbar, q)?)?.ln();

    let table = crate::cfrac::ConvergentTable::of_rational(r)?;
    let mut rhs = 0.0;
    for ell in 1..=table.depth() {
        let x = Rational::new(table.q_prev(ell).clone(), table.q(ell).clone())?;
        rhs += h_eval(&x)?.h;
    }
    Ok((lhs, rhs))
}

/// `ln sum_{N<q} P_N(p/q, x)^2`.
pub(crate) fn ln_shifted_j(p: &BigInt, q: &BigInt, x: f64) -> Result<f64> {
    let r = Rational::new(p.clone(), q.clone())?;
    let (_, qq) = reduced_pair(&r)?;
    let rot = Rotation::from_rational(&r);
    let mut logs = shifted_prefix_ln(&rot, x, qq - 1)?;
    for v in logs.iter_mut() {
        *v *= 2.0;
    }
    Ok(log_sum_exp(&mut logs))
}

/// `M_k(alpha)`: the log-ratio of `sum_{N<q_k} P_N(p_k/q_k, (-1)^k (5/6)/q_k)^2`
/// and the same sum for `alpha' = {1/alpha}` at level `k` with sign `(-1)^{k-1}`.
/// It depends only on `a_1, ..., a_k`.
pub fn m_k(cf: &CFExpansion, k: usize) -> Result<f64> {
    if k == 0 {
        return Err(Error::Precondition("M_k needs k >= 1".into()));
    }
    let t = convergents(cf, k)?;
    let tail = convergents(&cf.tail()?, k - 1)?;
    let sign = |e: usize| if e.is_multiple_of(2) { 1.0 } else { -1.0 };
    let q = t.q(k);
    let qp = tail.q(k - 1);
    let num = ln_shifted_j(t.p(k), q, sign(k) * (5.0 / 6.0) / q_f64(q))?;
    let den = ln_shifted_j(tail.p(k - 1), qp, sign(k - 1) * (5.0 / 6.0) / q_f64(qp))?;
    Ok(num - den)
}

fn q_f64(q: &BigInt) -> f64 {
    num_traits::ToPrimitive::to_f64(q).unwrap_or(f64::INFINITY)
}
