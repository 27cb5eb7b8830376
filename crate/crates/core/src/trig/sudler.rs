use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use super::rotation::{ln_f_reduced, ln_f_sum, residue_phase, Rotation};
use super::LogNumber;
use crate::cfrac::{ConvergentTable, OstrowskiRep, Rational};
use crate::{Error, Result};

/// `|2 sin(pi x)|` in log space; zero exactly at the integers.
pub fn log_f(x: f64) -> LogNumber {
    let t = x - x.round();
    if t == 0.0 {
        LogNumber::ZERO
    } else {
        LogNumber::from_ln(ln_f_reduced(t))
    }
}

/// [`log_f`] on an exact rational, where integrality is decided exactly.
pub fn log_f_rational(x: &Rational) -> LogNumber {
    if x.is_integer() {
        return LogNumber::ZERO;
    }
    let f = x.fract();
    let t = match f.to_u64_pair() {
        Some((p, q)) => residue_phase(p, q),
        None => {
            let v = f.to_f64();
            if v >= 0.5 {
                v - 1.0
            } else {
                v
            }
        }
    };
    LogNumber::from_ln(ln_f_reduced(t))
}

/// `ln P_N(p/q)` for `N = 0..=n_max` as raw logs, `n_max < q`.
pub(crate) fn prefix_ln(p: u64, q: u64, n_max: u64) -> Result<Vec<f64>> {
    if n_max >= q {
        return Err(Error::Precondition(format!(
            "N_max = {n_max} >= q = {q}: P_q(p/q) vanishes"
        )));
    }
    let mut out = Vec::with_capacity(n_max as usize + 1);
    let mut acc = 0.0;
    out.push(acc);
    let p = p % q;
    let mut r: u64 = 0;
    for _ in 1..=n_max {
        r += p;
        if r >= q {
            r -= q;
        }
        acc += ln_f_reduced(residue_phase(r, q));
        out.push(acc);
    }
    Ok(out)
}

/// `P_0(r), P_1(r), ..., P_{n_max}(r)` for a rational `r`, built
/// incrementally. Requires `n_max < den(r)`.
pub fn sudler_prefix_logs(r: &Rational, n_max: u64) -> Result<Vec<LogNumber>> {
    let f = r.fract();
    let (p, q) = f
        .to_u64_pair()
        .ok_or_else(|| Error::Overflow(format!("denominator of {r}")))?;
    Ok(prefix_ln(p, q, n_max)?
        .into_iter()
        .map(LogNumber::from_ln)
        .collect())
}

/// `P_N(alpha, x) = prod_{n=1}^N |2 sin(pi (n alpha + x))|`.
pub fn shifted_sudler(rot: &Rotation, x: f64, n: u64) -> Result<LogNumber> {
    Ok(LogNumber::from_ln(shifted_ln(rot, x, n)?))
}

pub(crate) fn shifted_ln(rot: &Rotation, x: f64, n: u64) -> Result<f64> {
    let mut acc = 0.0;
    if x == 0.0 {
        for k in 1..=n {
            if rot.hits_integer(k) {
                return Err(Error::ZeroFactor { n: k });
            }
            acc += ln_f_reduced(rot.phase(k));
        }
    } else {
        for k in 1..=n {
            acc += ln_f_sum(rot.phase(k), x, k)?;
        }
    }
    Ok(acc)
}

/// `ln P_N(alpha, x)` for `N = 0..=n_max`, built incrementally.
pub(crate) fn shifted_prefix_ln(rot: &Rotation, x: f64, n_max: u64) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(n_max as usize + 1);
    let mut acc = 0.0;
    out.push(acc);
    for k in 1..=n_max {
        acc += if x == 0.0 {
            if rot.hits_integer(k) {
                return Err(Error::ZeroFactor { n: k });
            }
            ln_f_reduced(rot.phase(k))
        } else {
            ln_f_sum(rot.phase(k), x, k)?
        };
        out.push(acc);
    }
    Ok(out)
}

/// Left side of Kubert's identity, `|2 sin(pi x/q)| P_{q-1}(p/q, x/q)`.
pub fn kubert_lhs(r: &Rational, x: f64) -> Result<LogNumber> {
    let rot = Rotation::from_rational(r);
    let q = match rot {
        Rotation::Rational { q, .. } => q,
        Rotation::Fixed(_) => return Err(Error::Overflow(format!("denominator of {r}"))),
    };
    let s = x / q as f64;
    if log_f(s).is_zero() {
        return Err(Error::Precondition("x/q is an integer".into()));
    }
    Ok(log_f(s) * shifted_sudler(&rot, s, q - 1)?)
}

/// Right side of Kubert's identity, `|2 sin(pi x)|`, independent of `p/q`.
pub fn kubert_rhs(_r: &Rational, x: f64) -> LogNumber {
    log_f(x)
}

/// `eps_l(N)` for `0 <= l < K`.
#[derive(Clone, Debug, PartialEq)]
pub struct EpsilonVector(pub Vec<f64>);

impl EpsilonVector {
    pub fn get(&self, ell: usize) -> f64 {
        self.0[ell]
    }
}

/// `eps_l(N) = q_l sum_{m > l} (-1)^{l+m} b_m ||q_m alpha||`, using
/// `(-1)^m ||q_m alpha|| = theta_m`.
pub fn epsilon_vector(rep: &OstrowskiRep, table: &ConvergentTable) -> EpsilonVector {
    let k = rep.len();
    let mut eps = vec![0.0; k];
    let mut tail = 0.0;
    for ell in (0..k).rev() {
        let q = table.q(ell).to_f64().unwrap_or(f64::INFINITY);
        let sign = if ell % 2 == 0 { 1.0 } else { -1.0 };
        eps[ell] = if tail == 0.0 { 0.0 } else { sign * q * tail };
        let b = rep.b(ell);
        if b > 0 {
            tail += b as f64 * table.theta_f64(ell);
        }
    }
    EpsilonVector(eps)
}

/// Exact rational `eps_l(N)`.
pub fn epsilon_exact(rep: &OstrowskiRep, table: &ConvergentTable) -> Vec<BigRational> {
    let k = rep.len();
    let mut eps = vec![BigRational::zero(); k];
    let mut tail = BigRational::zero();
    for ell in (0..k).rev() {
        let v = BigRational::from_integer(table.q(ell).clone()) * &tail;
        eps[ell] = if ell % 2 == 0 { v } else { -v };
        let b = rep.b(ell);
        if b > 0 {
            tail += BigRational::from_integer(BigInt::from(b)) * table.theta(ell);
        }
    }
    eps
}

/// `ln P_{q_l}(alpha, (-1)^l (b q_l ||q_l alpha|| + eps)/q_l)`, one factor of the product form.
pub fn product_form_block(
    table: &ConvergentTable,
    rot: &Rotation,
    ell: usize,
    b: u64,
    eps: f64,
) -> Result<f64> {
    let q = table.q_u64(ell)?;
    let sign = if ell.is_multiple_of(2) { 1.0 } else { -1.0 };
    let x = sign * (b as f64 * table.dist_f64(ell) + eps / q as f64);
    shifted_ln(rot, x, q)
}

/// `P_N(alpha)` assembled from the product form over the Ostrowski digits of `N`.
pub fn product_form_eval(rep: &OstrowskiRep, table: &ConvergentTable) -> Result<LogNumber> {
    rep.validate(table)?;
    let rot = Rotation::of_table(table);
    let eps = epsilon_vector(rep, table);
    let mut acc = 0.0;
    for ell in 0..rep.len() {
        for b in 0..rep.b(ell) {
            acc += product_form_block(table, &rot, ell, b, eps.get(ell))?;
        }
    }
    Ok(LogNumber::from_ln(acc))
}
