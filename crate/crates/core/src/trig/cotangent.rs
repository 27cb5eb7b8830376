use std::f64::consts::PI;

use num_traits::ToPrimitive;

use super::rotation::{reduce_sum, Rotation};
use crate::cfrac::ConvergentTable;
use crate::{Error, Result};

/// Neumaier's compensated summation.
#[derive(Clone, Copy, Debug, Default)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = CompensatedSum::default();
        for x in iter {
            s.add(x);
        }
        s
    }
}

#[inline]
fn cot_pi(t: f64) -> f64 {
    let a = PI * t;
    a.cos() / a.sin()
}

/// `sum_{n=1}^N cot(pi (n alpha + x))`. With a rational rotation
/// `p_l/q_l` this is also the convergent form of the sum.
pub fn cotangent_sum(rot: &Rotation, x: f64, n: u64) -> Result<f64> {
    let mut s = CompensatedSum::default();
    for k in 1..=n {
        let t = if x == 0.0 {
            if rot.hits_integer(k) {
                return Err(Error::Pole { n: k });
            }
            rot.phase(k)
        } else {
            reduce_sum(rot.phase(k), x, k).map_err(|_| Error::Pole { n: k })?
        };
        s.add(cot_pi(t));
    }
    Ok(s.value())
}

/// Envelope `q_l (1/(1 - |x|/||q_{l-1} alpha||) + log max_{m<=l} a_m)` of
/// the shifted cotangent sum in `alpha`, for `|x| < ||q_{l-1} alpha||`.
pub fn cotangent_envelope(table: &ConvergentTable, ell: usize, x: f64) -> f64 {
    let q = table.q(ell).to_f64().unwrap_or(f64::INFINITY);
    q * (1.0 / (1.0 - x.abs() / table.dist_prev_f64(ell)) + table.log_max_a(ell))
}

/// Envelope `q_l (1/(1 - q_l |x|) + log max_{m<=l} a_m)` of the sum in
/// `p_l/q_l`, for `|x| < 1/q_l`.
pub fn cotangent_envelope_convergent(table: &ConvergentTable, ell: usize, x: f64) -> f64 {
    let q = table.q(ell).to_f64().unwrap_or(f64::INFINITY);
    q * (1.0 / (1.0 - q * x.abs()) + table.log_max_a(ell))
}

/// `V_l(x) = sum_{n=1}^{q_l-1} sin(pi n ||q_l alpha||/q_l) cot(pi (n (-1)^l p_l + x)/q_l)`.
pub fn cotangent_v(ell: usize, x: f64, table: &ConvergentTable) -> Result<f64> {
    if x.is_nan() || x.abs() >= 1.0 {
        return Err(Error::Precondition(format!("|x| = {} >= 1", x.abs())));
    }
    let q = table.q_u64(ell)?;
    let p = table.p_u64(ell)? % q.max(1);
    let d = table.dist_f64(ell);
    let qf = q as f64;
    // (-1)^l p_l mod q_l.
    let step = if ell.is_multiple_of(2) || p == 0 {
        p
    } else {
        q - p
    };
    let mut s = CompensatedSum::default();
    let mut r: u64 = 0;
    for n in 1..q {
        r += step;
        if r >= q {
            r -= q;
        }
        // Centre the residue so that (r + x)/q stays away from 1.
        let centred = if 2 * r <= q { r as f64 } else { r as f64 - qf };
        let u = (centred + x) / qf;
        if u == 0.0 {
            return Err(Error::Pole { n });
        }
        s.add((PI * n as f64 * d / qf).sin() * cot_pi(u));
    }
    Ok(s.value())
}

/// Envelope `q_l ||q_l alpha|| (1/(1-|x|) + log max_{m<=l} a_m)` of `V_l`.
pub fn cotangent_v_envelope(table: &ConvergentTable, ell: usize, x: f64) -> f64 {
    let q = table.q(ell).to_f64().unwrap_or(f64::INFINITY);
    q * table.dist_f64(ell) * (1.0 / (1.0 - x.abs()) + table.log_max_a(ell))
}
