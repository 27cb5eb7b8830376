use std::f64::consts::PI;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::cfrac::{ConvergentTable, Rational};
use crate::{Error, Result};

/// Guard for arguments that land within rounding noise of an integer:
/// an argument `a + b` whose reduction is below `POLE_GUARD * max(|a|, |b|)`
/// is rejected instead of producing a meaningless log or cotangent.
pub const POLE_GUARD: f64 = 1e-13;

const TWO_POW_M128: f64 = 1.0 / 340_282_366_920_938_463_463_374_607_431_768_211_456.0;

/// The rotation `n -> n alpha mod 1`, evaluated without loss of accuracy
/// for large `n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rotation {
    /// `alpha = p/q` reduced, `0 <= p < q`; residues are exact.
    Rational { p: u64, q: u64 },
    /// `alpha` as a 128-bit binary fraction of the unit circle.
    Fixed(u128),
}

impl Rotation {
    /// Rotation by `r mod 1`.
    pub fn from_rational(r: &Rational) -> Self {
        let f = r.fract();
        if let Some((p, q)) = f.to_u64_pair() {
            return Rotation::Rational { p, q };
        }
        let scaled: BigInt = (f.num() << 128u32) / f.den();
        Rotation::Fixed(scaled.to_u128().unwrap_or(0))
    }

    /// Rotation by the (exact, possibly truncated) `alpha` of a table.
    pub fn of_table(table: &ConvergentTable) -> Self {
        Self::from_rational(table.alpha())
    }

    /// `n alpha mod 1`, folded into `[-1/2, 1/2)`.
    #[inline]
    pub fn phase(&self, n: u64) -> f64 {
        match *self {
            Rotation::Rational { p, q } => {
                let r = (u128::from(n % q) * u128::from(p) % u128::from(q)) as u64;
                residue_phase(r, q)
            }
            Rotation::Fixed(a) => (u128::from(n).wrapping_mul(a) as i128) as f64 * TWO_POW_M128,
        }
    }

    /// True when `n alpha` is an integer (decidable only for rationals).
    pub fn hits_integer(&self, n: u64) -> bool {
        match *self {
            Rotation::Rational { p, q } => u128::from(n) * u128::from(p) % u128::from(q) == 0,
            Rotation::Fixed(a) => u128::from(n).wrapping_mul(a) == 0,
        }
    }
}

/// `r/q` folded into `[-1/2, 1/2)`.
#[inline]
pub(crate) fn residue_phase(r: u64, q: u64) -> f64 {
    if 2 * u128::from(r) < u128::from(q) {
        r as f64 / q as f64
    } else {
        -((q - r) as f64 / q as f64)
    }
}

/// `ln |2 sin(pi t)|` for `t` already reduced to `[-1/2, 1/2]`, `t != 0`.
#[inline]
pub(crate) fn ln_f_reduced(t: f64) -> f64 {
    (2.0 * (PI * t).sin().abs()).ln()
}

/// `a + b` reduced mod 1 into `[-1/2, 1/2]`, with the pole guard.
#[inline]
pub(crate) fn reduce_sum(a: f64, b: f64, n: u64) -> Result<f64> {
    let s = a + b;
    let t = s - s.round();
    if t == 0.0 {
        return Err(Error::ZeroFactor { n });
    }
    if t.abs() < POLE_GUARD * a.abs().max(b.abs()) {
        return Err(Error::Pole { n });
    }
    Ok(t)
}

/// `ln |2 sin(pi (a + b))|`, guarded.
#[inline]
pub(crate) fn ln_f_sum(a: f64, b: f64, n: u64) -> Result<f64> {
    Ok(ln_f_reduced(reduce_sum(a, b, n)?))
}
