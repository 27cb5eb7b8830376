//! Exact continued fractions, convergent tables and Ostrowski numeration.

mod expansion;
mod ostrowski;
mod rational;
mod table;

pub use expansion::{cf_expand, CFExpansion};
pub use ostrowski::{
    drop_first_digit_map, interval_ik, ostrowski_decode, ostrowski_encode, ostrowski_enumerate,
    stern_brocot_between, OstrowskiIter, OstrowskiRep,
};
pub use rational::Rational;
pub use table::{convergents, ConvergentTable, TableConfig};

/// `{1/r}` for a rational `r = p/q` in `(0, 1)`, i.e. `(q mod p)/p`.
pub fn frac_recip(r: &Rational) -> crate::Result<Rational> {
    Ok(r.recip()?.fract())
}
