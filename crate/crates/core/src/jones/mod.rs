//! The colored Jones function of the figure-eight knot at roots of unity,
//! `J(p/q) = sum_{N<q} P_N(p/q)^2`, Zagier's `h(x) = log J(x) - log J(1/x)`
//! and its corrections.

mod kashaev;
mod volume;

pub use kashaev::{h_eval, h_model, jones_j, m_k, telescoping_log_j, HValue};
pub(crate) use kashaev::{ln_j_pq, ln_shifted_j, psi_from_h, psi_star_from_h};
pub use volume::{psi_heuristic, psi_heuristic_with, vol_41};

/// `-log(3)/4`, the limit of `psi(1/n)` as `n -> infinity`.
pub fn psi_arithmetic_limit() -> f64 {
    -(3f64.ln()) / 4.0
}
