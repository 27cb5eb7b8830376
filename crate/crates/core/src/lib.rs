//! Sudler products, the figure-eight colored Jones function `J(x)` and
//! Zagier's quantum modular cocycle `h(x) = log J(x) - log J(1/x)`.
//!
//! The crate is organised bottom-up:
//!
//! * [`cfrac`]: exact continued fractions, convergent tables and Ostrowski numeration.
//! * [`trig`]: log-space Sudler products, shifted products, the product form and cotangent sums.
//! * [`jones`]: `J`, `h`, `psi`, `psi*`, the hyperbolic volume of the figure-eight knot.
//! * [`verify`]: numerical checks of the quantitative estimates, with frozen constants.
//! * [`dist`]: Farey sweeps, the Kolmogorov-Smirnov comparison and the totally skewed stable law of index 1.
//!
//! All products of sines are kept in log space ([`LogNumber`]); nothing of the
//! size of `J(1/N)` is ever materialised as a linear float.

pub mod cfrac;
pub mod dist;
mod error;
pub mod jones;
pub mod quad;
pub mod trig;
pub mod verify;

pub use cfrac::{CFExpansion, ConvergentTable, OstrowskiRep, Rational};
pub use error::{Error, Result};
pub use trig::LogNumber;
