//! Log-space Sudler products `P_N(alpha) = prod_{n<=N} |2 sin(pi n alpha)|`,
//! their shifted forms, the product form over Ostrowski digits, the
//! explicit formulas for `P_{q_l}`, and the associated cotangent sums.

mod cotangent;
mod explicit;
mod lognum;
mod rotation;
mod sudler;

pub use cotangent::{
    cotangent_envelope, cotangent_envelope_convergent, cotangent_sum, cotangent_v,
    cotangent_v_envelope, CompensatedSum,
};
pub use explicit::{explicit_formula_eval, ql_diff_check, QlDiff};
pub use lognum::{log_sum_exp, sum as log_sum, LogNumber};
pub use rotation::{Rotation, POLE_GUARD};
pub use sudler::{
    epsilon_exact, epsilon_vector, kubert_lhs, kubert_rhs, log_f, log_f_rational,
    product_form_block, product_form_eval, shifted_sudler, sudler_prefix_logs, EpsilonVector,
};
#[allow(unused_imports)]
pub(crate) use sudler::{prefix_ln, shifted_ln, shifted_prefix_ln};
