//! Numerical checks of the asymptotic estimates, with fitted constants and CSV reports.

mod constants;
mod continuity;
mod exact;
mod instance;
mod local;
mod report;
mod suites;
mod tail;

pub use constants::{Constants, CALIBRATION_SEED, FROZEN, SAFETY_FACTOR, TEST_SEED};
pub use continuity::{
    check_oscillation, h_pq, oscillation, oscillation_bound, scan_th3, Oscillation, Th3Scan,
};
pub use exact::{
    check_cotangent, check_cotangent_v, check_epsilon_lemma, check_explicit, check_kubert,
    check_product_form, check_ql_diff, random_reduced, random_table,
};
pub use instance::{
    denominator, gauss_kuzmin_digit, planted_partials, Instance, DENOMINATOR_CAP, ENUMERATION_CAP,
};
pub use local::{
    check_concentration, check_kashaev_factor, check_local56_i, check_local56_ii,
    check_sudler_factor, concentration_masses, concentration_parameter, kashaev_factor,
    local56_i_target, local56_ii_target, optimal_digit, split_at, xi, ConcentrationMasses,
    KashaevFactor, LOCAL56_II_MAIN, LOCAL56_I_MAIN,
};
pub use report::{write_csv, CaseRow, CheckReport};
pub use suites::{calibrate, run_suite, Suite, SuiteConfig, SuiteOutput};
pub use tail::{check_tail, tail_block_ratio, tail_envelope, tail_hypotheses};
