use super::CheckReport;

/// Multiplier applied to calibrated constants before they are frozen.
pub const SAFETY_FACTOR: f64 = 1.5;

/// Seed of the corpus the frozen constants were fitted on.
pub const CALIBRATION_SEED: u64 = 0xCA1B;

/// Seed of the corpus the suites are checked on.
pub const TEST_SEED: u64 = 0x7E57;

/// Implied constants of the bound checks, and the smallness threshold `A`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Constants {
    pub local56_i: f64,
    pub local56_ii: f64,
    pub sudler_factor: f64,
    pub kashaev_factor: f64,
    pub tail: f64,
    pub cotangent: f64,
    pub cotangent_convergent: f64,
    pub cotangent_v: f64,
    pub continuity: f64,
    pub th3: f64,
    /// Threshold on `xi_k` (and on the concentration parameter). Chosen, not fitted:
    /// it decides which instances are admissible.
    pub a_small: f64,
}

/// Fitted on the calibration corpus (seed `CALIBRATION_SEED`, `F_100` for the
/// scan, golden ratio and `1/sqrt 2` for the oscillation) and multiplied by
/// `SAFETY_FACTOR`, rounded up in the fourth digit. Regenerate with
/// `sudlerlab calibrate`.
pub const FROZEN: Constants = Constants {
    local56_i: 2.648,
    local56_ii: 3.831,
    sudler_factor: 12.01,
    kashaev_factor: 3.397e-3,
    tail: 2.320,
    cotangent: 0.7419,
    cotangent_convergent: 0.5184,
    cotangent_v: 1.385,
    continuity: 2.739e-3,
    th3: 1.777,
    a_small: 0.25,
};

impl Constants {
    /// Every constant infinite, so that only the fitted values matter.
    pub fn unbounded(a_small: f64) -> Self {
        let inf = f64::INFINITY;
        Constants {
            local56_i: inf,
            local56_ii: inf,
            sudler_factor: inf,
            kashaev_factor: inf,
            tail: inf,
            cotangent: inf,
            cotangent_convergent: inf,
            cotangent_v: inf,
            continuity: inf,
            th3: inf,
            a_small,
        }
    }

    fn slot(&mut self, check_id: &str) -> Option<&mut f64> {
        Some(match check_id {
            "local56_i" => &mut self.local56_i,
            "local56_ii" => &mut self.local56_ii,
            "sudler_factor" => &mut self.sudler_factor,
            "kashaev_factor" => &mut self.kashaev_factor,
            "tail" => &mut self.tail,
            "cotangent" => &mut self.cotangent,
            "cotangent_convergent" => &mut self.cotangent_convergent,
            "cotangent_v" => &mut self.cotangent_v,
            "continuity" => &mut self.continuity,
            "th3" => &mut self.th3,
            _ => return None,
        })
    }

    /// The constant a check id is held to, if it has one.
    pub fn get(&self, check_id: &str) -> Option<f64> {
        let mut c = *self;
        c.slot(check_id).map(|v| *v)
    }

    /// `SAFETY_FACTOR` times the largest fitted constant per check id. Checks
    /// without a constant are ignored; checks absent from `reports` read 0.
    pub fn from_fitted<'a>(
        reports: impl IntoIterator<Item = &'a CheckReport>,
        a_small: f64,
    ) -> Self {
        let mut c = Constants::unbounded(a_small);
        for id in NAMES {
            *c.slot(id).unwrap() = 0.0;
        }
        for r in reports {
            if let Some(v) = c.slot(&r.check_id) {
                *v = v.max(SAFETY_FACTOR * r.fitted_constant);
            }
        }
        c
    }

    /// `(check id, value)` pairs in a fixed order.
    pub fn entries(&self) -> Vec<(&'static str, f64)> {
        NAMES
            .iter()
            .map(|&id| (id, self.get(id).unwrap()))
            .chain([("a_small", self.a_small)])
            .collect()
    }
}

const NAMES: [&str; 10] = [
    "local56_i",
    "local56_ii",
    "sudler_factor",
    "kashaev_factor",
    "tail",
    "cotangent",
    "cotangent_convergent",
    "cotangent_v",
    "continuity",
    "th3",
];

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::CaseRow;

    #[test]
    fn fitted_constants_get_the_safety_factor() {
        let r = CheckReport::from_rows("tail", vec![CaseRow::abs_bound("x", 2.0, 1.0, 0.0)]);
        let c = Constants::from_fitted([&r], 0.25);
        assert_eq!(c.tail, 3.0);
        assert_eq!(c.th3, 0.0);
        assert_eq!(c.get("identity"), None);
        assert_eq!(c.entries().len(), 11);
        assert!(FROZEN
            .entries()
            .iter()
            .all(|(_, v)| v.is_finite() && *v >= 0.0));
    }
}
