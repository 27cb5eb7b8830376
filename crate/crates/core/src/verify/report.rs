use std::io::{self, Write};

/// One evaluated instance of an inequality or identity.
#[derive(Clone, Debug, PartialEq)]
pub struct CaseRow {
    pub case_id: String,
    pub lhs: f64,
    pub rhs: f64,
    /// Signed slack; nonnegative exactly when the case passes.
    pub margin: f64,
    pub passed: bool,
    /// Smallest constant for which this case would pass.
    pub fitted: f64,
}

// Relative floating slack granted to every comparison.
const SLACK: f64 = 1e-9;

impl CaseRow {
    /// `lhs >= main - c * env` with `env >= 0`.
    pub fn lower_bound(case_id: impl Into<String>, lhs: f64, main: f64, env: f64, c: f64) -> Self {
        let rhs = main - c * env;
        let margin = lhs - rhs;
        let tol = SLACK * (1.0 + lhs.abs().max(main.abs()));
        let deficit = main - lhs;
        let fitted = if deficit <= tol {
            0.0
        } else if env > 0.0 {
            deficit / env
        } else {
            f64::INFINITY
        };
        CaseRow {
            case_id: case_id.into(),
            lhs,
            rhs,
            margin,
            passed: margin >= -tol,
            fitted,
        }
    }

    /// `|err| <= c * env` with `env >= 0`.
    pub fn abs_bound(case_id: impl Into<String>, err: f64, env: f64, c: f64) -> Self {
        let lhs = err.abs();
        let rhs = c * env;
        let tol = SLACK * (1.0 + lhs);
        let fitted = if lhs <= tol {
            0.0
        } else if env > 0.0 {
            lhs / env
        } else {
            f64::INFINITY
        };
        CaseRow {
            case_id: case_id.into(),
            lhs,
            rhs,
            margin: rhs - lhs,
            passed: rhs - lhs >= -tol,
            fitted,
        }
    }

    /// `|a - b| <= tol * (1 + |b|)`; the fitted value is the scaled error.
    pub fn identity(case_id: impl Into<String>, a: f64, b: f64, tol: f64) -> Self {
        let scaled = (a - b).abs() / (1.0 + b.abs());
        CaseRow {
            case_id: case_id.into(),
            lhs: a,
            rhs: b,
            margin: tol - scaled,
            passed: scaled <= tol,
            fitted: scaled,
        }
    }

    /// `lhs <= rhs` with no constant involved.
    pub fn at_most(case_id: impl Into<String>, lhs: f64, rhs: f64) -> Self {
        CaseRow {
            case_id: case_id.into(),
            lhs,
            rhs,
            margin: rhs - lhs,
            passed: lhs <= rhs,
            fitted: if rhs > 0.0 { (lhs / rhs).max(0.0) } else { 0.0 },
        }
    }
}

/// Outcome of a check over one or more cases.
#[derive(Clone, Debug, PartialEq)]
pub struct CheckReport {
    pub check_id: String,
    pub cases_run: usize,
    pub worst_margin: f64,
    pub fitted_constant: f64,
    pub passed: bool,
    pub rows: Vec<CaseRow>,
}

impl CheckReport {
    pub fn from_rows(check_id: impl Into<String>, rows: Vec<CaseRow>) -> Self {
        let worst_margin = rows.iter().map(|r| r.margin).fold(f64::INFINITY, f64::min);
        let fitted_constant = rows.iter().map(|r| r.fitted).fold(0.0, f64::max);
        CheckReport {
            check_id: check_id.into(),
            cases_run: rows.len(),
            worst_margin,
            fitted_constant,
            passed: rows.iter().all(|r| r.passed),
            rows,
        }
    }

    /// Concatenates reports in the given order under a new id.
    pub fn merge(
        check_id: impl Into<String>,
        reports: impl IntoIterator<Item = CheckReport>,
    ) -> Self {
        let rows = reports.into_iter().flat_map(|r| r.rows).collect();
        Self::from_rows(check_id, rows)
    }

    pub fn summary(&self) -> String {
        format!(
            "{}: {} ({} cases, worst margin {:.3e}, fitted constant {:.4e})",
            self.check_id,
            if self.passed { "pass" } else { "FAIL" },
            self.cases_run,
            self.worst_margin,
            self.fitted_constant
        )
    }
}

fn real(x: f64) -> String {
    format!("{x:.16e}")
}

/// CSV with columns `check_id, case_id, lhs, rhs, margin, passed`.
pub fn write_csv<W: Write>(reports: &[CheckReport], mut w: W) -> io::Result<()> {
    writeln!(w, "check_id,case_id,lhs,rhs,margin,passed")?;
    for rep in reports {
        for row in &rep.rows {
            writeln!(
                w,
                "{},{},{},{},{},{}",
                rep.check_id,
                row.case_id,
                real(row.lhs),
                real(row.rhs),
                real(row.margin),
                row.passed
            )?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lower_bound_shape() {
        let r = CaseRow::lower_bound("a", 1.0, 3.0, 0.5, 4.0);
        assert!(r.passed);
        assert_eq!(r.fitted, 4.0);
        assert!(!CaseRow::lower_bound("b", 1.0, 3.0, 0.5, 3.9).passed);
        // Neutral case: nothing needed.
        let n = CaseRow::lower_bound("c", 0.0, 0.0, 0.1, 0.0);
        assert!(n.passed && n.fitted == 0.0);
        assert!(!CaseRow::lower_bound("d", 0.0, 1.0, 0.0, 100.0).passed);
    }

    #[test]
    fn raising_the_constant_never_fails_a_case() {
        for &(lhs, main, env) in &[
            (0.3, 1.0, 0.2),
            (-2.0, 0.5, 1.0),
            (1.0, 0.0, 0.0),
            (0.0, 0.2, 3.0),
        ] {
            let mut prev = false;
            for i in 0..100 {
                let c = f64::from(i) * 0.1;
                let now = CaseRow::lower_bound("x", lhs, main, env, c).passed;
                assert!(now || !prev);
                prev = now;
                let ab = CaseRow::abs_bound("y", lhs - main, env, c).passed;
                assert!(
                    ab || !CaseRow::abs_bound("y", lhs - main, env, c - 0.1).passed || c == 0.0
                );
            }
        }
    }

    #[test]
    fn report_aggregation_and_csv() {
        let rows = vec![
            CaseRow::abs_bound("1", 0.5, 1.0, 1.0),
            CaseRow::abs_bound("2", 2.0, 1.0, 1.0),
        ];
        let r = CheckReport::from_rows("demo", rows);
        assert!(!r.passed);
        assert_eq!(r.cases_run, 2);
        assert_eq!(r.fitted_constant, 2.0);
        assert_eq!(r.worst_margin, -1.0);
        let mut buf = Vec::new();
        write_csv(&[r], &mut buf).unwrap();
        let s = String::from_utf8(buf).unwrap();
        assert!(
            s.starts_with("check_id,case_id,lhs,rhs,margin,passed\ndemo,1,5.0000000000000000e-1,")
        );
        assert_eq!(s.lines().count(), 3);
    }
}
