//! Digit-local estimates: the 5/6-principle, concentration of `J` near the
//! optimal digit, and the two approximate factorizations.

use super::{CaseRow, CheckReport, Instance};
use crate::cfrac::{ostrowski_enumerate, OstrowskiRep};
use crate::jones::ln_shifted_j;
use crate::trig::{log_sum_exp, shifted_ln};
use crate::{Error, Result};

/// `9 Vol / (25 pi)` rounded down, the quadratic coefficient in part (i).
pub const LOCAL56_I_MAIN: f64 = 0.2326;
/// `Vol / (4 pi)` rounded down, the linear coefficient in part (ii).
pub const LOCAL56_II_MAIN: f64 = 0.1615;

/// `floor(5a/6)`.
pub fn optimal_digit(a: u64) -> u64 {
    5 * a / 6
}

fn sign(k: usize) -> f64 {
    if k.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

fn indicator(c: bool) -> f64 {
    if c {
        1.0
    } else {
        0.0
    }
}

fn reject(msg: String) -> Error {
    Error::Precondition(msg)
}

/// Replaces digits and checks the result is still a valid expansion.
fn surgery(inst: &Instance, rep: &OstrowskiRep, edits: &[(usize, u64)]) -> Result<u64> {
    let mut d = rep.digits().to_vec();
    for &(ell, b) in edits {
        d[ell] = b;
    }
    OstrowskiRep::from_digits(d, inst.table())?.decode(inst.table())
}

/// `N*` for part (i): `b_k(N)` replaced by `b_k*`.
pub fn local56_i_target(inst: &Instance, n: u64, k: usize) -> Result<u64> {
    let a = inst.a(k + 1)?;
    if a < 7 {
        return Err(reject(format!("a_{} = {a} < 7", k + 1)));
    }
    if k >= inst.depth() {
        return Err(reject(format!("k = {k} >= K = {}", inst.depth())));
    }
    let rep = inst.encode(n)?;
    if k + 1 < inst.depth() && inst.table().a(k + 2) == Some(rep.b(k + 1)) {
        return Err(reject("b_{k+1}(N) = a_{k+2}".into()));
    }
    surgery(inst, &rep, &[(k, optimal_digit(a))])
}

/// Part (i): `log P_{N*} - log P_N >= 0.2326 d^2/a - C E` with `d = b_k* - b_k(N)` and
/// `E = |d|/a (1 + log max_{m<=k} a_m) + [b_k <= 1][b_{k+1} > 0.99 a_{k+2}] log a_{k+2} + 1/q_k^2`.
pub fn check_local56_i(inst: &Instance, n: u64, k: usize, c: f64) -> Result<CheckReport> {
    let nstar = local56_i_target(inst, n, k)?;
    let rep = inst.encode(n)?;
    let a = inst.a(k + 1)? as f64;
    let bk = rep.b(k);
    let d = optimal_digit(inst.a(k + 1)?) as f64 - bk as f64;
    let lhs = inst.ln_p(nstar)? - inst.ln_p(n)?;
    let main = LOCAL56_I_MAIN * d * d / a;
    let next = inst.table().a(k + 2);
    let boundary = match next {
        Some(a2) if k + 1 < inst.depth() => {
            indicator(bk <= 1 && rep.b(k + 1) as f64 > 0.99 * a2 as f64) * (a2 as f64).ln()
        }
        _ => 0.0,
    };
    let qk = inst.q(k) as f64;
    let env = d.abs() / a * (1.0 + inst.table().log_max_a(k)) + boundary + 1.0 / (qk * qk);
    let row = CaseRow::lower_bound(format!("N={n};k={k}"), lhs, main, env, c);
    Ok(CheckReport::from_rows("local56_i", vec![row]))
}

/// `N*` for part (ii): `b_{k+1} = a_{k+2}` lowered by one and `b_k = 0` raised to `b_k*`.
pub fn local56_ii_target(inst: &Instance, n: u64, k: usize) -> Result<u64> {
    let a = inst.a(k + 1)?;
    if a < 7 {
        return Err(reject(format!("a_{} = {a} < 7", k + 1)));
    }
    if k + 1 >= inst.depth() {
        return Err(reject(format!("k + 1 = {} >= K = {}", k + 1, inst.depth())));
    }
    let rep = inst.encode(n)?;
    let a2 = inst.a(k + 2)?;
    if rep.b(k + 1) != a2 {
        return Err(reject("b_{k+1}(N) != a_{k+2}".into()));
    }
    debug_assert_eq!(rep.b(k), 0);
    surgery(inst, &rep, &[(k, optimal_digit(a)), (k + 1, a2 - 1)])
}

/// Part (ii): `log P_{N*} - log P_N >= 0.1615 a_{k+1} - C E` with
/// `E = 1 + log max_{m<=k} a_m + log a_{k+2} + [a_{k+2} = 1][b_{k+2} > 0.99 a_{k+3}] a_{k+3}`.
pub fn check_local56_ii(inst: &Instance, n: u64, k: usize, c: f64) -> Result<CheckReport> {
    let nstar = local56_ii_target(inst, n, k)?;
    let rep = inst.encode(n)?;
    let a = inst.a(k + 1)? as f64;
    let a2 = inst.a(k + 2)?;
    let lhs = inst.ln_p(nstar)? - inst.ln_p(n)?;
    let main = LOCAL56_II_MAIN * a;
    let far = match inst.table().a(k + 3) {
        Some(a3) if a2 == 1 && k + 2 < inst.depth() => {
            indicator(rep.b(k + 2) as f64 > 0.99 * a3 as f64) * a3 as f64
        }
        _ => 0.0,
    };
    let env = 1.0 + inst.table().log_max_a(k) + (a2 as f64).ln() + far;
    let row = CaseRow::lower_bound(format!("N={n};k={k}"), lhs, main, env, c);
    Ok(CheckReport::from_rows("local56_ii", vec![row]))
}

/// `(1 + log max_{m<=k} a_m) / sqrt(a_{k+1} log(1 + a_{k+1}))`, the quantity
/// that must be small for the concentration estimate.
pub fn concentration_parameter(inst: &Instance, k: usize) -> Result<f64> {
    let a = inst.a(k + 1)? as f64;
    Ok((1.0 + inst.table().log_max_a(k)) / (a * a.ln_1p()).sqrt())
}

/// `xi_k = sqrt(log(1 + a_{k+1}) / a_{k+1}) (1 + log max_{m<=k} a_m)`.
pub fn xi(table: &crate::ConvergentTable, k: usize) -> Result<f64> {
    let a = table.a(k + 1).ok_or(Error::BeyondLength {
        requested: k + 1,
        len: table.expansion().len().unwrap_or(usize::MAX),
    })? as f64;
    Ok((a.ln_1p() / a).sqrt() * (1.0 + table.log_max_a(k)))
}

/// Masses of `sum P_N^2` over `N < q_K`, in log space.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConcentrationMasses {
    /// `10 sqrt(a_{k+1} log a_{k+1})`.
    pub window: f64,
    pub ln_total: f64,
    pub ln_tail: f64,
    pub ln_total_restricted: f64,
    pub ln_tail_restricted: f64,
    pub tail_count: u64,
}

impl ConcentrationMasses {
    pub fn tail_ratio(&self) -> f64 {
        (self.ln_tail - self.ln_total).exp()
    }

    pub fn tail_ratio_restricted(&self) -> f64 {
        (self.ln_tail_restricted - self.ln_total_restricted).exp()
    }
}

/// Full enumeration of `N < q_K`, splitting by `|b_k(N) - b_k*|` against the window.
pub fn concentration_masses(inst: &Instance, k: usize) -> Result<ConcentrationMasses> {
    if k >= inst.depth() {
        return Err(reject(format!("k = {k} >= K = {}", inst.depth())));
    }
    let a = inst.a(k + 1)?;
    let window = 10.0 * (a as f64 * (a as f64).ln()).sqrt();
    let bstar = optimal_digit(a) as f64;
    let (mut all, mut tail, mut all_r, mut tail_r) =
        (Vec::new(), Vec::new(), Vec::new(), Vec::new());
    for (n, rep) in ostrowski_enumerate(inst.table(), inst.depth())?.enumerate() {
        let w = 2.0 * inst.logs()[n];
        let far = (rep.b(k) as f64 - bstar).abs() >= window;
        let restricted = rep.digits()[..k].iter().all(|&b| b == 0);
        all.push(w);
        if far {
            tail.push(w);
        }
        if restricted {
            all_r.push(w);
            if far {
                tail_r.push(w);
            }
        }
    }
    let tail_count = tail.len() as u64;
    Ok(ConcentrationMasses {
        window,
        ln_total: log_sum_exp(&mut all),
        ln_tail: log_sum_exp(&mut tail),
        ln_total_restricted: log_sum_exp(&mut all_r),
        ln_tail_restricted: log_sum_exp(&mut tail_r),
        tail_count,
    })
}

/// Both concentration inequalities, `tail <= a_{k+1}^{-20} total`, over all `N < q_K`
/// and over those with `b_0 = ... = b_{k-1} = 0`. The hypothesis is checked against `a_small`.
pub fn check_concentration(inst: &Instance, k: usize, a_small: f64) -> Result<CheckReport> {
    let param = concentration_parameter(inst, k)?;
    if param > a_small {
        return Err(reject(format!(
            "concentration parameter {param:.4} exceeds A = {a_small}"
        )));
    }
    let m = concentration_masses(inst, k)?;
    let shift = 20.0 * (inst.a(k + 1)? as f64).ln();
    let rows = vec![
        CaseRow::at_most(format!("full;k={k}"), m.ln_tail, m.ln_total - shift),
        CaseRow::at_most(
            format!("restricted;k={k}"),
            m.ln_tail_restricted,
            m.ln_total_restricted - shift,
        ),
    ];
    // Report the constant in front of a^{-20} that each inequality needs.
    let mut rep = CheckReport::from_rows("concentration", rows);
    rep.fitted_constant = ((m.ln_tail - m.ln_total + shift)
        .max(m.ln_tail_restricted - m.ln_total_restricted + shift))
    .exp();
    Ok(rep)
}

/// Split of `N` at digit `k`: `N_1 = sum_{l<k} b_l q_l`, `N_2 = N - N_1`.
pub fn split_at(inst: &Instance, n: u64, k: usize) -> Result<(u64, u64)> {
    let rep = inst.encode(n)?;
    let n1: u64 = (0..k).map(|l| rep.b(l) * inst.q(l)).sum();
    Ok((n1, n - n1))
}

/// `log P_N - log P_{N_1}(alpha, (-1)^k (5/6)/q_k) - log P_{N_2}` against
/// `C (|b_k - b_k*| + 1)/a_{k+1} (1 + log max_{m<=k} a_m)`.
pub fn check_sudler_factor(inst: &Instance, n: u64, k: usize, c: f64) -> Result<CheckReport> {
    if k == 0 || k >= inst.depth() {
        return Err(reject(format!("need 1 <= k < K, got k = {k}")));
    }
    let a = inst.a(k + 1)?;
    if a < 150 {
        return Err(reject(format!("a_{} = {a} < 150", k + 1)));
    }
    let rep = inst.encode(n)?;
    let dev = (rep.b(k) as f64 - optimal_digit(a) as f64).abs();
    if dev > a as f64 / 10.0 {
        return Err(reject(format!("|b_k - b_k*| = {dev} > a_{{k+1}}/10")));
    }
    let (n1, n2) = split_at(inst, n, k)?;
    let x = sign(k) * (5.0 / 6.0) / inst.q(k) as f64;
    let err = inst.ln_p(n)? - shifted_ln(inst.rotation(), x, n1)? - inst.ln_p(n2)?;
    let env = (dev + 1.0) / a as f64 * (1.0 + inst.table().log_max_a(k));
    Ok(CheckReport::from_rows(
        "sudler_factor",
        vec![CaseRow::abs_bound(format!("N={n};k={k}"), err, env, c)],
    ))
}

/// The three sums of the factorization of `sum_{N<q_K} P_N^2` at `k`, in log space.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KashaevFactor {
    pub ln_total: f64,
    /// `log sum_{N<q_k} P_N(p_k/q_k, (-1)^k (5/6)/q_k)^2`.
    pub ln_head: f64,
    /// `log sum_{N<q_K, b_0=...=b_{k-1}=0} P_N^2`.
    pub ln_restricted: f64,
    pub xi: f64,
}

impl KashaevFactor {
    pub fn log_error(&self) -> f64 {
        self.ln_total - self.ln_head - self.ln_restricted
    }
}

pub fn kashaev_factor(inst: &Instance, k: usize) -> Result<KashaevFactor> {
    if k == 0 || k >= inst.depth() {
        return Err(reject(format!("need 1 <= k < K, got k = {k}")));
    }
    let t = inst.table();
    let x = sign(k) * (5.0 / 6.0) / inst.q(k) as f64;
    let ln_head = ln_shifted_j(t.p(k), t.q(k), x)?;
    let mut all: Vec<f64> = inst.logs().iter().map(|l| 2.0 * l).collect();
    let mut restricted: Vec<f64> = ostrowski_enumerate(t, inst.depth())?
        .enumerate()
        .filter(|(_, rep)| rep.digits()[..k].iter().all(|&b| b == 0))
        .map(|(n, _)| 2.0 * inst.logs()[n])
        .collect();
    Ok(KashaevFactor {
        ln_total: log_sum_exp(&mut all),
        ln_head,
        ln_restricted: log_sum_exp(&mut restricted),
        xi: xi(t, k)?,
    })
}

/// `|log total - log head - log restricted| <= C xi_k`, for `xi_k <= a_small`.
pub fn check_kashaev_factor(
    inst: &Instance,
    k: usize,
    c: f64,
    a_small: f64,
) -> Result<CheckReport> {
    let f = kashaev_factor(inst, k)?;
    if f.xi > a_small {
        return Err(reject(format!(
            "xi_{k} = {:.4} exceeds A = {a_small}",
            f.xi
        )));
    }
    Ok(CheckReport::from_rows(
        "kashaev_factor",
        vec![CaseRow::abs_bound(
            format!("K={};k={k}", inst.depth()),
            f.log_error(),
            f.xi,
            c,
        )],
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn remark_constants() {
        let vol = crate::jones::vol_41();
        let pi = std::f64::consts::PI;
        assert!((9.0 * vol / (25.0 * pi) - 0.232_607_48).abs() < 1e-8);
        assert!((vol / (4.0 * pi) - 0.161_532_97).abs() < 1e-8);
        assert!(LOCAL56_I_MAIN < 9.0 * vol / (25.0 * pi));
        assert!(LOCAL56_II_MAIN < vol / (4.0 * pi));
        assert_eq!(optimal_digit(200), 166);
        assert_eq!(optimal_digit(7), 5);
    }

    #[test]
    fn part_i_is_neutral_at_the_optimum() {
        let inst = Instance::finite(&[1, 1, 200, 2, 3]).unwrap();
        let k = 2;
        let bstar = optimal_digit(200);
        let n = bstar * inst.q(k) + inst.q(1);
        let r = check_local56_i(&inst, n, k, 0.0).unwrap();
        assert_eq!(r.rows[0].lhs, 0.0);
        assert!(r.rows[0].rhs <= 0.0 && r.passed);
        assert_eq!(local56_i_target(&inst, n, k).unwrap(), n);
    }

    #[test]
    fn part_i_gaussian_decay() {
        let inst = Instance::finite(&[1, 1, 200, 2, 3]).unwrap();
        let k = 2;
        let bstar = optimal_digit(200);
        let mut prev = f64::INFINITY;
        // Deviation grows downward from the optimum: P_N / P_{N*} shrinks
        // while the deviation stays below a_{k+1}/2.
        for b in (66..=bstar).rev().step_by(10) {
            let n = b * inst.q(k);
            let r = check_local56_i(&inst, n, k, 5.0).unwrap();
            let ratio = -r.rows[0].lhs;
            assert!(ratio <= prev + 1e-9 || b + 10 > bstar, "b = {b}");
            prev = ratio;
        }
    }

    #[test]
    fn preconditions_are_enforced() {
        let inst = Instance::finite(&[1, 1, 200, 2, 3]).unwrap();
        assert!(check_local56_i(&inst, 0, 0, 1.0).is_err()); // a_1 = 1
                                                             // b_3 = a_4 = 2 needs part (ii).
        let n = 2 * inst.q(3);
        assert!(check_local56_i(&inst, n, 2, 1.0).is_err());
        let nstar = local56_ii_target(&inst, n, 2).unwrap();
        let rep = inst.encode(nstar).unwrap();
        assert_eq!((rep.b(2), rep.b(3)), (optimal_digit(200), 1));
        assert!(check_local56_ii(&inst, n, 2, 10.0).unwrap().rows[0].lhs > 0.0);
        assert!(check_local56_ii(&inst, 0, 2, 1.0).is_err());
        assert!(check_sudler_factor(&inst, 0, 2, 1.0).is_err()); // b_2 = 0 far from 166
    }

    #[test]
    fn concentration_on_a_large_quotient() {
        let inst = Instance::finite(&[1, 300, 1, 2]).unwrap();
        let m = concentration_masses(&inst, 1).unwrap();
        // The window 10 sqrt(a log a) exceeds every possible deviation.
        assert_eq!(m.tail_count, 0);
        assert_eq!(m.tail_ratio(), 0.0);
        let r = check_concentration(&inst, 1, 0.25).unwrap();
        assert!(r.passed && r.rows.len() == 2);
        assert!(check_concentration(&inst, 1, 0.01).is_err());
    }

    #[test]
    fn sudler_factor_trivial_split() {
        let inst = Instance::finite(&[2, 1, 200, 3]).unwrap();
        let k = 2;
        let n = optimal_digit(200) * inst.q(k);
        assert_eq!(split_at(&inst, n, k).unwrap(), (0, n));
        let r = check_sudler_factor(&inst, n, k, 0.0).unwrap();
        assert_eq!(r.rows[0].lhs, 0.0);
        assert!(r.passed);
    }

    #[test]
    fn kashaev_factor_improves_with_the_quotient() {
        // With a_1 = 1 the head is a single empty product and the split is exact.
        let exact = kashaev_factor(&Instance::finite(&[1, 100, 2, 3]).unwrap(), 1).unwrap();
        assert_eq!((exact.ln_head, exact.log_error()), (0.0, 0.0));
        let small = kashaev_factor(&Instance::finite(&[2, 100, 2, 3]).unwrap(), 1).unwrap();
        let big = kashaev_factor(&Instance::finite(&[2, 400, 2, 3]).unwrap(), 1).unwrap();
        assert!(big.log_error().abs() < small.log_error().abs());
        assert!(big.log_error().abs() < big.xi);
        // Minimal window K = k + 1.
        let cf = crate::CFExpansion::finite(0, vec![1, 400, 2, 3]).unwrap();
        let w = kashaev_factor(&Instance::new(&cf, 2).unwrap(), 1).unwrap();
        assert!(w.log_error().is_finite());
    }
}
