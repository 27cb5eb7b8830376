use std::f64::consts::PI;

use rayon::prelude::*;

use super::local::xi;
use super::{CaseRow, CheckReport, DENOMINATOR_CAP};
use crate::cfrac::{convergents, interval_ik, stern_brocot_between, CFExpansion};
use crate::dist::farey_sweep;
use crate::jones::{ln_j_pq, psi_from_h, vol_41};
use crate::{Error, Result};

/// `h(p/q) = log J(p/q) - log J((q mod p)/p)` for `0 < p < q`.
pub fn h_pq(p: u64, q: u64) -> f64 {
    ln_j_pq(p, q) - if p == 1 { 0.0 } else { ln_j_pq(q % p, p) }
}

/// Spread of `h` over the rationals of `I_{k+1}` with bounded denominator.
#[derive(Clone, Debug, PartialEq)]
pub struct Oscillation {
    pub k: usize,
    pub qcap: u64,
    pub samples: usize,
    pub osc: f64,
    pub bound: f64,
    pub xi: f64,
    /// `osc / bound`.
    pub ratio: f64,
    pub argmax: (u64, u64),
    pub argmin: (u64, u64),
}

/// `xi_k + (a_2+...+a_k)^{3/4}/(q_k/a_1)^{3/4} + log(a_1+1)/(q_k/a_1)`.
pub fn oscillation_bound(cf: &CFExpansion, k: usize) -> Result<f64> {
    let t = convergents(cf, k + 1)?;
    let a1 = t
        .a(1)
        .ok_or(Error::Precondition("expansion has no a_1".into()))? as f64;
    let s: u64 = (2..=k).filter_map(|m| t.a(m)).sum();
    let scaled = t.q_u64(k)? as f64 / a1;
    Ok(xi(&t, k)? + (s as f64 / scaled).powf(0.75) + a1.ln_1p() / scaled)
}

/// `max - min` of `h` over `I_{k+1}` rationals with denominator at most `qcap`,
/// enumerated exhaustively by Stern-Brocot descent.
pub fn oscillation(cf: &CFExpansion, k: usize, qcap: u64) -> Result<Oscillation> {
    if qcap > DENOMINATOR_CAP {
        return Err(Error::EnumerationCap {
            requested: format!("denominators up to {qcap}"),
            cap: DENOMINATOR_CAP,
        });
    }
    let (lo, hi) = interval_ik(cf, k)?;
    let pts = stern_brocot_between(&lo, &hi, qcap)?;
    if pts.is_empty() {
        return Err(Error::EmptySample(format!(
            "I_{} has no rationals with q <= {qcap}",
            k + 1
        )));
    }
    let hs: Vec<f64> = pts.par_iter().map(|&(p, q)| h_pq(p, q)).collect();
    let (mut imax, mut imin) = (0, 0);
    for (i, h) in hs.iter().enumerate() {
        if *h > hs[imax] {
            imax = i;
        }
        if *h < hs[imin] {
            imin = i;
        }
    }
    let osc = hs[imax] - hs[imin];
    let bound = oscillation_bound(cf, k)?;
    Ok(Oscillation {
        k,
        qcap,
        samples: pts.len(),
        osc,
        bound,
        xi: xi(&convergents(cf, k + 1)?, k)?,
        ratio: osc / bound,
        argmax: pts[imax],
        argmin: pts[imin],
    })
}

/// `osc <= C * bound`.
pub fn check_oscillation(cf: &CFExpansion, k: usize, qcap: u64, c: f64) -> Result<CheckReport> {
    let o = oscillation(cf, k, qcap)?;
    Ok(CheckReport::from_rows(
        "continuity",
        vec![CaseRow::abs_bound(
            format!("k={k};qcap={qcap}"),
            o.osc,
            o.bound,
            c,
        )],
    ))
}

/// Sup statistics over a Farey set.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Th3Scan {
    /// `sup |h(x) - Vol/(2 pi x)| / (1 + |log x|)`.
    pub sup_ratio: f64,
    pub argsup: (u64, u64),
    /// `sup |psi(x)|`.
    pub sup_psi: f64,
    pub argsup_psi: (u64, u64),
    pub samples: usize,
}

/// `h` over `F_ncap` together with the scan statistics; one row per fraction.
pub fn scan_th3(ncap: u64, c: f64) -> Result<(CheckReport, Th3Scan)> {
    if ncap < 2 {
        return Err(Error::Precondition(format!("Ncap = {ncap} < 2")));
    }
    let rows = farey_sweep(ncap, false)?;
    let vals: Vec<(u64, u64, f64, f64)> = rows
        .par_iter()
        .map(|r| {
            let x = r.p as f64 / r.q as f64;
            let h = h_pq(r.p, r.q);
            let ratio = (h - vol_41() / (2.0 * PI * x)).abs() / (1.0 + x.ln().abs());
            (r.p, r.q, ratio, psi_from_h(h, x))
        })
        .collect();
    let mut scan = Th3Scan {
        sup_ratio: 0.0,
        argsup: (0, 1),
        sup_psi: 0.0,
        argsup_psi: (0, 1),
        samples: vals.len(),
    };
    let mut out = Vec::with_capacity(vals.len());
    for &(p, q, ratio, psi) in &vals {
        if ratio > scan.sup_ratio {
            scan.sup_ratio = ratio;
            scan.argsup = (p, q);
        }
        if psi.abs() > scan.sup_psi {
            scan.sup_psi = psi.abs();
            scan.argsup_psi = (p, q);
        }
        out.push(CaseRow::abs_bound(format!("{p}/{q}"), ratio, 1.0, c));
    }
    Ok((CheckReport::from_rows("th3", out), scan))
}
