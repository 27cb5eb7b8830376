use num_bigint::BigInt;
use num_traits::Pow;

use super::{CaseRow, CheckReport, Instance};
use crate::cfrac::{ConvergentTable, OstrowskiRep};
use crate::trig::{epsilon_vector, product_form_block, Rotation};
use crate::{Error, Result};

/// `a <= q^{1/100}`, decided exactly as `a^100 <= q`.
fn tiny_relative_to(a: u64, q: &BigInt) -> bool {
    BigInt::from(a).pow(100u32) <= *q
}

/// `(a_2 + ... + a_l)^{3/4} / (q'_l)^{3/4} + [with_log] log(a_1 + 1)/q'_l`.
pub fn tail_envelope(
    table: &ConvergentTable,
    tail: &ConvergentTable,
    ell: usize,
    with_log: bool,
) -> f64 {
    let s: u64 = (2..=ell).filter_map(|m| table.a(m)).sum();
    let qp = tail.q_u64(ell - 1).map_or(f64::INFINITY, |q| q as f64);
    let a1 = table.a(1).unwrap_or(1) as f64;
    let main = (s as f64 / qp).powf(0.75);
    if with_log {
        main + a1.ln_1p() / qp
    } else {
        main
    }
}

/// `log prod_{b < b_l} P_{q_l}(alpha, .) / P_{q'_l}(alpha', .)`, the `l`-th block
/// ratio of the product forms of `P_N(alpha)` and `P_{N'}(alpha')`.
pub fn tail_block_ratio(
    inst: &Instance,
    tail: &ConvergentTable,
    n: u64,
    ell: usize,
) -> Result<f64> {
    let table = inst.table();
    if ell == 0 || ell >= inst.depth() {
        return Err(Error::Precondition(format!(
            "need 1 <= l < K, got l = {ell}"
        )));
    }
    let rep = inst.encode(n)?;
    if table.a(2) == Some(rep.b(1)) {
        return Err(Error::Precondition("b_1(N) = a_2: N' undefined".into()));
    }
    let rep_tail = OstrowskiRep::from_digits(rep.digits()[1..].to_vec(), tail)?;
    let eps = epsilon_vector(&rep, table);
    let eps_tail = epsilon_vector(&rep_tail, tail);
    let rot_tail = Rotation::of_table(tail);
    let mut acc = 0.0;
    for b in 0..rep.b(ell) {
        acc += product_form_block(table, inst.rotation(), ell, b, eps.get(ell))?
            - product_form_block(tail, &rot_tail, ell - 1, b, eps_tail.get(ell - 1))?;
    }
    Ok(acc)
}

/// Hypotheses (i) and (ii) of the tail estimate at level `l`.
pub fn tail_hypotheses(
    inst: &Instance,
    tail: &ConvergentTable,
    rep: &OstrowskiRep,
    ell: usize,
) -> bool {
    let t = inst.table();
    let cond = |j: usize| -> bool {
        // Level j uses a_{j+1}, b_j and q'_j = tail.q(j - 1).
        match t.a(j + 1) {
            None => true,
            Some(a) => {
                if j >= inst.depth() {
                    return true;
                }
                let small = j >= 1 && j - 1 <= tail.depth() && tiny_relative_to(a, tail.q(j - 1));
                small || rep.b(j) as f64 <= 0.99 * a as f64
            }
        }
    };
    cond(ell) && cond(ell + 1)
}

/// `|log ratio| <= C ((a_2+...+a_l)^{3/4}/(q'_l)^{3/4} + log(a_1+1)/q'_l)`.
pub fn check_tail(
    inst: &Instance,
    tail: &ConvergentTable,
    n: u64,
    ell: usize,
    c: f64,
) -> Result<CheckReport> {
    let rep = inst.encode(n)?;
    if ell == 0 || ell >= inst.depth() {
        return Err(Error::Precondition(format!(
            "need 1 <= l < K, got l = {ell}"
        )));
    }
    if !tail_hypotheses(inst, tail, &rep, ell) {
        return Err(Error::Precondition(format!(
            "tail hypotheses fail at l = {ell}"
        )));
    }
    let lr = tail_block_ratio(inst, tail, n, ell)?;
    let env = tail_envelope(inst.table(), tail, ell, true);
    Ok(CheckReport::from_rows(
        "tail",
        vec![CaseRow::abs_bound(format!("N={n};l={ell}"), lr, env, c)],
    ))
}
