use rand::Rng;

use crate::cfrac::{convergents, ostrowski_encode, CFExpansion, ConvergentTable, OstrowskiRep};
use crate::trig::{prefix_ln, shifted_prefix_ln, Rotation};
use crate::{Error, Result};

/// Cap on the number of `N` a check may enumerate.
pub const ENUMERATION_CAP: u64 = 10_000_000;

/// Cap on denominators in rational-interval enumeration.
pub const DENOMINATOR_CAP: u64 = 10_000;

/// A number `alpha`, its table to depth `K`, and `log P_N(alpha)` for every `N < q_K`.
#[derive(Clone, Debug)]
pub struct Instance {
    table: ConvergentTable,
    rot: Rotation,
    logs: Vec<f64>,
}

impl Instance {
    pub fn new(cf: &CFExpansion, depth: usize) -> Result<Self> {
        let table = convergents(cf, depth)?;
        let qk = table.q_u64(depth)?;
        if qk > ENUMERATION_CAP {
            return Err(Error::EnumerationCap {
                requested: format!("q_{depth} = {qk}"),
                cap: ENUMERATION_CAP,
            });
        }
        let rot = Rotation::of_table(&table);
        let logs = match table.alpha().fract().to_u64_pair() {
            Some((p, q)) if table.truncation_depth().is_none() => prefix_ln(p, q, qk - 1)?,
            _ => shifted_prefix_ln(&rot, 0.0, qk - 1)?,
        };
        Ok(Instance { table, rot, logs })
    }

    /// `alpha = [0; a_1, ..., a_L]` over its whole expansion.
    pub fn finite(partials: &[u64]) -> Result<Self> {
        let cf = CFExpansion::finite(0, partials.to_vec())?;
        let len = cf.len().unwrap_or(0);
        Self::new(&cf, len)
    }

    pub fn table(&self) -> &ConvergentTable {
        &self.table
    }

    pub fn rotation(&self) -> &Rotation {
        &self.rot
    }

    /// `K`.
    pub fn depth(&self) -> usize {
        self.table.depth()
    }

    /// `q_K`, the number of admissible `N`.
    pub fn size(&self) -> u64 {
        self.logs.len() as u64
    }

    /// `log P_N(alpha)`.
    pub fn ln_p(&self, n: u64) -> Result<f64> {
        self.logs
            .get(n as usize)
            .copied()
            .ok_or_else(|| Error::OutOfRange {
                n,
                bound: self.size().to_string(),
            })
    }

    pub fn logs(&self) -> &[f64] {
        &self.logs
    }

    pub fn encode(&self, n: u64) -> Result<OstrowskiRep> {
        ostrowski_encode(n, &self.table)
    }

    /// `q_l` as a machine integer (every `q_l` with `l <= K` fits, by the cap).
    pub fn q(&self, ell: usize) -> u64 {
        self.table.q_u64(ell).expect("q_l <= q_K fits")
    }

    /// `a_m`, which must exist.
    pub fn a(&self, m: usize) -> Result<u64> {
        self.table.a(m).ok_or(Error::BeyondLength {
            requested: m,
            len: self.table.expansion().len().unwrap_or(usize::MAX),
        })
    }

    /// Table of `alpha' = {1/alpha}` to depth `K - 1`, in its own indexing.
    pub fn tail_table(&self) -> Result<ConvergentTable> {
        if self.depth() == 0 {
            return Err(Error::Precondition("tail of a depth-0 table".into()));
        }
        convergents(&self.table.expansion().tail()?, self.depth() - 1)
    }
}

/// A partial quotient drawn as `min(floor(1/u), cap)`, which follows the
/// Gauss-Kuzmin shape up to the cap.
pub fn gauss_kuzmin_digit<R: Rng>(rng: &mut R, cap: u64) -> u64 {
    let u: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
    ((1.0 / u).floor() as u64).clamp(1, cap)
}

/// `q_L` for `[0; a_1, ..., a_L]`.
pub fn denominator(partials: &[u64]) -> u128 {
    let (mut q0, mut q1) = (0u128, 1u128);
    for &a in partials {
        (q0, q1) = (q1, u128::from(a).saturating_mul(q1).saturating_add(q0));
    }
    q1
}

/// Random partial quotients with `a_{k+1}` replaced by `planted`, padded
/// with `extra` further digits and truncated so that `q_L <= qcap`.
/// Returns `None` when the planted digit alone overflows `qcap`.
pub fn planted_partials<R: Rng>(
    rng: &mut R,
    k: usize,
    planted: u64,
    extra: usize,
    small_cap: u64,
    qcap: u64,
) -> Option<Vec<u64>> {
    let mut v: Vec<u64> = (0..k).map(|_| gauss_kuzmin_digit(rng, small_cap)).collect();
    v.push(planted);
    if denominator(&v) > u128::from(qcap) {
        return None;
    }
    for _ in 0..extra {
        v.push(gauss_kuzmin_digit(rng, small_cap));
        if denominator(&v) > u128::from(qcap) {
            v.pop();
            break;
        }
    }
    // A trailing 1 would be folded away and shift the indexing.
    while v.len() > k + 1 && *v.last().unwrap() == 1 {
        *v.last_mut().unwrap() = 2;
        if denominator(&v) > u128::from(qcap) {
            v.pop();
        }
    }
    Some(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trig::sudler_prefix_logs;
    use crate::Rational;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn logs_match_direct_products() {
        let inst = Instance::finite(&[2, 3, 4]).unwrap();
        assert_eq!(inst.size(), 30);
        let r = inst.table().alpha().clone();
        let direct = sudler_prefix_logs(&r, 29).unwrap();
        for (n, d) in direct.iter().enumerate() {
            assert_eq!(inst.ln_p(n as u64).unwrap(), d.ln());
        }
        assert!(inst.ln_p(30).is_err());
        assert_eq!(
            inst.tail_table().unwrap().alpha(),
            &"4/13".parse::<Rational>().unwrap()
        );
    }

    #[test]
    fn truncated_depth_uses_the_full_number() {
        let cf = CFExpansion::finite(0, vec![2, 3, 4, 5]).unwrap();
        let inst = Instance::new(&cf, 2).unwrap();
        assert_eq!(inst.size(), 7);
        let full = Instance::finite(&[2, 3, 4, 5]).unwrap();
        assert_eq!(&full.logs()[..7], inst.logs());
        let golden = Instance::new(&CFExpansion::golden(), 10).unwrap();
        assert_eq!(golden.size(), 89);
    }

    #[test]
    fn caps_and_generators() {
        let cf = CFExpansion::finite(0, vec![4000, 4000]).unwrap();
        assert!(matches!(
            Instance::new(&cf, 2),
            Err(Error::EnumerationCap { .. })
        ));
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..200 {
            if let Some(v) = planted_partials(&mut rng, 2, 50, 3, 20, 5000) {
                assert_eq!(v[2], 50);
                assert!(denominator(&v) <= 5000);
                assert!(v.len() == 3 || *v.last().unwrap() > 1);
            }
        }
        assert_eq!(denominator(&[2, 3, 4]), 30);
    }
}
