use super::{CFExpansion, ConvergentTable, Rational};
use crate::{Error, Result};

/// Ostrowski digits `b_0, ..., b_{K-1}` of some `0 <= N < q_K`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OstrowskiRep {
    digits: Vec<u64>,
}

impl OstrowskiRep {
    /// Wraps raw digits after checking them against `table`.
    pub fn from_digits(digits: Vec<u64>, table: &ConvergentTable) -> Result<Self> {
        let rep = OstrowskiRep { digits };
        rep.validate(table)?;
        Ok(rep)
    }

    pub fn zero(k: usize) -> Self {
        OstrowskiRep { digits: vec![0; k] }
    }

    pub fn digits(&self) -> &[u64] {
        &self.digits
    }

    /// Number of digits `K`.
    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    /// `b_l`, zero past the last digit.
    pub fn b(&self, ell: usize) -> u64 {
        self.digits.get(ell).copied().unwrap_or(0)
    }

    /// Checks the digit rules against `table`.
    pub fn validate(&self, table: &ConvergentTable) -> Result<()> {
        let k = self.digits.len();
        if k > table.depth() {
            return Err(Error::InvalidDigits(format!(
                "{k} digits but table depth {}",
                table.depth()
            )));
        }
        for (ell, &b) in self.digits.iter().enumerate() {
            if b > max_digit(table, ell, self.b_next(ell)) {
                return Err(Error::InvalidDigits(format!(
                    "b_{ell} = {b} violates the digit bound"
                )));
            }
        }
        Ok(())
    }

    fn b_next(&self, ell: usize) -> Option<u64> {
        self.digits.get(ell + 1).copied()
    }

    /// `N = sum b_l q_l`.
    pub fn decode(&self, table: &ConvergentTable) -> Result<u64> {
        self.validate(table)?;
        let mut n: u64 = 0;
        for (ell, &b) in self.digits.iter().enumerate() {
            if b == 0 {
                continue;
            }
            let term = table
                .q_u64(ell)?
                .checked_mul(b)
                .ok_or_else(|| Error::Overflow("Ostrowski value".into()))?;
            n = n
                .checked_add(term)
                .ok_or_else(|| Error::Overflow("Ostrowski value".into()))?;
        }
        Ok(n)
    }
}

/// Largest admissible `b_l` given `b_{l+1}` (`None` when `l` is the top digit).
fn max_digit(table: &ConvergentTable, ell: usize, b_next: Option<u64>) -> u64 {
    if let Some(bn) = b_next {
        if table.a(ell + 2) == Some(bn) {
            return 0;
        }
    }
    let a = table.a(ell + 1).unwrap_or(u64::MAX);
    if ell == 0 {
        a - 1
    } else {
        a
    }
}

/// Greedy Ostrowski expansion of `n` with `K = table.depth()` digits.
pub fn ostrowski_encode(n: u64, table: &ConvergentTable) -> Result<OstrowskiRep> {
    let k = table.depth();
    if let Some(qk) = table.q_small(k) {
        if n >= qk {
            return Err(Error::OutOfRange {
                n,
                bound: qk.to_string(),
            });
        }
    }
    let mut digits = vec![0; k];
    let mut rem = n;
    for ell in (0..k).rev() {
        if let Some(q) = table.q_small(ell) {
            digits[ell] = rem / q;
            rem %= q;
        }
    }
    debug_assert_eq!(rem, 0);
    Ok(OstrowskiRep { digits })
}

pub fn ostrowski_decode(rep: &OstrowskiRep, table: &ConvergentTable) -> Result<u64> {
    rep.decode(table)
}

/// All valid digit vectors of length `k`, in increasing order of `N`.
pub fn ostrowski_enumerate(table: &ConvergentTable, k: usize) -> Result<OstrowskiIter<'_>> {
    if k > table.depth() {
        return Err(Error::BeyondLength {
            requested: k,
            len: table.depth(),
        });
    }
    Ok(OstrowskiIter {
        table,
        current: Some(vec![0; k]),
    })
}

/// Odometer over Ostrowski digit vectors.
pub struct OstrowskiIter<'a> {
    table: &'a ConvergentTable,
    current: Option<Vec<u64>>,
}

impl Iterator for OstrowskiIter<'_> {
    type Item = OstrowskiRep;

    fn next(&mut self) -> Option<OstrowskiRep> {
        let digits = self.current.take()?;
        let out = OstrowskiRep {
            digits: digits.clone(),
        };
        let mut next = digits;
        let k = next.len();
        let mut bumped = false;
        for ell in 0..k {
            let b_next = (ell + 1 < k).then(|| next[ell + 1]);
            if next[ell] < max_digit(self.table, ell, b_next) {
                next[ell] += 1;
                next[..ell].fill(0);
                bumped = true;
                break;
            }
        }
        if bumped {
            self.current = Some(next);
        }
        Some(out)
    }
}

/// `N' = sum_{l >= 1} b_l(N) q'_{l}` where `q'` are the denominators of
/// `{1/alpha}`; `tail_table` is indexed in its own numbering, so
/// `q'_l = tail_table.q(l - 1)`.
pub fn drop_first_digit_map(
    n: u64,
    table: &ConvergentTable,
    tail_table: &ConvergentTable,
) -> Result<u64> {
    let rep = ostrowski_encode(n, table)?;
    if let Some(a2) = table.a(2) {
        if rep.b(1) == a2 {
            return Err(Error::Precondition("b_1(N) = a_2".into()));
        }
    }
    let k = rep.len();
    if k >= 1 && tail_table.depth() + 1 < k - 1 {
        return Err(Error::BeyondLength {
            requested: k - 1,
            len: tail_table.depth() + 1,
        });
    }
    let mut out: u64 = 0;
    for ell in 1..k {
        let b = rep.b(ell);
        if b > 0 {
            out += b * tail_table.q_u64(ell - 1)?;
        }
    }
    Ok(out)
}

/// `I_{k+1}`: the rationals whose expansion starts with `a_1, ..., a_{k+1}`,
/// as the ordered endpoints `p_{k+1}/q_{k+1}` and
/// `(p_{k+1} + p_k)/(q_{k+1} + q_k)`.
pub fn interval_ik(cf: &CFExpansion, k: usize) -> Result<(Rational, Rational)> {
    let t = super::convergents(cf, k + 1)?;
    let a = Rational::new(t.p(k + 1).clone(), t.q(k + 1).clone())?;
    let b = Rational::new(t.p(k + 1) + t.p(k), t.q(k + 1) + t.q(k))?;
    Ok(if a <= b { (a, b) } else { (b, a) })
}

/// Every reduced fraction in the closed interval between two Farey
/// neighbours `lo < hi` with denominator at most `qcap`, in increasing
/// order, by Stern-Brocot descent.
pub fn stern_brocot_between(lo: &Rational, hi: &Rational, qcap: u64) -> Result<Vec<(u64, u64)>> {
    let pair = |r: &Rational| {
        r.to_u64_pair()
            .ok_or_else(|| Error::Overflow(format!("endpoint {r}")))
    };
    let (a, b) = pair(lo)?;
    let (c, d) = pair(hi)?;
    let det = i128::from(c) * i128::from(b) - i128::from(a) * i128::from(d);
    if det != 1 {
        return Err(Error::Precondition(format!(
            "{lo} and {hi} are not Farey neighbours"
        )));
    }
    let mut out = Vec::new();
    if b <= qcap {
        out.push((a, b));
    }
    // In-order traversal of the mediant tree with an explicit stack.
    let mut stack = vec![((a, b), (c, d), false)];
    while let Some((l, r, visited)) = stack.pop() {
        let m = (l.0 + r.0, l.1 + r.1);
        if visited {
            out.push(m);
            stack.push((m, r, false));
            continue;
        }
        if m.1 > qcap {
            continue;
        }
        stack.push((l, r, true));
        stack.push((l, m, false));
    }
    if d <= qcap && (c, d) != (a, b) {
        out.push((c, d));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::super::{cf_expand, convergents};
    use super::*;
    use proptest::prelude::*;

    fn table(s: &str) -> ConvergentTable {
        ConvergentTable::full(&s.parse().unwrap()).unwrap()
    }

    /// All digit vectors obeying the rules, by brute force over the box.
    fn brute_force(t: &ConvergentTable, k: usize) -> Vec<(u64, Vec<u64>)> {
        let mut out = vec![];
        let bounds: Vec<u64> = (0..k).map(|l| t.a(l + 1).unwrap()).collect();
        let mut d = vec![0u64; k];
        loop {
            let ok = (0..k).all(|l| {
                (l > 0 || d[0] < bounds[0])
                    && !(l + 1 < k && d[l + 1] == bounds[l + 1] && d[l] != 0)
            });
            if ok {
                let n: u64 = (0..k).map(|l| d[l] * t.q_u64(l).unwrap()).sum();
                out.push((n, d.clone()));
            }
            let mut i = 0;
            while i < k && d[i] == bounds[i] {
                d[i] = 0;
                i += 1;
            }
            if i == k {
                break;
            }
            d[i] += 1;
        }
        out.sort();
        out
    }

    #[test]
    fn spec_examples() {
        let t = table("cf:2,3,4");
        let rep = ostrowski_encode(5, &t).unwrap();
        assert_eq!(rep.digits(), &[1, 2, 0]);
        assert_eq!(rep.decode(&t).unwrap(), 5);
        assert!(ostrowski_encode(30, &t).is_err());
        assert_eq!(ostrowski_encode(0, &t).unwrap(), OstrowskiRep::zero(3));

        let g = convergents(&CFExpansion::golden(), 6).unwrap();
        let rep = ostrowski_encode(4, &g).unwrap();
        assert_eq!(rep.digits(), &[0, 1, 0, 1, 0, 0]);

        let short = table("cf:2,3");
        let all: Vec<_> = ostrowski_enumerate(&short, 2).unwrap().collect();
        assert_eq!(all.len(), 7);
        assert!(all.iter().all(|r| r.digits() != [1, 3]));
        assert!(OstrowskiRep::from_digits(vec![1, 3], &short).is_err());
        assert!(OstrowskiRep::from_digits(vec![2, 0], &short).is_err());
    }

    #[test]
    fn enumeration_matches_brute_force() {
        for s in ["cf:2,3,4", "cf:1,1,2", "cf:3,1,1,5", "cf:1,4,1,3", "cf:7"] {
            let t = table(s);
            for k in 0..=t.depth() {
                let brute = brute_force(&t, k);
                let got: Vec<_> = ostrowski_enumerate(&t, k)
                    .unwrap()
                    .map(|r| {
                        let n: u64 = r
                            .digits()
                            .iter()
                            .enumerate()
                            .map(|(l, b)| b * t.q_u64(l).unwrap())
                            .sum();
                        (n, r.digits().to_vec())
                    })
                    .collect();
                assert_eq!(got, brute, "{s} K={k}");
                assert_eq!(got.len() as u64, t.q_u64(k).unwrap());
                assert!(got.iter().enumerate().all(|(i, (n, _))| *n == i as u64));
            }
        }
    }

    #[test]
    fn exhaustive_round_trip() {
        for s in [
            "cf:1,1,1,1,1,1,1,1,1,1,1,1,1,1,1,1,1,2",
            "cf:3,7,15,1,25",
            "cf:2,1,2,1,50,3",
        ] {
            let t = table(s);
            let qk = t.q_u64(t.depth()).unwrap();
            assert!(qk <= 10_000);
            for n in 0..qk {
                let rep = ostrowski_encode(n, &t).unwrap();
                rep.validate(&t).unwrap();
                assert_eq!(rep.decode(&t).unwrap(), n);
            }
        }
    }

    #[test]
    fn drop_first_digit() {
        let t = table("cf:2,3,4");
        let tail = ConvergentTable::full(&t.expansion().tail().unwrap()).unwrap();
        assert_eq!(drop_first_digit_map(0, &t, &tail).unwrap(), 0);
        // b = (1, 2, 0): N' = 2 q'_1 = 2 p_1.
        assert_eq!(
            drop_first_digit_map(5, &t, &tail).unwrap(),
            2 * t.p_u64(1).unwrap()
        );
        // b_1 = a_2 = 3 is rejected: N = 6 has digits (0, 3, 0).
        assert!(drop_first_digit_map(6, &t, &tail).is_err());
    }

    #[test]
    fn drop_first_digit_is_a_bijection_per_leading_digit() {
        for s in [
            "cf:2,3,4",
            "cf:3,2,2,5",
            "cf:1,2,1,6",
            "cf:5,1,1,1,3",
            "cf:2,9,2,3",
        ] {
            let t = table(s);
            let tail = ConvergentTable::full(&t.expansion().tail().unwrap()).unwrap();
            let l = t.depth();
            let qtail = tail.q_u64(l - 1).unwrap();
            let mut seen = std::collections::BTreeMap::<u64, Vec<u64>>::new();
            for n in 0..t.q_u64(l).unwrap() {
                let rep = ostrowski_encode(n, &t).unwrap();
                if t.a(2).is_some_and(|a2| rep.b(1) == a2) {
                    continue;
                }
                let np = drop_first_digit_map(n, &t, &tail).unwrap();
                assert!(np < qtail);
                let shifted = ostrowski_encode(np, &tail).unwrap();
                assert_eq!(shifted.digits(), &rep.digits()[1..]);
                seen.entry(rep.b(0)).or_default().push(np);
            }
            for (_, mut v) in seen {
                v.sort();
                assert_eq!(v, (0..qtail).collect::<Vec<_>>(), "{s}");
            }
        }
    }

    #[test]
    fn tail_convergents_are_shifted() {
        for s in ["cf:1,2,3", "cf:2,2", "cf:4,1,3,2", "golden", "e-2"] {
            let cf: CFExpansion = s.parse().unwrap();
            let k = cf.len().unwrap_or(12);
            let t = convergents(&cf, k).unwrap();
            let tail = convergents(&cf.tail().unwrap(), k - 1).unwrap();
            let a1 = num_bigint::BigInt::from(t.a(1).unwrap());
            for ell in 1..=k {
                assert_eq!(tail.q(ell - 1), t.p(ell));
                assert_eq!(tail.p(ell - 1), &(t.q(ell) - &a1 * t.p(ell)));
            }
        }
    }

    #[test]
    fn intervals() {
        let (lo, hi) = interval_ik(&CFExpansion::golden(), 0).unwrap();
        assert_eq!((lo.to_string(), hi.to_string()), ("1/2".into(), "1".into()));
        let cf = CFExpansion::e_minus_2();
        for k in 1..8 {
            let (lo, hi) = interval_ik(&cf, k).unwrap();
            let (plo, phi) = interval_ik(&cf, k - 1).unwrap();
            // Nested; strictly so unless a_{k+1} = 1, where p_{k+1}/q_{k+1}
            // coincides with the mediant endpoint of I_k.
            assert!(plo <= lo && hi <= phi, "k = {k}");
            let strict = plo < lo && hi < phi;
            assert_eq!(strict, cf.partial(k + 1).unwrap() > 1, "k = {k}");
            let t = convergents(&cf, k + 1).unwrap();
            let width = hi.as_big() - lo.as_big();
            let expect =
                num_rational::BigRational::new(1.into(), t.q(k + 1) * (t.q(k + 1) + t.q(k)));
            assert_eq!(width, expect);
            let prefix = cf.prefix(k + 1);
            for (p, q) in stern_brocot_between(&lo, &hi, 2000).unwrap() {
                let r = Rational::new(p, q).unwrap();
                // Either the canonical expansion or the longer one ending in 1.
                let short = cf_expand(&r).unwrap().prefix(usize::MAX >> 1);
                let mut long = short.clone();
                *long.last_mut().unwrap() -= 1;
                long.push(1);
                assert!(
                    short.starts_with(&prefix) || long.starts_with(&prefix),
                    "{r}"
                );
            }
        }
    }

    #[test]
    fn stern_brocot_is_exhaustive() {
        let lo = Rational::new(1, 3).unwrap();
        let hi = Rational::new(1, 2).unwrap();
        let got = stern_brocot_between(&lo, &hi, 40).unwrap();
        let mut want = vec![];
        for q in 1..=40u64 {
            for p in 0..=q {
                if num_integer::gcd(p, q) == 1 && 3 * p >= q && 2 * p <= q {
                    want.push((p, q));
                }
            }
        }
        want.sort_by(|a, b| (a.0 * b.1).cmp(&(b.0 * a.1)));
        assert_eq!(got, want);
        assert!(stern_brocot_between(&lo, &Rational::new(2, 3).unwrap(), 10).is_err());
    }

    proptest! {
        #[test]
        fn encode_decode_round_trip(digits in proptest::collection::vec(1u64..9, 1..8), n in 0u64..u64::MAX) {
            let t = ConvergentTable::full(&CFExpansion::finite(0, digits).unwrap()).unwrap();
            let n = n % t.q_u64(t.depth()).unwrap();
            let rep = ostrowski_encode(n, &t).unwrap();
            prop_assert!(rep.validate(&t).is_ok());
            prop_assert_eq!(rep.decode(&t).unwrap(), n);
        }
    }
}
