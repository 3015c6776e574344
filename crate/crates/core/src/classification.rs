//! Structural predicates for pairs where `m(q, e)` is large relative to `e`.
//!
//! The central object is the parametrization `e = (a/b)(q - 1)` with
//! `gcd(a, b) = 1`, `b < a <= r` and `ab <= q`, under which
//! `m(q, e) = e1 = e/a`. [`classify_large`] sorts every pair with
//! `m >= e/6` into seven parametric families and three finite lists.

use std::fmt;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::campaign::{Campaign, PairRecord, Tally, VerificationReport, Violation};
use crate::error::{domain, Error, Result};
use crate::modular::{gcd, PowerSumInstance};

/// `m(q, e) = e1` is forced once `e < e1^2 + 2 e1`. Precondition `1 < q < e`.
pub fn lemma3_applies(inst: &PowerSumInstance) -> bool {
    let e1 = inst.e1 as u128;
    (inst.e as u128) < e1 * e1 + 2 * e1
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StarParams {
    pub a: u64,
    pub b: u64,
}

/// `(a, b) = (e/e1, (q-1)/e1)` when it satisfies `gcd(a,b) = 1`,
/// `b < a <= r` and `ab <= q`.
pub fn star_params(q: u64, e: u64, r: u64) -> Option<StarParams> {
    if q < 2 || e < 2 {
        return None;
    }
    let e1 = gcd(e, q - 1);
    let (a, b) = (e / e1, (q - 1) / e1);
    let ok = gcd(a, b) == 1
        && b < a
        && a <= r
        && (a as u128) * (b as u128) <= q as u128
        && (e as u128) * (b as u128) == (a as u128) * (q as u128 - 1);
    ok.then_some(StarParams { a, b })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CaseTag {
    I,
    Ii,
    Iii,
    Iv,
    V,
    Vi,
    Vii,
    Viii,
    Ix,
    X,
    None,
}

impl CaseTag {
    pub fn as_str(self) -> &'static str {
        match self {
            CaseTag::I => "i",
            CaseTag::Ii => "ii",
            CaseTag::Iii => "iii",
            CaseTag::Iv => "iv",
            CaseTag::V => "v",
            CaseTag::Vi => "vi",
            CaseTag::Vii => "vii",
            CaseTag::Viii => "viii",
            CaseTag::Ix => "ix",
            CaseTag::X => "x",
            CaseTag::None => "none",
        }
    }

    pub fn is_exceptional(self) -> bool {
        matches!(self, CaseTag::Viii | CaseTag::Ix | CaseTag::X)
    }
}

impl fmt::Display for CaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Corollary8Case {
    pub tag: CaseTag,
    pub params: Option<StarParams>,
    pub m_predicted: Option<u64>,
}

impl Corollary8Case {
    const NONE: Self = Self {
        tag: CaseTag::None,
        params: None,
        m_predicted: None,
    };
}

/// One parametric family `e = (a/b)(q - 1)`.
#[derive(Debug, Clone, Copy)]
pub struct Family {
    pub tag: CaseTag,
    pub a: u64,
    pub b: u64,
    pub q_min: u64,
    /// `q` must be coprime to this.
    pub coprime_to: u64,
    /// `(modulus, residue)`: `q ≡ residue (mod modulus)` when present.
    pub congruence: Option<(u64, u64)>,
}

const fn fam(
    tag: CaseTag,
    a: u64,
    b: u64,
    q_min: u64,
    coprime_to: u64,
    congruence: Option<(u64, u64)>,
) -> Family {
    Family {
        tag,
        a,
        b,
        q_min,
        coprime_to,
        congruence,
    }
}

pub const FAMILIES: &[Family] = &[
    fam(CaseTag::I, 2, 1, 3, 2, None),
    fam(CaseTag::I, 3, 1, 4, 3, None),
    fam(CaseTag::I, 4, 1, 5, 4, None),
    fam(CaseTag::I, 5, 1, 6, 5, None),
    fam(CaseTag::I, 6, 1, 7, 6, None),
    fam(CaseTag::Ii, 3, 2, 7, 6, None),
    fam(CaseTag::Iii, 4, 3, 13, 1, Some((6, 1))),
    fam(CaseTag::Iv, 5, 2, 7, 10, None),
    fam(CaseTag::V, 5, 3, 7, 5, Some((3, 1))),
    fam(CaseTag::Vi, 5, 4, 13, 5, Some((4, 1))),
    fam(CaseTag::Vii, 6, 5, 16, 6, Some((5, 1))),
];

/// Pairs with `m = 2`, as `(e, [q])`.
pub const CASE_VIII: &[(u64, &[u64])] = &[
    (5, &[2, 3]),
    (7, &[3, 5]),
    (9, &[2, 5]),
    (10, &[3, 7]),
    (11, &[2, 6, 7, 8]),
];

/// Pairs `(e, q)` with `n = 2` and `m = 2 e1 > 2`.
pub const CASE_IX: &[(u64, u64)] = &[
    (8, 3),
    (15, 4),
    (16, 7),
    (21, 13),
    (24, 5),
    (24, 11),
    (33, 10),
    (35, 6),
    (40, 29),
    (45, 26),
    (48, 7),
    (55, 21),
    (63, 8),
    (77, 43),
    (80, 9),
    (99, 10),
    (120, 11),
];

/// Remaining sporadic pairs, as `(e, [q], m)`.
pub const CASE_X: &[(u64, &[u64], u64)] = &[
    (7, &[2, 4], 3),
    (11, &[3, 4, 5, 9], 3),
    (13, &[3, 9], 3),
    (14, &[9, 11], 4),
    (15, &[2, 8], 4),
    (16, &[3, 11], 4),
    (20, &[3, 7], 4),
    (22, &[3, 5, 9, 15], 4),
    (26, &[3, 9], 6),
    (48, &[5, 29], 8),
];

/// Every listed exceptional pair as `(tag, e, q, m)`.
pub fn exceptional_pairs() -> Vec<(CaseTag, u64, u64, u64)> {
    let mut out = Vec::new();
    for &(e, qs) in CASE_VIII {
        out.extend(qs.iter().map(|&q| (CaseTag::Viii, e, q, 2)));
    }
    for &(e, q) in CASE_IX {
        out.push((CaseTag::Ix, e, q, 2 * gcd(e, q - 1)));
    }
    for &(e, qs, m) in CASE_X {
        out.extend(qs.iter().map(|&q| (CaseTag::X, e, q, m)));
    }
    out
}

fn family_matches(f: &Family, q: u64, e: u64) -> bool {
    q >= f.q_min
        && gcd(f.coprime_to, q) == 1
        && f.congruence.is_none_or(|(md, r)| q % md == r)
        && (e as u128) * (f.b as u128) == (f.a as u128) * (q as u128 - 1)
}

/// Every case whose conditions `(q, e)` satisfies, finite lists first.
pub fn matching_cases(q: u64, e: u64) -> Vec<Corollary8Case> {
    let mut hits = Vec::new();
    for (tag, le, lq, m) in exceptional_pairs() {
        if (le, lq) == (e, q) {
            hits.push(Corollary8Case {
                tag,
                params: None,
                m_predicted: Some(m),
            });
        }
    }
    for f in FAMILIES.iter().filter(|f| family_matches(f, q, e)) {
        hits.push(Corollary8Case {
            tag: f.tag,
            params: Some(StarParams { a: f.a, b: f.b }),
            m_predicted: Some(e / f.a),
        });
    }
    hits
}

/// Which case, if any, describes `(q, e)` with `m(q, e) >= e/6`.
/// Requires `1 < q < e - 1` and `gcd(q, e) = 1`.
///
/// A pair can satisfy several cases: `(7, 10)` is listed with `m = 2` and
/// also fits `e = (5/3)(q - 1)`. The first match is returned when all
/// matches predict the same `m`; conflicting predictions are an error.
pub fn classify_large(q: u64, e: u64) -> Result<Corollary8Case> {
    if q <= 1 || q.saturating_add(1) >= e {
        return Err(domain(format!("need 1 < q < e - 1, got q = {q}, e = {e}")));
    }
    let g = gcd(q, e);
    if g != 1 {
        return Err(Error::NotCoprime { q, e, gcd: g });
    }
    let hits = matching_cases(q, e);
    let Some(first) = hits.first().copied() else {
        return Ok(Corollary8Case::NONE);
    };
    if hits.iter().any(|c| c.m_predicted != first.m_predicted) {
        return Err(Error::DegenerateInput(format!(
            "(q, e) = ({q}, {e}) matches cases with different m: {}",
            hits.iter()
                .map(|c| format!("({}) m = {}", c.tag, c.m_predicted.unwrap_or(0)))
                .collect::<Vec<_>>()
                .join(", ")
        )));
    }
    Ok(first)
}

/// Largest listed exceptional `(e, q)` with `c * m >= e`.
pub fn largest_exceptional(c: u64) -> Option<(u64, u64)> {
    exceptional_pairs()
        .into_iter()
        .filter(|&(_, e, _, m)| c * m >= e)
        .map(|(_, e, q, _)| (e, q))
        .max()
}

/// Least `k >= 1` with `e < (e1 + 1)^(k+1) - 1`.
pub fn conjecture4_k_min(e: u64, e1: u64) -> u32 {
    let base = e1 as u128 + 1;
    let mut k = 1u32;
    let mut pow = base * base;
    while (e as u128) >= pow - 1 {
        k += 1;
        pow *= base;
    }
    k
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Conjecture4Outcome {
    pub k_min: u32,
    pub e1: u64,
    pub m: u64,
    pub holds: bool,
}

/// Checks `m(q, e) <= k e1` at the least admissible `k`. Requires `1 < q < e`.
pub fn conjecture4_check(q: u64, e: u64) -> Result<Conjecture4Outcome> {
    if q <= 1 || q >= e {
        return Err(domain(format!("need 1 < q < e, got q = {q}, e = {e}")));
    }
    let inst = PowerSumInstance::new(q, e)?;
    let m = crate::engine::m(q, e)?.value;
    let k_min = conjecture4_k_min(e, inst.e1);
    Ok(Conjecture4Outcome {
        k_min,
        e1: inst.e1,
        m,
        holds: m <= k_min as u64 * inst.e1,
    })
}

fn corollary8_shard(recs: &[PairRecord]) -> Tally {
    let mut t = Tally::default();
    for r in recs.iter().filter(|r| r.q > 1 && r.q + 1 < r.e) {
        let large = 6 * r.m >= r.e;
        let case = match classify_large(r.q, r.e) {
            Ok(c) => c,
            Err(err) => {
                t.check(false, || {
                    Violation::new(r.q, r.e, 0, r.m).with_detail(err.to_string())
                });
                continue;
            }
        };
        if case.tag != CaseTag::None {
            t.bump(&format!("case_{}", case.tag));
            let hits = matching_cases(r.q, r.e);
            if hits.len() > 1 {
                let tags: Vec<&str> = hits.iter().map(|c| c.tag.as_str()).collect();
                t.bump(&format!("overlap_{}", tags.join("_")));
            }
        }
        match (large, case.m_predicted) {
            (true, Some(p)) => t.check(p == r.m, || {
                Violation::new(r.q, r.e, p, r.m)
                    .with_detail(format!("case ({}) predicts a different m", case.tag))
            }),
            (true, None) => t.check(false, || {
                Violation::new(r.q, r.e, 0, r.m).with_detail("m >= e/6 but no case applies")
            }),
            (false, Some(p)) => t.check(false, || {
                Violation::new(r.q, r.e, p, r.m)
                    .with_detail(format!("case ({}) applies but m < e/6", case.tag))
            }),
            (false, None) => t.check(true, || unreachable!()),
        }
    }
    t
}

/// Sweeps `3 <= e <= e_max` checking `[m >= e/6] ⇔ [some case applies]`
/// and the predicted values.
pub fn verify_corollary8(e_max: u64) -> Result<VerificationReport> {
    verify_corollary8_in(&mut Campaign::new(), e_max)
}

pub fn verify_corollary8_in(c: &mut Campaign, e_max: u64) -> Result<VerificationReport> {
    let start = Instant::now();
    let tally = c.tally(3, e_max, |_, recs| corollary8_shard(recs))?;
    Ok(VerificationReport::from_tally(
        "corollary8",
        format!("1 < q < e - 1, gcd(q, e) = 1, e <= {e_max}"),
        json!({ "e_max": e_max }),
        tally,
        start.elapsed(),
    ))
}

fn prop2_shard(recs: &[PairRecord], r: u64, bound: u128) -> Tally {
    let mut t = Tally::default();
    for p in recs.iter().filter(|p| p.q > 1 && p.q < p.e) {
        let star = star_params(p.q, p.e, r);
        if let Some(s) = star {
            t.bump("star_pairs");
            let expected = p.e / s.a;
            t.check(p.m == expected && p.m == p.e1 && p.m * r >= p.e, || {
                Violation::new(p.q, p.e, expected, p.m)
                    .with_detail(format!("(a, b) = ({}, {}) but m != e1 = e/a", s.a, s.b))
            });
        }
        if (p.e as u128) > bound && p.m * r >= p.e {
            t.check(star.is_some(), || {
                Violation::new(p.q, p.e, p.e1, p.m).with_detail("m >= e/r without (a, b)")
            });
        }
    }
    t
}

/// Both directions of the `(a, b)` characterization of `m >= e/r` for
/// `e_min < e <= e_max`. The converse is only checked where
/// `e > r^4 - 2r^2`.
pub fn verify_prop2(r: u64, e_min: u64, e_max: u64) -> Result<VerificationReport> {
    verify_prop2_in(&mut Campaign::new(), r, e_min, e_max)
}

pub fn verify_prop2_in(
    c: &mut Campaign,
    r: u64,
    e_min: u64,
    e_max: u64,
) -> Result<VerificationReport> {
    if r < 2 {
        return Err(domain("r must be at least 2"));
    }
    let start = Instant::now();
    let r4 = (r as u128).pow(4);
    let bound = r4 - 2 * (r as u128).pow(2);
    let tally = c.tally(e_min.saturating_add(1), e_max, |_, recs| {
        prop2_shard(recs, r, bound)
    })?;
    Ok(VerificationReport::from_tally(
        "prop2",
        format!("1 < q < e, gcd(q, e) = 1, {e_min} < e <= {e_max}, r = {r}"),
        json!({ "r": r, "e_min": e_min, "e_max": e_max }),
        tally,
        start.elapsed(),
    ))
}

/// `m = e1` whenever `e < e1^2 + 2 e1`, for `1 < q < e <= e_max`.
pub fn verify_lemma3_in(c: &mut Campaign, e_max: u64) -> Result<VerificationReport> {
    let start = Instant::now();
    let tally = c.tally(3, e_max, |_, recs| {
        let mut t = Tally::default();
        for p in recs.iter().filter(|p| p.q > 1) {
            if p.m == p.e1 {
                t.bump("m_equals_e1");
            }
            let e1 = p.e1 as u128;
            if (p.e as u128) < e1 * e1 + 2 * e1 {
                t.check(p.m == p.e1, || Violation::new(p.q, p.e, p.e1, p.m));
            }
        }
        t
    })?;
    Ok(VerificationReport::from_tally(
        "lemma3",
        format!("1 < q < e <= {e_max}, e < e1^2 + 2e1"),
        json!({ "e_max": e_max }),
        tally,
        start.elapsed(),
    ))
}

/// The conjectured bound at the least admissible `k` for `1 < q < e <= e_max`.
pub fn verify_conjecture4_in(c: &mut Campaign, e_max: u64) -> Result<VerificationReport> {
    let start = Instant::now();
    let tally = c.tally(3, e_max, |_, recs| {
        let mut t = Tally::default();
        for p in recs.iter().filter(|p| p.q > 1) {
            let k = conjecture4_k_min(p.e, p.e1);
            let bound = k as u64 * p.e1;
            t.check(p.m <= bound, || {
                Violation::new(p.q, p.e, bound, p.m).with_detail(format!("k = {k}"))
            });
            if p.m == bound {
                t.bump("tight");
            }
        }
        t
    })?;
    Ok(VerificationReport::from_tally(
        "conjecture4",
        format!("1 < q < e <= {e_max}"),
        json!({ "e_max": e_max }),
        tally,
        start.elapsed(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::naive_m;

    fn inst(q: u64, e: u64) -> PowerSumInstance {
        PowerSumInstance::new(q, e).unwrap()
    }

    #[test]
    fn lemma3_examples() {
        assert!(lemma3_applies(&inst(5, 8)));
        // e1 = gcd(7, 3) = 1, and m(4, 7) = 3 != e1
        assert!(!lemma3_applies(&inst(4, 7)));
        assert!(lemma3_applies(&inst(7, 9)));
        assert!(!lemma3_applies(&inst(2, 5)));
    }

    #[test]
    fn star_examples() {
        assert_eq!(star_params(7, 9, 6), Some(StarParams { a: 3, b: 2 }));
        assert_eq!(star_params(5, 8, 6), Some(StarParams { a: 2, b: 1 }));
        assert_eq!(star_params(2, 5, 6), None);
    }

    #[test]
    fn star_params_brute_force() {
        // Search (a, b) directly rather than through e1.
        for e in 3..200u64 {
            for q in 2..e {
                if gcd(q, e) != 1 {
                    continue;
                }
                let direct = (2..=6u64)
                    .flat_map(|a| (1..a).map(move |b| (a, b)))
                    .find(|&(a, b)| gcd(a, b) == 1 && a * b <= q && e * b == a * (q - 1));
                assert_eq!(
                    star_params(q, e, 6).map(|s| (s.a, s.b)),
                    direct,
                    "q={q} e={e}"
                );
            }
        }
    }

    #[test]
    fn classify_examples() {
        let c = classify_large(13, 21).unwrap();
        assert_eq!((c.tag, c.m_predicted), (CaseTag::Ix, Some(6)));
        let c = classify_large(9, 26).unwrap();
        assert_eq!((c.tag, c.m_predicted), (CaseTag::X, Some(6)));
        let c = classify_large(13, 16).unwrap();
        assert_eq!(c.tag, CaseTag::Iii);
        assert_eq!(c.m_predicted, Some(4));
        assert_eq!(c.params, Some(StarParams { a: 4, b: 3 }));
        assert_eq!(classify_large(2, 35).unwrap().tag, CaseTag::None);
        assert!(matches!(classify_large(6, 7), Err(Error::Domain(_))));
        assert!(matches!(classify_large(1, 7), Err(Error::Domain(_))));
        assert!(matches!(
            classify_large(2, 8),
            Err(Error::NotCoprime { .. })
        ));
    }

    #[test]
    fn only_known_overlap() {
        let mut overlaps = Vec::new();
        for e in 4..=1300u64 {
            for q in 2..e - 1 {
                if gcd(q, e) == 1 && matching_cases(q, e).len() > 1 {
                    overlaps.push((q, e));
                }
            }
        }
        assert_eq!(overlaps, vec![(7, 10)]);
        let c = classify_large(7, 10).unwrap();
        assert_eq!((c.tag, c.m_predicted), (CaseTag::Viii, Some(2)));
    }

    #[test]
    fn listed_pairs_match_brute_force() {
        for (tag, e, q, m) in exceptional_pairs() {
            assert_eq!(naive_m(q, e).unwrap(), m, "({tag}) e={e} q={q}");
            assert!(6 * m >= e);
            if tag == CaseTag::Ix {
                assert_eq!(crate::mul_order(q, e).unwrap(), 2);
            }
        }
    }

    #[test]
    fn largest_exceptional_case() {
        for c in 2..=6u64 {
            assert_eq!(largest_exceptional(c), Some((4 * c * c - 4 * c, 2 * c - 1)));
        }
    }

    #[test]
    fn conjecture4_examples() {
        let o = conjecture4_check(5, 8).unwrap();
        assert_eq!((o.k_min, o.holds), (1, true));
        let o = conjecture4_check(2, 5).unwrap();
        assert_eq!((o.k_min, o.m, o.holds), (2, 2, true));
        assert!(conjecture4_check(1, 5).is_err());
    }

    #[test]
    fn corollary8_small_sweep() {
        let r = verify_corollary8(60).unwrap();
        assert!(r.verified(), "{:?}", r.violations);
        assert!(r.checks > 0);
        assert_eq!(verify_corollary8(2).unwrap().checks, 0);
    }

    #[test]
    fn prop2_small_sweep() {
        let r = verify_prop2(2, 8, 200).unwrap();
        assert!(r.verified(), "{:?}", r.violations);
        assert_eq!(verify_prop2(2, 100, 100).unwrap().checks, 0);
    }
}
