use std::collections::BTreeSet;
use std::time::Instant;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use serde_json::json;

use super::{Campaign, PairRecord, Tally, VerificationReport, Violation};
use crate::classification::{
    verify_conjecture4_in, verify_corollary8_in, verify_lemma3_in, verify_prop2_in,
};
use crate::cyclotomic::{corollary13_exceptions, threshold};
use crate::engine::{is_m_two, two_power_m};
use crate::error::{Error, Result};
use crate::modular::{
    checked_prime_power, factorize, is_prime, rad, smallest_prime_divisor, PowerSumInstance,
};
use crate::oracle::naive_m;
use crate::prime_power::{
    check_prop9, fixed_base_tower, ord_factorization, prop14_expected, prop14_table,
    prop15_expected, prop15_table, tower_sequence, TableRow, COMPOSITE_ORDER_SEQUENCES,
    PRIME_ORDER_SEQUENCES, PROP15_EXCEPTIONS,
};

/// Range and cap overrides; unset fields take each claim's default.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClaimParams {
    pub e_min: Option<u64>,
    pub e_max: Option<u64>,
    pub p_max: Option<u64>,
    pub q_max: Option<u64>,
    pub k_cap: Option<u32>,
    pub r: Option<u64>,
    pub n: Option<u64>,
    pub q: Option<u64>,
    pub p: Option<u64>,
}

/// `(claim id, what it checks)`.
pub const CLAIMS: &[(&str, &str)] = &[
    (
        "theorem1",
        "m <= ceil(e/n) for all coprime pairs; equality cases listed",
    ),
    ("divisibility", "e1 divides m"),
    ("m_two", "closed-form test for m = 2"),
    ("lemma3", "m = e1 whenever e < e1^2 + 2e1"),
    ("conjecture4", "m <= k e1 whenever e < (e1+1)^(k+1) - 1"),
    ("corollary8", "m >= e/6 exactly in the listed cases"),
    ("prop2", "m >= e/r characterized by (a, b) for large e"),
    ("two_power", "closed form of m(q, 2^k)"),
    ("oracle", "search engine equals the brute-force oracle"),
    (
        "prop9",
        "order drop and m equality when p divides the order",
    ),
    (
        "fixed_base",
        "m(q, p^k) for fixed q: order growth and stabilization",
    ),
    ("prop14", "order 5 table"),
    ("prop15", "order 7 table"),
    (
        "example16",
        "tower sequences for prime orders 11, 13, 17, 19",
    ),
    ("example17", "tower sequences for composite orders"),
    (
        "corollary13",
        "exception sets for n = 5 and n = 7 from cyclotomic candidates",
    ),
    ("remark12", "threshold n/(n - phi(n)) properties"),
];

pub fn run_claim(claim_id: &str, params: &ClaimParams) -> Result<VerificationReport> {
    run_in(&mut Campaign::new(), claim_id, params)
}

/// `(q, e)` with `1 < q < e <= e_max` and `m(q, e) = ceil(e / n)`.
pub fn theorem1_tightness_scan(e_max: u64) -> Result<Vec<(u64, u64)>> {
    let t = Campaign::new().tally(3, e_max, |_, recs| theorem1_shard(recs))?;
    Ok(t.equality_cases)
}

fn theorem1_shard(recs: &[PairRecord]) -> Tally {
    let mut t = Tally::default();
    for r in recs {
        let bound = r.e.div_ceil(r.n);
        t.check(r.m <= bound, || Violation::new(r.q, r.e, bound, r.m));
        if r.m == bound && r.q > 1 && r.q < r.e {
            t.equality_cases.push((r.q, r.e));
        }
    }
    t
}

fn finish(
    claim_id: &str,
    domain: String,
    params: serde_json::Value,
    tally: Tally,
    start: Instant,
) -> VerificationReport {
    VerificationReport::from_tally(claim_id, domain, params, tally, start.elapsed())
}

fn sweep_claim(
    c: &mut Campaign,
    claim_id: &str,
    e_max: u64,
    domain: String,
    check: impl Fn(&PairRecord, &mut Tally) + Sync,
) -> Result<VerificationReport> {
    let start = Instant::now();
    let tally = c.tally(1, e_max, |_, recs| {
        let mut t = Tally::default();
        for r in recs {
            check(r, &mut t);
        }
        t
    })?;
    Ok(finish(
        claim_id,
        domain,
        json!({ "e_max": e_max }),
        tally,
        start,
    ))
}

fn sequence_check(t: &mut Tally, p: u64, n: u64, expected: &[u64], k_cap: u32) -> Result<()> {
    let report = tower_sequence(p, n, k_cap.max(expected.len() as u32))?;
    for (i, &want) in expected.iter().enumerate() {
        match report.levels.get(i) {
            Some(l) => t.check(l.m == want, || {
                Violation::new(l.generator, l.modulus, want, l.m)
                    .with_detail(format!("p = {p}, n = {n}, k = {}", l.k))
            }),
            None => t.check(false, || {
                Violation::new(0, p, want, 0).with_detail(format!(
                    "p = {p}, n = {n}: tower stopped at k = {}",
                    report.levels.len()
                ))
            }),
        }
    }
    let extra = report.levels.len() > expected.len();
    t.check(!extra, || {
        Violation::new(0, p, expected.len() as u64, report.levels.len() as u64).with_detail(
            format!(
                "p = {p}, n = {n}: sequence {:?} is longer",
                report.sequence()
            ),
        )
    });
    t.check(report.decreases.is_empty(), || {
        Violation::new(0, p, 0, report.decreases.len() as u64).with_detail(format!(
            "p = {p}, n = {n}: tower decreases at {:?}",
            report.decreases
        ))
    });
    Ok(())
}

fn table_check(t: &mut Tally, rows: &[TableRow], expected: impl Fn(u64, u32) -> u64) {
    for row in rows {
        let want = expected(row.p, row.k);
        t.check(row.m == want, || {
            Violation::new(row.generator, row.modulus, want, row.m)
                .with_detail(format!("p = {}, k = {}", row.p, row.k))
        });
    }
    // every tower reaches its limit
    let mut last: Option<&TableRow> = None;
    for row in rows.iter().chain(std::iter::once(&TableRow {
        p: 0,
        n: 0,
        k: 0,
        modulus: 0,
        generator: 0,
        ord: 0,
        m: 0,
        w: 0,
        limit: 0,
    })) {
        if let Some(prev) = last.filter(|prev| prev.p != row.p) {
            t.check(prev.m == prev.limit, || {
                Violation::new(prev.generator, prev.modulus, prev.limit, prev.m)
                    .with_detail(format!("p = {}: tower did not reach its limit", prev.p))
            });
        }
        last = Some(row);
    }
}

pub(super) fn run_in(
    c: &mut Campaign,
    claim_id: &str,
    params: &ClaimParams,
) -> Result<VerificationReport> {
    let start = Instant::now();
    let k_cap = params.k_cap.unwrap_or(8);
    match claim_id {
        "theorem1" => {
            let e_max = params.e_max.unwrap_or(1000);
            let mut tally = c.tally(1, e_max, |_, recs| theorem1_shard(recs))?;
            let found: BTreeSet<(u64, u64)> = tally.equality_cases.iter().copied().collect();
            let mut q = 3;
            while 2 * (q - 1) <= e_max {
                let pair = (q, 2 * (q - 1));
                if pair.0 < pair.1 {
                    tally.check(found.contains(&pair), || {
                        Violation::new(pair.0, pair.1, pair.1 / 2, 0)
                            .with_detail("odd q with e = 2(q - 1) missing from equality cases")
                    });
                }
                q += 2;
            }
            let cases = std::mem::take(&mut tally.equality_cases);
            let mut report = finish(
                claim_id,
                format!("1 <= q < e <= {e_max}, gcd(q, e) = 1"),
                json!({ "e_max": e_max }),
                tally,
                start,
            );
            report.equality_cases = Some(cases);
            Ok(report)
        }
        "divisibility" => {
            let e_max = params.e_max.unwrap_or(1000);
            sweep_claim(
                c,
                claim_id,
                e_max,
                format!("1 <= q < e <= {e_max}"),
                |r, t| {
                    t.check(r.m % r.e1 == 0, || {
                        Violation::new(r.q, r.e, r.e1, r.m).with_detail("e1 does not divide m")
                    });
                },
            )
        }
        "m_two" => {
            let e_max = params.e_max.unwrap_or(1000);
            sweep_claim(
                c,
                claim_id,
                e_max,
                format!("1 <= q < e <= {e_max}"),
                |r, t| {
                    let inst = PowerSumInstance {
                        q: r.q,
                        e: r.e,
                        n: r.n,
                        e1: r.e1,
                    };
                    let predicted = is_m_two(&inst);
                    t.check(predicted == (r.m == 2), || {
                        Violation::new(r.q, r.e, if predicted { 2 } else { 0 }, r.m)
                    });
                },
            )
        }
        "lemma3" => verify_lemma3_in(c, params.e_max.unwrap_or(1000)),
        "conjecture4" => verify_conjecture4_in(c, params.e_max.unwrap_or(600)),
        "corollary8" => verify_corollary8_in(c, params.e_max.unwrap_or(1224)),
        "prop2" => {
            let r = params.r.unwrap_or(6);
            let bound = r.pow(4) - 2 * r.pow(2);
            verify_prop2_in(
                c,
                r,
                params.e_min.unwrap_or(bound),
                params.e_max.unwrap_or(2000),
            )
        }
        "two_power" => {
            let k_max = params.k_cap.unwrap_or(12);
            let mut tally = Tally::default();
            for k in 1..=k_max {
                let e = checked_prime_power(2, k)?;
                let t = c.tally(e, e, |_, recs| {
                    let mut t = Tally::default();
                    for r in recs {
                        match two_power_m(r.q, k) {
                            Ok(v) => t.check(v == r.m, || Violation::new(r.q, r.e, v, r.m)),
                            Err(err) => t.check(false, || {
                                Violation::new(r.q, r.e, 0, r.m).with_detail(err.to_string())
                            }),
                        }
                    }
                    t
                })?;
                tally = tally.merge(t);
            }
            Ok(finish(
                claim_id,
                format!("odd q < 2^k, 1 <= k <= {k_max}"),
                json!({ "k_cap": k_max }),
                tally,
                start,
            ))
        }
        "oracle" => {
            let e_max = params.e_max.unwrap_or(200);
            if e_max > 5000 {
                return Err(Error::Domain("the oracle is limited to e <= 5000".into()));
            }
            sweep_claim(
                c,
                claim_id,
                e_max,
                format!("1 <= q < e <= {e_max}"),
                |r, t| {
                    let want = naive_m(r.q, r.e).unwrap_or(0);
                    t.check(want == r.m, || Violation::new(r.q, r.e, want, r.m));
                },
            )
        }
        "prop9" => {
            let p_max = params.p_max.unwrap_or(50);
            let q_max = params.q_max.unwrap_or(50);
            let e_max = params.e_max.unwrap_or(100_000);
            let mut tally = Tally::default();
            for p in (3..=p_max).filter(|&p| is_prime(p)) {
                for q in (1..=q_max).filter(|q| q % p != 0) {
                    let mut k = 2;
                    while let Some(e) = p.checked_pow(k).filter(|&e| e <= e_max) {
                        let (i, d) = ord_factorization(q, p, k)?;
                        if i > 0 {
                            let ok = check_prop9(q, p, k)?;
                            tally.check(ok, || {
                                Violation::new(q, e, 1, 0)
                                    .with_detail(format!("ord = {p}^{i} * {d}, k = {k}"))
                            });
                        }
                        k += 1;
                    }
                }
            }
            Ok(finish(
                claim_id,
                format!("odd primes p <= {p_max}, p ∤ q <= {q_max}, p^k <= {e_max}"),
                json!({ "p_max": p_max, "q_max": q_max, "e_max": e_max }),
                tally,
                start,
            ))
        }
        "fixed_base" => {
            let (q, p) = (params.q.unwrap_or(9), params.p.unwrap_or(11));
            let k_max = params.k_cap.unwrap_or(4);
            let tower = fixed_base_tower(q, p, k_max)?;
            let mut tally = Tally::default();
            tally.check(tower.order_pattern_holds(), || {
                Violation::new(q, p, 1, 0).with_detail("order pattern broken")
            });
            tally.check(tower.m_stabilizes(), || {
                Violation::new(q, p, 1, 0).with_detail("m not stable from level w on")
            });
            if (q, p) == (9, 11) {
                for (en, want) in tower.entries.iter().zip([3u64, 5, 5, 5]) {
                    tally.check(en.m == want, || Violation::new(q, en.modulus, want, en.m));
                }
            }
            Ok(finish(
                claim_id,
                format!("m({q}, {p}^k), k <= {k_max}"),
                json!({ "q": q, "p": p, "k_cap": k_max }),
                tally,
                start,
            ))
        }
        "prop14" | "prop15" => {
            let (n, default_p) = if claim_id == "prop14" {
                (5, 1000)
            } else {
                (7, 2689)
            };
            let p_max = params.p_max.unwrap_or(default_p);
            let rows = c.install(|| {
                if n == 5 {
                    prop14_table(p_max, k_cap)
                } else {
                    prop15_table(p_max, k_cap)
                }
            })?;
            let mut tally = Tally::default();
            if n == 5 {
                table_check(&mut tally, &rows, prop14_expected);
            } else {
                table_check(&mut tally, &rows, prop15_expected);
            }
            Ok(finish(
                claim_id,
                format!("primes p ≡ 1 (mod {n}), p <= {p_max}, k <= {k_cap}"),
                json!({ "n": n, "p_max": p_max, "k_cap": k_cap }),
                tally,
                start,
            ))
        }
        "example16" | "example17" => {
            let mut tally = Tally::default();
            if claim_id == "example16" {
                for &(n, ps, seq) in PRIME_ORDER_SEQUENCES {
                    for &p in ps {
                        sequence_check(&mut tally, p, n, seq, k_cap)?;
                    }
                }
            } else {
                for &(p, n, seq) in COMPOSITE_ORDER_SEQUENCES {
                    sequence_check(&mut tally, p, n, seq, k_cap)?;
                }
            }
            Ok(finish(
                claim_id,
                "published tower sequences".into(),
                json!({ "k_cap": k_cap }),
                tally,
                start,
            ))
        }
        "corollary13" => {
            let ns: Vec<u64> = params.n.map_or(vec![5, 7], |n| vec![n]);
            let mut tally = Tally::default();
            for &n in &ns {
                let set = c.install(|| corollary13_exceptions(n, k_cap))?;
                let got: BTreeSet<(u64, u32, u64)> = set.triples().into_iter().collect();
                let want: Option<BTreeSet<(u64, u32, u64)>> = match n {
                    5 => Some([(11, 1, 3), (61, 1, 4)].into_iter().collect()),
                    7 => Some(
                        PROP15_EXCEPTIONS
                            .iter()
                            .flat_map(|&(m, ps)| ps.iter().map(move |&p| (p, 1, m)))
                            .collect(),
                    ),
                    _ => None,
                };
                tally.check(set.complete(), || {
                    Violation::new(0, n, 0, set.unresolved.len() as u64)
                        .with_detail("candidate denominators left unfactored")
                });
                if let Some(want) = want {
                    for &(p, k, m) in want.difference(&got) {
                        tally.check(false, || {
                            Violation::new(0, p.pow(k), m, 0)
                                .with_detail(format!("n = {n}: missing"))
                        });
                    }
                    for &(p, k, m) in got.difference(&want) {
                        tally.check(false, || {
                            Violation::new(0, p.pow(k), 0, m)
                                .with_detail(format!("n = {n}: unexpected"))
                        });
                    }
                    for _ in got.intersection(&want) {
                        tally.check(true, || unreachable!());
                    }
                } else {
                    tally
                        .stats
                        .insert(format!("n{n}_entries"), got.len() as u64);
                }
            }
            Ok(finish(
                claim_id,
                format!("n in {ns:?}, k <= {k_cap}"),
                json!({ "n": ns, "k_cap": k_cap }),
                tally,
                start,
            ))
        }
        "remark12" => {
            let n_max = params.n.unwrap_or(10_000);
            let mut tally = Tally::default();
            for n in 2..=n_max {
                let t = threshold(n)?;
                let r = smallest_prime_divisor(n)?;
                let tr = threshold(rad(n))?;
                tally.check(t == tr, || {
                    Violation::new(n, rad(n), 0, 0).with_detail("threshold changes under rad")
                });
                tally.check(t <= Ratio::from_integer(r), || {
                    Violation::new(n, r, r, 0).with_detail(format!("threshold {t} exceeds r"))
                });
                if factorize(n).len() == 1 {
                    tally.check(t > Ratio::from_integer(r - 1), || {
                        Violation::new(n, r, r - 1, 0)
                            .with_detail(format!("threshold {t} <= r - 1"))
                    });
                }
            }
            Ok(finish(
                claim_id,
                format!("2 <= n <= {n_max}"),
                json!({ "n_max": n_max }),
                tally,
                start,
            ))
        }
        _ => Err(Error::UnknownClaim(claim_id.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(e_max: u64) -> ClaimParams {
        ClaimParams {
            e_max: Some(e_max),
            ..Default::default()
        }
    }

    #[test]
    fn unknown_claim() {
        assert!(matches!(
            run_claim("theorem99", &ClaimParams::default()),
            Err(Error::UnknownClaim(_))
        ));
    }

    #[test]
    fn every_listed_claim_dispatches() {
        let tiny = ClaimParams {
            e_max: Some(30),
            p_max: Some(12),
            q_max: Some(10),
            k_cap: Some(3),
            n: Some(20),
            ..Default::default()
        };
        for &(id, _) in CLAIMS {
            if matches!(id, "example16" | "example17" | "corollary13" | "prop2") {
                continue;
            }
            let r = run_claim(id, &tiny).unwrap();
            assert_eq!(r.claim_id, id);
            assert!(r.verified(), "{id}: {:?}", r.violations);
        }
    }

    #[test]
    fn tightness_contains_known_pairs() {
        let eq = theorem1_tightness_scan(8).unwrap();
        assert!(eq.contains(&(5, 8)));
        assert!(eq.contains(&(4, 7)));
        assert!(theorem1_tightness_scan(2).unwrap().is_empty());
    }

    #[test]
    fn reports_do_not_depend_on_workers() {
        let p = small(120);
        let a = Campaign::new().with_jobs(1).run("theorem1", &p).unwrap();
        let b = Campaign::new().with_jobs(4).run("theorem1", &p).unwrap();
        assert_eq!(a.without_timing(), b.without_timing());
    }

    #[test]
    fn planted_violation_is_reported() {
        let mut t = Tally::default();
        sequence_check(&mut t, 23, 11, &[3, 5, 9, 9, 12], 6).unwrap();
        assert_eq!(t.violations.len(), 1);
        assert_eq!(t.violations[0].expected, 12);
        assert_eq!(t.violations[0].actual, 11);
    }
}
