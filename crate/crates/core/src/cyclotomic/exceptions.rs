use std::collections::{BTreeMap, BTreeSet};

use num_rational::Ratio;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{max_exceptional_m, threshold, BezoutContext};
use crate::engine::{m_at_most, verify_witness};
use crate::error::Result;
use crate::modular::{checked_prime_power, divisors, element_of_order, is_prime, unit_subgroup};

/// Denominators up to this size are factored completely by trial division.
const SMALL_D: u64 = 1_000_000_000_000;
/// Trial division bound for larger denominators.
const TRIAL_BOUND: u64 = 1_000_000;

/// Partial factorization; `cofactor > 1` is a composite with no prime
/// factor below the trial bound.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Factored {
    pub primes: Vec<(u64, u32)>,
    pub cofactor: u64,
}

impl Factored {
    pub fn resolved(&self) -> bool {
        self.cofactor == 1
    }
}

fn factor_d(mut d: u64) -> Factored {
    let mut primes = Vec::new();
    let bound = if d <= SMALL_D { 1_000_001 } else { TRIAL_BOUND };
    let mut p = 2u64;
    let mut settled = d == 1 || is_prime(d);
    while !settled && p <= bound && p * p <= d {
        if d.is_multiple_of(p) {
            let mut k = 0;
            while d.is_multiple_of(p) {
                d /= p;
                k += 1;
            }
            primes.push((p, k));
            settled = d == 1 || is_prime(d);
        }
        p += if p == 2 { 1 } else { 2 };
    }
    let mut cofactor = 1;
    if d > 1 {
        if is_prime(d) || p * p > d {
            primes.push((d, 1));
        } else {
            let s = d.isqrt();
            if s * s == d && is_prime(s) {
                primes.push((s, 2));
            } else {
                cofactor = d;
            }
        }
    }
    primes.sort_unstable();
    Factored { primes, cofactor }
}

/// The Bézout denominators `d` of every admissible exponent tuple. An
/// integer `e` is a candidate exactly when it divides some `d`, so the pool
/// stands for the union of the divisor sets without listing them.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CandidatePool {
    pub n: u64,
    #[serde(with = "ratio_json")]
    pub threshold: Ratio<u64>,
    pub m_max: u64,
    /// Tuples `0 = i_1 <= … <= i_m < φ(n)` with `m <= m_max`.
    pub tuples: u64,
    /// Tuples left after identifying cyclic shifts.
    pub classes: u64,
    pub pool: BTreeMap<u64, Factored>,
    /// Denominators that do not fit in 64 bits, in decimal.
    pub oversized: Vec<String>,
}

impl CandidatePool {
    pub fn contains(&self, e: u64) -> bool {
        e != 0 && self.pool.keys().any(|d| d % e == 0)
    }

    /// True when every denominator was fully factored.
    pub fn resolved(&self) -> bool {
        self.oversized.is_empty() && self.pool.values().all(Factored::resolved)
    }

    pub fn unresolved(&self) -> Vec<u64> {
        self.pool
            .iter()
            .filter(|(_, f)| !f.resolved())
            .map(|(&d, _)| d)
            .collect()
    }

    /// Every divisor of every denominator.
    pub fn divisors(&self) -> BTreeSet<u64> {
        self.pool.keys().flat_map(|&d| divisors(d)).collect()
    }

    /// `(p, k)` with `p^k` dividing some denominator.
    pub fn prime_powers(&self) -> BTreeSet<(u64, u32)> {
        self.pool
            .values()
            .flat_map(|f| {
                f.primes
                    .iter()
                    .flat_map(|&(p, v)| (1..=v).map(move |k| (p, k)))
            })
            .collect()
    }
}

#[derive(Default)]
struct Acc {
    tuples: u64,
    classes: u64,
    ds: BTreeSet<u64>,
    oversized: BTreeSet<String>,
}

impl Acc {
    fn merge(mut self, o: Acc) -> Acc {
        self.tuples += o.tuples;
        self.classes += o.classes;
        self.ds.extend(o.ds);
        self.oversized.extend(o.oversized);
        self
    }
}

/// Whether `t` is the least of its shifts `x -> x - v mod n` (for `v` in
/// `t`) that still lie below `phi`.
fn least_shift(t: &[u64], n: u64, phi: u64) -> bool {
    for j in 1..t.len() {
        let v = t[j];
        if v == t[j - 1] || t[j - 1] + n - v >= phi {
            continue;
        }
        let shifted = t[j..]
            .iter()
            .map(|&x| x - v)
            .chain(t[..j].iter().map(|&x| x + n - v));
        if shifted.lt(t.iter().copied()) {
            return false;
        }
    }
    true
}

fn walk(ctx: &BezoutContext, t: &mut Vec<u64>, m_max: usize, acc: &mut Acc) -> Result<()> {
    let n = ctx.n();
    let phi = ctx.phi() as u64;
    acc.tuples += 1;
    if least_shift(t, n, phi) {
        acc.classes += 1;
        let d = ctx.denominator(t)?;
        match d.to_u64() {
            Some(d) => {
                acc.ds.insert(d);
            }
            None => {
                acc.oversized.insert(d.to_string());
            }
        }
    }
    if t.len() < m_max {
        let last = *t.last().unwrap();
        for x in last..phi {
            t.push(x);
            walk(ctx, t, m_max, acc)?;
            t.pop();
        }
    }
    Ok(())
}

/// Bézout denominators of `sum X^{i_j}` and `Φ_n` over all tuples
/// `0 = i_1 <= … <= i_m < φ(n)` with `m < n / (n - φ(n))`. Every `e` with
/// `e | Φ_n(q)` and `m(q, e)` below the threshold divides one of them.
pub fn prop11_candidates(n: u64) -> Result<CandidatePool> {
    let thr = threshold(n)?;
    let m_max = max_exceptional_m(n)? as usize;
    let ctx = BezoutContext::new(n)?;
    let phi = ctx.phi() as u64;

    let mut acc = Acc::default();
    walk(&ctx, &mut vec![0], 1, &mut acc)?;
    if m_max >= 2 {
        let parts: Vec<Acc> = (0..phi)
            .into_par_iter()
            .map(|x| {
                let mut a = Acc::default();
                walk(&ctx, &mut vec![0, x], m_max, &mut a)?;
                Ok(a)
            })
            .collect::<Result<_>>()?;
        acc = parts.into_iter().fold(acc, Acc::merge);
    }

    let pool = acc.ds.into_par_iter().map(|d| (d, factor_d(d))).collect();
    Ok(CandidatePool {
        n,
        threshold: thr,
        m_max: m_max as u64,
        tuples: acc.tuples,
        classes: acc.classes,
        pool,
        oversized: acc.oversized.into_iter().collect(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ExceptionEntry {
    pub p: u64,
    pub k: u32,
    pub m: u64,
    /// The order-`n` generator used for the check.
    pub q: u64,
}

/// Prime powers `p^k` with `n | p - 1` where the order-`n` subgroup has `m`
/// below `n / (n - φ(n))`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExceptionSet {
    pub n: u64,
    #[serde(with = "ratio_json")]
    pub threshold: Ratio<u64>,
    pub entries: Vec<ExceptionEntry>,
    /// Denominators the entries were sifted from.
    pub candidate_pool: Vec<u64>,
    /// Prime powers that were tested.
    pub prime_powers_tested: u64,
    /// Denominators left partly unfactored; an exception could hide in them.
    pub unresolved: Vec<String>,
}

impl ExceptionSet {
    /// `(p, k, m)` triples.
    pub fn triples(&self) -> Vec<(u64, u32, u64)> {
        self.entries.iter().map(|e| (e.p, e.k, e.m)).collect()
    }

    pub fn complete(&self) -> bool {
        self.unresolved.is_empty()
    }
}

pub fn corollary13_exceptions(n: u64, k_cap: u32) -> Result<ExceptionSet> {
    let pool = prop11_candidates(n)?;
    let m_max = pool.m_max;
    let targets: Vec<(u64, u32)> = pool
        .prime_powers()
        .into_iter()
        .filter(|&(p, k)| p > 2 && (p - 1) % n == 0 && k <= k_cap)
        .collect();

    let found: Vec<Option<ExceptionEntry>> = targets
        .par_iter()
        .map(|&(p, k)| {
            let e = checked_prime_power(p, k)?;
            let q = element_of_order(p, k, n)?;
            let h = unit_subgroup(q, e)?;
            let Some(r) = m_at_most(&h, m_max)? else {
                return Ok(None);
            };
            let witness: Vec<u64> = r.witness.clone();
            assert!(verify_witness(q, e, &witness, r.value));
            Ok(Some(ExceptionEntry {
                p,
                k,
                m: r.value,
                q,
            }))
        })
        .collect::<Result<_>>()?;

    let mut entries: Vec<ExceptionEntry> = found.into_iter().flatten().collect();
    entries.sort_by_key(|e| (e.m, e.p, e.k));
    let mut unresolved: Vec<String> = pool.unresolved().iter().map(u64::to_string).collect();
    unresolved.extend(pool.oversized.iter().cloned());
    Ok(ExceptionSet {
        n,
        threshold: pool.threshold,
        entries,
        candidate_pool: pool.pool.keys().copied().collect(),
        prime_powers_tested: targets.len() as u64,
        unresolved,
    })
}

mod ratio_json {
    use num_rational::Ratio;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    struct Frac {
        numerator: u64,
        denominator: u64,
    }

    pub fn serialize<S: Serializer>(r: &Ratio<u64>, s: S) -> Result<S::Ok, S::Error> {
        Frac {
            numerator: *r.numer(),
            denominator: *r.denom(),
        }
        .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Ratio<u64>, D::Error> {
        let f = Frac::deserialize(d)?;
        if f.denominator == 0 {
            return Err(serde::de::Error::custom("zero denominator"));
        }
        Ok(Ratio::new(f.numerator, f.denominator))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclotomic::cyclotomic;
    use crate::modular::pow_mod;
    use crate::oracle::naive_m;

    #[test]
    fn shift_normalization() {
        // n = 5, phi = 4: {0, 3} shifts to {0, 2} (3 -> 0, 0 -> 2)
        assert!(!least_shift(&[0, 3], 5, 4));
        assert!(least_shift(&[0, 2], 5, 4));
        assert!(least_shift(&[0], 5, 4));
        assert!(least_shift(&[0, 0, 1], 5, 4));
    }

    #[test]
    fn factoring() {
        assert_eq!(factor_d(360).primes, vec![(2, 3), (3, 2), (5, 1)]);
        // below the full-factoring bound: resolved by trial division
        let small = 999_983u64 * 1_000_003;
        assert!(small < SMALL_D);
        assert_eq!(factor_d(small).primes, vec![(999_983, 1), (1_000_003, 1)]);
        let p = 2_000_003u64;
        assert!(is_prime(p));
        assert_eq!(factor_d(p * p).primes, vec![(p, 2)]);
        // two primes above the trial bound stay unresolved
        let f = factor_d(7 * 1_000_003 * 1_000_033);
        assert_eq!(f.primes, vec![(7, 1)]);
        assert_eq!(f.cofactor, 1_000_003 * 1_000_033);
        assert!(!f.resolved());
    }

    #[test]
    fn trivial_thresholds() {
        for n in [2u64, 4, 6] {
            let c = prop11_candidates(n).unwrap();
            assert_eq!(c.m_max, 1);
            assert_eq!(c.pool.keys().copied().collect::<Vec<_>>(), vec![1]);
            assert!(corollary13_exceptions(n, 4).unwrap().entries.is_empty());
        }
    }

    #[test]
    fn n5_exceptions() {
        let c = prop11_candidates(5).unwrap();
        assert!(c.resolved());
        assert!(c.contains(11) && c.contains(61));
        let x = corollary13_exceptions(5, 6).unwrap();
        assert_eq!(x.triples(), vec![(11, 1, 3), (61, 1, 4)]);
        assert!(x.complete());
    }

    fn soundness(n: u64, e_max: u64) {
        let pool = prop11_candidates(n).unwrap();
        let phi_n = cyclotomic(n).unwrap();
        let thr = threshold(n).unwrap();
        for e in 2..=e_max {
            for q in 1..e {
                if pow_mod(q, n, e) != 1 || phi_n.eval_mod(q, e) != 0 {
                    continue;
                }
                let m = naive_m(q, e).unwrap();
                if Ratio::from_integer(m) < thr {
                    assert!(pool.contains(e), "n={n}: e={e} (q={q}, m={m}) missing");
                }
            }
        }
    }

    #[test]
    fn candidates_are_sound_n5_n7() {
        soundness(5, 3000);
        soundness(7, 3000);
    }

    #[test]
    fn candidates_are_sound_n11_n13() {
        soundness(11, 3000);
        soundness(13, 3000);
    }
}
