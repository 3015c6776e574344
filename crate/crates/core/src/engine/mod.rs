//! Exact computation of `m(q, e)`, the least number of powers of `q` whose
//! sum is divisible by `e`.
//!
//! `m` depends only on the subgroup `<q mod e>`, so everything here works on
//! [`UnitSubgroup`]s and results are memoized by [`SubgroupKey`]. Two search
//! strategies exist: [`dense`] level growth over all residues (used up to
//! [`DENSE_LIMIT`]) and a [`sparse`] meet-in-the-middle search whose cost
//! depends only on the number of short sums.
//!
//! The engine does not use the `ceil(e/n)` upper bound anywhere; callers
//! check it after the fact.

pub mod dense;
pub mod sparse;

use std::sync::{Arc, LazyLock};

use dashmap::DashMap;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::modular::{gcd, pow_mod, unit_subgroup, PowerSumInstance, UnitSubgroup};

pub use dense::LevelSets;

/// Largest modulus searched with a dense per-residue table (4 bytes each).
pub const DENSE_LIMIT: u64 = 1 << 24;

/// `m` together with a witness: exponents `a_1 <= … <= a_m` with
/// `sum q^{a_i} ≡ 0 (mod e)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MResult {
    pub value: u64,
    pub witness: Vec<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Strategy {
    #[default]
    Auto,
    Dense,
    Sparse,
}

/// Identifies a cyclic subgroup of `(Z/eZ)^x` exactly: the modulus, the
/// order and the smallest generator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SubgroupKey {
    pub modulus: u64,
    pub order: u64,
    pub min_generator: u64,
}

impl SubgroupKey {
    pub fn of(h: &UnitSubgroup) -> Self {
        Self {
            modulus: h.modulus,
            order: h.order,
            min_generator: h.canonical_generator(),
        }
    }
}

fn to_exponents(h: &UnitSubgroup, residues: &[u64]) -> Vec<u64> {
    let mut w: Vec<u64> = residues
        .iter()
        .map(|&x| {
            h.exponent_of(x)
                .expect("witness residues lie in the subgroup")
        })
        .collect();
    w.sort_unstable();
    w
}

fn to_residues(h: &UnitSubgroup, exponents: &[u64]) -> Vec<u64> {
    let mut r: Vec<u64> = exponents.iter().map(|&a| h.powers()[a as usize]).collect();
    r.sort_unstable();
    r
}

/// Level growth with the level sets kept for inspection. Only for moduli
/// below `2^32`.
pub fn level_sets(h: &UnitSubgroup) -> (MResult, LevelSets) {
    let (value, residues, levels) = dense::level_growth(h);
    (
        MResult {
            value,
            witness: to_exponents(h, &residues),
        },
        levels,
    )
}

/// `m` of a subgroup: the least `t` such that `t` of its elements sum to 0.
/// Witness exponents refer to `h.generator`.
pub fn m_of_subgroup(h: &UnitSubgroup) -> Result<MResult> {
    m_of_subgroup_with(h, Strategy::Auto)
}

pub fn m_of_subgroup_with(h: &UnitSubgroup, strategy: Strategy) -> Result<MResult> {
    let dense = match strategy {
        Strategy::Auto => h.modulus <= DENSE_LIMIT,
        Strategy::Dense => true,
        Strategy::Sparse => false,
    };
    if dense {
        if h.modulus > u32::MAX as u64 {
            return Err(domain("dense search needs e < 2^32"));
        }
        return Ok(level_sets(h).0);
    }
    let (value, mut witness) = sparse::search(h, h.modulus)?.expect("e copies of 1 always vanish");
    witness.sort_unstable();
    Ok(MResult { value, witness })
}

/// Multisets of at most `ceil(t / 2)` elements from a set of `order`,
/// saturating.
fn half_sums(order: u64, t: u64) -> u64 {
    let k = t.div_ceil(2);
    let mut c: u64 = 1;
    for i in 1..=k {
        c = match c.checked_mul(order + i) {
            Some(x) => x / i,
            None => return u64::MAX,
        };
    }
    c
}

/// Decides whether `m <= t_max`, returning the result if so. Small moduli
/// use the dense search unless the sparse one would store far fewer states.
pub fn m_at_most(h: &UnitSubgroup, t_max: u64) -> Result<Option<MResult>> {
    let sparse_cheaper = half_sums(h.order, t_max).saturating_mul(16) < h.modulus;
    if h.modulus <= DENSE_LIMIT && !sparse_cheaper {
        let r = m_of_subgroup_with(h, Strategy::Dense)?;
        return Ok((r.value <= t_max).then_some(r));
    }
    Ok(sparse::search(h, t_max)?.map(|(value, mut witness)| {
        witness.sort_unstable();
        MResult { value, witness }
    }))
}

#[derive(Debug)]
struct Cached {
    value: u64,
    residues: Vec<u64>,
}

/// Concurrent memo table for subgroup results.
#[derive(Debug, Default)]
pub struct MsumCache {
    map: DashMap<SubgroupKey, Arc<Cached>>,
}

impl MsumCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn m_of_subgroup(&self, h: &UnitSubgroup) -> Result<MResult> {
        let key = SubgroupKey::of(h);
        let cached = match self.map.get(&key) {
            Some(c) => Arc::clone(&c),
            None => {
                let r = m_of_subgroup(h)?;
                let fresh = Arc::new(Cached {
                    value: r.value,
                    residues: to_residues(h, &r.witness),
                });
                Arc::clone(self.map.entry(key).or_insert(fresh).value())
            }
        };
        Ok(MResult {
            value: cached.value,
            witness: to_exponents(h, &cached.residues),
        })
    }

    pub fn m(&self, q: u64, e: u64) -> Result<MResult> {
        if q == 0 || e == 0 {
            return Err(domain("q and e must be positive"));
        }
        self.m_of_subgroup(&unit_subgroup(q, e)?)
    }
}

static GLOBAL_CACHE: LazyLock<MsumCache> = LazyLock::new(MsumCache::new);

/// `m(q, e)` with witness exponents of `q`. Uses a process-wide cache.
pub fn m(q: u64, e: u64) -> Result<MResult> {
    GLOBAL_CACHE.m(q, e)
}

/// `ceil(e / n)`.
pub fn ceil_bound(inst: &PowerSumInstance) -> u64 {
    inst.e.div_ceil(inst.n)
}

/// `m(q, e) = 2` iff `e = 2`, or `n` is even and `q^{n/2} ≡ -1 (mod e)`.
pub fn is_m_two(inst: &PowerSumInstance) -> bool {
    let e = inst.e;
    if e == 2 {
        return true;
    }
    e > 2 && inst.n.is_multiple_of(2) && pow_mod(inst.q, inst.n / 2, e) == e - 1
}

/// `m(q, 2^k)` for odd `q`.
pub fn two_power_m(q: u64, k: u32) -> Result<u64> {
    if q.is_multiple_of(2) {
        return Err(domain(format!("q = {q} must be odd")));
    }
    if k >= 64 {
        return Err(domain("2^k must fit in 64 bits"));
    }
    let e = 1u64 << k;
    Ok(match k {
        0 => 1,
        1 => 2,
        _ if q % 4 == 1 => gcd(e, q - 1),
        _ if (q + 1).is_multiple_of(e) => 2,
        _ => 4,
    })
}

/// True iff the witness has `claimed_m` terms and `sum q^{a_i} ≡ 0 (mod e)`.
pub fn verify_witness(q: u64, e: u64, witness: &[u64], claimed_m: u64) -> bool {
    if e == 0 || witness.len() as u64 != claimed_m {
        return false;
    }
    let sum = witness.iter().fold(0u128, |acc, &a| {
        (acc + pow_mod(q, a, e) as u128) % e as u128
    });
    sum == 0
}

#[cfg(test)]
mod tests {
    use super::Strategy as Search;
    use super::*;
    use crate::oracle::naive_m;
    use proptest::prelude::*;

    #[test]
    fn known_values() {
        let r = m(4, 7).unwrap();
        assert_eq!(
            r,
            MResult {
                value: 3,
                witness: vec![0, 1, 2]
            }
        );
        assert_eq!(m(9, 11).unwrap().value, 3);
        assert_eq!(m(9, 121).unwrap().value, 5);
        assert_eq!(m(3, 26).unwrap().value, 6);
        assert_eq!(m(1, 13).unwrap().value, 13);
        assert_eq!(m(8, 1).unwrap().value, 1);
        assert!(m(4, 6).is_err());
    }

    #[test]
    fn subgroup_level_examples() {
        let h = unit_subgroup(4, 7).unwrap();
        let r = m_of_subgroup(&h).unwrap();
        assert_eq!(r.value, 3);
        assert!(verify_witness(4, 7, &r.witness, 3));
        assert_eq!(
            m_of_subgroup(&unit_subgroup(1, 10).unwrap()).unwrap().value,
            10
        );
        assert_eq!(
            m_of_subgroup(&unit_subgroup(5, 1).unwrap()).unwrap().value,
            1
        );
    }

    #[test]
    fn ceil_bound_examples() {
        let b = |q, e| ceil_bound(&PowerSumInstance::new(q, e).unwrap());
        assert_eq!(b(4, 7), 3);
        assert_eq!(b(1, 9), 9);
        assert_eq!(b(5, 8), 4);
    }

    #[test]
    fn m_two_examples() {
        let t = |q, e| is_m_two(&PowerSumInstance::new(q, e).unwrap());
        assert!(t(3, 2));
        assert!(t(2, 5));
        assert!(!t(4, 7));
        assert!(!t(1, 1));
    }

    #[test]
    fn two_power_examples() {
        assert_eq!(two_power_m(5, 3).unwrap(), 4);
        assert_eq!(two_power_m(7, 3).unwrap(), 2);
        assert_eq!(two_power_m(3, 3).unwrap(), 4);
        assert_eq!(two_power_m(9, 0).unwrap(), 1);
        assert_eq!(two_power_m(9, 1).unwrap(), 2);
        assert!(two_power_m(4, 3).is_err());
    }

    #[test]
    fn witness_checks() {
        assert!(verify_witness(4, 7, &[0, 1, 2], 3));
        assert!(verify_witness(6, 1, &[0], 1));
        assert!(verify_witness(5, 8, &[0, 0, 0, 1], 4));
        assert!(!verify_witness(5, 8, &[0, 0, 0, 1], 3));
        assert!(!verify_witness(4, 7, &[0, 1], 2));
    }

    #[test]
    fn cache_collapses_equal_subgroups() {
        let cache = MsumCache::new();
        // 3 and 5 both generate the full unit group mod 7
        let a = cache.m(3, 7).unwrap();
        let b = cache.m(5, 7).unwrap();
        assert_eq!(cache.len(), 1);
        assert_eq!(a.value, b.value);
        assert!(verify_witness(3, 7, &a.witness, a.value));
        assert!(verify_witness(5, 7, &b.witness, b.value));
    }

    #[test]
    fn strategies_agree() {
        for e in [97u64, 121, 125, 143, 256, 343, 1000] {
            for q in 2..e.min(60) {
                if gcd(q, e) != 1 {
                    continue;
                }
                let h = unit_subgroup(q, e).unwrap();
                let d = m_of_subgroup_with(&h, Search::Dense).unwrap();
                let s = m_of_subgroup_with(&h, Search::Sparse).unwrap();
                assert_eq!(d.value, s.value, "m({q},{e})");
                assert!(verify_witness(q, e, &s.witness, s.value));
            }
        }
    }

    #[test]
    fn bounded_search() {
        let h = unit_subgroup(9, 121).unwrap();
        assert!(m_at_most(&h, 4).unwrap().is_none());
        assert_eq!(m_at_most(&h, 5).unwrap().unwrap().value, 5);
    }

    #[test]
    fn bounded_search_on_small_subgroups() {
        assert_eq!(half_sums(13, 12), 27_132);
        assert_eq!(half_sums(u64::MAX / 2, 8), u64::MAX);
        for p in crate::modular::primes_up_to(3000) {
            if p % 7 != 1 {
                continue;
            }
            let q = crate::modular::element_of_order(p, 1, 7).unwrap();
            let h = unit_subgroup(q, p).unwrap();
            let full = m_of_subgroup(&h).unwrap().value;
            for t in 1..7 {
                let r = m_at_most(&h, t).unwrap();
                assert_eq!(
                    r.as_ref().map(|r| r.value),
                    (full <= t).then_some(full),
                    "p = {p}, t = {t}"
                );
                if let Some(r) = r {
                    assert!(verify_witness(q, p, &r.witness, r.value));
                }
            }
        }
    }

    proptest! {
        #[test]
        fn basic_laws(e in 1u64..400, q in 1u64..2000) {
            prop_assume!(gcd(q, e) == 1);
            let inst = PowerSumInstance::new(q, e).unwrap();
            let r = m(q, e).unwrap();
            prop_assert!(verify_witness(q, e, &r.witness, r.value));
            prop_assert!(r.witness.iter().all(|&a| a < inst.n));
            prop_assert!(1 <= r.value && r.value <= e);
            prop_assert_eq!(r.value == e, q % e == 1 % e);
            prop_assert_eq!(r.value == 1, e == 1);
            prop_assert_eq!(r.value % inst.e1, 0);
            prop_assert_eq!(is_m_two(&inst), r.value == 2);
            prop_assert_eq!(r.value, m(q % e + e, e).unwrap().value);
            prop_assert_eq!(r.value, naive_m(q, e).unwrap());
        }

        #[test]
        fn powers_never_do_better(e in 2u64..300, q in 2u64..300, i in 1u64..12) {
            prop_assume!(gcd(q, e) == 1);
            let base = m(q, e).unwrap().value;
            let power = m(pow_mod(q, i, e), e).unwrap().value;
            prop_assert!(base <= power);
        }

        #[test]
        fn levels_grow_by_at_least_n(e in 2u64..700, q in 1u64..700) {
            prop_assume!(gcd(q, e) == 1);
            let h = unit_subgroup(q, e).unwrap();
            let (r, levels) = level_sets(&h);
            prop_assert!(levels.growth_bound_holds(h.order));
            prop_assert_eq!(levels.depth() as u64, r.value);
            prop_assert_eq!(levels.level_of(0), Some(r.value as u32));
        }
    }
}
