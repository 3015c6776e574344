//! Verification sweeps.
//!
//! A sweep runs over a range of moduli. Each modulus is one shard: its unit
//! group is split into cyclic subgroups, `m` is computed once per subgroup
//! and assigned to all of that subgroup's generators, and the claim's check
//! runs over the resulting [`PairRecord`]s. Shards run on a rayon pool and
//! their tallies are merged in modulus order, so a report does not depend on
//! the number of workers.

mod claims;
mod report;
pub mod store;

use std::collections::HashMap;

use rayon::prelude::*;

pub use claims::{run_claim, theorem1_tightness_scan, ClaimParams, CLAIMS};
pub use report::{Tally, VerificationReport, Violation};
pub use store::{ResultStore, StoreRow};

use crate::engine::{m_of_subgroup, SubgroupKey};
use crate::error::{Error, Result};
use crate::modular::{gcd, unit_subgroup};

/// `m(q, e)` for one unit `q` modulo `e`, with `n = ord_e(q)` and
/// `e1 = gcd(e, q - 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PairRecord {
    pub q: u64,
    pub e: u64,
    pub n: u64,
    pub e1: u64,
    pub m: u64,
}

/// Computes `m(q, e)` for every unit `1 <= q < e` (for `e = 1`, just
/// `q = 1`). Returns the records in `q` order together with one store row per
/// subgroup that was not found in `store`.
pub fn modulus_shard(
    e: u64,
    store: Option<&ResultStore>,
) -> Result<(Vec<PairRecord>, Vec<StoreRow>)> {
    if e == 0 || e > u32::MAX as u64 {
        return Err(Error::Domain(format!("shard modulus {e} out of range")));
    }
    const UNSET: u32 = u32::MAX;
    let top = e.max(2);
    let mut assigned = vec![UNSET; top as usize];
    let mut subgroups: Vec<(u64, u64)> = Vec::new();
    let mut fresh = Vec::new();
    let mut records = Vec::new();

    for q in 1..top {
        if gcd(q, e) != 1 {
            continue;
        }
        if assigned[q as usize] == UNSET {
            let h = unit_subgroup(q, e)?;
            let key = SubgroupKey::of(&h);
            let m = match store.and_then(|s| s.get(&key)) {
                Some(row) => row.m,
                None => {
                    let r = m_of_subgroup(&h)?;
                    let residues: Vec<u64> =
                        r.witness.iter().map(|&a| h.powers()[a as usize]).collect();
                    fresh.push(StoreRow {
                        key,
                        m: r.value,
                        witness_hash: store::witness_hash(&residues),
                    });
                    r.value
                }
            };
            let id = subgroups.len() as u32;
            subgroups.push((h.order, m));
            for (i, &x) in h.powers().iter().enumerate() {
                if gcd(i as u64, h.order) == 1 && x < top {
                    assigned[x as usize] = id;
                }
            }
            if e == 1 {
                assigned[q as usize] = id;
            }
        }
        let (n, m) = subgroups[assigned[q as usize] as usize];
        records.push(PairRecord {
            q,
            e,
            n,
            e1: gcd(e, q - 1),
            m,
        });
    }
    Ok((records, fresh))
}

/// Sweep configuration: worker count and an optional persistent store.
#[derive(Debug)]
pub struct Campaign {
    jobs: usize,
    store: Option<ResultStore>,
    appended: usize,
}

impl Default for Campaign {
    fn default() -> Self {
        Self::new()
    }
}

impl Campaign {
    pub fn new() -> Self {
        Self {
            jobs: std::thread::available_parallelism().map_or(1, |n| n.get()),
            store: None,
            appended: 0,
        }
    }

    pub fn with_jobs(mut self, jobs: usize) -> Self {
        self.jobs = jobs.max(1);
        self
    }

    pub fn with_store(mut self, store: ResultStore) -> Self {
        self.store = Some(store);
        self
    }

    pub fn jobs(&self) -> usize {
        self.jobs
    }

    pub fn store(&self) -> Option<&ResultStore> {
        self.store.as_ref()
    }

    /// Rows written to the store by this campaign so far.
    pub fn rows_appended(&self) -> usize {
        self.appended
    }

    /// Runs `f` on a pool of `jobs` threads.
    pub fn install<R: Send>(&self, f: impl FnOnce() -> R + Send) -> R {
        rayon::ThreadPoolBuilder::new()
            .num_threads(self.jobs)
            .build()
            .expect("thread pool")
            .install(f)
    }

    /// Applies `check` to every modulus in `e_lo..=e_hi` and merges the
    /// tallies in modulus order.
    pub fn tally<F>(&mut self, e_lo: u64, e_hi: u64, check: F) -> Result<Tally>
    where
        F: Fn(u64, &[PairRecord]) -> Tally + Sync,
    {
        let e_lo = e_lo.max(1);
        if e_lo > e_hi {
            return Ok(Tally::default());
        }
        let store = self.store.as_ref();
        let shards: Vec<(Tally, Vec<StoreRow>)> = self.install(|| {
            (e_lo..=e_hi)
                .into_par_iter()
                .map(|e| {
                    let (records, rows) = modulus_shard(e, store)?;
                    Ok((check(e, &records), rows))
                })
                .collect::<Result<_>>()
        })?;
        let mut total = Tally::default();
        let mut new_rows = Vec::new();
        for (t, rows) in shards {
            total = total.merge(t);
            new_rows.extend(rows);
        }
        if let Some(s) = self.store.as_mut() {
            self.appended += s.append(&new_rows)?;
        }
        Ok(total)
    }

    /// All records for moduli in `e_lo..=e_hi`, in `(e, q)` order.
    pub fn pairs(&mut self, e_lo: u64, e_hi: u64) -> Result<Vec<PairRecord>> {
        let e_lo = e_lo.max(1);
        if e_lo > e_hi {
            return Ok(Vec::new());
        }
        let store = self.store.as_ref();
        let shards: Vec<(Vec<PairRecord>, Vec<StoreRow>)> = self.install(|| {
            (e_lo..=e_hi)
                .into_par_iter()
                .map(|e| modulus_shard(e, store))
                .collect::<Result<_>>()
        })?;
        let mut out = Vec::new();
        let mut new_rows = Vec::new();
        for (recs, rows) in shards {
            out.extend(recs);
            new_rows.extend(rows);
        }
        if let Some(s) = self.store.as_mut() {
            self.appended += s.append(&new_rows)?;
        }
        Ok(out)
    }

    /// Runs a named claim with this campaign's workers and store.
    pub fn run(&mut self, claim_id: &str, params: &ClaimParams) -> Result<VerificationReport> {
        claims::run_in(self, claim_id, params)
    }
}

/// Index of `(e, q) -> m` built from records, for lookups in tests and
/// tables.
pub fn index_records(records: &[PairRecord]) -> HashMap<(u64, u64), u64> {
    records.iter().map(|r| ((r.e, r.q), r.m)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::naive_m;

    #[test]
    fn shard_matches_oracle() {
        for e in 1..=60 {
            let (recs, rows) = modulus_shard(e, None).unwrap();
            let units = (1..e.max(2)).filter(|&q| gcd(q, e) == 1).count();
            assert_eq!(recs.len(), units);
            for r in &recs {
                assert_eq!(r.m, naive_m(r.q, e).unwrap(), "q={} e={e}", r.q);
                assert_eq!(r.n, crate::mul_order(r.q, e).unwrap());
            }
            let mut keys: Vec<_> = rows.iter().map(|r| r.key).collect();
            keys.sort();
            keys.dedup();
            assert_eq!(keys.len(), rows.len());
        }
    }

    #[test]
    fn worker_count_does_not_change_results() {
        let a = Campaign::new().with_jobs(1).pairs(1, 80).unwrap();
        let b = Campaign::new().with_jobs(3).pairs(1, 80).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn store_is_reused() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("s.msum");
        let mut c = Campaign::new().with_store(ResultStore::open(&path).unwrap());
        let first = c.pairs(2, 50).unwrap();
        assert!(c.rows_appended() > 0);
        let bytes = std::fs::read(&path).unwrap();

        let mut c = Campaign::new().with_store(ResultStore::open(&path).unwrap());
        let second = c.pairs(2, 50).unwrap();
        assert_eq!(c.rows_appended(), 0);
        assert_eq!(first, second);
        assert_eq!(std::fs::read(&path).unwrap(), bytes);
    }
}
