//! Meet-in-the-middle search for moduli too large for a dense table.
//!
//! `S_j` denotes the set of sums of exactly `j` subgroup elements. A
//! vanishing sum of length `t` exists iff some `x` in `S_⌈t/2⌉` has `-x` in
//! `S_⌊t/2⌋`. Each `S_j` is closed under multiplication by the subgroup, so
//! only the orbit minimum of each class is stored, together with how it was
//! produced. The cost depends on the number of sums, not on `e`.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::modular::{add_mod, mul_mod, UnitSubgroup};

/// Upper bound on stored orbit representatives across all levels.
pub const STATE_BUDGET: usize = 60_000_000;

struct Level {
    /// Sorted orbit representatives.
    reps: Vec<u64>,
    /// `rep -> (predecessor rep one level down, exponent of the added power)`.
    parent: HashMap<u64, (u64, u32)>,
}

struct Search<'a> {
    h: &'a UnitSubgroup,
    levels: Vec<Level>,
    stored: usize,
}

impl<'a> Search<'a> {
    fn new(h: &'a UnitSubgroup) -> Self {
        let one = 1 % h.modulus;
        let mut parent = HashMap::new();
        parent.insert(one, (0, 0));
        Self {
            h,
            levels: vec![Level {
                reps: vec![one],
                parent,
            }],
            stored: 1,
        }
    }

    fn canon(&self, x: u64) -> u64 {
        let (e, g) = (self.h.modulus, self.h.generator);
        let mut best = x;
        let mut y = x;
        for _ in 1..self.h.order {
            y = mul_mod(y, g, e);
            best = best.min(y);
        }
        best
    }

    /// The `s` with `x * g^s = target`, for `target` in the orbit of `x`.
    fn shift_between(&self, x: u64, target: u64) -> u64 {
        let (e, g) = (self.h.modulus, self.h.generator);
        let mut y = x;
        for s in 0..self.h.order {
            if y == target {
                return s;
            }
            y = mul_mod(y, g, e);
        }
        unreachable!("target is in the orbit of x")
    }

    /// Ensures `S_1 ..= S_j` are built.
    fn extend_to(&mut self, j: usize) -> Result<()> {
        let e = self.h.modulus;
        while self.levels.len() < j {
            let prev = self.levels.last().unwrap();
            let mut parent: HashMap<u64, (u64, u32)> = HashMap::new();
            for &x in &prev.reps {
                for (i, &a) in self.h.powers().iter().enumerate() {
                    let c = self.canon(add_mod(x, a, e));
                    parent.entry(c).or_insert((x, i as u32));
                }
            }
            self.stored += parent.len();
            if self.stored > STATE_BUDGET {
                return Err(Error::SearchTooLarge {
                    e,
                    states: self.stored,
                });
            }
            let mut reps: Vec<u64> = parent.keys().copied().collect();
            reps.sort_unstable();
            self.levels.push(Level { reps, parent });
        }
        Ok(())
    }

    /// Exponents (w.r.t. the subgroup generator) of a sum representing `rep`
    /// in `S_level`.
    fn exponents(&self, level: usize, rep: u64) -> Vec<u64> {
        let n = self.h.order;
        if level == 1 {
            return vec![0];
        }
        let (prev, i) = self.levels[level - 1].parent[&rep];
        let y = add_mod(prev, self.h.powers()[i as usize], self.h.modulus);
        let s = self.shift_between(y, rep);
        let mut out = self.exponents(level - 1, prev);
        out.push(i as u64);
        out.iter_mut().for_each(|a| *a = (*a + s) % n);
        out
    }

    fn try_length(&mut self, t: usize) -> Result<Option<Vec<u64>>> {
        let e = self.h.modulus;
        if t == 1 {
            return Ok((e == 1).then(|| vec![0]));
        }
        let (t1, t2) = (t - t / 2, t / 2);
        self.extend_to(t1)?;
        let n = self.h.order;
        for &x in &self.levels[t1 - 1].reps {
            let neg = (e - x) % e;
            let c = self.canon(neg);
            if self.levels[t2 - 1].parent.contains_key(&c) {
                let s = self.shift_between(c, neg);
                let mut w = self.exponents(t1, x);
                w.extend(self.exponents(t2, c).into_iter().map(|a| (a + s) % n));
                return Ok(Some(w));
            }
        }
        Ok(None)
    }
}

/// Least `t <= t_max` admitting a vanishing sum of `t` subgroup elements,
/// with a witness given as exponents of the generator.
pub fn search(h: &UnitSubgroup, t_max: u64) -> Result<Option<(u64, Vec<u64>)>> {
    let mut s = Search::new(h);
    for t in 1..=t_max {
        if let Some(w) = s.try_length(t as usize)? {
            return Ok(Some((t, w)));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modular::{pow_mod, unit_subgroup};

    fn check(q: u64, e: u64, expected: u64) {
        let h = unit_subgroup(q, e).unwrap();
        let (m, w) = search(&h, e).unwrap().unwrap();
        assert_eq!(m, expected, "m({q},{e})");
        assert_eq!(w.len() as u64, m);
        let s = w.iter().fold(0, |acc, &a| (acc + pow_mod(q, a, e)) % e);
        assert_eq!(s, 0);
    }

    #[test]
    fn small_cases() {
        check(4, 7, 3);
        check(9, 11, 3);
        check(9, 121, 5);
        check(3, 26, 6);
        check(1, 5, 5);
        check(2, 1, 1);
    }

    #[test]
    fn bounded_search_stops() {
        let h = unit_subgroup(1, 50).unwrap();
        assert_eq!(search(&h, 10).unwrap(), None);
    }
}
