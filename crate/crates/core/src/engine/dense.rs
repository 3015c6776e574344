//! Breadth-first level growth over all of `Z/eZ`.
//!
//! Every level set `A_m` (sums of at most `m` subgroup elements) is a union
//! of orbits of the subgroup acting by multiplication, so the search runs on
//! orbits: one representative per orbit is expanded by each subgroup
//! element. The orbit table costs one `u32` per residue and one
//! multiplication per residue to build, after which the search is `O(e)`.

use crate::modular::{add_mod, mul_mod, UnitSubgroup};

const UNSEEN: u32 = u32::MAX;

/// The nested level sets `A_1 ⊂ A_2 ⊂ … ⊂ A_m` of one search.
#[derive(Debug, Clone)]
pub struct LevelSets {
    modulus: u64,
    /// `sizes[j] = |A_{j+1}|`.
    sizes: Vec<u64>,
    orbit_of: Vec<u32>,
    /// First level at which each orbit appears (0 = never).
    orbit_level: Vec<u32>,
    orbit_size: Vec<u32>,
}

impl LevelSets {
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Number of levels, i.e. the `m` at which `0` first appeared.
    pub fn depth(&self) -> u32 {
        self.sizes.len() as u32
    }

    /// `|A_level|` for `1 <= level <= depth`.
    pub fn size(&self, level: u32) -> u64 {
        self.sizes[level as usize - 1]
    }

    pub fn sizes(&self) -> &[u64] {
        &self.sizes
    }

    pub fn level_of(&self, x: u64) -> Option<u32> {
        let l = self.orbit_level[self.orbit_of[(x % self.modulus) as usize] as usize];
        (l != 0).then_some(l)
    }

    pub fn contains(&self, level: u32, x: u64) -> bool {
        self.level_of(x).is_some_and(|l| l <= level)
    }

    /// Residues of `A_level`, ascending.
    pub fn members(&self, level: u32) -> Vec<u64> {
        (0..self.modulus)
            .filter(|&x| self.contains(level, x))
            .collect()
    }

    /// Residues first reached at `level`, ascending.
    pub fn frontier(&self, level: u32) -> Vec<u64> {
        (0..self.modulus)
            .filter(|&x| self.level_of(x) == Some(level))
            .collect()
    }

    /// Checks `|A_j| >= j * n` for every level `j` that does not contain 0.
    pub fn growth_bound_holds(&self, n: u64) -> bool {
        let zero_level = self.level_of(0).unwrap_or(u32::MAX);
        self.sizes
            .iter()
            .enumerate()
            .map(|(j, &s)| (j as u32 + 1, s))
            .filter(|&(j, _)| j < zero_level)
            .all(|(j, s)| s >= j as u64 * n)
    }

    /// Number of orbits of the subgroup acting on `Z/eZ`.
    pub fn orbit_count(&self) -> usize {
        self.orbit_size.len()
    }
}

/// Runs the level growth to the first level containing 0 and returns
/// `(m, witness residues, levels)`. The witness lists one subgroup element
/// per summand.
pub fn level_growth(h: &UnitSubgroup) -> (u64, Vec<u64>, LevelSets) {
    let e = h.modulus;
    assert!(e <= u32::MAX as u64, "dense level growth needs e < 2^32");
    let g = h.generator;
    let len = e as usize;

    let mut orbit_of = vec![UNSEEN; len];
    let mut orbit_rep = Vec::new();
    let mut orbit_size = Vec::new();
    for x in 0..e {
        if orbit_of[x as usize] != UNSEEN {
            continue;
        }
        let id = orbit_rep.len() as u32;
        let mut y = x;
        let mut size = 0u32;
        loop {
            orbit_of[y as usize] = id;
            size += 1;
            y = mul_mod(y, g, e);
            if y == x {
                break;
            }
        }
        orbit_rep.push(x);
        orbit_size.push(size);
    }

    let mut orbit_level = vec![0u32; orbit_rep.len()];
    let zero = orbit_of[0] as usize;
    let start = orbit_of[(1 % e) as usize] as usize;
    orbit_level[start] = 1;
    let mut sizes = vec![orbit_size[start] as u64];
    let mut frontier = vec![start];
    let mut level = 1u32;

    while orbit_level[zero] == 0 {
        let mut next = Vec::new();
        let mut added = 0u64;
        for &o in &frontier {
            let x = orbit_rep[o];
            for &a in &h.elements {
                let t = orbit_of[add_mod(x, a, e) as usize] as usize;
                if orbit_level[t] == 0 {
                    orbit_level[t] = level + 1;
                    added += orbit_size[t] as u64;
                    next.push(t);
                }
            }
        }
        level += 1;
        sizes.push(sizes.last().unwrap() + added);
        next.sort_unstable_by_key(|&o| orbit_rep[o]);
        frontier = next;
    }

    let levels = LevelSets {
        modulus: e,
        sizes,
        orbit_of,
        orbit_level,
        orbit_size,
    };
    let m = levels.depth() as u64;
    let witness = reconstruct(h, &levels);
    (m, witness, levels)
}

/// Walks back from 0, at each step subtracting the smallest subgroup element
/// that lands one level lower.
fn reconstruct(h: &UnitSubgroup, levels: &LevelSets) -> Vec<u64> {
    let e = h.modulus;
    let mut z = 0u64;
    let mut out = Vec::with_capacity(levels.depth() as usize);
    for l in (2..=levels.depth()).rev() {
        let a = *h
            .elements
            .iter()
            .find(|&&a| levels.level_of((z + e - a) % e) == Some(l - 1))
            .expect("every element of a level has a predecessor one level down");
        out.push(a);
        z = (z + e - a) % e;
    }
    debug_assert!(h.contains(z));
    out.push(z);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modular::unit_subgroup;

    #[test]
    fn four_mod_seven() {
        let h = unit_subgroup(4, 7).unwrap();
        let (m, w, levels) = level_growth(&h);
        assert_eq!(m, 3);
        assert_eq!(w.iter().sum::<u64>() % 7, 0);
        assert_eq!(levels.members(1), vec![1, 2, 4]);
        // 2-sums of {1,2,4}: 2,3,4,5,6,8=1
        assert_eq!(levels.members(2), vec![1, 2, 3, 4, 5, 6]);
        assert_eq!(levels.frontier(2), vec![3, 5, 6]);
        assert_eq!(levels.sizes(), &[3, 6, 7]);
        assert!(levels.growth_bound_holds(3));
        // orbits: {0}, {1,2,4}, {3,6,5}
        assert_eq!(levels.orbit_count(), 3);
    }

    #[test]
    fn trivial_subgroup_walks_every_residue() {
        let h = unit_subgroup(1, 9).unwrap();
        let (m, w, levels) = level_growth(&h);
        assert_eq!(m, 9);
        assert_eq!(w, vec![1; 9]);
        assert_eq!(levels.sizes(), &[1, 2, 3, 4, 5, 6, 7, 8, 9]);
    }

    #[test]
    fn modulus_one() {
        let h = unit_subgroup(3, 1).unwrap();
        let (m, w, _) = level_growth(&h);
        assert_eq!((m, w), (1, vec![0]));
    }
}
