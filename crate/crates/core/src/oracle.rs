//! Brute-force reference for `m(q, e)`, independent of the search engine.
//!
//! Plain dynamic programming over exact-count sum sets: `reach_t` is the
//! set of residues that are sums of exactly `t` powers of `q`. No orbit
//! reduction, no frontier tricks. Quadratic in `e`; meant for `e` up to a
//! few hundred.

use crate::error::{domain, Error, Result};

pub fn naive_m(q: u64, e: u64) -> Result<u64> {
    if e == 0 || e > 5_000 {
        return Err(domain("oracle is limited to 1 <= e <= 5000"));
    }
    if num_integer::gcd(q, e) != 1 {
        return Err(Error::NotCoprime {
            q,
            e,
            gcd: num_integer::gcd(q, e),
        });
    }
    let e = e as usize;
    let q = q as usize % e;

    // all powers q^0, q^1, ... until the first repeat
    let mut is_power = vec![false; e];
    let mut x = 1 % e;
    while !is_power[x] {
        is_power[x] = true;
        x = x * q % e;
    }
    let powers: Vec<usize> = (0..e).filter(|&r| is_power[r]).collect();

    let mut reach = is_power.clone();
    for t in 1..=e as u64 {
        if reach[0] {
            return Ok(t);
        }
        let mut next = vec![false; e];
        for r in 0..e {
            if reach[r] {
                for &a in &powers {
                    next[(r + a) % e] = true;
                }
            }
        }
        reach = next;
    }
    unreachable!("e copies of q^0 always sum to 0")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        assert_eq!(naive_m(4, 7).unwrap(), 3);
        assert_eq!(naive_m(2, 5).unwrap(), 2);
        assert_eq!(naive_m(3, 8).unwrap(), 4);
        assert_eq!(naive_m(1, 6).unwrap(), 6);
        assert_eq!(naive_m(5, 1).unwrap(), 1);
        assert!(naive_m(2, 4).is_err());
    }
}
