//! `m(q, p^k)` for odd primes `p`.
//!
//! Two views of a prime-power tower:
//!
//! * [`fixed_base_tower`] keeps `q` fixed and lets `k` grow. The order of
//!   `q` stays at `n = ord_p(q)` up to level `w = v_p(q^n - 1)` and is
//!   multiplied by `p` at each level after that, while `m` is nondecreasing
//!   and constant from level `w` on.
//! * [`tower_sequence`] fixes the order `n | p - 1` instead and picks a fresh
//!   generator of the order-`n` subgroup at each level. The sequence climbs
//!   to the smallest prime divisor `r` of `n` and stays there.
//!
//! The power-of-two case has a closed form ([`crate::two_power_m`]) and is not
//! handled here.

use serde::Serialize;

use crate::engine::{m_of_subgroup, MResult};
use crate::error::{domain, Error, Result};
use crate::modular::{
    checked_prime_power, element_of_order, gcd, is_prime, mul_order, p_adic_w, primes_up_to,
    smallest_prime_divisor, unit_subgroup,
};

/// Towers stop before any modulus above this.
pub const DEFAULT_MODULUS_CAP: u64 = 1_000_000_000_000;

fn require_odd_prime(p: u64) -> Result<()> {
    if p == 2 || !is_prime(p) {
        return Err(domain(format!("{p} is not an odd prime")));
    }
    Ok(())
}

fn m_value(q: u64, e: u64) -> Result<MResult> {
    m_of_subgroup(&unit_subgroup(q, e)?)
}

/// Splits `ord_{p^k}(q) = p^i * d` with `d | p - 1`.
pub fn ord_factorization(q: u64, p: u64, k: u32) -> Result<(u32, u64)> {
    require_odd_prime(p)?;
    if q.is_multiple_of(p) {
        return Err(domain(format!("{p} divides q = {q}")));
    }
    let mut d = mul_order(q, checked_prime_power(p, k)?)?;
    let mut i = 0;
    while d % p == 0 {
        d /= p;
        i += 1;
    }
    debug_assert_eq!((p - 1) % d, 0);
    Ok((i, d))
}

/// When `ord_{p^k}(q) = p^i d` with `i > 0`, checks numerically that
/// `ord_{p^{k-1}}(q) = p^{i-1} d` and `m(q, p^k) = m(q, p^{k-1})`.
pub fn check_prop9(q: u64, p: u64, k: u32) -> Result<bool> {
    let (i, d) = ord_factorization(q, p, k)?;
    if i == 0 || k < 2 {
        return Err(domain(format!(
            "ord_{{{p}^{k}}}({q}) is not divisible by {p}; nothing to reduce"
        )));
    }
    let lower = checked_prime_power(p, k - 1)?;
    let ord_drops = mul_order(q, lower)? == p.pow(i - 1) * d;
    let upper = checked_prime_power(p, k)?;
    let m_equal = m_value(q, upper)?.value == m_value(q, lower)?.value;
    Ok(ord_drops && m_equal)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FixedBaseEntry {
    pub k: u32,
    pub modulus: u64,
    /// `ord = p^i * d`.
    pub i: u32,
    pub d: u64,
    pub ord: u64,
    pub m: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FixedBaseTower {
    pub q: u64,
    pub p: u64,
    /// `ord_p(q)`.
    pub n: u64,
    /// `v_p(q^n - 1)`; `None` only for `q = 1`.
    pub w: Option<u32>,
    pub entries: Vec<FixedBaseEntry>,
}

impl FixedBaseTower {
    /// `ord` equals `n` up to level `w` and `n * p^(k-w)` beyond.
    pub fn order_pattern_holds(&self) -> bool {
        self.entries.iter().all(|en| match self.w {
            Some(w) if en.k > w => en.ord == self.n * self.p.pow(en.k - w),
            _ => en.ord == self.n,
        })
    }

    /// `m` is nondecreasing and constant from level `w` on.
    pub fn m_stabilizes(&self) -> bool {
        let nondecreasing = self.entries.windows(2).all(|w| w[0].m <= w[1].m);
        let stable = match self.w {
            Some(w) => {
                let tail: Vec<u64> = self
                    .entries
                    .iter()
                    .filter(|en| en.k >= w)
                    .map(|en| en.m)
                    .collect();
                tail.windows(2).all(|x| x[0] == x[1])
            }
            None => true,
        };
        nondecreasing && stable
    }

    /// Value of `m` from level `w` on, if the table reaches `w`.
    pub fn limit(&self) -> Option<u64> {
        let w = self.w?;
        self.entries.iter().find(|en| en.k == w).map(|en| en.m)
    }
}

pub fn fixed_base_tower(q: u64, p: u64, k_max: u32) -> Result<FixedBaseTower> {
    require_odd_prime(p)?;
    if q == 0 || q.is_multiple_of(p) {
        return Err(domain(format!(
            "q = {q} must be a positive non-multiple of {p}"
        )));
    }
    let n = mul_order(q, p)?;
    let w = if q == 1 {
        None
    } else {
        Some(p_adic_w(q, n, p)?)
    };
    let entries = (1..=k_max)
        .map(|k| {
            let modulus = checked_prime_power(p, k)?;
            let (i, d) = ord_factorization(q, p, k)?;
            Ok(FixedBaseEntry {
                k,
                modulus,
                i,
                d,
                ord: p.pow(i) * d,
                m: m_value(q, modulus)?.value,
            })
        })
        .collect::<Result<_>>()?;
    Ok(FixedBaseTower {
        q,
        p,
        n,
        w,
        entries,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TowerLevel {
    pub k: u32,
    pub modulus: u64,
    /// An element of order exactly `n` modulo `p^k`.
    pub generator: u64,
    pub ord: u64,
    pub m: u64,
    pub witness: Vec<u64>,
    /// `v_p(generator^n - 1)`, at least `k`.
    pub w: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TowerReport {
    pub p: u64,
    pub n: u64,
    /// Smallest prime divisor of `n`; the value the tower converges to.
    pub r: u64,
    pub levels: Vec<TowerLevel>,
    pub limit: u64,
    /// First level with `m = r`.
    pub k_hit: Option<u32>,
    /// Levels where `m` went down relative to the previous level. Not
    /// expected to happen; recorded rather than rejected.
    pub decreases: Vec<u32>,
}

impl TowerReport {
    pub fn sequence(&self) -> Vec<u64> {
        self.levels.iter().map(|l| l.m).collect()
    }
}

/// The sequence `m(Q_k, p^k)` for `k = 1, 2, …` with `ord_{p^k}(Q_k) = n`,
/// stopping at the first level where `m = r`, at `k_max`, or before the
/// modulus exceeds `modulus_cap`.
pub fn tower_sequence_capped(p: u64, n: u64, k_max: u32, modulus_cap: u64) -> Result<TowerReport> {
    require_odd_prime(p)?;
    if n <= 1 || !(p - 1).is_multiple_of(n) {
        return Err(domain(format!(
            "n = {n} must be a divisor of p - 1 = {} other than 1",
            p - 1
        )));
    }
    let r = smallest_prime_divisor(n)?;
    let mut levels: Vec<TowerLevel> = Vec::new();
    let mut k_hit = None;
    let mut decreases = Vec::new();
    for k in 1..=k_max {
        let modulus = match p.checked_pow(k) {
            Some(pk) if pk <= modulus_cap => pk,
            _ => break,
        };
        let generator = element_of_order(p, k, n)?;
        let h = unit_subgroup(generator, modulus)?;
        let res = m_of_subgroup(&h)?;
        if levels.last().is_some_and(|prev| res.value < prev.m) {
            decreases.push(k);
        }
        levels.push(TowerLevel {
            k,
            modulus,
            generator,
            ord: h.order,
            m: res.value,
            witness: res.witness,
            w: p_adic_w(generator, n, p)?,
        });
        if res.value == r {
            k_hit = Some(k);
            break;
        }
    }
    Ok(TowerReport {
        p,
        n,
        r,
        levels,
        limit: r,
        k_hit,
        decreases,
    })
}

pub fn tower_sequence(p: u64, n: u64, k_max: u32) -> Result<TowerReport> {
    tower_sequence_capped(p, n, k_max, DEFAULT_MODULUS_CAP)
}

/// Least level `K <= k_cap` with an order-`n` element `Q` modulo `p^K` and
/// `m(Q, p^K) = r`. Such a level always exists, but no bound on it is known,
/// so hitting the cap is an error.
pub fn prop10_search(p: u64, n: u64, k_cap: u32) -> Result<(u32, u64)> {
    let report = tower_sequence(p, n, k_cap)?;
    match report.k_hit {
        Some(k) => Ok((k, report.levels[k as usize - 1].generator)),
        None => Err(Error::NotFoundWithinCap {
            p,
            n,
            target: report.r,
            cap: k_cap,
        }),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TableRow {
    pub p: u64,
    pub n: u64,
    pub k: u32,
    pub modulus: u64,
    pub generator: u64,
    pub ord: u64,
    pub m: u64,
    pub w: u32,
    pub limit: u64,
}

impl TableRow {
    pub const CSV_HEADER: &'static str = "p,n,k,modulus,generator,ord,m,w,limit";

    pub fn csv(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{}",
            self.p,
            self.n,
            self.k,
            self.modulus,
            self.generator,
            self.ord,
            self.m,
            self.w,
            self.limit
        )
    }
}

pub fn tower_rows(report: &TowerReport) -> Vec<TableRow> {
    report
        .levels
        .iter()
        .map(|l| TableRow {
            p: report.p,
            n: report.n,
            k: l.k,
            modulus: l.modulus,
            generator: l.generator,
            ord: l.ord,
            m: l.m,
            w: l.w,
            limit: report.limit,
        })
        .collect()
}

/// Tower rows for every prime `p <= p_max` with `n | p - 1`, each tower run
/// until it reaches `r` (beyond which the value is constant) or `k_cap`.
pub fn order_table(n: u64, p_max: u64, k_cap: u32) -> Result<Vec<TableRow>> {
    let mut rows = Vec::new();
    for p in primes_up_to(p_max) {
        if p == 2 || (p - 1) % n != 0 {
            continue;
        }
        rows.extend(tower_rows(&tower_sequence(p, n, k_cap)?));
    }
    Ok(rows)
}

pub fn prop14_table(p_max: u64, k_cap: u32) -> Result<Vec<TableRow>> {
    order_table(5, p_max, k_cap)
}

pub fn prop15_table(p_max: u64, k_cap: u32) -> Result<Vec<TableRow>> {
    order_table(7, p_max, k_cap)
}

/// The value of `m(q, p^k)` for `ord_{p^k}(q) = 5`.
pub fn prop14_expected(p: u64, k: u32) -> u64 {
    match (p, k) {
        (11, 1) => 3,
        (61, 1) => 4,
        _ => 5,
    }
}

pub const PROP15_EXCEPTIONS: &[(u64, &[u64])] = &[
    (3, &[43]),
    (4, &[29, 71, 547]),
    (5, &[113, 197, 421, 463]),
    (6, &[211, 379, 449, 757, 2689]),
];

/// The value of `m(q, p^k)` for `ord_{p^k}(q) = 7`.
pub fn prop15_expected(p: u64, k: u32) -> u64 {
    if k == 1 {
        for &(m, ps) in PROP15_EXCEPTIONS {
            if ps.contains(&p) {
                return m;
            }
        }
    }
    7
}

/// Published tower sequences for prime orders: `(n, primes, sequence)`.
pub const PRIME_ORDER_SEQUENCES: &[(u64, &[u64], &[u64])] = &[
    (11, &[23], &[3, 5, 9, 9, 11]),
    (11, &[67], &[4, 8, 11]),
    (11, &[89], &[4, 9, 11]),
    (11, &[199], &[6, 11]),
    (11, &[353, 397], &[5, 11]),
    (13, &[53], &[3, 7, 12, 13]),
    (13, &[79, 157], &[4, 8, 12, 13]),
    (13, &[131], &[4, 8, 13]),
    (13, &[313], &[5, 10, 13]),
    (13, &[521], &[7, 13]),
    (13, &[547, 677, 937], &[5, 13]),
    (13, &[911], &[6, 13]),
    (17, &[239], &[3, 9, 15, 17]),
    (17, &[307], &[4, 9, 14, 17]),
    (17, &[409], &[5, 10, 15, 17]),
    (17, &[613], &[5, 10, 17]),
    (17, &[919], &[5, 12, 17]),
    (17, &[953], &[4, 11, 17]),
    (19, &[229], &[5, 8, 11, 19]),
    (19, &[571], &[4, 9, 16, 19]),
    (19, &[761], &[5, 7, 17, 19]),
];

/// Published tower sequences for composite orders: `(p, n, sequence)`.
pub const COMPOSITE_ORDER_SEQUENCES: &[(u64, u64, &[u64])] = &[
    // smallest prime divisor 5: (m(q,p), m(q,p^2)) = (3, 5)
    (71, 35, &[3, 5]),
    (101, 25, &[3, 5]),
    (131, 65, &[3, 5]),
    (211, 35, &[3, 5]),
    (281, 35, &[3, 5]),
    (521, 65, &[3, 5]),
    (571, 95, &[3, 5]),
    (631, 35, &[3, 5]),
    (911, 35, &[3, 5]),
    // (4, 5)
    (421, 35, &[4, 5]),
    (491, 35, &[4, 5]),
    (701, 35, &[4, 5]),
    (761, 95, &[4, 5]),
    (911, 65, &[4, 5]),
    (1051, 35, &[4, 5]),
    (1471, 35, &[4, 5]),
    (2311, 35, &[4, 5]),
    (2521, 35, &[4, 5]),
    (2591, 35, &[4, 5]),
    (2731, 35, &[4, 5]),
    (3221, 35, &[4, 5]),
    (3361, 35, &[4, 5]),
    (3571, 35, &[4, 5]),
    (3851, 35, &[4, 5]),
    // m(q, p) = 5 already
    (1151, 25, &[5]),
    (1201, 25, &[5]),
    (1301, 25, &[5]),
    (1801, 25, &[5]),
    (2381, 35, &[5]),
    (2801, 35, &[5]),
    (2861, 55, &[5]),
    (3011, 35, &[5]),
    // smallest prime divisor 7
    (239, 119, &[3, 4, 6, 7]),
    (547, 91, &[3, 4, 7]),
    (911, 91, &[4, 6, 7]),
];

/// `m(q, p^k)` depends only on `p^k` and the order of `q`: evaluates `m` for
/// every element of order `ord` (up to `sample` of them) and returns the
/// distinct values seen.
pub fn m_values_for_order(p: u64, k: u32, ord: u64, sample: usize) -> Result<Vec<u64>> {
    let pk = checked_prime_power(p, k)?;
    let base = element_of_order(p, k, ord)?;
    let h = unit_subgroup(base, pk)?;
    let mut seen = Vec::new();
    for (i, &x) in h.powers().iter().enumerate().skip(1).take(sample.max(1)) {
        if gcd(i as u64, ord) != 1 {
            continue;
        }
        let v = m_value(x, pk)?.value;
        if !seen.contains(&v) {
            seen.push(v);
        }
    }
    if ord == 1 {
        seen.push(m_value(1, pk)?.value);
    }
    Ok(seen)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_split() {
        assert_eq!(ord_factorization(9, 11, 3).unwrap(), (1, 5));
        assert_eq!(ord_factorization(9, 11, 1).unwrap(), (0, 5));
        assert_eq!(ord_factorization(1, 13, 4).unwrap(), (0, 1));
        assert!(ord_factorization(22, 11, 2).is_err());
    }

    #[test]
    fn prop9_examples() {
        assert!(check_prop9(9, 11, 3).unwrap());
        assert!(check_prop9(9, 11, 4).unwrap());
        assert!(check_prop9(9, 11, 2).is_err());
    }

    #[test]
    fn nine_mod_powers_of_eleven() {
        let t = fixed_base_tower(9, 11, 4).unwrap();
        let ms: Vec<u64> = t.entries.iter().map(|e| e.m).collect();
        assert_eq!(ms, vec![3, 5, 5, 5]);
        assert_eq!(t.w, Some(2));
        assert_eq!(t.limit(), Some(5));
        assert!(t.order_pattern_holds());
        assert!(t.m_stabilizes());
    }

    #[test]
    fn base_congruent_to_one() {
        // m(q, p^k) = gcd(p^k, q - 1) when q ≡ 1 (mod p)
        for q in [12u64, 34, 122, 243] {
            let t = fixed_base_tower(q, 11, 3).unwrap();
            for en in &t.entries {
                assert_eq!(en.m, gcd(en.modulus, q - 1), "q={q} k={}", en.k);
            }
            assert!(t.order_pattern_holds());
        }
    }

    #[test]
    fn two_mod_23() {
        let t = fixed_base_tower(2, 23, 2).unwrap();
        assert_eq!(t.entries[0].m, 3);
        assert_eq!(t.w, Some(1));
        assert_eq!(t.entries[1].ord, 11 * 23);
    }

    #[test]
    fn towers() {
        assert_eq!(
            tower_sequence(23, 11, 5).unwrap().sequence(),
            vec![3, 5, 9, 9, 11]
        );
        assert_eq!(
            tower_sequence(53, 13, 4).unwrap().sequence(),
            vec![3, 7, 12, 13]
        );
        let t = tower_sequence(23, 11, 3).unwrap();
        assert_eq!(t.sequence(), vec![3, 5, 9]);
        assert_eq!(t.k_hit, None);
        for l in &t.levels {
            assert_eq!(mul_order(l.generator, l.modulus).unwrap(), 11);
            assert!(l.w >= l.k);
            assert!(crate::verify_witness(
                l.generator,
                l.modulus,
                &l.witness,
                l.m
            ));
        }
        assert!(tower_sequence(23, 4, 3).is_err());
        assert!(tower_sequence(23, 1, 3).is_err());
    }

    #[test]
    fn prop10_examples() {
        assert_eq!(prop10_search(11, 5, 3).unwrap().0, 2);
        assert_eq!(prop10_search(61, 5, 3).unwrap().0, 2);
        assert_eq!(prop10_search(23, 11, 6).unwrap().0, 5);
        assert!(matches!(
            prop10_search(23, 11, 4),
            Err(Error::NotFoundWithinCap { target: 11, .. })
        ));
    }

    #[test]
    fn m_depends_only_on_order() {
        for (p, k) in [(11u64, 2u32), (13, 2), (31, 1), (7, 3)] {
            let phi = p.pow(k - 1) * (p - 1);
            for ord in crate::modular::divisors(phi) {
                assert_eq!(m_values_for_order(p, k, ord, 12).unwrap().len(), 1);
            }
        }
    }
}
