//! Exact modular arithmetic and the multiplicative-order machinery.
//!
//! Residues are `u64` values kept in `[0, e)`. Products go through `u128`
//! whenever the modulus does not fit in 32 bits, so any modulus below
//! `2^64` is safe.

use crate::error::{domain, Error, Result};

pub fn gcd(a: u64, b: u64) -> u64 {
    num_integer::gcd(a, b)
}

pub fn lcm(a: u64, b: u64) -> u64 {
    num_integer::lcm(a, b)
}

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    if m <= u32::MAX as u64 {
        (a * b) % m
    } else {
        ((a as u128 * b as u128) % m as u128) as u64
    }
}

#[inline]
pub fn add_mod(a: u64, b: u64, m: u64) -> u64 {
    let s = a as u128 + b as u128;
    let m = m as u128;
    (if s >= m { s - m } else { s }) as u64
}

pub fn pow_mod(base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut base = base % m;
    let mut acc = 1u64;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Prime factorization by trial division, ascending primes.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    if n <= 1 {
        return out;
    }
    let mut push = |p: u64, n: &mut u64| {
        let mut k = 0;
        while (*n).is_multiple_of(p) {
            *n /= p;
            k += 1;
        }
        if k > 0 {
            out.push((p, k));
        }
    };
    push(2, &mut n);
    push(3, &mut n);
    let mut p = 5u64;
    while p.saturating_mul(p) <= n {
        push(p, &mut n);
        push(p + 2, &mut n);
        p += 6;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Deterministic Miller-Rabin for all 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const SMALL: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &p in &SMALL {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &SMALL {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Sieve of Eratosthenes; all primes `<= limit`.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let limit = limit as usize;
    let mut composite = vec![false; limit + 1];
    let mut primes = Vec::new();
    for i in 2..=limit {
        if !composite[i] {
            primes.push(i as u64);
            let mut j = i * i;
            while j <= limit {
                composite[j] = true;
                j += i;
            }
        }
    }
    primes
}

pub fn divisors(n: u64) -> Vec<u64> {
    let mut divs = vec![1u64];
    for (p, k) in factorize(n) {
        let len = divs.len();
        let mut pk = 1;
        for _ in 0..k {
            pk *= p;
            for i in 0..len {
                divs.push(divs[i] * pk);
            }
        }
    }
    divs.sort_unstable();
    divs
}

pub fn euler_phi(n: u64) -> u64 {
    factorize(n)
        .into_iter()
        .fold(n, |acc, (p, _)| acc / p * (p - 1))
}

/// Product of the distinct primes dividing `n`; `rad(1) = 1`.
pub fn rad(n: u64) -> u64 {
    factorize(n).into_iter().map(|(p, _)| p).product()
}

pub fn smallest_prime_divisor(n: u64) -> Result<u64> {
    if n < 2 {
        return Err(domain(format!(
            "smallest prime divisor of {n} is undefined"
        )));
    }
    Ok(factorize(n)[0].0)
}

pub fn checked_prime_power(p: u64, k: u32) -> Result<u64> {
    p.checked_pow(k)
        .ok_or_else(|| domain(format!("{p}^{k} does not fit in 64 bits")))
}

fn require_coprime(q: u64, e: u64) -> Result<()> {
    let g = gcd(q, e);
    if g != 1 {
        return Err(Error::NotCoprime { q, e, gcd: g });
    }
    Ok(())
}

/// Multiplicative order of `q` modulo `e`, found by stripping prime factors
/// from the group exponent `phi(e)`.
pub fn mul_order(q: u64, e: u64) -> Result<u64> {
    if e == 0 {
        return Err(domain("modulus must be positive"));
    }
    require_coprime(q, e)?;
    if e == 1 {
        return Ok(1);
    }
    let q = q % e;
    let mut t = euler_phi(e);
    for (l, _) in factorize(t) {
        while t.is_multiple_of(l) && pow_mod(q, t / l, e) == 1 {
            t /= l;
        }
    }
    Ok(t)
}

/// A coprime pair `(q, e)` with its order `n` and `e1 = gcd(e, q - 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct PowerSumInstance {
    /// The base as supplied; arithmetic uses `q % e`.
    pub q: u64,
    pub e: u64,
    pub n: u64,
    pub e1: u64,
}

impl PowerSumInstance {
    pub fn new(q: u64, e: u64) -> Result<Self> {
        if q == 0 || e == 0 {
            return Err(domain("q and e must be positive"));
        }
        let n = mul_order(q, e)?;
        let e1 = gcd(e, q - 1);
        Ok(Self { q, e, n, e1 })
    }

    pub fn q_reduced(&self) -> u64 {
        self.q % self.e
    }
}

/// The cyclic subgroup `<g>` of the unit group modulo `modulus`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnitSubgroup {
    pub modulus: u64,
    /// Sorted ascending.
    pub elements: Vec<u64>,
    pub order: u64,
    pub generator: u64,
    /// `powers[i] = generator^i mod modulus`.
    powers: Vec<u64>,
    /// Exponent of `elements[j]` with respect to `generator`.
    sorted_exponents: Vec<u32>,
}

impl UnitSubgroup {
    fn from_powers(modulus: u64, generator: u64, powers: Vec<u64>) -> Self {
        let mut idx: Vec<(u64, u32)> = powers
            .iter()
            .enumerate()
            .map(|(i, &x)| (x, i as u32))
            .collect();
        idx.sort_unstable();
        Self {
            modulus,
            order: powers.len() as u64,
            generator,
            elements: idx.iter().map(|&(x, _)| x).collect(),
            sorted_exponents: idx.iter().map(|&(_, i)| i).collect(),
            powers,
        }
    }

    pub fn powers(&self) -> &[u64] {
        &self.powers
    }

    pub fn contains(&self, x: u64) -> bool {
        self.elements.binary_search(&(x % self.modulus)).is_ok()
    }

    /// Discrete logarithm of `x` to base `generator`, if `x` lies in the subgroup.
    pub fn exponent_of(&self, x: u64) -> Option<u64> {
        self.elements
            .binary_search(&(x % self.modulus))
            .ok()
            .map(|j| self.sorted_exponents[j] as u64)
    }

    /// Smallest residue that generates the same subgroup. Two subgroups of
    /// the same modulus are equal exactly when these agree.
    pub fn canonical_generator(&self) -> u64 {
        let n = self.order;
        self.elements
            .iter()
            .zip(&self.sorted_exponents)
            .find(|&(_, &i)| gcd(i as u64, n) == 1)
            .map(|(&x, _)| x)
            .expect("the generator itself has a coprime exponent")
    }
}

pub fn unit_subgroup(q: u64, e: u64) -> Result<UnitSubgroup> {
    if e == 0 {
        return Err(domain("modulus must be positive"));
    }
    require_coprime(q, e)?;
    let g = q % e;
    let one = 1 % e;
    let mut powers = vec![one];
    let mut x = g;
    while x != one {
        powers.push(x);
        x = mul_mod(x, g, e);
    }
    Ok(UnitSubgroup::from_powers(e, g, powers))
}

fn require_odd_prime(p: u64) -> Result<()> {
    if p == 2 || !is_prime(p) {
        return Err(domain(format!("{p} is not an odd prime")));
    }
    Ok(())
}

/// `v_p(q^n - 1)`, evaluated one prime power at a time so `q^n - 1` is never
/// formed.
pub fn p_adic_w(q: u64, n: u64, p: u64) -> Result<u32> {
    require_odd_prime(p)?;
    if q.is_multiple_of(p) {
        return Err(domain(format!("{p} divides q = {q}")));
    }
    if n == 0 {
        return Err(domain("exponent n must be positive"));
    }
    if q == 1 {
        return Err(domain("q^n - 1 = 0 has infinite valuation"));
    }
    if pow_mod(q, n, p) != 1 {
        return Err(domain(format!("{p} does not divide {q}^{n} - 1")));
    }
    let mut w = 1;
    let mut pk = p;
    loop {
        let next = pk
            .checked_mul(p)
            .ok_or_else(|| domain(format!("v_{p}({q}^{n} - 1) exceeds the 64-bit range")))?;
        if pow_mod(q, n, next) != 1 {
            return Ok(w);
        }
        w += 1;
        pk = next;
    }
}

/// Smallest generator of `(Z/p^k)^x`.
pub fn find_primitive_root(p: u64, k: u32) -> Result<u64> {
    require_odd_prime(p)?;
    if k == 0 {
        return Err(domain("k must be positive"));
    }
    checked_prime_power(p, k)?;
    let factors: Vec<u64> = factorize(p - 1).into_iter().map(|(l, _)| l).collect();
    let p2 = p.checked_mul(p);
    (2u64..)
        .filter(|g| g % p != 0)
        .find(|&g| {
            let root_mod_p = factors.iter().all(|&l| pow_mod(g, (p - 1) / l, p) != 1);
            // A primitive root mod p lifts to every p^k iff it is one mod p^2.
            root_mod_p && (k == 1 || pow_mod(g, p - 1, p2.expect("p^k fits")) != 1)
        })
        .ok_or_else(|| domain("no primitive root found"))
}

/// A residue of exact order `n` modulo `p^k`.
pub fn element_of_order(p: u64, k: u32, n: u64) -> Result<u64> {
    let pk = checked_prime_power(p, k)?;
    let g = find_primitive_root(p, k)?;
    let phi = pk / p * (p - 1);
    if n == 0 || !phi.is_multiple_of(n) {
        return Err(domain(format!("{n} does not divide phi({p}^{k}) = {phi}")));
    }
    Ok(pow_mod(g, phi / n, pk))
}
