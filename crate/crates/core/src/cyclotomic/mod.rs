//! Cyclotomic polynomials, Bézout denominators and the finite exception sets
//! they produce.
//!
//! If `ord_e(q) = n` is replaced by `e | Φ_n(q)` and a sum of `m` powers of
//! `q` vanishes mod `e`, then `e` divides the least positive integer in the
//! ideal `(g, Φ_n)` of `Z[X]`, where `g` is the matching sum of monomials.
//! For `m < n / (n - φ(n))` only finitely many `g` need to be considered,
//! which makes the set of such `e` finite and computable.

mod exceptions;
mod poly;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{One, ToPrimitive, Zero};

pub use exceptions::{
    corollary13_exceptions, prop11_candidates, CandidatePool, ExceptionEntry, ExceptionSet,
};
pub use poly::IntPolynomial;

use crate::error::{domain, Error, Result};
use crate::modular::{divisors, euler_phi};
use poly::{rat_div_rem, rat_mul, rat_sub, rat_trim};

/// `Φ_n`, by dividing `X^n - 1` by `Φ_d` for every proper divisor `d`.
pub fn cyclotomic(n: u64) -> Result<IntPolynomial> {
    if n == 0 {
        return Err(domain("n must be positive"));
    }
    let divs = divisors(n);
    let mut table: Vec<(u64, IntPolynomial)> = Vec::with_capacity(divs.len());
    for &d in &divs {
        let mut p = IntPolynomial::monomial(d as usize).sub(&IntPolynomial::one());
        for (_, f) in table.iter().filter(|(c, _)| d % c == 0) {
            let (q, r) = p.div_rem_monic(f);
            debug_assert!(r.is_zero());
            p = q;
        }
        table.push((d, p));
    }
    Ok(table.pop().unwrap().1)
}

/// `n / (n - φ(n))` in lowest terms.
pub fn threshold(n: u64) -> Result<Ratio<u64>> {
    if n < 2 {
        return Err(domain("threshold needs n >= 2"));
    }
    Ok(Ratio::new(n, n - euler_phi(n)))
}

/// Largest integer `m` with `m < threshold(n)`.
pub fn max_exceptional_m(n: u64) -> Result<u64> {
    let t = threshold(n)?;
    Ok((t.numer() - 1) / t.denom())
}

fn lcm_denominators(p: &[BigRational]) -> BigInt {
    p.iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()))
}

/// Least positive `d` such that `d = A g + B Φ_n` with `A, B` integer
/// polynomials. Computed by the extended Euclidean algorithm over the
/// rationals; `d` is the common denominator of the Bézout coefficients.
pub fn bezout_denominator(g: &IntPolynomial, n: u64) -> Result<BigInt> {
    if g.is_zero() {
        return Err(Error::DegenerateInput("g is the zero polynomial".into()));
    }
    let phi = cyclotomic(n)?;
    let (a, b) = bezout_coefficients(g, &phi)?;
    Ok(lcm_denominators(&a).lcm(&lcm_denominators(&b)))
}

/// `(a, b)` with `a g + b f = 1`, `deg a < deg f`.
fn bezout_coefficients(
    g: &IntPolynomial,
    f: &IntPolynomial,
) -> Result<(Vec<BigRational>, Vec<BigRational>)> {
    let gr = g.to_rational();
    let fr = f.to_rational();
    let (mut r0, mut r1) = (gr.clone(), fr.clone());
    let (mut s0, mut s1) = (vec![BigRational::one()], Vec::<BigRational>::new());
    while !r1.is_empty() {
        let (q, r) = rat_div_rem(&r0, &r1);
        let s = rat_sub(&s0, &rat_mul(&q, &s1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
    }
    if r0.len() != 1 {
        return Err(Error::DegenerateInput(format!(
            "g = {g} shares a factor with {f}"
        )));
    }
    let inv = BigRational::one() / &r0[0];
    let mut a: Vec<BigRational> = s0.iter().map(|c| c * &inv).collect();
    let (_, a_red) = rat_div_rem(&a, &fr);
    a = a_red;
    rat_trim(&mut a);
    let one_minus = rat_sub(&[BigRational::one()], &rat_mul(&a, &gr));
    let (b, rem) = rat_div_rem(&one_minus, &fr);
    debug_assert!(rem.is_empty());
    Ok((a, b))
}

/// Determinant by fraction-free Gaussian elimination.
pub fn bareiss_det(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !m[i][k].is_zero()) else {
            return BigInt::zero();
        };
        if p != k {
            m.swap(p, k);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
                m[i][j] = v;
            }
            m[i][k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

/// Resultant via the Sylvester matrix.
pub fn resultant(f: &IntPolynomial, g: &IntPolynomial) -> BigInt {
    let (Some(df), Some(dg)) = (f.degree(), g.degree()) else {
        return BigInt::zero();
    };
    let size = df + dg;
    if size == 0 {
        return BigInt::one();
    }
    let mut rows = Vec::with_capacity(size);
    for (shifts, p, d) in [(dg, f, df), (df, g, dg)] {
        for s in 0..shifts {
            let mut row = vec![BigInt::zero(); size];
            for (i, c) in p.coeffs().iter().enumerate() {
                // highest degree first
                row[s + d - i] = c.clone();
            }
            rows.push(row);
        }
    }
    bareiss_det(rows)
}

/// Precomputed reductions of `X^k mod Φ_n` for `k < n`, used to get Bézout
/// denominators of many sums of monomials quickly. Falls back to the
/// rational algorithm when the integer elimination would overflow.
#[derive(Debug, Clone)]
pub struct BezoutContext {
    n: u64,
    phi: usize,
    cyclo: IntPolynomial,
    residues: Vec<Vec<i128>>,
}

impl BezoutContext {
    pub fn new(n: u64) -> Result<Self> {
        let cyclo = cyclotomic(n)?;
        let phi = cyclo.degree().unwrap();
        let mut residues = Vec::with_capacity(n as usize);
        for k in 0..n as usize {
            let (_, r) = IntPolynomial::monomial(k).div_rem_monic(&cyclo);
            let mut v = vec![0i128; phi];
            for (i, c) in r.coeffs().iter().enumerate() {
                v[i] = c.to_i128().ok_or_else(|| domain("Φ_n residue too large"))?;
            }
            residues.push(v);
        }
        Ok(Self {
            n,
            phi,
            cyclo,
            residues,
        })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn phi(&self) -> usize {
        self.phi
    }

    pub fn cyclotomic(&self) -> &IntPolynomial {
        &self.cyclo
    }

    /// Bézout denominator of `sum X^{e_i}` and `Φ_n`.
    pub fn denominator(&self, exps: &[u64]) -> Result<BigInt> {
        match self.denominator_i128(exps) {
            Some(0) => Err(Error::DegenerateInput(format!(
                "Φ_{} divides the sum of X^i over {exps:?}",
                self.n
            ))),
            Some(d) => Ok(BigInt::from(d)),
            None => bezout_denominator(&IntPolynomial::from_exponents(exps), self.n),
        }
    }

    /// `|det M| / gcd(det M, det M · M^{-1} e_0)` where `M` is
    /// multiplication by `g` on `Q[X]/Φ_n`. `Some(0)` means `g ≡ 0`, `None`
    /// means overflow.
    fn denominator_i128(&self, exps: &[u64]) -> Option<i128> {
        let (n, phi) = (self.n as usize, self.phi);
        let mut counts = vec![0i128; n];
        for &i in exps {
            counts[i as usize % n] += 1;
        }
        // augmented matrix [M | e_0], row-major
        let w = phi + 1;
        let mut a = vec![0i128; phi * w];
        for j in 0..phi {
            for (k, &c) in counts.iter().enumerate().filter(|(_, &c)| c != 0) {
                let r = &self.residues[(k + j) % n];
                for i in 0..phi {
                    a[i * w + j] = a[i * w + j].checked_add(c.checked_mul(r[i])?)?;
                }
            }
        }
        a[phi] = 1;

        let mut prev: i128 = 1;
        for k in 0..phi {
            let p = (k..phi).find(|&i| a[i * w + k] != 0);
            let Some(p) = p else { return Some(0) };
            if p != k {
                for j in 0..w {
                    a.swap(p * w + j, k * w + j);
                }
            }
            let akk = a[k * w + k];
            for i in k + 1..phi {
                let aik = a[i * w + k];
                for j in k + 1..w {
                    let v = a[i * w + j]
                        .checked_mul(akk)?
                        .checked_sub(aik.checked_mul(a[k * w + j])?)?;
                    a[i * w + j] = v / prev;
                }
                a[i * w + k] = 0;
            }
            prev = akk;
        }
        let det = a[(phi - 1) * w + phi - 1];
        let mut x = vec![0i128; phi];
        for i in (0..phi).rev() {
            let mut s = det.checked_mul(a[i * w + phi])?;
            for j in i + 1..phi {
                s = s.checked_sub(a[i * w + j].checked_mul(x[j])?)?;
            }
            x[i] = s / a[i * w + i];
        }
        let g = x.iter().fold(det, |g, &v| g.gcd(&v));
        Some((det / g).abs())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modular::{rad, smallest_prime_divisor};
    use num_traits::Signed;
    use proptest::prelude::*;

    #[test]
    fn small_cyclotomics() {
        assert_eq!(cyclotomic(1).unwrap(), IntPolynomial::from_i64(&[-1, 1]));
        assert_eq!(
            cyclotomic(5).unwrap(),
            IntPolynomial::from_i64(&[1, 1, 1, 1, 1])
        );
        assert_eq!(cyclotomic(6).unwrap(), IntPolynomial::from_i64(&[1, -1, 1]));
        assert_eq!(
            cyclotomic(12).unwrap(),
            IntPolynomial::from_i64(&[1, 0, -1, 0, 1])
        );
        // first cyclotomic polynomial with a coefficient outside {-1, 0, 1}
        assert!(cyclotomic(105)
            .unwrap()
            .coeffs()
            .iter()
            .any(|c| c == &BigInt::from(-2)));
    }

    #[test]
    fn product_over_divisors() {
        for n in 1..=120u64 {
            let mut prod = IntPolynomial::one();
            for d in divisors(n) {
                prod = prod.mul(&cyclotomic(d).unwrap());
            }
            let expected = IntPolynomial::monomial(n as usize).sub(&IntPolynomial::one());
            assert_eq!(prod, expected, "n={n}");
            assert_eq!(cyclotomic(n).unwrap().degree(), Some(euler_phi(n) as usize));
        }
    }

    #[test]
    fn thresholds() {
        assert_eq!(threshold(5).unwrap(), Ratio::from_integer(5));
        assert_eq!(threshold(7).unwrap(), Ratio::from_integer(7));
        assert_eq!(threshold(35).unwrap(), Ratio::new(35, 11));
        assert_eq!(threshold(6).unwrap(), Ratio::new(3, 2));
        assert_eq!(max_exceptional_m(6).unwrap(), 1);
        assert_eq!(max_exceptional_m(5).unwrap(), 4);
        assert!(threshold(1).is_err());
    }

    #[test]
    fn threshold_properties() {
        for n in 2..=2000u64 {
            let t = threshold(n).unwrap();
            assert_eq!(t, threshold(rad(n)).unwrap());
            let r = smallest_prime_divisor(n).unwrap();
            assert!(t <= Ratio::from_integer(r));
        }
    }

    #[test]
    fn bezout_examples() {
        let one = IntPolynomial::one();
        assert_eq!(bezout_denominator(&one, 7).unwrap(), BigInt::one());
        let g = IntPolynomial::from_i64(&[1, 1]);
        assert_eq!(bezout_denominator(&g, 5).unwrap(), BigInt::one());
        // Φ_5(1) = 5 and X - 1 generates the prime above 5.
        let g = IntPolynomial::from_i64(&[-1, 1]);
        assert_eq!(bezout_denominator(&g, 5).unwrap(), BigInt::from(5));
        let phi = cyclotomic(5).unwrap();
        assert!(matches!(
            bezout_denominator(&phi, 5),
            Err(Error::DegenerateInput(_))
        ));
    }

    #[test]
    fn bezout_identity_holds() {
        let phi = cyclotomic(7).unwrap();
        let g = IntPolynomial::from_exponents(&[0, 1, 3]);
        let (a, b) = bezout_coefficients(&g, &phi).unwrap();
        let lhs = poly::rat_sub(
            &poly::rat_mul(&a, &g.to_rational()),
            &poly::rat_mul(&b, &phi.to_rational())
                .iter()
                .map(|c| -c)
                .collect::<Vec<_>>(),
        );
        assert_eq!(lhs, vec![BigRational::one()]);
    }

    #[test]
    fn resultants() {
        // Res(X - a, f) = ±f(a)
        let phi = cyclotomic(5).unwrap();
        let lin = IntPolynomial::from_i64(&[-3, 1]);
        assert_eq!(resultant(&lin, &phi).abs(), BigInt::from(121));
        let g = IntPolynomial::from_exponents(&[0, 1, 3]);
        let d = bezout_denominator(&g, 5).unwrap();
        let res = resultant(&g, &phi);
        assert!(!res.is_zero());
        assert!((res % &d).is_zero());
    }

    proptest! {
        #[test]
        fn fast_denominator_agrees(n in prop::sample::select(vec![5u64, 7, 8, 9, 11, 12, 13, 15]),
                                   raw in prop::collection::vec(0u64..16, 1..8)) {
            let ctx = BezoutContext::new(n).unwrap();
            let exps: Vec<u64> = raw.iter().map(|&x| x % ctx.phi() as u64).collect();
            let g = IntPolynomial::from_exponents(&exps);
            let slow = bezout_denominator(&g, n);
            let fast = ctx.denominator(&exps);
            prop_assert_eq!(slow.clone(), fast);
            if let Ok(d) = slow {
                let res = resultant(&g, ctx.cyclotomic());
                prop_assert!((res % d).is_zero());
            }
        }
    }
}
