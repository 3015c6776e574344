use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Polynomial with integer coefficients, lowest degree first, no trailing
/// zeros. The zero polynomial has no coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn new(coeffs: Vec<BigInt>) -> Self {
        let mut p = Self { coeffs };
        p.trim();
        p
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_i64(&[1])
    }

    /// `X^k`.
    pub fn monomial(k: usize) -> Self {
        let mut c = vec![BigInt::zero(); k + 1];
        c[k] = BigInt::one();
        Self { coeffs: c }
    }

    /// `X^{i_1} + … + X^{i_m}`.
    pub fn from_exponents(exps: &[u64]) -> Self {
        let deg = exps.iter().copied().max().unwrap_or(0) as usize;
        let mut c = vec![BigInt::zero(); deg + 1];
        for &i in exps {
            c[i as usize] += 1;
        }
        Self::new(c)
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn add(&self, other: &Self) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        let get = |p: &Self, i: usize| p.coeffs.get(i).cloned().unwrap_or_default();
        Self::new((0..len).map(|i| get(self, i) + get(other, i)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        let get = |p: &Self, i: usize| p.coeffs.get(i).cloned().unwrap_or_default();
        Self::new((0..len).map(|i| get(self, i) - get(other, i)).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut c = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        Self::new(c)
    }

    /// Quotient and remainder by a monic divisor.
    pub fn div_rem_monic(&self, divisor: &Self) -> (Self, Self) {
        let dd = divisor.degree().expect("division by zero polynomial");
        assert!(divisor.leading().unwrap().is_one(), "divisor must be monic");
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut quot = vec![BigInt::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = std::mem::take(&mut rem[k + dd]);
            if c.is_zero() {
                continue;
            }
            for (j, dc) in divisor.coeffs[..dd].iter().enumerate() {
                rem[k + j] -= &c * dc;
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (Self::new(quot), Self::new(rem))
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    /// Value at `x` reduced into `0..m`.
    pub fn eval_mod(&self, x: u64, m: u64) -> u64 {
        let m_big = BigInt::from(m);
        let mut acc: u128 = 0;
        for c in self.coeffs.iter().rev() {
            let c = c.mod_floor(&m_big);
            let c = u64::try_from(c).expect("reduced coefficient fits");
            acc = (acc * x as u128 + c as u128) % m as u128;
        }
        acc as u64
    }

    /// gcd of the coefficients (0 for the zero polynomial).
    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    pub fn to_rational(&self) -> Vec<BigRational> {
        self.coeffs
            .iter()
            .map(|c| BigRational::from_integer(c.clone()))
            .collect()
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let abs = c.abs();
            match (first, neg) {
                (true, true) => f.write_str("-")?,
                (true, false) => {}
                (false, true) => f.write_str(" - ")?,
                (false, false) => f.write_str(" + ")?,
            }
            first = false;
            let show_coeff = i == 0 || !abs.is_one();
            if show_coeff {
                write!(f, "{abs}")?;
            }
            match i {
                0 => {}
                1 => f.write_str("X")?,
                _ => write!(f, "X^{i}")?,
            }
        }
        Ok(())
    }
}

/// Remainder and quotient over the rationals, lowest degree first.
pub(crate) fn rat_div_rem(
    a: &[BigRational],
    b: &[BigRational],
) -> (Vec<BigRational>, Vec<BigRational>) {
    let db = b.len() - 1;
    let lead = &b[db];
    let mut rem = a.to_vec();
    if rem.len() <= db {
        return (Vec::new(), rem);
    }
    let mut quot = vec![BigRational::zero(); rem.len() - db];
    for k in (0..quot.len()).rev() {
        let c = &rem[k + db] / lead;
        if !c.is_zero() {
            for (j, bc) in b.iter().enumerate() {
                rem[k + j] -= &c * bc;
            }
        }
        quot[k] = c;
    }
    rem.truncate(db);
    rat_trim(&mut rem);
    rat_trim(&mut quot);
    (quot, rem)
}

pub(crate) fn rat_trim(p: &mut Vec<BigRational>) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

pub(crate) fn rat_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut c = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            c[i + j] += x * y;
        }
    }
    rat_trim(&mut c);
    c
}

pub(crate) fn rat_sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let len = a.len().max(b.len());
    let z = BigRational::zero();
    let mut c: Vec<BigRational> = (0..len)
        .map(|i| a.get(i).unwrap_or(&z) - b.get(i).unwrap_or(&z))
        .collect();
    rat_trim(&mut c);
    c
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic() {
        let a = IntPolynomial::from_i64(&[1, 1]);
        let b = IntPolynomial::from_i64(&[-1, 1]);
        assert_eq!(a.mul(&b), IntPolynomial::from_i64(&[-1, 0, 1]));
        assert_eq!(a.add(&b), IntPolynomial::from_i64(&[0, 2]));
        assert_eq!(a.sub(&a), IntPolynomial::zero());
        let (q, r) = IntPolynomial::from_i64(&[-1, 0, 0, 1]).div_rem_monic(&b);
        assert_eq!(q, IntPolynomial::from_i64(&[1, 1, 1]));
        assert!(r.is_zero());
        assert_eq!(a.eval(&BigInt::from(4)), BigInt::from(5));
        assert_eq!(IntPolynomial::from_i64(&[1, 1, 1]).eval_mod(4, 7), 0);
    }

    #[test]
    fn display() {
        assert_eq!(
            IntPolynomial::from_i64(&[1, -1, 1]).to_string(),
            "X^2 - X + 1"
        );
        assert_eq!(IntPolynomial::from_i64(&[-1, 1]).to_string(), "X - 1");
        assert_eq!(IntPolynomial::from_i64(&[0, -2]).to_string(), "-2X");
        assert_eq!(IntPolynomial::zero().to_string(), "0");
    }

    #[test]
    fn exponents() {
        let g = IntPolynomial::from_exponents(&[0, 0, 2]);
        assert_eq!(g, IntPolynomial::from_i64(&[2, 0, 1]));
    }
}
