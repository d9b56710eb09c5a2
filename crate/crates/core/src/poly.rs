//! Dense polynomials with arbitrary-precision integer coefficients.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// `coeffs[k]` is the coefficient of `x^k`; no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPolynomial { coeffs }
    }

    pub fn zero() -> Self {
        IntPolynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        Self::new(vec![c])
    }

    /// `x^k`
    pub fn monomial(k: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); k + 1];
        coeffs[k] = BigInt::one();
        IntPolynomial { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// Generating polynomial of a histogram: `sum counts[k] x^k`.
    pub fn from_histogram<T: Into<BigInt> + Clone>(counts: &[T]) -> Self {
        Self::new(counts.iter().cloned().map(Into::into).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> BigInt {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn derivative(&self) -> Self {
        Self::new(self.coeffs.iter().enumerate().skip(1).map(|(k, c)| c * BigInt::from(k)).collect())
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_rational(&self, x: &BigRational) -> BigRational {
        self.coeffs.iter().rev().fold(BigRational::zero(), |acc, c| acc * x + BigRational::from_integer(c.clone()))
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    /// Multiplies by `x^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![BigInt::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        IntPolynomial { coeffs }
    }

    /// True when every odd power has a zero coefficient.
    pub fn is_even(&self) -> bool {
        self.coeffs.iter().skip(1).step_by(2).all(Zero::is_zero)
    }

    /// Variance of the exponent under the distribution `coeff(k) / p(1)`:
    /// `(p''(1) + p'(1)) / p(1) - (p'(1) / p(1))^2`.
    pub fn exponent_variance(&self) -> BigRational {
        let one = BigInt::one();
        let total = self.eval(&one);
        let d1 = self.derivative();
        let first = d1.eval(&one);
        let second = d1.derivative().eval(&one);
        let mean = BigRational::new(first.clone(), total.clone());
        BigRational::new(second + first, total) - &mean * &mean
    }

    /// Mean of the exponent, `p'(1) / p(1)`.
    pub fn exponent_mean(&self) -> BigRational {
        let one = BigInt::one();
        BigRational::new(self.derivative().eval(&one), self.eval(&one))
    }
}

impl Add for &IntPolynomial {
    type Output = IntPolynomial;

    fn add(self, rhs: &IntPolynomial) -> IntPolynomial {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        IntPolynomial::new((0..len).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for &IntPolynomial {
    type Output = IntPolynomial;

    fn sub(self, rhs: &IntPolynomial) -> IntPolynomial {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        IntPolynomial::new((0..len).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Mul for &IntPolynomial {
    type Output = IntPolynomial;

    fn mul(self, rhs: &IntPolynomial) -> IntPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return IntPolynomial::zero();
        }
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        IntPolynomial::new(coeffs)
    }
}

/// Highest power first, e.g. `x^2 + 4x + 1`.
impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = c.abs();
            let show_coeff = k == 0 || !a.is_one();
            if show_coeff {
                write!(f, "{a}")?;
            }
            match k {
                0 => {}
                1 => f.write_str("x")?,
                _ => write!(f, "x^{k}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display() {
        assert_eq!(IntPolynomial::from_i64(&[1, 4, 1]).to_string(), "x^2 + 4x + 1");
        assert_eq!(IntPolynomial::from_i64(&[0, 2]).to_string(), "2x");
        assert_eq!(IntPolynomial::from_i64(&[-3, 0, -1]).to_string(), "-x^2 - 3");
        assert_eq!(IntPolynomial::zero().to_string(), "0");
    }

    #[test]
    fn arithmetic() {
        let p = IntPolynomial::from_i64(&[1, 4, 1]);
        let q = IntPolynomial::from_i64(&[1, -1]);
        assert_eq!(&p * &q, IntPolynomial::from_i64(&[1, 3, -3, -1]));
        assert_eq!(&(&p + &q) - &q, p);
        assert_eq!(p.derivative(), IntPolynomial::from_i64(&[4, 2]));
        assert_eq!(p.eval(&BigInt::from(2)), BigInt::from(13));
        assert_eq!(p.shift(2), IntPolynomial::from_i64(&[0, 0, 1, 4, 1]));
        assert_eq!(IntPolynomial::from_i64(&[5, 0, 0]).degree(), Some(0));
        assert!(IntPolynomial::from_i64(&[26, 0, 20, 0, 2]).is_even());
        assert!(!p.is_even());
    }

    #[test]
    fn moments() {
        // two outcomes 0 and 2, equally likely
        let p = IntPolynomial::from_i64(&[1, 0, 1]);
        assert_eq!(p.exponent_mean(), BigRational::one());
        assert_eq!(p.exponent_variance(), BigRational::one());
        assert_eq!(IntPolynomial::from_i64(&[0, 2]).exponent_variance(), BigRational::zero());
    }
}
