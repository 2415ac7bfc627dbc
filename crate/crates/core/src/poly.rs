//! Univariate polynomials with exact rational coefficients.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

/// Coefficients in increasing degree; no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct QPoly {
    coeffs: Vec<BigRational>,
}

impl QPoly {
    pub fn zero() -> Self {
        QPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: BigRational) -> Self {
        QPoly::from_coeffs(vec![c])
    }

    pub fn from_coeffs(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        QPoly { coeffs }
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading_coefficient(&self) -> BigRational {
        self.coeffs
            .last()
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_int(&self, x: i64) -> BigRational {
        self.eval(&BigRational::from_integer(BigInt::from(x)))
    }

    /// `C(x + a, b)` as a polynomial in `x`.
    pub fn binomial(a: i64, b: u64) -> Self {
        // integer product of (x + a - j), divided by b! once at the end
        let mut num = vec![BigInt::one()];
        for j in 0..b {
            let shift = BigInt::from(a - j as i64);
            let mut next = vec![BigInt::zero(); num.len() + 1];
            for (i, c) in num.iter().enumerate() {
                next[i + 1] += c;
                next[i] += c * &shift;
            }
            num = next;
        }
        let fact: BigInt = (1..=b).fold(BigInt::one(), |acc, k| acc * k);
        QPoly::from_coeffs(
            num.into_iter()
                .map(|c| BigRational::new(c, fact.clone()))
                .collect(),
        )
    }

    /// Multiply by `(x + c)`.
    fn mul_linear(&self, c: &BigRational) -> Self {
        let mut out = vec![BigRational::zero(); self.coeffs.len() + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            out[i + 1] += a;
            out[i] += a * c;
        }
        QPoly::from_coeffs(out)
    }

    fn scale(&self, c: &BigRational) -> Self {
        QPoly::from_coeffs(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn add(&self, other: &QPoly) -> QPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|i| {
                let a = self
                    .coeffs
                    .get(i)
                    .cloned()
                    .unwrap_or_else(BigRational::zero);
                let b = other
                    .coeffs
                    .get(i)
                    .cloned()
                    .unwrap_or_else(BigRational::zero);
                a + b
            })
            .collect();
        QPoly::from_coeffs(coeffs)
    }

    /// The unique polynomial of degree `< points.len()` through the points.
    pub fn interpolate(points: &[(i64, BigInt)]) -> QPoly {
        let mut acc = QPoly::zero();
        for (i, (xi, yi)) in points.iter().enumerate() {
            let mut basis = QPoly::constant(BigRational::from_integer(yi.clone()));
            for (j, (xj, _)) in points.iter().enumerate() {
                if i == j {
                    continue;
                }
                let denom = BigRational::from_integer(BigInt::from(xi - xj));
                basis = basis
                    .mul_linear(&BigRational::from_integer(BigInt::from(-xj)))
                    .scale(&(BigRational::one() / denom));
            }
            acc = acc.add(&basis);
        }
        acc
    }

    /// Coefficients as `"p/q"` strings, increasing degree.
    pub fn coefficient_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(|c| c.to_string()).collect()
    }
}

impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let show_coeff = i == 0 || !abs.is_one();
            if show_coeff {
                if abs.is_integer() {
                    write!(f, "{}", abs)?;
                } else {
                    write!(f, "({})", abs)?;
                }
            }
            match i {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{i}")?,
            }
        }
        Ok(())
    }
}

impl Serialize for QPoly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.coefficient_strings().serialize(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn binomial_basis() {
        // C(x + 1, 2) = (x^2 + x) / 2
        let p = QPoly::binomial(1, 2);
        assert_eq!(p.coeffs(), &[q(0, 1), q(1, 2), q(1, 2)]);
        for x in 0..10 {
            assert_eq!(p.eval_int(x), q((x + 1) * x / 2, 1));
        }
        assert_eq!(QPoly::binomial(-3, 0), QPoly::constant(q(1, 1)));
    }

    #[test]
    fn interpolation_recovers_polynomial() {
        let pts: Vec<(i64, BigInt)> = (3..7).map(|x| (x, BigInt::from(2 * x * x - 5))).collect();
        let p = QPoly::interpolate(&pts);
        assert_eq!(p.degree(), Some(2));
        assert_eq!(p.to_string(), "2x^2 - 5");
        assert_eq!(p.eval_int(20), q(795, 1));
    }

    #[test]
    fn display() {
        assert_eq!(QPoly::binomial(1, 1).to_string(), "x + 1");
        assert_eq!(QPoly::binomial(0, 2).to_string(), "(1/2)x^2 - (1/2)x");
        assert_eq!(QPoly::zero().to_string(), "0");
    }
}
