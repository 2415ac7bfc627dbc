//! Persistence of maximal growth.
//!
//! If a Hilbert function grows maximally from degree `d` to `d + 1` and
//! `c_d = sum C(m_j, j)`, every later value is `sum C(m_j + l, j + l)` and the
//! Hilbert polynomial is `sum C(x + m_j - d, m_j - j)`. Its degree `m_d - d`
//! is the dimension of the defined scheme; the scheme degree is read off the
//! leading coefficient.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::macaulay::{big_to_string, binomial, binomial_expansion, growth, BinomialExpansion};
use crate::poly::QPoly;
use crate::seq::HilbertSeq;

/// Value in degree `d + l` forced by maximal growth out of degree `d`.
pub fn persistence_value(c_d: u64, d: usize, l: u64) -> Result<BigUint> {
    Ok(binomial_expansion(c_d, d)?.shifted_value(l))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GotzmannPolynomial {
    pub anchor_degree: usize,
    pub expansion: BinomialExpansion,
    /// `(a, b)` pairs: the polynomial is `sum C(x + a, b)`.
    pub binomial_terms: Vec<(i64, u64)>,
    pub dimension: usize,
    #[serde(serialize_with = "big_to_string")]
    pub degree_of_scheme: BigUint,
    pub polynomial: QPoly,
}

impl GotzmannPolynomial {
    pub fn eval(&self, x: i64) -> BigRational {
        self.polynomial.eval_int(x)
    }
}

pub fn gotzmann_polynomial(c_d: u64, d: usize) -> Result<GotzmannPolynomial> {
    let expansion = binomial_expansion(c_d, d)?;
    let binomial_terms: Vec<(i64, u64)> = expansion
        .terms
        .iter()
        .map(|&(m, j)| (m as i64 - d as i64, m - j as u64))
        .collect();
    let polynomial = binomial_terms.iter().fold(QPoly::zero(), |acc, &(a, b)| {
        acc.add(&QPoly::binomial(a, b))
    });
    let dimension = (expansion.leading() - d as u64) as usize;
    // leading coefficient times dimension!
    let degree_of_scheme = binomial_terms
        .iter()
        .filter(|&&(_, b)| b == dimension as u64)
        .count();

    let g = GotzmannPolynomial {
        anchor_degree: d,
        expansion,
        binomial_terms,
        dimension,
        degree_of_scheme: BigUint::from(degree_of_scheme),
        polynomial,
    };
    debug_assert_eq!(g.polynomial.degree(), Some(dimension));
    debug_assert_eq!(
        g.polynomial.leading_coefficient() * BigRational::from_integer(factorial(dimension)),
        BigRational::from_integer(BigInt::from(degree_of_scheme))
    );
    debug_assert_eq!(
        g.eval(d as i64),
        BigRational::from_integer(BigInt::from(c_d))
    );
    Ok(g)
}

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

/// What maximal growth of a first difference out of degree `d` says about
/// the base locus.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FlatClass {
    /// Zero-dimensional persistence in the hyperplane section: the base
    /// locus is a curve of this degree.
    CurveLike {
        degree: u64,
    },
    /// The value is still that of the full polynomial ring.
    PolynomialRing,
    Dimension {
        dimension: usize,
        degree: u64,
    },
}

/// Classifies maximal growth of `delta_h` from `d` to `d + 1` in a ring of
/// `ambient_n` variables.
pub fn classify_flat(delta_h: &HilbertSeq, d: usize, ambient_n: usize) -> Result<FlatClass> {
    let value = delta_h
        .get(d)
        .ok_or_else(|| Error::Domain(format!("no value in degree {d}")))?;
    let next = delta_h
        .get(d + 1)
        .ok_or_else(|| Error::Domain(format!("no value in degree {}", d + 1)))?;
    if value < 1 || d == 0 {
        return Err(Error::Domain(format!(
            "classification needs d >= 1 and a positive value (d = {d}, value = {value})"
        )));
    }
    let bound = growth(value as u64, d)?;
    if BigUint::from(next.max(0) as u64) != bound || next < 0 {
        return Err(Error::NotMaximal {
            degree: d,
            next,
            bound: bound.to_string(),
        });
    }
    let g = gotzmann_polynomial(value as u64, d)?;
    let degree = g.degree_of_scheme.to_u64().unwrap_or(u64::MAX);
    if g.dimension == 0 {
        return Ok(FlatClass::CurveLike { degree });
    }
    if ambient_n >= 2
        && BigUint::from(value as u64) == binomial((d + ambient_n - 2) as u64, d as u64)
    {
        return Ok(FlatClass::PolynomialRing);
    }
    Ok(FlatClass::Dimension {
        dimension: g.dimension,
        degree,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seq::Tail;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn int(v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }

    #[test]
    fn persistence_values() {
        assert_eq!(persistence_value(7, 3, 1).unwrap(), BigUint::from(9u32));
        assert_eq!(persistence_value(7, 3, 2).unwrap(), BigUint::from(11u32));
        assert_eq!(persistence_value(76, 5, 0).unwrap(), BigUint::from(76u32));
        for d in 1..=20usize {
            for s in 1..=d as u64 {
                for l in 0..=10 {
                    assert_eq!(persistence_value(s, d, l).unwrap(), BigUint::from(s));
                }
            }
        }
    }

    #[test]
    fn flat_gives_constant_polynomial() {
        for d in 1..=12usize {
            for s in 1..=d as u64 {
                let g = gotzmann_polynomial(s, d).unwrap();
                assert_eq!(g.dimension, 0);
                assert_eq!(g.degree_of_scheme, BigUint::from(s));
                assert_eq!(g.polynomial, QPoly::constant(int(s as i64)));
            }
        }
    }

    #[test]
    fn plane_ring_growth_is_linear() {
        for d in 1..10usize {
            let g = gotzmann_polynomial(d as u64 + 1, d).unwrap();
            assert_eq!(g.dimension, 1);
            assert_eq!(g.polynomial.to_string(), "x + 1");
            assert_eq!(g.degree_of_scheme, BigUint::from(1u32));
        }
    }

    #[test]
    fn polynomial_matches_persistence() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let d = rng.gen_range(1..8usize);
            let c = rng.gen_range(1..400u64);
            let g = gotzmann_polynomial(c, d).unwrap();
            assert_eq!(g.polynomial.degree(), Some(g.dimension));
            let lc = g.polynomial.leading_coefficient()
                * BigRational::from_integer(factorial(g.dimension));
            assert_eq!(
                lc,
                BigRational::from_integer(BigInt::from(g.degree_of_scheme.clone()))
            );
            for l in 0..=10u64 {
                let want = persistence_value(c, d, l).unwrap();
                assert_eq!(
                    g.eval(d as i64 + l as i64),
                    BigRational::from_integer(BigInt::from(want)),
                    "c={c} d={d} l={l}"
                );
            }
        }
    }

    #[test]
    fn flats_with_d_at_least_s_are_curves() {
        for d in 1..=25usize {
            for s in 1..=d as i64 {
                let mut v = vec![0; d + 2];
                v[d] = s;
                v[d + 1] = s;
                let dh = HilbertSeq::new(v);
                assert_eq!(
                    classify_flat(&dh, d, 4).unwrap(),
                    FlatClass::CurveLike { degree: s as u64 }
                );
            }
        }
    }

    #[test]
    fn plane_polynomial_ring_growth() {
        // (1,2,3,4,...) in three variables, stepping 3 -> 4 at degree 2
        let dh = HilbertSeq::new(vec![1, 2, 3, 4, 4, 3]);
        assert_eq!(classify_flat(&dh, 2, 3).unwrap(), FlatClass::PolynomialRing);
        // the flat (4,4) at d = 3 = alpha - 1 is not maximal growth
        assert!(matches!(
            classify_flat(&dh, 3, 3),
            Err(Error::NotMaximal { degree: 3, .. })
        ));
    }

    #[test]
    fn dimension_one_patterns() {
        // c_d = C(d+1, d) + k trailing ones: a line plus k points
        for d in 3..9usize {
            for k in 1..d as i64 - 1 {
                let value = d as i64 + 1 + k;
                let g = gotzmann_polynomial(value as u64, d).unwrap();
                assert_eq!(g.dimension, 1);
                let next = g.eval(d as i64 + 1).to_integer().to_i64().unwrap();
                let dh = HilbertSeq::with_tail(
                    (0..=d)
                        .map(|t| if t == d { value } else { 0 })
                        .chain([next])
                        .collect(),
                    Tail::Zero,
                );
                assert_eq!(
                    classify_flat(&dh, d, 5).unwrap(),
                    FlatClass::Dimension {
                        dimension: 1,
                        degree: 1
                    }
                );
            }
        }
    }

    #[test]
    fn not_maximal_is_rejected() {
        let dh = HilbertSeq::new(vec![1, 3, 6, 6, 0]);
        assert!(matches!(
            classify_flat(&dh, 3, 4),
            Err(Error::NotMaximal { .. })
        ));
    }
}
