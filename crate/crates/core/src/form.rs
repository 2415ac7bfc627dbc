//! Homogeneous forms with exact rational coefficients, and the monomial
//! bases they are expanded in.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::macaulay::binomial_u64;

pub type Exponent = Vec<u32>;

/// All exponent vectors of total degree `t` in `n` variables, in
/// descending lex order with `x_1 > x_2 > ... > x_n`.
pub fn monomials_of_degree(n: usize, t: usize) -> Vec<Exponent> {
    fn go(n: usize, rest: u32, acc: &mut Exponent, out: &mut Vec<Exponent>) {
        if acc.len() + 1 == n {
            acc.push(rest);
            out.push(acc.clone());
            acc.pop();
            return;
        }
        for e in (0..=rest).rev() {
            acc.push(e);
            go(n, rest - e, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::with_capacity(dim_of_degree(n, t));
    if n == 0 {
        if t == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    go(n, t as u32, &mut Vec::with_capacity(n), &mut out);
    out
}

/// `dim R_t = C(t + n - 1, n - 1)`.
pub fn dim_of_degree(n: usize, t: usize) -> usize {
    if n == 0 {
        return usize::from(t == 0);
    }
    binomial_u64((t + n - 1) as u64, (n - 1) as u64) as usize
}

/// Monomial basis of the degree-`t` part of a polynomial ring, with a
/// reverse index.
#[derive(Debug, Clone)]
pub struct MonomialBasis {
    pub n: usize,
    pub degree: usize,
    pub monomials: Vec<Exponent>,
    index: HashMap<Exponent, usize>,
}

impl MonomialBasis {
    pub fn new(n: usize, degree: usize) -> Self {
        let monomials = monomials_of_degree(n, degree);
        let index = monomials
            .iter()
            .enumerate()
            .map(|(i, m)| (m.clone(), i))
            .collect();
        MonomialBasis {
            n,
            degree,
            monomials,
            index,
        }
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn index_of(&self, e: &[u32]) -> Option<usize> {
        self.index.get(e).copied()
    }
}

pub(crate) fn add_exponents(a: &[u32], b: &[u32]) -> Exponent {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// A homogeneous polynomial over the rationals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Form {
    n: usize,
    terms: BTreeMap<Exponent, BigRational>,
}

impl Form {
    pub fn zero(n: usize) -> Self {
        Form {
            n,
            terms: BTreeMap::new(),
        }
    }

    /// Builds a form, dropping zero coefficients and checking homogeneity.
    pub fn from_terms(
        n: usize,
        terms: impl IntoIterator<Item = (Exponent, BigRational)>,
    ) -> Result<Self> {
        let mut map: BTreeMap<Exponent, BigRational> = BTreeMap::new();
        for (e, c) in terms {
            if e.len() != n {
                return Err(Error::ExponentLength {
                    expected: n,
                    found: e.len(),
                });
            }
            *map.entry(e).or_insert_with(BigRational::zero) += c;
        }
        map.retain(|_, c| !c.is_zero());
        let mut degrees = map.keys().map(|e| e.iter().sum::<u32>());
        if let Some(d) = degrees.next() {
            if degrees.any(|d2| d2 != d) {
                return Err(Error::Domain("form is not homogeneous".into()));
            }
        }
        Ok(Form { n, terms: map })
    }

    pub fn monomial(e: Exponent) -> Self {
        let n = e.len();
        let mut terms = BTreeMap::new();
        terms.insert(e, BigRational::one());
        Form { n, terms }
    }

    /// The linear form `sum c_i x_i`.
    pub fn linear(coeffs: &[i64]) -> Self {
        let n = coeffs.len();
        let terms = coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| {
                let mut e = vec![0; n];
                e[i] = 1;
                (e, BigRational::from_integer(BigInt::from(c)))
            });
        Form::from_terms(n, terms).expect("linear forms are homogeneous")
    }

    pub fn num_vars(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> Option<usize> {
        self.terms
            .keys()
            .next()
            .map(|e| e.iter().sum::<u32>() as usize)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &BigRational)> {
        self.terms.iter()
    }

    pub fn mul(&self, other: &Form) -> Form {
        assert_eq!(self.n, other.n, "forms live in different rings");
        let mut out: BTreeMap<Exponent, BigRational> = BTreeMap::new();
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                *out.entry(add_exponents(a, b))
                    .or_insert_with(BigRational::zero) += ca * cb;
            }
        }
        out.retain(|_, c| !c.is_zero());
        Form {
            n: self.n,
            terms: out,
        }
    }

    pub fn sub(&self, other: &Form) -> Form {
        let mut out = self.terms.clone();
        for (e, c) in &other.terms {
            *out.entry(e.clone()).or_insert_with(BigRational::zero) -= c;
        }
        out.retain(|_, c| !c.is_zero());
        Form {
            n: self.n,
            terms: out,
        }
    }

    pub fn eval(&self, point: &[BigRational]) -> BigRational {
        self.terms
            .iter()
            .map(|(e, c)| {
                e.iter().zip(point).fold(c.clone(), |acc, (&k, x)| {
                    acc * num_traits::pow(x.clone(), k as usize)
                })
            })
            .sum()
    }
}

impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            let abs = c.abs();
            let is_const = e.iter().all(|&k| k == 0);
            if !abs.is_one() || is_const {
                write!(f, "{abs}")?;
                if !is_const {
                    write!(f, "*")?;
                }
            }
            let mut first = true;
            for (v, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                if !first {
                    write!(f, "*")?;
                }
                first = false;
                write!(f, "x{v}")?;
                if k > 1 {
                    write!(f, "^{k}")?;
                }
            }
        }
        Ok(())
    }
}

pub(crate) fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let parse_int = |t: &str| {
        t.trim()
            .parse::<BigInt>()
            .map_err(|_| Error::Parse(format!("not a rational number: {s:?}")))
    };
    match s.split_once('/') {
        None => Ok(BigRational::from_integer(parse_int(s)?)),
        Some((a, b)) => {
            let den = parse_int(b)?;
            if den.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {s:?}")));
            }
            Ok(BigRational::new(parse_int(a)?, den))
        }
    }
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    e: Exponent,
    c: String,
}

#[derive(Serialize, Deserialize)]
struct FormJson {
    n: usize,
    terms: Vec<TermJson>,
}

impl Serialize for Form {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        FormJson {
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| TermJson {
                    e: e.clone(),
                    c: c.to_string(),
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Form {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = FormJson::deserialize(d)?;
        let terms = raw
            .terms
            .into_iter()
            .map(|t| parse_rational(&t.c).map(|c| (t.e, c)))
            .collect::<Result<Vec<_>>>()
            .map_err(serde::de::Error::custom)?;
        Form::from_terms(raw.n, terms).map_err(serde::de::Error::custom)
    }
}
