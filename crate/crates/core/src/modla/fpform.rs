//! Forms and ideals with coefficients in a prime field.

use std::collections::HashMap;

use rand::Rng;

use super::echelon::Echelon;
use super::field::PrimeField;
use crate::error::{Error, Result};
use crate::form::{
    add_exponents, dim_of_degree, monomials_of_degree, Exponent, Form, MonomialBasis,
};

/// A homogeneous form over a prime field; terms sparse, no zero coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FpForm {
    pub n: usize,
    pub degree: usize,
    pub terms: Vec<(Exponent, u64)>,
}

impl FpForm {
    pub fn from_form(f: &Form, field: PrimeField) -> Result<FpForm> {
        let degree = f.degree().unwrap_or(0);
        let mut terms = Vec::new();
        for (e, c) in f.terms() {
            let c = field.from_rational(c)?;
            if c != 0 {
                terms.push((e.clone(), c));
            }
        }
        Ok(FpForm {
            n: f.num_vars(),
            degree,
            terms,
        })
    }

    pub fn from_dense(basis: &MonomialBasis, coeffs: &[u64]) -> FpForm {
        let terms = basis
            .monomials
            .iter()
            .zip(coeffs)
            .filter(|(_, &c)| c != 0)
            .map(|(e, &c)| (e.clone(), c))
            .collect();
        FpForm {
            n: basis.n,
            degree: basis.degree,
            terms,
        }
    }

    pub fn monomial(e: Exponent) -> FpForm {
        FpForm {
            n: e.len(),
            degree: e.iter().sum::<u32>() as usize,
            terms: vec![(e, 1)],
        }
    }

    pub fn random<R: Rng + ?Sized>(
        n: usize,
        degree: usize,
        field: PrimeField,
        rng: &mut R,
    ) -> FpForm {
        let basis = MonomialBasis::new(n, degree);
        let coeffs: Vec<u64> = (0..basis.len()).map(|_| field.random(rng)).collect();
        FpForm::from_dense(&basis, &coeffs)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn to_dense(&self, basis: &MonomialBasis) -> Vec<u64> {
        let mut v = vec![0; basis.len()];
        for (e, c) in &self.terms {
            v[basis.index_of(e).expect("term lies in the basis")] = *c;
        }
        v
    }

    /// Coefficient row of `m * self` in the basis of the target degree.
    pub fn times_monomial_row(&self, m: &[u32], target: &MonomialBasis) -> Vec<u64> {
        let mut v = vec![0; target.len()];
        for (e, c) in &self.terms {
            v[target
                .index_of(&add_exponents(e, m))
                .expect("product lies in the basis")] = *c;
        }
        v
    }

    pub fn mul(&self, other: &FpForm, field: PrimeField) -> FpForm {
        let mut acc: HashMap<Exponent, u64> = HashMap::new();
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                let slot = acc.entry(add_exponents(a, b)).or_insert(0);
                *slot = field.add(*slot, field.mul(*ca, *cb));
            }
        }
        let mut terms: Vec<(Exponent, u64)> = acc.into_iter().filter(|(_, c)| *c != 0).collect();
        terms.sort_by(|a, b| b.0.cmp(&a.0));
        FpForm {
            n: self.n,
            degree: self.degree + other.degree,
            terms,
        }
    }

    pub fn scale(&self, c: u64, field: PrimeField) -> FpForm {
        FpForm {
            n: self.n,
            degree: self.degree,
            terms: self
                .terms
                .iter()
                .map(|(e, a)| (e.clone(), field.mul(*a, c)))
                .filter(|(_, a)| *a != 0)
                .collect(),
        }
    }

    pub fn add(&self, other: &FpForm, field: PrimeField) -> FpForm {
        let mut acc: HashMap<Exponent, u64> = HashMap::new();
        for (e, c) in self.terms.iter().chain(&other.terms) {
            let slot = acc.entry(e.clone()).or_insert(0);
            *slot = field.add(*slot, *c);
        }
        let mut terms: Vec<(Exponent, u64)> = acc.into_iter().filter(|(_, c)| *c != 0).collect();
        terms.sort_by(|a, b| b.0.cmp(&a.0));
        FpForm {
            n: self.n,
            degree: self.degree,
            terms,
        }
    }

    pub fn eval(&self, point: &[u64], field: PrimeField) -> u64 {
        self.terms.iter().fold(0, |acc, (e, c)| {
            let v = e
                .iter()
                .zip(point)
                .fold(*c, |a, (&k, &x)| field.mul(a, field.pow(x, k as u64)));
            field.add(acc, v)
        })
    }

    /// Text form with coefficients lifted to `(-p/2, p/2]`, terms in
    /// descending lex order.
    pub fn display_lifted(&self, field: PrimeField) -> String {
        let mut terms = self.terms.clone();
        terms.sort_by(|a, b| b.0.cmp(&a.0));
        if terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (k, (e, c)) in terms.iter().enumerate() {
            let v = field.lift(*c);
            let neg = v < 0;
            if k == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let a = v.unsigned_abs();
            let vars: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| {
                    if k == 1 {
                        format!("x{i}")
                    } else {
                        format!("x{i}^{k}")
                    }
                })
                .collect();
            if vars.is_empty() {
                out.push_str(&a.to_string());
            } else {
                if a != 1 {
                    out.push_str(&format!("{a}*"));
                }
                out.push_str(&vars.join("*"));
            }
        }
        out
    }

    /// Normalized so the lex-largest term has coefficient 1.
    pub fn monic(&self, field: PrimeField) -> FpForm {
        let mut terms = self.terms.clone();
        terms.sort_by(|a, b| b.0.cmp(&a.0));
        let mut out = FpForm {
            n: self.n,
            degree: self.degree,
            terms,
        };
        if let Some((_, c)) = out.terms.first() {
            out = out.scale(field.inv(*c), field);
        }
        out
    }
}

/// The substitution `x = A y` from `n` to `k` variables: restriction of
/// forms to a linear subspace.
#[derive(Debug, Clone)]
pub struct Restrictor {
    field: PrimeField,
    /// `n` linear forms in `k` variables, the images of the `x_i`.
    images: Vec<FpForm>,
    k: usize,
}

impl Restrictor {
    /// `matrix[i][j]` is the coefficient of `y_j` in the image of `x_i`.
    pub fn new(field: PrimeField, matrix: &[Vec<u64>], k: usize) -> Self {
        let images = matrix
            .iter()
            .map(|row| {
                let terms = (0..k)
                    .filter(|&j| row[j] != 0)
                    .map(|j| {
                        let mut e = vec![0; k];
                        e[j] = 1;
                        (e, row[j])
                    })
                    .collect();
                FpForm {
                    n: k,
                    degree: 1,
                    terms,
                }
            })
            .collect();
        Restrictor { field, images, k }
    }

    pub fn random<R: Rng + ?Sized>(field: PrimeField, n: usize, k: usize, rng: &mut R) -> Self {
        let matrix: Vec<Vec<u64>> = (0..n)
            .map(|_| (0..k).map(|_| field.random(rng)).collect())
            .collect();
        Restrictor::new(field, &matrix, k)
    }

    pub fn target_vars(&self) -> usize {
        self.k
    }

    pub fn apply(&self, f: &FpForm) -> FpForm {
        let field = self.field;
        let mut powers: Vec<Vec<FpForm>> = self
            .images
            .iter()
            .map(|l| vec![FpForm::monomial(vec![0; self.k]), l.clone()])
            .collect();
        let mut acc = FpForm {
            n: self.k,
            degree: f.degree,
            terms: Vec::new(),
        };
        for (e, c) in &f.terms {
            let mut term = FpForm {
                n: self.k,
                degree: 0,
                terms: vec![(vec![0; self.k], *c)],
            };
            for (i, &k) in e.iter().enumerate() {
                let k = k as usize;
                while powers[i].len() <= k {
                    let next = powers[i].last().unwrap().mul(&self.images[i], field);
                    powers[i].push(next);
                }
                term = term.mul(&powers[i][k], field);
            }
            acc = acc.add(&term, field);
        }
        acc.degree = f.degree;
        acc
    }
}

/// Generators over a prime field.
#[derive(Debug, Clone)]
pub struct FpIdeal {
    pub n: usize,
    pub field: PrimeField,
    pub gens: Vec<FpForm>,
}

impl FpIdeal {
    pub fn new(n: usize, field: PrimeField) -> Self {
        FpIdeal {
            n,
            field,
            gens: Vec::new(),
        }
    }

    /// Rows `g * m` for every generator `g` and monomial `m` of
    /// complementary degree.
    pub fn slice_rows(&self, t: usize, basis: &MonomialBasis) -> Vec<Vec<u64>> {
        let mut rows = Vec::new();
        for g in &self.gens {
            if g.degree > t || g.is_zero() {
                continue;
            }
            for m in monomials_of_degree(self.n, t - g.degree) {
                rows.push(g.times_monomial_row(&m, basis));
            }
        }
        rows
    }

    pub fn slice_echelon(&self, t: usize, basis: &MonomialBasis) -> Echelon {
        let mut e = Echelon::new(self.field, basis.len());
        for g in &self.gens {
            if g.degree > t || g.is_zero() {
                continue;
            }
            for m in monomials_of_degree(self.n, t - g.degree) {
                if e.is_full() {
                    return e;
                }
                e.insert(g.times_monomial_row(&m, basis));
            }
        }
        e
    }

    pub fn slice_dim(&self, t: usize) -> usize {
        let basis = MonomialBasis::new(self.n, t);
        self.slice_echelon(t, &basis).rank()
    }

    /// `dim (R/I)_t`.
    pub fn quotient_dim(&self, t: usize) -> usize {
        dim_of_degree(self.n, t) - self.slice_dim(t)
    }

    pub fn check_vars(&self, f: &FpForm) -> Result<()> {
        if f.n != self.n {
            return Err(Error::ExponentLength {
                expected: self.n,
                found: f.n,
            });
        }
        Ok(())
    }
}
