//! Greatest common divisors of ternary forms over a prime field.
//!
//! After a random change of coordinates the gcd `G` of degree `s` has a
//! constant `x^s` coefficient, so for a general value `a` the univariate
//! gcd of the `F_k(x, a, 1)` is exactly `G(x, a, 1)` made monic. Those
//! images are interpolated in `y`, rehomogenized and mapped back. The
//! result is only returned after exact trial division of every input.

use std::collections::BTreeMap;

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::form::Exponent;
use crate::modla::{FpForm, PrimeField, Restrictor};

const ATTEMPTS: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GcdResult {
    pub degree: usize,
    pub prime: u64,
    /// Normalized so its lex-leading coefficient is 1.
    pub gcd: FpForm,
}

impl Serialize for GcdResult {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Out {
            degree: usize,
            prime: u64,
            gcd: String,
        }
        let field = PrimeField::new(self.prime).map_err(serde::ser::Error::custom)?;
        Out {
            degree: self.degree,
            prime: self.prime,
            gcd: self.gcd.display_lifted(field),
        }
        .serialize(s)
    }
}

/// Dense univariate polynomials, lowest coefficient first, no trailing zeros.
type UPoly = Vec<u64>;

fn trim(mut p: UPoly) -> UPoly {
    while p.last() == Some(&0) {
        p.pop();
    }
    p
}

fn urem(f: PrimeField, mut a: UPoly, b: &[u64]) -> UPoly {
    let db = b.len() - 1;
    let inv = f.inv(b[db]);
    while a.len() > db {
        let lead = f.mul(*a.last().unwrap(), inv);
        let shift = a.len() - 1 - db;
        for (i, &c) in b.iter().enumerate() {
            a[shift + i] = f.sub(a[shift + i], f.mul(lead, c));
        }
        a = trim(a);
    }
    a
}

fn umonic(f: PrimeField, p: UPoly) -> UPoly {
    match p.last() {
        None => p,
        Some(&lead) => {
            let inv = f.inv(lead);
            p.into_iter().map(|c| f.mul(c, inv)).collect()
        }
    }
}

fn ugcd(f: PrimeField, mut a: UPoly, mut b: UPoly) -> UPoly {
    while !b.is_empty() {
        let r = urem(f, a, &b);
        a = b;
        b = r;
    }
    umonic(f, a)
}

/// Coefficients of the polynomial of degree `< xs.len()` through the nodes.
fn uinterpolate(f: PrimeField, xs: &[u64], ys: &[u64]) -> UPoly {
    let n = xs.len();
    let mut out = vec![0u64; n];
    for i in 0..n {
        let mut basis = vec![1u64];
        let mut denom = 1u64;
        for j in 0..n {
            if i == j {
                continue;
            }
            let mut next = vec![0u64; basis.len() + 1];
            for (k, &c) in basis.iter().enumerate() {
                next[k + 1] = f.add(next[k + 1], c);
                next[k] = f.sub(next[k], f.mul(c, xs[j]));
            }
            basis = next;
            denom = f.mul(denom, f.sub(xs[i], xs[j]));
        }
        let scale = f.mul(ys[i], f.inv(denom));
        for (k, &c) in basis.iter().enumerate() {
            out[k] = f.add(out[k], f.mul(c, scale));
        }
    }
    out
}

/// `F(x, a, 1)` as a polynomial in `x`.
fn specialize(f: PrimeField, form: &FpForm, a: u64) -> UPoly {
    let mut out = vec![0u64; form.degree + 1];
    for (e, c) in &form.terms {
        let i = e[0] as usize;
        out[i] = f.add(out[i], f.mul(*c, f.pow(a, e[1] as u64)));
    }
    trim(out)
}

fn invert3(f: PrimeField, m: &[Vec<u64>]) -> Option<Vec<Vec<u64>>> {
    let mut a: Vec<Vec<u64>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..3).map(|j| u64::from(i == j)));
            r
        })
        .collect();
    for c in 0..3 {
        let p = (c..3).find(|&r| a[r][c] != 0)?;
        a.swap(c, p);
        let inv = f.inv(a[c][c]);
        for v in &mut a[c] {
            *v = f.mul(*v, inv);
        }
        for r in 0..3 {
            if r != c && a[r][c] != 0 {
                let k = a[r][c];
                let pivot = a[c].clone();
                for (x, p) in a[r].iter_mut().zip(pivot) {
                    *x = f.sub(*x, f.mul(k, p));
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[3..].to_vec()).collect())
}

/// Exact division of homogeneous forms; `None` when `d` does not divide `n`.
pub fn divide(f: PrimeField, n: &FpForm, d: &FpForm) -> Option<FpForm> {
    let lead_d = d.terms.iter().max_by(|a, b| a.0.cmp(&b.0))?.clone();
    let inv = f.inv(lead_d.1);
    let mut rem: BTreeMap<Exponent, u64> = n.terms.iter().cloned().collect();
    let mut quot: Vec<(Exponent, u64)> = Vec::new();
    while let Some((e, c)) = rem.iter().next_back().map(|(e, c)| (e.clone(), *c)) {
        if e.iter().zip(&lead_d.0).any(|(a, b)| a < b) {
            return None;
        }
        let qe: Exponent = e.iter().zip(&lead_d.0).map(|(a, b)| a - b).collect();
        let qc = f.mul(c, inv);
        for (de, dc) in &d.terms {
            let key: Exponent = de.iter().zip(&qe).map(|(a, b)| a + b).collect();
            let slot = rem.entry(key.clone()).or_insert(0);
            *slot = f.sub(*slot, f.mul(qc, *dc));
            if *slot == 0 {
                rem.remove(&key);
            }
        }
        quot.push((qe, qc));
    }
    Some(FpForm {
        n: n.n,
        degree: n.degree - d.degree,
        terms: quot,
    })
}

fn attempt<R: Rng + ?Sized>(forms: &[FpForm], field: PrimeField, rng: &mut R) -> Option<FpForm> {
    let m: Vec<Vec<u64>> = (0..3)
        .map(|_| (0..3).map(|_| field.random(rng)).collect())
        .collect();
    let minv = invert3(field, &m)?;
    let forward = Restrictor::new(field, &m, 3);
    let back = Restrictor::new(field, &minv, 3);
    let moved: Vec<FpForm> = forms.iter().map(|g| forward.apply(g)).collect();
    let dmin = moved.iter().map(|g| g.degree).min()?;
    // every input must keep its full degree in x
    if moved
        .iter()
        .any(|g| specialize(field, g, 0).len() != g.degree + 1)
    {
        return None;
    }
    let samples: Vec<(u64, UPoly)> = (0..dmin + 4)
        .map(|_| {
            let a = field.random(rng);
            let g = moved
                .iter()
                .map(|g| specialize(field, g, a))
                .reduce(|x, y| ugcd(field, x, y))
                .map(|g| umonic(field, g))
                .unwrap();
            (a, g)
        })
        .collect();
    let s = samples.iter().map(|(_, g)| g.len() - 1).min()?;
    let good: Vec<&(u64, UPoly)> = samples.iter().filter(|(_, g)| g.len() - 1 == s).collect();
    if good.len() < s + 1 {
        return None;
    }
    let xs: Vec<u64> = good.iter().take(s + 1).map(|(a, _)| *a).collect();
    let mut terms = Vec::new();
    for i in 0..=s {
        let ys: Vec<u64> = good.iter().take(s + 1).map(|(_, g)| g[i]).collect();
        let c = uinterpolate(field, &xs, &ys);
        for (j, &v) in c.iter().enumerate() {
            if v == 0 {
                continue;
            }
            if i + j > s {
                return None;
            }
            terms.push((vec![i as u32, j as u32, (s - i - j) as u32], v));
        }
    }
    let moved_gcd = FpForm {
        n: 3,
        degree: s,
        terms,
    };
    let g = back.apply(&moved_gcd).monic(field);
    forms
        .iter()
        .all(|f| divide(field, f, &g).is_some())
        .then_some(g)
}

/// A gcd of nonzero forms in three variables, validated by trial division.
pub fn gcd_of_forms<R: Rng + ?Sized>(
    forms: &[FpForm],
    field: PrimeField,
    rng: &mut R,
) -> Result<GcdResult> {
    if forms.is_empty() {
        return Err(Error::Domain("gcd of an empty list of forms".into()));
    }
    for f in forms {
        if f.n != 3 {
            return Err(Error::Domain(format!(
                "plane gcd needs 3 variables, got {}",
                f.n
            )));
        }
        if f.is_zero() {
            return Err(Error::Domain("gcd input contains the zero form".into()));
        }
    }
    for _ in 0..ATTEMPTS {
        if let Some(g) = attempt(forms, field, rng) {
            return Ok(GcdResult {
                degree: g.degree,
                prime: field.modulus(),
                gcd: g,
            });
        }
    }
    Err(Error::Internal(format!(
        "gcd candidate failed trial division in {ATTEMPTS} attempts"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modla::DEFAULT_PRIME;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn coprime_squares() {
        let f = PrimeField::new(DEFAULT_PRIME).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let x2 = FpForm::monomial(vec![2, 0, 0]);
        let y2 = FpForm::monomial(vec![0, 2, 0]);
        let g = gcd_of_forms(&[x2, y2], f, &mut rng).unwrap();
        assert_eq!(g.degree, 0);
    }

    #[test]
    fn common_factor_is_recovered() {
        let f = PrimeField::new(DEFAULT_PRIME).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for trial in 0..50 {
            let df = 1 + trial % 3;
            let common = FpForm::random(3, df, f, &mut rng);
            let g = FpForm::random(3, 1 + trial % 2, f, &mut rng);
            let h = FpForm::random(3, 2, f, &mut rng);
            let r = gcd_of_forms(&[common.mul(&g, f), common.mul(&h, f)], f, &mut rng).unwrap();
            assert_eq!(r.degree, df);
            assert_eq!(r.gcd, common.monic(f));
        }
    }

    #[test]
    fn division() {
        let f = PrimeField::new(DEFAULT_PRIME).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let a = FpForm::random(3, 2, f, &mut rng);
        let b = FpForm::random(3, 3, f, &mut rng);
        let q = divide(f, &a.mul(&b, f), &a).unwrap();
        assert_eq!(q.mul(&a, f).terms.len(), a.mul(&b, f).terms.len());
        assert!(divide(f, &b, &a).is_none());
    }
}
