//! Monomial ideals: standard-monomial counting, lex segments,
//! Eliahou-Kervaire Betti numbers of stable ideals, socles, and lifting
//! Artinian ideals to reduced point sets.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::form::{monomials_of_degree, Exponent, Form, MonomialBasis};
use crate::macaulay::{binomial_u64, is_o_sequence};
use crate::modla::{FpForm, FpIdeal, GeneratorIdeal, PrimeField, SliceSource};
use crate::points::PointSet;
use crate::seq::{HilbertSeq, Tail};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Monomial(pub Exponent);

impl Monomial {
    pub fn num_vars(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> usize {
        self.0.iter().sum::<u32>() as usize
    }

    pub fn divides(&self, other: &[u32]) -> bool {
        self.0.iter().zip(other).all(|(a, b)| a <= b)
    }

    /// Index of the last variable that occurs, 0-based.
    pub fn max_index(&self) -> Option<usize> {
        self.0.iter().rposition(|&e| e > 0)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.degree() == 0 {
            return write!(f, "1");
        }
        let mut first = true;
        for (i, &e) in self.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            write!(f, "x{}", i + 1)?;
            if e > 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

/// Minimal monomial generators, sorted by degree and then descending lex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MonomialIdeal {
    n: usize,
    gens: Vec<Monomial>,
}

fn degree_lex(a: &Monomial, b: &Monomial) -> std::cmp::Ordering {
    a.degree().cmp(&b.degree()).then_with(|| b.0.cmp(&a.0))
}

/// Drops duplicates and generators divisible by others.
pub fn minimalize(n: usize, gens: impl IntoIterator<Item = Monomial>) -> Result<MonomialIdeal> {
    let mut all: Vec<Monomial> = Vec::new();
    for g in gens {
        if g.num_vars() != n {
            return Err(Error::ExponentLength {
                expected: n,
                found: g.num_vars(),
            });
        }
        all.push(g);
    }
    all.sort_by(degree_lex);
    all.dedup();
    let mut kept: Vec<Monomial> = Vec::new();
    for g in all {
        if !kept.iter().any(|k| k.divides(&g.0)) {
            kept.push(g);
        }
    }
    Ok(MonomialIdeal { n, gens: kept })
}

impl<'de> Deserialize<'de> for MonomialIdeal {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            n: usize,
            gens: Vec<Monomial>,
        }
        let raw = Raw::deserialize(d)?;
        minimalize(raw.n, raw.gens).map_err(serde::de::Error::custom)
    }
}

/// One socle monomial of an Artinian quotient.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SocleElement {
    pub degree: usize,
    pub witness: Monomial,
}

/// A lifted Artinian ideal: reduced points in one more variable, and the
/// lifted generators, with `x0` as the new first coordinate.
#[derive(Debug, Clone, Serialize)]
pub struct Distraction {
    pub points: PointSet,
    pub ideal: GeneratorIdeal,
}

impl MonomialIdeal {
    pub fn num_vars(&self) -> usize {
        self.n
    }

    pub fn gens(&self) -> &[Monomial] {
        &self.gens
    }

    pub fn contains(&self, e: &[u32]) -> bool {
        self.gens.iter().any(|g| g.divides(e))
    }

    /// Number of degree-`t` monomials outside the ideal.
    pub fn quotient_dim(&self, t: usize) -> usize {
        monomials_of_degree(self.n, t)
            .iter()
            .filter(|m| !self.contains(m))
            .count()
    }

    /// `dim (R/I)_t` for `t = 0..=t_max`, by counting standard monomials.
    /// Ends with a zero tail when the quotient has already vanished.
    pub fn hilbert_function(&self, t_max: usize) -> HilbertSeq {
        let values: Vec<i64> = (0..=t_max)
            .into_par_iter()
            .map(|t| self.quotient_dim(t) as i64)
            .collect();
        if t_max > 0 && values[t_max] == 0 {
            HilbertSeq::with_tail(values, Tail::Zero)
        } else {
            HilbertSeq::new(values)
        }
    }

    /// Fails with the first variable (1-based) lacking a pure power.
    pub fn check_artinian(&self) -> Result<()> {
        for i in 0..self.n {
            let pure = self
                .gens
                .iter()
                .any(|g| g.0[i] > 0 && g.0.iter().enumerate().all(|(j, &e)| j == i || e == 0));
            if !pure {
                return Err(Error::NotArtinian { variable: i + 1 });
            }
        }
        Ok(())
    }

    /// Largest degree of a standard monomial.
    pub fn top_degree(&self) -> Result<usize> {
        self.check_artinian()?;
        let bound: usize = (0..self.n)
            .map(|i| {
                self.gens
                    .iter()
                    .filter(|g| g.max_index() == Some(i) && g.degree() == g.0[i] as usize)
                    .map(|g| g.0[i] as usize - 1)
                    .min()
                    .unwrap()
            })
            .sum();
        Ok((0..=bound)
            .rev()
            .find(|&t| self.quotient_dim(t) > 0)
            .unwrap_or(0))
    }

    pub fn standard_monomials(&self) -> Result<Vec<Monomial>> {
        let top = self.top_degree()?;
        Ok((0..=top)
            .flat_map(|t| monomials_of_degree(self.n, t))
            .filter(|m| !self.contains(m))
            .map(Monomial)
            .collect())
    }

    /// For every generator `u` and `j < max(u)`, `x_j u / x_max(u)` lies
    /// in the ideal.
    pub fn is_stable(&self) -> bool {
        self.gens.iter().all(|u| {
            let Some(m) = u.max_index() else { return true };
            (0..m).all(|j| {
                let mut v = u.0.clone();
                v[m] -= 1;
                v[j] += 1;
                self.contains(&v)
            })
        })
    }

    /// Graded Betti numbers of `R/I` for a stable ideal: each generator
    /// `u` contributes `C(max(u) - 1, i)` to column `i + 1`, row
    /// `deg(u) - 1`.
    pub fn ek_betti(&self) -> Result<BettiDiagram> {
        if !self.is_stable() {
            return Err(Error::NotStable);
        }
        let mut diagram = BettiDiagram::new();
        diagram.add(0, 0, 1);
        for u in &self.gens {
            let Some(m) = u.max_index() else {
                // the unit ideal
                continue;
            };
            let row = u.degree() - 1;
            for i in 0..=m {
                diagram.add(i + 1, row, binomial_u64(m as u64, i as u64));
            }
        }
        Ok(diagram)
    }

    pub fn socle(&self) -> Result<Vec<SocleElement>> {
        let std = self.standard_monomials()?;
        Ok(std
            .into_iter()
            .filter(|u| {
                (0..self.n).all(|j| {
                    let mut v = u.0.clone();
                    v[j] += 1;
                    self.contains(&v)
                })
            })
            .map(|u| SocleElement {
                degree: u.degree(),
                witness: u,
            })
            .collect())
    }

    /// Socle degrees with multiplicity, ascending.
    pub fn socle_degrees(&self) -> Result<Vec<usize>> {
        let mut d: Vec<usize> = self.socle()?.iter().map(|s| s.degree).collect();
        d.sort_unstable();
        Ok(d)
    }

    /// Lifts with nodes `0, 1, 2, ...` on every variable: `x^a` becomes
    /// `prod_i prod_{k < a_i} (x_i - k x0)` and each standard monomial
    /// `x^a` becomes the point `[1 : a_1 : ... : a_n]`.
    pub fn distraction(&self) -> Result<Distraction> {
        let std = self.standard_monomials()?;
        let coords: Vec<Vec<BigRational>> = std
            .iter()
            .map(|a| {
                std::iter::once(1)
                    .chain(a.0.iter().map(|&e| e as i64))
                    .map(|v| BigRational::from_integer(BigInt::from(v)))
                    .collect()
            })
            .collect();
        let points = PointSet::new(self.n, coords)?;
        let lifted = self
            .gens
            .iter()
            .map(|g| {
                let mut f = Form::monomial(vec![0; self.n + 1]);
                for (i, &a) in g.0.iter().enumerate() {
                    for k in 0..a as i64 {
                        let mut c = vec![0i64; self.n + 1];
                        c[0] = -k;
                        c[i + 1] = 1;
                        f = f.mul(&Form::linear(&c));
                    }
                }
                f
            })
            .collect();
        Ok(Distraction {
            points,
            ideal: GeneratorIdeal::new(self.n + 1, lifted)?,
        })
    }
}

impl SliceSource for MonomialIdeal {
    fn num_vars(&self) -> usize {
        self.n
    }

    /// Unit rows for every product `g * m`; rank-based, independent of
    /// the counting in [`MonomialIdeal::hilbert_function`].
    fn slice(&self, t: usize, _field: PrimeField) -> Result<Vec<Vec<u64>>> {
        let basis = MonomialBasis::new(self.n, t);
        let mut rows = Vec::new();
        for g in &self.gens {
            if g.degree() > t {
                continue;
            }
            let f = FpForm::monomial(g.0.clone());
            for m in monomials_of_degree(self.n, t - g.degree()) {
                rows.push(f.times_monomial_row(&m, &basis));
            }
        }
        Ok(rows)
    }

    fn new_generators(
        &self,
        t: usize,
        _field: PrimeField,
        _lower: &FpIdeal,
    ) -> Result<Vec<FpForm>> {
        Ok(self
            .gens
            .iter()
            .filter(|g| g.degree() == t)
            .map(|g| FpForm::monomial(g.0.clone()))
            .collect())
    }
}

/// The lex-segment ideal with Hilbert function `s`: in each degree `t`,
/// the first `dim R_t - s(t)` monomials in lex order.
pub fn lex_ideal(s: &HilbertSeq, n: usize) -> Result<MonomialIdeal> {
    if let Some(v) = is_o_sequence(s).violation {
        return Err(v.into());
    }
    if s.get(1).unwrap_or(0) > n as i64 {
        return Err(Error::Domain(format!(
            "value {} in degree 1 exceeds the {n} available variables",
            s.get(1).unwrap_or(0)
        )));
    }
    let last = match s.tail() {
        Some(Tail::Zero) => s.len(),
        Some(Tail::Constant) => (s.len() - 1).max(s.eventual_value().max(0) as usize) + 1,
        None => s.len() - 1,
    };
    let mut gens: Vec<Monomial> = Vec::new();
    for t in 1..=last {
        let value = s.get(t).expect("degree within range") as usize;
        let monos = monomials_of_degree(n, t);
        let k = monos.len() - value;
        for m in monos.into_iter().take(k) {
            if !gens.iter().any(|g| g.divides(&m)) {
                gens.push(Monomial(m));
            }
        }
    }
    minimalize(n, gens)
}

/// Graded Betti numbers laid out by column `i` and row `j - i`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BettiDiagram {
    /// `table[row][column]`.
    table: Vec<Vec<u64>>,
}

impl BettiDiagram {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, column: usize, row: usize, v: u64) {
        if v == 0 {
            return;
        }
        if self.table.len() <= row {
            self.table.resize(row + 1, Vec::new());
        }
        let cols = self.columns().max(column + 1);
        for r in &mut self.table {
            r.resize(cols, 0);
        }
        self.table[row][column] += v;
    }

    pub fn get(&self, column: usize, row: usize) -> u64 {
        self.table
            .get(row)
            .and_then(|r| r.get(column))
            .copied()
            .unwrap_or(0)
    }

    pub fn rows(&self) -> usize {
        self.table.len()
    }

    pub fn columns(&self) -> usize {
        self.table.first().map_or(0, Vec::len)
    }

    pub fn table(&self) -> &[Vec<u64>] {
        &self.table
    }

    pub fn totals(&self) -> Vec<u64> {
        (0..self.columns())
            .map(|c| self.table.iter().map(|r| r[c]).sum())
            .collect()
    }

    /// `sum_i (-1)^i beta_{i,j}` for each internal degree `j`: the
    /// numerator of the Hilbert series.
    pub fn alternating_sums(&self) -> Vec<i64> {
        let mut out = vec![0i64; self.rows() + self.columns()];
        for (row, r) in self.table.iter().enumerate() {
            for (col, &v) in r.iter().enumerate() {
                let sign = if col % 2 == 0 { 1 } else { -1 };
                out[row + col] += sign * v as i64;
            }
        }
        while out.len() > 1 && out.last() == Some(&0) {
            out.pop();
        }
        out
    }

    /// Text layout with a totals line, a rule, and dashes for zeros.
    pub fn render(&self) -> String {
        let cell = |v: u64| {
            if v == 0 {
                "-".to_string()
            } else {
                v.to_string()
            }
        };
        let mut out = String::from("total: ");
        for t in self.totals() {
            out.push_str(&format!("{t:>6}"));
        }
        out.push('\n');
        out.push_str(&"-".repeat(8 + 6 * self.columns()));
        out.push('\n');
        for (row, r) in self.table.iter().enumerate() {
            out.push_str(&format!("{:>6} ", format!("{row}:")));
            for &v in r {
                out.push_str(&format!("{:>6}", cell(v)));
            }
            out.push('\n');
        }
        out
    }
}

impl fmt::Display for BettiDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl Serialize for BettiDiagram {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Out<'a> {
            totals: Vec<u64>,
            rows: &'a [Vec<u64>],
        }
        Out {
            totals: self.totals(),
            rows: &self.table,
        }
        .serialize(s)
    }
}
