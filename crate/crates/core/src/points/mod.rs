//! Finite sets of points in projective space.

mod gcd;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use gcd::{divide as divide_exact, gcd_of_forms, GcdResult};

use crate::error::{Error, Result};
use crate::form::{dim_of_degree, parse_rational, MonomialBasis};
use crate::modla::echelon::{kernel, rank};
use crate::modla::{FpForm, PrimeField, RankEngineConfig, SliceSource};
use crate::seq::{difference, truncate, HilbertSeq, Tail};

/// Default half-width of the integer box random points are drawn from.
pub const DEFAULT_BOX: i64 = 10_000;
pub const DEFAULT_UPP_CAP: usize = 12;
pub const DEFAULT_UPP_SAMPLES: usize = 200;

/// Points of `P^ambient`, as homogeneous coordinate vectors of length
/// `ambient + 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointSet {
    ambient: usize,
    points: Vec<Vec<BigRational>>,
}

fn proportional(a: &[BigRational], b: &[BigRational]) -> bool {
    (0..a.len()).all(|i| (i + 1..a.len()).all(|j| &a[i] * &b[j] == &a[j] * &b[i]))
}

impl PointSet {
    /// Checks coordinate lengths, nonzero vectors and projective
    /// distinctness.
    pub fn new(ambient: usize, points: Vec<Vec<BigRational>>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidPoints("no points".into()));
        }
        for (k, p) in points.iter().enumerate() {
            if p.len() != ambient + 1 {
                return Err(Error::InvalidPoints(format!(
                    "point {k} has {} coordinates, expected {}",
                    p.len(),
                    ambient + 1
                )));
            }
            if p.iter().all(Zero::is_zero) {
                return Err(Error::InvalidPoints(format!(
                    "point {k} is the zero vector"
                )));
            }
        }
        for i in 0..points.len() {
            for j in i + 1..points.len() {
                if proportional(&points[i], &points[j]) {
                    return Err(Error::InvalidPoints(format!("points {i} and {j} coincide")));
                }
            }
        }
        Ok(PointSet { ambient, points })
    }

    pub fn from_integers(ambient: usize, points: &[Vec<i64>]) -> Result<Self> {
        let pts = points
            .iter()
            .map(|p| {
                p.iter()
                    .map(|&v| BigRational::from_integer(BigInt::from(v)))
                    .collect()
            })
            .collect();
        PointSet::new(ambient, pts)
    }

    /// `count` points with integer coordinates uniform in
    /// `[-half_width, half_width]`, redrawn until distinct.
    pub fn random<R: Rng + ?Sized>(
        ambient: usize,
        count: usize,
        half_width: i64,
        rng: &mut R,
    ) -> Result<Self> {
        let mut pts: Vec<Vec<i64>> = Vec::with_capacity(count);
        let mut tries = 0;
        while pts.len() < count {
            tries += 1;
            if tries > 100 * (count + 10) {
                return Err(Error::InvalidPoints(
                    "box too small for distinct points".into(),
                ));
            }
            let p: Vec<i64> = (0..=ambient)
                .map(|_| rng.gen_range(-half_width..=half_width))
                .collect();
            if p.iter().all(|&v| v == 0) {
                continue;
            }
            let big = |q: &[i64]| -> Vec<BigRational> {
                q.iter()
                    .map(|&v| BigRational::from_integer(v.into()))
                    .collect()
            };
            if pts.iter().any(|q| proportional(&big(q), &big(&p))) {
                continue;
            }
            pts.push(p);
        }
        PointSet::from_integers(ambient, &pts)
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn num_vars(&self) -> usize {
        self.ambient + 1
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Vec<BigRational>] {
        &self.points
    }

    pub fn subset(&self, indices: &[usize]) -> PointSet {
        PointSet {
            ambient: self.ambient,
            points: indices.iter().map(|&i| self.points[i].clone()).collect(),
        }
    }

    fn reduced(&self, field: PrimeField) -> Result<Vec<Vec<u64>>> {
        self.points
            .iter()
            .map(|p| p.iter().map(|c| field.from_rational(c)).collect())
            .collect()
    }

    /// Rows of the evaluation matrix in degree `t`, one per point.
    pub fn evaluation_rows(&self, t: usize, field: PrimeField) -> Result<Vec<Vec<u64>>> {
        let basis = MonomialBasis::new(self.num_vars(), t);
        Ok(self
            .reduced(field)?
            .iter()
            .map(|p| {
                let powers: Vec<Vec<u64>> = p
                    .iter()
                    .map(|&c| {
                        let mut v = vec![1u64; t + 1];
                        for k in 1..=t {
                            v[k] = field.mul(v[k - 1], c);
                        }
                        v
                    })
                    .collect();
                basis
                    .monomials
                    .iter()
                    .map(|e| {
                        e.iter()
                            .enumerate()
                            .fold(1, |acc, (i, &k)| field.mul(acc, powers[i][k as usize]))
                    })
                    .collect()
            })
            .collect())
    }

    fn hilbert_values(&self, t_max: Option<usize>, field: PrimeField) -> Result<Vec<i64>> {
        let total = self.len() as i64;
        let mut values = Vec::new();
        let mut t = 0;
        loop {
            if t_max.is_some_and(|m| t > m) {
                break;
            }
            let v = rank(
                field,
                dim_of_degree(self.num_vars(), t),
                self.evaluation_rows(t, field)?,
            ) as i64;
            values.push(v);
            if v == total && t_max.is_none() {
                break;
            }
            t += 1;
        }
        Ok(values)
    }

    /// `h_Z(t)` for `t = 0..=t_max`, or until the value reaches `|Z|` when
    /// no bound is given. The tail is constant once `|Z|` is reached.
    pub fn hilbert_function(
        &self,
        t_max: Option<usize>,
        cfg: &RankEngineConfig,
    ) -> Result<HilbertSeq> {
        let values = cfg.confirmed("point Hilbert function", |run| {
            self.hilbert_values(t_max, run.field)
        })?;
        if values.last() == Some(&(self.len() as i64)) {
            Ok(HilbertSeq::with_tail(values, Tail::Constant))
        } else {
            Ok(HilbertSeq::new(values))
        }
    }

    /// `Delta h_Z` up to its last nonzero value, with a zero tail.
    pub fn h_vector(&self, cfg: &RankEngineConfig) -> Result<HilbertSeq> {
        let h = self.hilbert_function(None, cfg)?;
        let d = difference(&HilbertSeq::new(h.into_values()), 1);
        Ok(HilbertSeq::with_tail(d.into_values(), Tail::Zero))
    }

    /// A basis of `(I_Z)_d` over the first configured prime; its size is
    /// confirmed across runs.
    pub fn degree_forms(&self, d: usize, cfg: &RankEngineConfig) -> Result<DegreeForms> {
        let n = self.num_vars();
        let basis = MonomialBasis::new(n, d);
        let dim = cfg.confirmed("degree forms", |run| {
            Ok(basis.len() - rank(run.field, basis.len(), self.evaluation_rows(d, run.field)?))
        })?;
        let field = cfg.runs()?[0].field;
        let forms: Vec<FpForm> = kernel(field, basis.len(), self.evaluation_rows(d, field)?)
            .iter()
            .map(|v| FpForm::from_dense(&basis, v))
            .collect();
        if forms.len() != dim {
            return Err(Error::Internal(
                "kernel size disagrees with confirmed rank".into(),
            ));
        }
        Ok(DegreeForms {
            degree: d,
            prime: field.modulus(),
            forms,
        })
    }

    /// Uniform position test against the truncations of `h_Z`.
    pub fn upp_test(&self, mode: UppMode, cfg: &RankEngineConfig) -> Result<UppVerdict> {
        let size = self.len();
        let plan: Vec<Vec<usize>> = match mode {
            UppMode::Exhaustive { cap } => {
                if size > cap {
                    return Err(Error::UppCapExceeded { size, cap });
                }
                (1..(1usize << size))
                    .map(|mask| (0..size).filter(|i| mask >> i & 1 == 1).collect::<Vec<_>>())
                    .collect()
            }
            UppMode::Sampled { per_size } => {
                let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
                (1..=size)
                    .flat_map(|t| {
                        (0..per_size)
                            .map(|_| {
                                let mut s = sample(&mut rng, size, t).into_vec();
                                s.sort_unstable();
                                s
                            })
                            .collect::<Vec<_>>()
                    })
                    .collect()
            }
        };
        let mut plan = plan;
        plan.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        let h = self.hilbert_function(None, cfg)?;
        let checked = plan.len();
        let witness = cfg.confirmed("uniform position", |run| {
            let rows: Vec<Vec<Vec<u64>>> = (0..h.len())
                .map(|t| self.evaluation_rows(t, run.field))
                .collect::<Result<_>>()?;
            let bad = plan.par_iter().position_first(|subset| {
                let k = subset.len() as i64;
                for (t, rows_t) in rows.iter().enumerate() {
                    let expected = h.values()[t].min(k);
                    let got = rank(
                        run.field,
                        rows_t[0].len(),
                        subset.iter().map(|&i| rows_t[i].clone()),
                    ) as i64;
                    if got != expected {
                        return true;
                    }
                    if expected == k {
                        break;
                    }
                }
                false
            });
            Ok(bad)
        })?;
        let witness = match witness {
            None => None,
            Some(pos) => {
                let subset = plan[pos].clone();
                let found = self
                    .subset(&subset)
                    .hilbert_function(Some(h.len() - 1), cfg)?;
                Some(UppWitness {
                    expected: truncate(&h, subset.len() as i64)?,
                    found,
                    subset,
                })
            }
        };
        Ok(UppVerdict {
            holds: witness.is_none(),
            mode,
            subsets_checked: checked,
            witness,
        })
    }
}

/// A basis of the forms of one degree vanishing on a point set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeForms {
    pub degree: usize,
    pub prime: u64,
    pub forms: Vec<FpForm>,
}

impl Serialize for DegreeForms {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Out {
            degree: usize,
            prime: u64,
            dimension: usize,
            forms: Vec<String>,
        }
        let field = PrimeField::new(self.prime).map_err(serde::ser::Error::custom)?;
        Out {
            degree: self.degree,
            prime: self.prime,
            dimension: self.forms.len(),
            forms: self.forms.iter().map(|f| f.display_lifted(field)).collect(),
        }
        .serialize(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "lowercase")]
pub enum UppMode {
    /// Every subset; refused above `cap` points.
    Exhaustive { cap: usize },
    /// `per_size` random subsets of each cardinality.
    Sampled { per_size: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UppWitness {
    pub subset: Vec<usize>,
    pub expected: HilbertSeq,
    pub found: HilbertSeq,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UppVerdict {
    pub holds: bool,
    pub mode: UppMode,
    pub subsets_checked: usize,
    pub witness: Option<UppWitness>,
}

impl SliceSource for PointSet {
    fn num_vars(&self) -> usize {
        self.ambient + 1
    }

    /// Kernel of the evaluation matrix.
    fn slice(&self, t: usize, field: PrimeField) -> Result<Vec<Vec<u64>>> {
        Ok(kernel(
            field,
            dim_of_degree(self.num_vars(), t),
            self.evaluation_rows(t, field)?,
        ))
    }
}

#[derive(Serialize, Deserialize)]
struct PointSetJson {
    ambient: usize,
    points: Vec<Vec<Coordinate>>,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum Coordinate {
    Text(String),
    Integer(i64),
}

impl Serialize for PointSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PointSetJson {
            ambient: self.ambient,
            points: self
                .points
                .iter()
                .map(|p| p.iter().map(|c| Coordinate::Text(c.to_string())).collect())
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for PointSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = PointSetJson::deserialize(d)?;
        let points = raw
            .points
            .into_iter()
            .map(|p| {
                p.into_iter()
                    .map(|c| match c {
                        Coordinate::Text(s) => parse_rational(&s),
                        Coordinate::Integer(v) => Ok(BigRational::from_integer(v.into())),
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()
            .map_err(serde::de::Error::custom)?;
        PointSet::new(raw.ambient, points).map_err(serde::de::Error::custom)
    }
}
