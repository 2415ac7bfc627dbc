//! Exact linear algebra over large prime fields, driving every computation
//! that involves general forms: slice dimensions, quotients by general
//! linear forms, reduction numbers, Lefschetz tests and Hilbert-polynomial
//! fitting of truncated ideals.
//!
//! Answers that depend on a random choice are computed once per
//! confirmation run, each run using its own prime and seed, and accepted
//! only when all runs agree. A single run errs with probability at most
//! about (matrix size) / p, so with p near 2^62 disagreement signals a
//! genuinely special input rather than bad luck.

pub mod echelon;
pub mod field;
pub mod fpform;

use std::fmt::Debug;

use num_bigint::BigInt;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use echelon::Echelon;
pub use field::{PrimeField, DEFAULT_PRIME};
pub use fpform::{FpForm, FpIdeal, Restrictor};

use crate::error::{Error, Result};
use crate::form::{dim_of_degree, monomials_of_degree, Form, MonomialBasis};
use crate::poly::QPoly;
use crate::seq::{HilbertSeq, Tail};

pub const DEFAULT_CAP: usize = 40;
pub const DEFAULT_CONFIRMATIONS: usize = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankEngineConfig {
    pub prime: u64,
    pub seed: u64,
    pub confirmations: usize,
    /// Degree cap for every search that waits for a slice to vanish or
    /// appear.
    pub cap: usize,
}

impl Default for RankEngineConfig {
    fn default() -> Self {
        RankEngineConfig {
            prime: DEFAULT_PRIME,
            seed: 0,
            confirmations: DEFAULT_CONFIRMATIONS,
            cap: DEFAULT_CAP,
        }
    }
}

/// One confirmation run: a prime field and a seed.
#[derive(Debug, Clone, Copy)]
pub struct Run {
    pub field: PrimeField,
    pub seed: u64,
}

impl Run {
    pub fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }
}

impl RankEngineConfig {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    /// Run `r` uses the `r`-th prime below the configured one.
    pub fn runs(&self) -> Result<Vec<Run>> {
        if self.confirmations == 0 {
            return Err(Error::Domain("confirmations must be at least 1".into()));
        }
        let mut p = PrimeField::new(self.prime)?.modulus();
        let mut out = Vec::with_capacity(self.confirmations);
        for r in 0..self.confirmations as u64 {
            if r > 0 {
                if p <= 3 {
                    return Err(Error::InvalidPrime(
                        "not enough primes below the configured one".into(),
                    ));
                }
                p = field::prev_prime(p);
            }
            out.push(Run {
                field: PrimeField::new(p)?,
                seed: self
                    .seed
                    .wrapping_add(r.wrapping_mul(0x9E37_79B9_7F4A_7C15)),
            });
        }
        Ok(out)
    }

    /// Evaluates `f` once per run and returns the common answer.
    pub fn confirmed<T, F>(&self, what: &str, f: F) -> Result<T>
    where
        T: PartialEq + Debug + Send,
        F: Fn(&Run) -> Result<T> + Sync,
    {
        let runs = self.runs()?;
        let mut results = runs.par_iter().map(&f).collect::<Vec<_>>().into_iter();
        let first = results.next().expect("at least one run")?;
        for (r, other) in results.enumerate() {
            let other = other?;
            if other != first {
                return Err(Error::GenericUnstable(format!(
                    "{what}: run 0 gave {first:?}, run {} gave {other:?}",
                    r + 1
                )));
            }
        }
        Ok(first)
    }
}

/// A degreewise provider of spanning sets for the slices of a homogeneous
/// ideal.
pub trait SliceSource: Sync {
    fn num_vars(&self) -> usize;

    /// Rows spanning `I_t` in the basis `MonomialBasis::new(n, t)`.
    fn slice(&self, t: usize, field: PrimeField) -> Result<Vec<Vec<u64>>>;

    /// Forms of degree `t` that together with `lower` span `I_t`, where
    /// `lower` already spans `I_s` for every `s < t`.
    fn new_generators(&self, t: usize, field: PrimeField, lower: &FpIdeal) -> Result<Vec<FpForm>> {
        let basis = MonomialBasis::new(self.num_vars(), t);
        let mut ech = lower.slice_echelon(t, &basis);
        let mut out = Vec::new();
        for row in self.slice(t, field)? {
            if ech.is_full() {
                break;
            }
            if ech.insert(row.clone()) {
                out.push(FpForm::from_dense(&basis, &row));
            }
        }
        Ok(out)
    }
}

/// An ideal given by rational generators.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GeneratorIdeal {
    n: usize,
    gens: Vec<Form>,
}

impl GeneratorIdeal {
    pub fn new(n: usize, gens: Vec<Form>) -> Result<Self> {
        for g in &gens {
            if g.num_vars() != n {
                return Err(Error::ExponentLength {
                    expected: n,
                    found: g.num_vars(),
                });
            }
        }
        let gens = gens.into_iter().filter(|g| !g.is_zero()).collect();
        Ok(GeneratorIdeal { n, gens })
    }

    pub fn gens(&self) -> &[Form] {
        &self.gens
    }

    fn reduce(&self, field: PrimeField) -> Result<FpIdeal> {
        let mut ideal = FpIdeal::new(self.n, field);
        for g in &self.gens {
            ideal.gens.push(FpForm::from_form(g, field)?);
        }
        Ok(ideal)
    }
}

impl<'de> Deserialize<'de> for GeneratorIdeal {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            n: usize,
            gens: Vec<Form>,
        }
        let raw = Raw::deserialize(d)?;
        GeneratorIdeal::new(raw.n, raw.gens).map_err(serde::de::Error::custom)
    }
}

impl SliceSource for GeneratorIdeal {
    fn num_vars(&self) -> usize {
        self.n
    }

    fn slice(&self, t: usize, field: PrimeField) -> Result<Vec<Vec<u64>>> {
        Ok(self
            .reduce(field)?
            .slice_rows(t, &MonomialBasis::new(self.n, t)))
    }

    fn new_generators(&self, t: usize, field: PrimeField, _lower: &FpIdeal) -> Result<Vec<FpForm>> {
        self.gens
            .iter()
            .filter(|g| g.degree() == Some(t))
            .map(|g| FpForm::from_form(g, field))
            .collect()
    }
}

/// The ideal of a source, built degree by degree over one field, together
/// with its restriction to a general linear subspace.
pub struct Tower<'a, S: SliceSource + ?Sized> {
    src: &'a S,
    field: PrimeField,
    full: FpIdeal,
    restrictor: Option<Restrictor>,
    reduced: FpIdeal,
    next_degree: usize,
    frozen_after: Option<usize>,
}

impl<'a, S: SliceSource + ?Sized> Tower<'a, S> {
    /// Cuts by `m` general linear forms, realized as the substitution
    /// `x = A y` with a random `n x (n - m)` matrix `A`.
    pub fn new(src: &'a S, field: PrimeField, m: usize, rng: &mut ChaCha8Rng) -> Result<Self> {
        let n = src.num_vars();
        if m > n {
            return Err(Error::Domain(format!(
                "cannot cut {n} variables by {m} linear forms"
            )));
        }
        let restrictor = (m > 0).then(|| Restrictor::random(field, n, n - m, rng));
        Ok(Tower {
            src,
            field,
            full: FpIdeal::new(n, field),
            restrictor,
            reduced: FpIdeal::new(n - m, field),
            next_degree: 0,
            frozen_after: None,
        })
    }

    /// Uses only the generators of degree at most `d`.
    pub fn truncated(mut self, d: usize) -> Self {
        self.frozen_after = Some(d);
        self
    }

    pub fn extend_to(&mut self, t: usize) -> Result<()> {
        let last = self.frozen_after.map_or(t, |d| d.min(t));
        while self.next_degree <= last {
            let deg = self.next_degree;
            for g in self.src.new_generators(deg, self.field, &self.full)? {
                let r = match &self.restrictor {
                    Some(res) => res.apply(&g),
                    None => g.clone(),
                };
                if !r.is_zero() {
                    self.reduced.gens.push(r);
                }
                self.full.gens.push(g);
            }
            self.next_degree += 1;
        }
        Ok(())
    }

    /// `dim (S / I')_t` for the reduced ideal `I'`.
    pub fn quotient_dim(&mut self, t: usize) -> Result<usize> {
        self.extend_to(t)?;
        Ok(self.reduced.quotient_dim(t))
    }

    /// Quotient dimensions for `t = 0..=t_max`, ranks computed in parallel.
    pub fn quotient_dims(&mut self, t_max: usize) -> Result<Vec<usize>> {
        self.extend_to(t_max)?;
        let reduced = &self.reduced;
        Ok((0..=t_max)
            .into_par_iter()
            .map(|t| reduced.quotient_dim(t))
            .collect())
    }

    pub fn reduced(&self) -> &FpIdeal {
        &self.reduced
    }

    pub fn full(&self) -> &FpIdeal {
        &self.full
    }
}

fn zero_tail(values: Vec<i64>) -> HilbertSeq {
    let ends_in_zero = values.len() > 1 && values.last() == Some(&0);
    if ends_in_zero {
        HilbertSeq::with_tail(values, Tail::Zero)
    } else {
        HilbertSeq::new(values)
    }
}

/// `dim I_t`.
pub fn slice_dim<S: SliceSource + ?Sized>(
    src: &S,
    t: usize,
    cfg: &RankEngineConfig,
) -> Result<usize> {
    let ncols = dim_of_degree(src.num_vars(), t);
    cfg.confirmed("slice dimension", |run| {
        Ok(echelon::rank(run.field, ncols, src.slice(t, run.field)?))
    })
}

/// `h_{R/I}(t)` for `t = 0..=t_max`.
pub fn hilbert_function<S: SliceSource + ?Sized>(
    src: &S,
    t_max: usize,
    cfg: &RankEngineConfig,
) -> Result<HilbertSeq> {
    quotient_by_generic_linears(src, 0, t_max, cfg)
}

/// `h_{R/(I+J)}(t)` for `J` generated by `m` general linear forms.
pub fn quotient_by_generic_linears<S: SliceSource + ?Sized>(
    src: &S,
    m: usize,
    t_max: usize,
    cfg: &RankEngineConfig,
) -> Result<HilbertSeq> {
    let dims = cfg.confirmed("quotient by general linear forms", |run| {
        let mut rng = run.rng();
        Tower::new(src, run.field, m, &mut rng)?.quotient_dims(t_max)
    })?;
    Ok(zero_tail(dims.into_iter().map(|v| v as i64).collect()))
}

/// Direct form of [`quotient_by_generic_linears`]: the rank of `I_t`
/// stacked with `L_k * R_{t-1}`. Slower; kept as an independent check.
pub fn quotient_by_linears_stacked<S: SliceSource + ?Sized>(
    src: &S,
    m: usize,
    t_max: usize,
    cfg: &RankEngineConfig,
) -> Result<HilbertSeq> {
    let n = src.num_vars();
    let dims = cfg.confirmed("stacked quotient", |run| {
        let mut rng = run.rng();
        let linears: Vec<FpForm> = (0..m)
            .map(|_| FpForm::random(n, 1, run.field, &mut rng))
            .collect();
        (0..=t_max)
            .map(|t| {
                let basis = MonomialBasis::new(n, t);
                let mut ech = Echelon::new(run.field, basis.len());
                for row in src.slice(t, run.field)? {
                    ech.insert(row);
                }
                if t > 0 {
                    for l in &linears {
                        for mono in monomials_of_degree(n, t - 1) {
                            ech.insert(l.times_monomial_row(&mono, &basis));
                        }
                    }
                }
                Ok(basis.len() - ech.rank())
            })
            .collect::<Result<Vec<_>>>()
    })?;
    Ok(zero_tail(dims.into_iter().map(|v| v as i64).collect()))
}

/// `r_m(R/I)`: the least `k` with `h_{R/(I+J)}(k+1) = 0`.
pub fn reduction_number<S: SliceSource + ?Sized>(
    src: &S,
    m: usize,
    cfg: &RankEngineConfig,
) -> Result<usize> {
    cfg.confirmed("reduction number", |run| {
        let mut rng = run.rng();
        let mut tower = Tower::new(src, run.field, m, &mut rng)?;
        for t in 1..=cfg.cap {
            if tower.quotient_dim(t)? == 0 {
                return Ok(t - 1);
            }
        }
        Err(Error::NoVanishing { cap: cfg.cap })
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LefschetzStep {
    pub t: usize,
    pub source_dim: usize,
    pub target_dim: usize,
    pub rank: usize,
    pub expected: usize,
    pub maximal: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LefschetzReport {
    /// Degree of the multiplying form: 1 for the weak property.
    pub form_degree: usize,
    /// Number of general linear forms cut before testing.
    pub cuts: usize,
    /// Hilbert function of the tested Artinian algebra.
    pub hilbert: Vec<usize>,
    pub steps: Vec<LefschetzStep>,
    pub holds: bool,
    pub first_failure: Option<usize>,
}

/// Weak Lefschetz test of the algebra obtained by cutting with `m` general
/// linear forms.
pub fn wlp_test<S: SliceSource + ?Sized>(
    src: &S,
    m: usize,
    t_max: Option<usize>,
    cfg: &RankEngineConfig,
) -> Result<LefschetzReport> {
    slp_test(src, m, 1, t_max, cfg)
}

/// Maximal-rank test for multiplication by a general form of degree `d`
/// on the algebra obtained by cutting with `m` general linear forms. The
/// algebra must vanish by degree `t_max`; without `t_max` the configured
/// cap bounds the search.
pub fn slp_test<S: SliceSource + ?Sized>(
    src: &S,
    m: usize,
    d: usize,
    t_max: Option<usize>,
    cfg: &RankEngineConfig,
) -> Result<LefschetzReport> {
    if d == 0 {
        return Err(Error::Domain("form degree must be at least 1".into()));
    }
    cfg.confirmed("Lefschetz test", |run| {
        let mut rng = run.rng();
        let mut tower = Tower::new(src, run.field, m, &mut rng)?;
        let limit = t_max.unwrap_or(cfg.cap);
        let mut hilbert = Vec::new();
        for t in 0..=limit {
            let v = tower.quotient_dim(t)?;
            hilbert.push(v);
            if v == 0 && t > 0 {
                break;
            }
        }
        if *hilbert.last().unwrap() != 0 {
            return Err(Error::Domain(format!(
                "the algebra cut by {m} general linear forms is not Artinian through degree {limit}"
            )));
        }
        let top = hilbert.len() - 1;
        tower.extend_to(top + d)?;
        let k = tower.reduced().n;
        let form = FpForm::random(k, d, run.field, &mut rng);
        let reduced = tower.reduced();
        let steps: Vec<LefschetzStep> = (0..top)
            .into_par_iter()
            .map(|t| {
                let target = MonomialBasis::new(k, t + d);
                let mut ech = reduced.slice_echelon(t + d, &target);
                let base = ech.rank();
                for mono in monomials_of_degree(k, t) {
                    if ech.is_full() {
                        break;
                    }
                    ech.insert(form.times_monomial_row(&mono, &target));
                }
                let rank = ech.rank() - base;
                let source_dim = hilbert[t];
                let target_dim = hilbert.get(t + d).copied().unwrap_or(0);
                let expected = source_dim.min(target_dim);
                LefschetzStep {
                    t,
                    source_dim,
                    target_dim,
                    rank,
                    expected,
                    maximal: rank == expected,
                }
            })
            .collect();
        let first_failure = steps.iter().find(|s| !s.maximal).map(|s| s.t);
        Ok(LefschetzReport {
            form_degree: d,
            cuts: m,
            hilbert,
            holds: first_failure.is_none(),
            first_failure,
            steps,
        })
    })
}

/// Hilbert polynomial of `R / <I_{<=d}>` read off exact samples.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TruncationFit {
    pub truncation_degree: usize,
    pub samples: Vec<(usize, i64)>,
    /// First sampled degree the polynomial was fitted from.
    pub fit_from: usize,
    pub polynomial: QPoly,
    /// Dimension of the projective scheme; `None` when it is empty.
    pub dimension: Option<usize>,
    /// Leading coefficient times `dimension!`.
    #[serde(serialize_with = "crate::macaulay::bigint_to_string")]
    pub degree: BigInt,
}

/// Samples `h_{R/<I_{<=d}>}` on `range` (default `d..=d+n+3`) and fits the
/// lowest-degree polynomial that passes through its last samples. A fit of
/// degree `D` uses `D+1` points and must also match 3 more.
pub fn truncated_ideal_polynomial<S: SliceSource + ?Sized>(
    src: &S,
    d: usize,
    range: Option<(usize, usize)>,
    cfg: &RankEngineConfig,
) -> Result<TruncationFit> {
    let n = src.num_vars();
    let (lo, hi) = range.unwrap_or((d, d + n + 3));
    if lo > hi {
        return Err(Error::Domain(format!("empty sample range {lo}..={hi}")));
    }
    let values = cfg.confirmed("truncated ideal samples", |run| {
        let mut rng = run.rng();
        let mut tower = Tower::new(src, run.field, 0, &mut rng)?.truncated(d);
        tower.extend_to(d)?;
        let full = tower.full();
        Ok((lo..=hi)
            .into_par_iter()
            .map(|t| full.quotient_dim(t) as i64)
            .collect::<Vec<_>>())
    })?;
    let samples: Vec<(usize, i64)> = (lo..=hi).zip(values).collect();
    for deg in 0..n.max(1) {
        let need = deg + 4;
        if samples.len() < need {
            break;
        }
        let window = &samples[samples.len() - need..];
        let nodes: Vec<(i64, BigInt)> = window[..deg + 1]
            .iter()
            .map(|&(t, v)| (t as i64, BigInt::from(v)))
            .collect();
        let p = QPoly::interpolate(&nodes);
        if window[deg + 1..].iter().all(|&(t, v)| {
            p.eval_int(t as i64) == num_rational::BigRational::from_integer(v.into())
        }) {
            let dimension = p.degree();
            let degree = match dimension {
                None => BigInt::from(0),
                Some(k) => {
                    let fact: BigInt = (1..=k as u64).map(BigInt::from).product();
                    let lc =
                        p.leading_coefficient() * num_rational::BigRational::from_integer(fact);
                    if !lc.is_integer() {
                        return Err(Error::Internal(format!("non-integral scheme degree {lc}")));
                    }
                    lc.to_integer()
                }
            };
            return Ok(TruncationFit {
                truncation_degree: d,
                fit_from: window[0].0,
                samples,
                polynomial: p,
                dimension,
                degree,
            });
        }
    }
    Err(Error::NoPolynomialFit(format!(
        "samples on {lo}..={hi} fit no polynomial of degree below {}",
        n.max(1)
    )))
}

/// `alpha(I)`: the least degree with a nonzero slice.
pub fn initial_degree<S: SliceSource + ?Sized>(src: &S, cfg: &RankEngineConfig) -> Result<usize> {
    let n = src.num_vars();
    cfg.confirmed("initial degree", |run| {
        for t in 0..=cfg.cap {
            if echelon::rank(run.field, dim_of_degree(n, t), src.slice(t, run.field)?) > 0 {
                return Ok(t);
            }
        }
        Err(Error::CapExceeded { cap: cfg.cap })
    })
}
