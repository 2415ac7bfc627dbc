//! Macaulay's binomial expansions and the growth bound `c^<i>`.
//!
//! All binomial coefficients are exact big integers. Validation of
//! O-sequences starts at degree 1: the value in degree 1 (the embedding
//! dimension) is unconstrained.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::seq::{difference, HilbertSeq};

/// Exact binomial coefficient `C(m, k)`; zero when `k > m`.
pub fn binomial(m: u64, k: u64) -> BigUint {
    if k > m {
        return BigUint::zero();
    }
    let k = k.min(m - k);
    let mut acc = BigUint::one();
    for j in 0..k {
        acc *= m - j;
        acc /= j + 1;
    }
    acc
}

/// Binomial coefficient as a `u64`, saturating at `u64::MAX`.
pub(crate) fn binomial_u64(m: u64, k: u64) -> u64 {
    binomial(m, k).to_u64().unwrap_or(u64::MAX)
}

pub(crate) fn bigint_to_string<S: Serializer>(
    v: &num_bigint::BigInt,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

pub(crate) fn big_to_string<S: Serializer>(
    v: &BigUint,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

/// `c = C(m_i, i) + C(m_{i-1}, i-1) + ... + C(m_j, j)` with
/// `m_i > m_{i-1} > ... > m_j >= j >= 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BinomialExpansion {
    pub level: usize,
    /// `(m, j)` pairs with `j` descending from `level`.
    pub terms: Vec<(u64, usize)>,
}

impl BinomialExpansion {
    pub fn value(&self) -> BigUint {
        self.terms.iter().map(|&(m, j)| binomial(m, j as u64)).sum()
    }

    /// `sum C(m + shift, j + shift)`.
    pub fn shifted_value(&self, shift: u64) -> BigUint {
        self.terms
            .iter()
            .map(|&(m, j)| binomial(m + shift, j as u64 + shift))
            .sum()
    }

    /// The top coefficient `m_i`.
    pub fn leading(&self) -> u64 {
        self.terms[0].0
    }
}

/// The unique greedy `i`-binomial expansion of `c`.
pub fn binomial_expansion(c: u64, i: usize) -> Result<BinomialExpansion> {
    if c == 0 || i == 0 {
        return Err(Error::Domain(format!(
            "binomial expansion needs c >= 1 and i >= 1 (got c = {c}, i = {i})"
        )));
    }
    let mut rest = BigUint::from(c);
    let mut terms = Vec::new();
    let mut j = i as u64;
    while !rest.is_zero() {
        // j >= 1 here: at level 1 the term C(rest, 1) clears the remainder.
        let m = largest_top(&rest, j);
        rest -= binomial(m, j);
        terms.push((m, j as usize));
        j -= 1;
    }
    Ok(BinomialExpansion { level: i, terms })
}

/// Largest `m >= j` with `C(m, j) <= c`, for `c >= 1`.
fn largest_top(c: &BigUint, j: u64) -> u64 {
    let mut lo = j;
    let mut step = 1u64;
    let mut hi = j + step;
    while binomial(hi, j) <= *c {
        lo = hi;
        step *= 2;
        hi = j + step;
    }
    // C(lo, j) <= c < C(hi, j)
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if binomial(mid, j) <= *c {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// Macaulay's bound `c^<i>`; zero for `c = 0`.
pub fn growth(c: u64, i: usize) -> Result<BigUint> {
    if i == 0 {
        return Err(Error::Domain("growth level must be at least 1".into()));
    }
    if c == 0 {
        return Ok(BigUint::zero());
    }
    Ok(binomial_expansion(c, i)?
        .terms
        .iter()
        .map(|&(m, j)| binomial(m + 1, j as u64 + 1))
        .sum())
}

/// Why a sequence fails to be an O-sequence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    /// The value in degree 0 is not 1.
    InitialValue {
        value: i64,
    },
    Negative {
        degree: usize,
        value: i64,
    },
    /// `next > value^<degree>`.
    Growth {
        degree: usize,
        value: i64,
        next: i64,
        #[serde(serialize_with = "big_to_string")]
        bound: BigUint,
    },
}

impl Violation {
    pub fn degree(&self) -> usize {
        match *self {
            Violation::InitialValue { .. } => 0,
            Violation::Negative { degree, .. } | Violation::Growth { degree, .. } => degree,
        }
    }
}

impl From<Violation> for Error {
    fn from(v: Violation) -> Self {
        match v {
            Violation::InitialValue { value } => Error::NotOSequence {
                degree: 0,
                value,
                next: value,
                bound: "1".into(),
            },
            Violation::Negative { degree, value } => Error::NotOSequence {
                degree,
                value,
                next: value,
                bound: "0".into(),
            },
            Violation::Growth {
                degree,
                value,
                next,
                bound,
            } => Error::NotOSequence {
                degree,
                value,
                next,
                bound: bound.to_string(),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OSequenceVerdict {
    pub is_o_sequence: bool,
    pub violation: Option<Violation>,
}

/// Checks `c_0 = 1` and `c_{i+1} <= c_i^<i>` for every `i >= 1` in range.
pub fn is_o_sequence(s: &HilbertSeq) -> OSequenceVerdict {
    match first_violation(s) {
        None => OSequenceVerdict {
            is_o_sequence: true,
            violation: None,
        },
        Some(v) => OSequenceVerdict {
            is_o_sequence: false,
            violation: Some(v),
        },
    }
}

fn first_violation(s: &HilbertSeq) -> Option<Violation> {
    let v = s.values();
    match v.first() {
        None => return None,
        Some(&c0) if c0 != 1 => return Some(Violation::InitialValue { value: c0 }),
        _ => {}
    }
    if let Some((degree, &value)) = v.iter().enumerate().find(|(_, &x)| x < 0) {
        return Some(Violation::Negative { degree, value });
    }
    for i in 1..v.len().saturating_sub(1) {
        let bound = growth(v[i] as u64, i).expect("level >= 1");
        if BigUint::from(v[i + 1] as u64) > bound {
            return Some(Violation::Growth {
                degree: i,
                value: v[i],
                next: v[i + 1],
                bound,
            });
        }
    }
    None
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DifferentiableVerdict {
    pub is_differentiable: bool,
    pub sequence: OSequenceVerdict,
    pub first_difference: OSequenceVerdict,
}

/// An O-sequence whose first difference is again an O-sequence.
pub fn is_differentiable_o_sequence(s: &HilbertSeq) -> DifferentiableVerdict {
    let sequence = is_o_sequence(s);
    let first_difference = is_o_sequence(&difference(s, 1));
    DifferentiableVerdict {
        is_differentiable: sequence.is_o_sequence && first_difference.is_o_sequence,
        sequence,
        first_difference,
    }
}

/// Growth from `degree` to `degree + 1` compared with Macaulay's bound.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GrowthVerdict {
    pub degree: usize,
    pub value: i64,
    #[serde(serialize_with = "big_to_string")]
    pub bound: BigUint,
    /// Absent past the end of a sequence without a tail.
    pub next: Option<i64>,
    pub is_maximal: bool,
}

/// One verdict per degree `i >= 1` of `s`. The step out of the last
/// explicit degree uses the tail when there is one.
pub fn maximal_growth_degrees(s: &HilbertSeq) -> Result<Vec<GrowthVerdict>> {
    if let Some(v) = first_violation(s) {
        return Err(v.into());
    }
    (1..s.len())
        .map(|i| {
            let value = s.values()[i];
            let bound = growth(value as u64, i)?;
            let next = s.get(i + 1);
            let is_maximal = next.is_some_and(|n| BigUint::from(n as u64) == bound);
            Ok(GrowthVerdict {
                degree: i,
                value,
                bound,
                next,
                is_maximal,
            })
        })
        .collect()
}
