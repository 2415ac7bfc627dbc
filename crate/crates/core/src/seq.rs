//! Integer sequences indexed from degree 0: Hilbert functions, their
//! differences, h-vectors and complete-intersection h-vectors.
//!
//! A sequence is a finite list of values plus an optional tail marker
//! saying how it continues past the last explicit entry.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// How a sequence continues past its last explicit value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Tail {
    /// The last value repeats forever (Hilbert function of points).
    Constant,
    /// Every later value is zero (h-vectors, Artinian algebras).
    Zero,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct HilbertSeq {
    values: Vec<i64>,
    tail: Option<Tail>,
}

impl HilbertSeq {
    pub fn new(values: Vec<i64>) -> Self {
        HilbertSeq { values, tail: None }
    }

    pub fn with_tail(values: Vec<i64>, tail: Tail) -> Self {
        HilbertSeq {
            values,
            tail: Some(tail),
        }
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<i64> {
        self.values
    }

    pub fn tail(&self) -> Option<Tail> {
        self.tail
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Value in degree `t`, extending through the tail. `None` past the
    /// explicit range of a sequence without a tail.
    pub fn get(&self, t: usize) -> Option<i64> {
        if let Some(&v) = self.values.get(t) {
            return Some(v);
        }
        match self.tail? {
            Tail::Constant => self.values.last().copied().or(Some(0)),
            Tail::Zero => Some(0),
        }
    }

    /// The first `len` values, extended through the tail where needed.
    pub fn extended(&self, len: usize) -> Option<Vec<i64>> {
        (0..len).map(|t| self.get(t)).collect()
    }

    pub fn is_nonnegative(&self) -> bool {
        self.values.iter().all(|&v| v >= 0)
    }

    pub fn sum(&self) -> i64 {
        self.values.iter().sum()
    }

    /// Drop trailing zeros, marking the tail as zero.
    pub fn trim_zeros(&self) -> HilbertSeq {
        if self.tail == Some(Tail::Constant) && self.values.last().is_some_and(|&v| v != 0) {
            return self.clone();
        }
        let mut values = self.values.clone();
        while values.last() == Some(&0) {
            values.pop();
        }
        HilbertSeq::with_tail(values, Tail::Zero)
    }

    /// The eventual value of a non-decreasing sequence, as far as it is known.
    pub fn eventual_value(&self) -> i64 {
        match self.tail {
            Some(Tail::Zero) => 0,
            _ => self.values.last().copied().unwrap_or(0),
        }
    }
}

impl From<Vec<i64>> for HilbertSeq {
    fn from(values: Vec<i64>) -> Self {
        HilbertSeq::new(values)
    }
}

impl fmt::Display for HilbertSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, v) in self.values.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        match self.tail {
            Some(Tail::Constant) => write!(f, ",…)"),
            Some(Tail::Zero) => write!(f, ",0,…)"),
            None => write!(f, ")"),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct SeqObject {
    values: Vec<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    tail: Option<Tail>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum SeqRepr {
    Bare(Vec<i64>),
    Object(SeqObject),
}

impl Serialize for HilbertSeq {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self.tail {
            None => self.values.serialize(serializer),
            Some(_) => SeqObject {
                values: self.values.clone(),
                tail: self.tail,
            }
            .serialize(serializer),
        }
    }
}

impl<'de> Deserialize<'de> for HilbertSeq {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        Ok(match SeqRepr::deserialize(deserializer)? {
            SeqRepr::Bare(values) => HilbertSeq::new(values),
            SeqRepr::Object(o) => HilbertSeq {
                values: o.values,
                tail: o.tail,
            },
        })
    }
}

/// The `k`-th difference, with the convention that the value in degree -1
/// is zero. Negative entries are kept.
pub fn difference(s: &HilbertSeq, k: usize) -> HilbertSeq {
    let mut out = s.clone();
    for _ in 0..k {
        out = first_difference(&out);
    }
    out
}

fn first_difference(s: &HilbertSeq) -> HilbertSeq {
    let mut prev = 0;
    let values: Vec<i64> = s
        .values
        .iter()
        .map(|&v| {
            let d = v - prev;
            prev = v;
            d
        })
        .collect();
    let last = s.values.last().copied().unwrap_or(0);
    let tail = match s.tail {
        Some(Tail::Constant) => Some(Tail::Zero),
        Some(Tail::Zero) if last == 0 => Some(Tail::Zero),
        _ => None,
    };
    HilbertSeq { values, tail }
}

/// Running sums; inverse of the first difference.
pub fn partial_sum(s: &HilbertSeq) -> HilbertSeq {
    let mut acc = 0;
    let values: Vec<i64> = s
        .values
        .iter()
        .map(|&v| {
            acc += v;
            acc
        })
        .collect();
    let last = s.values.last().copied().unwrap_or(0);
    let tail = match s.tail {
        Some(Tail::Zero) => Some(Tail::Constant),
        Some(Tail::Constant) if last == 0 => Some(Tail::Constant),
        _ => None,
    };
    HilbertSeq { values, tail }
}

/// h-vector of an Artinian complete intersection with the given generator
/// degrees: the coefficients of the product of `1 + t + ... + t^(d-1)`.
pub fn ci_h_vector(degrees: &[usize]) -> Result<HilbertSeq> {
    if let Some(&d) = degrees.iter().find(|&&d| d == 0) {
        return Err(Error::Domain(format!(
            "generator degree {d} must be at least 1"
        )));
    }
    let mut coeffs = vec![1i64];
    for &d in degrees {
        let mut next = vec![0i64; coeffs.len() + d - 1];
        for (i, &c) in coeffs.iter().enumerate() {
            for slot in &mut next[i..i + d] {
                *slot += c;
            }
        }
        coeffs = next;
    }
    Ok(HilbertSeq::with_tail(coeffs, Tail::Zero))
}

/// Pointwise minimum of a points Hilbert function with `total`: the Hilbert
/// function every `total`-point subset of a uniform-position set must have.
pub fn truncate(s: &HilbertSeq, total: i64) -> Result<HilbertSeq> {
    let eventual = s.eventual_value();
    if total > eventual || total < 0 {
        return Err(Error::TruncationAboveCardinality { total, eventual });
    }
    let values = s.values.iter().map(|&v| v.min(total)).collect();
    let tail = match s.tail {
        Some(Tail::Zero) => Some(Tail::Zero),
        _ => Some(Tail::Constant),
    };
    Ok(HilbertSeq { values, tail })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn seq(v: &[i64]) -> HilbertSeq {
        HilbertSeq::new(v.to_vec())
    }

    #[test]
    fn first_and_second_difference() {
        let c = seq(&[1, 4, 10, 17, 26, 35]);
        assert_eq!(difference(&c, 1).values(), &[1, 3, 6, 7, 9, 9]);
        // same index range as the input, so a sixth entry (0) is kept
        assert_eq!(difference(&c, 2).values(), &[1, 2, 3, 1, 2, 0]);
        assert_eq!(difference(&c, 0), c);
    }

    #[test]
    fn difference_keeps_negative_entries() {
        assert_eq!(difference(&seq(&[1, 3, 2]), 1).values(), &[1, 2, -1]);
    }

    #[test]
    fn partial_sum_of_ci_56() {
        let h = ci_h_vector(&[5, 6]).unwrap();
        assert_eq!(h.values(), &[1, 2, 3, 4, 5, 5, 4, 3, 2, 1]);
        let s = partial_sum(&h);
        assert_eq!(
            s.extended(11).unwrap(),
            vec![1, 3, 6, 10, 15, 20, 24, 27, 29, 30, 30]
        );
        assert_eq!(s.tail(), Some(Tail::Constant));
        assert_eq!(partial_sum(&seq(&[1])).values(), &[1]);
    }

    #[test]
    fn ci_h_vectors() {
        assert_eq!(
            ci_h_vector(&[3, 3, 4]).unwrap().values(),
            &[1, 3, 6, 8, 8, 6, 3, 1]
        );
        assert_eq!(ci_h_vector(&[1]).unwrap().values(), &[1]);
        assert_eq!(ci_h_vector(&[]).unwrap().values(), &[1]);
        assert!(ci_h_vector(&[2, 0]).is_err());
    }

    #[test]
    fn truncation_of_curve_function() {
        // Hilbert function of the degree-25 curve through degree 11.
        let dh = HilbertSeq::new(vec![1, 3, 6, 10, 15, 20, 24, 27, 29, 29, 29, 29]);
        let h = partial_sum(&dh);
        let t = truncate(&h, 193).unwrap();
        assert_eq!(
            difference(&t, 1).values(),
            &[1, 3, 6, 10, 15, 20, 24, 27, 29, 29, 29, 0]
        );
    }

    #[test]
    fn truncation_noop_and_error() {
        let h = HilbertSeq::with_tail(vec![1, 3, 5, 6], Tail::Constant);
        assert_eq!(truncate(&h, 6).unwrap(), h);
        assert!(matches!(
            truncate(&h, 7),
            Err(Error::TruncationAboveCardinality {
                total: 7,
                eventual: 6
            })
        ));
    }

    #[test]
    fn json_forms() {
        let s: HilbertSeq = serde_json::from_str("[1,3,6]").unwrap();
        assert_eq!(s, seq(&[1, 3, 6]));
        let s: HilbertSeq = serde_json::from_str(r#"{"values":[1,2],"tail":"constant"}"#).unwrap();
        assert_eq!(s.get(10), Some(2));
        assert_eq!(
            serde_json::to_string(&s).unwrap(),
            r#"{"values":[1,2],"tail":"constant"}"#
        );
        assert_eq!(serde_json::to_string(&seq(&[1, 2])).unwrap(), "[1,2]");
    }

    proptest! {
        #[test]
        fn difference_and_partial_sum_are_inverse(v in prop::collection::vec(-50i64..200, 0..20)) {
            let s = HilbertSeq::new(v);
            prop_assert_eq!(&partial_sum(&difference(&s, 1)), &s);
            prop_assert_eq!(&difference(&partial_sum(&s), 1), &s);
        }

        #[test]
        fn ci_vectors_are_palindromic(degrees in prop::collection::vec(1usize..7, 0..5)) {
            let h = ci_h_vector(&degrees).unwrap();
            let v = h.values().to_vec();
            let mut r = v.clone();
            r.reverse();
            prop_assert_eq!(&v, &r);
            prop_assert_eq!(h.sum(), degrees.iter().product::<usize>() as i64);
        }

        #[test]
        fn truncation_is_idempotent(steps in prop::collection::vec(0i64..6, 1..10), cut in 0i64..40) {
            let mut v = vec![1];
            for s in steps { v.push(v.last().unwrap() + s); }
            let h = HilbertSeq::with_tail(v, Tail::Constant);
            let cut = cut.min(h.eventual_value());
            let once = truncate(&h, cut).unwrap();
            prop_assert_eq!(truncate(&once, cut).unwrap(), once);
        }
    }
}
