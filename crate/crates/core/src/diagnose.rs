//! Rule engine reading base-locus structure off flat stretches of the
//! first (or second) difference of a point set's Hilbert function.
//!
//! Each rule carries its hypotheses as a checklist. A rule fires only when
//! every hypothesis holds; an unknown input makes it not evaluable rather
//! than failed. When a rule fires together with a weaker rule whose
//! conclusions it contains, the weaker one is reported as subsumed.

use std::collections::BTreeSet;
use std::fmt::{self, Write as _};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::macaulay::growth;
use crate::modla::{truncated_ideal_polynomial, RankEngineConfig, SliceSource};
use crate::seq::{difference, HilbertSeq};

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagnosisInput {
    /// Number of variables; the points live in `P^{ambient_n - 1}`.
    pub ambient_n: usize,
    pub delta_h: HilbertSeq,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta2_h: Option<HilbertSeq>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r2: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r3: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub upp: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wlp: Option<bool>,
    /// Vanishing of `h^1` of the twisted ideal sheaf of the reduced curve;
    /// taken on trust.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h1_vanishes: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reduced: Option<bool>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum RuleId {
    R1,
    R2,
    R3,
    R4,
    R5,
    R6,
    R7,
    R8,
}

impl RuleId {
    pub fn theorem(self) -> &'static str {
        match self {
            RuleId::R1 => "Davis: plane gcd of degree s",
            RuleId::R2 => "curve of degree s when d >= s",
            RuleId::R3 => "curve of degree s when d > r2",
            RuleId::R4 => "irreducible curve under uniform position, d >= s",
            RuleId::R5 => "unmixed curve under uniform position, d > r2",
            RuleId::R6 => "decreasing type continues under uniform position",
            RuleId::R7 => "surface of degree s from a flat second difference",
            RuleId::R8 => "plane uniform position forces decreasing type",
        }
    }
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Check {
    Holds,
    Fails,
    Unknown,
}

impl Check {
    fn of(v: Option<bool>) -> Check {
        match v {
            Some(true) => Check::Holds,
            Some(false) => Check::Fails,
            None => Check::Unknown,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Hypothesis {
    pub name: String,
    pub status: Check,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum RuleStatus {
    Fires,
    Subsumed { by: RuleId },
    DoesNotApply,
    NotEvaluable,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConclusionKind {
    /// `<(I_Z)_{<=d}>` is saturated.
    Saturated,
    CurveOfDegree,
    /// `(I_Z)_d` and `(I_Z)_{d+1}` have a gcd of degree `s`.
    GcdOfDegree,
    DRegular,
    Reduced,
    Unmixed,
    Irreducible,
    ZContainedInC,
    TwoDimSchemeOfDegree,
    StrictlyDecreasingAfter,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Conclusion {
    pub kind: ConclusionKind,
    /// The degree, regularity or starting index the conclusion refers to.
    pub value: i64,
    pub rules: Vec<RuleId>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuleEvaluation {
    pub rule: RuleId,
    pub theorem: String,
    pub hypotheses: Vec<Hypothesis>,
    #[serde(flatten)]
    pub status: RuleStatus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FlatSource {
    DeltaH,
    Delta2H,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Flat {
    pub d: usize,
    pub s: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlatDiagnosis {
    pub source: FlatSource,
    pub d: usize,
    pub s: i64,
    /// Growth bound `s^<d>` and whether the flat attains it.
    pub growth_bound: Option<String>,
    pub maximal_growth: Option<bool>,
    pub rules: Vec<RuleEvaluation>,
    pub conclusions: Vec<Conclusion>,
}

/// Measured Hilbert polynomial of a truncated ideal against a predicted
/// curve degree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveCheck {
    pub d: usize,
    pub predicted_degree: i64,
    pub measured_dimension: Option<usize>,
    pub measured_degree: String,
    pub agrees: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagnosisReport {
    pub ambient_n: usize,
    pub delta_h: HilbertSeq,
    pub delta2_h: HilbertSeq,
    pub decreasing_type: bool,
    pub flats: Vec<FlatDiagnosis>,
    pub firing: BTreeSet<RuleId>,
    pub warnings: Vec<String>,
    pub notes: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub verification: Vec<CurveCheck>,
}

/// Every `d` with `seq(d) = seq(d+1) = s > 0`, reading the tail.
pub fn find_flats(seq: &HilbertSeq) -> Vec<Flat> {
    (0..seq.len())
        .filter_map(|d| {
            let s = seq.get(d)?;
            let next = seq.get(d + 1)?;
            (s > 0 && s == next).then_some(Flat { d, s })
        })
        .collect()
}

/// Once the sequence strictly drops it keeps strictly dropping while
/// positive.
pub fn decreasing_type_check(delta_h: &HilbertSeq) -> bool {
    let v = delta_h.values();
    let mut dropping = false;
    for (t, &cur) in v.iter().enumerate() {
        let Some(next) = delta_h.get(t + 1) else {
            break;
        };
        if dropping && cur > 0 && cur <= next {
            return false;
        }
        if cur > next {
            dropping = true;
        }
    }
    true
}

fn hyp(name: impl Into<String>, status: Check) -> Hypothesis {
    Hypothesis {
        name: name.into(),
        status,
    }
}

fn cmp_check(r: Option<usize>, f: impl Fn(usize) -> bool) -> Check {
    Check::of(r.map(f))
}

fn status_of(hyps: &[Hypothesis]) -> RuleStatus {
    if hyps.iter().any(|h| h.status == Check::Fails) {
        RuleStatus::DoesNotApply
    } else if hyps.iter().any(|h| h.status == Check::Unknown) {
        RuleStatus::NotEvaluable
    } else {
        RuleStatus::Fires
    }
}

struct Candidate {
    eval: RuleEvaluation,
    conclusions: Vec<(ConclusionKind, i64)>,
}

fn candidate(
    rule: RuleId,
    hypotheses: Vec<Hypothesis>,
    conclusions: Vec<(ConclusionKind, i64)>,
) -> Candidate {
    let status = status_of(&hypotheses);
    Candidate {
        eval: RuleEvaluation {
            rule,
            theorem: rule.theorem().to_string(),
            hypotheses,
            status,
        },
        conclusions,
    }
}

fn first_difference_rules(input: &DiagnosisInput, d: usize, s: i64) -> Vec<Candidate> {
    use ConclusionKind::*;
    let d_ge_s = hyp(
        format!("d >= s ({d} >= {s})"),
        Check::of(Some(d as i64 >= s)),
    );
    let d_gt_r2 = || {
        hyp(
            match input.r2 {
                Some(r2) => format!("d > r2 ({d} > {r2})"),
                None => "d > r2 (r2 unknown)".into(),
            },
            cmp_check(input.r2, |r2| d > r2),
        )
    };
    let reduced = || hyp("Z reduced", Check::of(input.reduced));
    let upp = || hyp("Z has uniform position", Check::of(input.upp));
    let h1 = input.h1_vanishes == Some(true);
    let dd = d as i64;
    let mut out = Vec::new();

    let mut davis = vec![(GcdOfDegree, s), (CurveOfDegree, s)];
    if input.reduced == Some(true) {
        davis.push((Reduced, s));
    }
    out.push(candidate(
        RuleId::R1,
        vec![
            hyp(
                format!("plane: n = 3 (n = {})", input.ambient_n),
                Check::of(Some(input.ambient_n == 3)),
            ),
            d_ge_s.clone(),
        ],
        davis,
    ));
    out.push(candidate(
        RuleId::R2,
        vec![reduced(), d_ge_s.clone()],
        vec![
            (Saturated, dd),
            (CurveOfDegree, s),
            (Reduced, s),
            (DRegular, dd),
        ],
    ));
    let mut am = vec![(Saturated, dd), (CurveOfDegree, s), (DRegular, dd)];
    if h1 {
        am.push((Reduced, s));
    }
    out.push(candidate(RuleId::R3, vec![reduced(), d_gt_r2()], am));
    out.push(candidate(
        RuleId::R4,
        vec![reduced(), upp(), d_ge_s.clone()],
        vec![
            (Saturated, dd),
            (CurveOfDegree, s),
            (Reduced, s),
            (DRegular, dd),
            (Unmixed, s),
            (Irreducible, s),
            (ZContainedInC, s),
        ],
    ));
    let mut am_upp = vec![
        (Saturated, dd),
        (CurveOfDegree, s),
        (DRegular, dd),
        (Unmixed, s),
        (ZContainedInC, s),
    ];
    if h1 {
        am_upp.push((Reduced, s));
    }
    out.push(candidate(
        RuleId::R5,
        vec![reduced(), upp(), d_gt_r2()],
        am_upp,
    ));
    let drop = match (input.delta_h.get(d + 1), input.delta_h.get(d + 2)) {
        (Some(a), Some(b)) => hyp(
            format!("Delta h(d+1) > Delta h(d+2) ({a} > {b})"),
            Check::of(Some(a > b)),
        ),
        _ => hyp(
            "Delta h(d+1) > Delta h(d+2) (value missing)",
            Check::Unknown,
        ),
    };
    out.push(candidate(
        RuleId::R6,
        vec![upp(), d_ge_s, drop],
        vec![(StrictlyDecreasingAfter, dd + 1)],
    ));
    out
}

fn second_difference_rules(input: &DiagnosisInput, d: usize, s: i64) -> Vec<Candidate> {
    use ConclusionKind::*;
    let between = match (input.r2, input.r3) {
        (Some(r2), Some(r3)) => hyp(
            format!("r2 > d > r3 ({r2} > {d} > {r3})"),
            Check::of(Some(r2 > d && d > r3)),
        ),
        (Some(r2), None) if r2 <= d => hyp(format!("r2 > d > r3 ({r2} > {d} fails)"), Check::Fails),
        (None, Some(r3)) if d <= r3 => hyp(format!("r2 > d > r3 ({d} > {r3} fails)"), Check::Fails),
        _ => hyp("r2 > d > r3 (reduction numbers unknown)", Check::Unknown),
    };
    vec![candidate(
        RuleId::R7,
        vec![
            hyp(
                format!("n > 3 (n = {})", input.ambient_n),
                Check::of(Some(input.ambient_n > 3)),
            ),
            hyp("Z has the weak Lefschetz property", Check::of(input.wlp)),
            between,
        ],
        vec![
            (Saturated, d as i64),
            (TwoDimSchemeOfDegree, s),
            (DRegular, d as i64),
        ],
    )]
}

/// Marks weaker rules as subsumed and merges the conclusions of the rules
/// that fire.
fn settle(
    source: FlatSource,
    flat: Flat,
    mut cands: Vec<Candidate>,
    seq: &HilbertSeq,
) -> FlatDiagnosis {
    let fires = |cands: &[Candidate], r: RuleId| {
        cands
            .iter()
            .any(|c| c.eval.rule == r && c.eval.status == RuleStatus::Fires)
    };
    for (weaker, stronger) in [(RuleId::R3, RuleId::R5), (RuleId::R2, RuleId::R4)] {
        if fires(&cands, weaker) && fires(&cands, stronger) {
            for c in cands.iter_mut().filter(|c| c.eval.rule == weaker) {
                c.eval.status = RuleStatus::Subsumed { by: stronger };
            }
        }
    }
    let mut conclusions: Vec<Conclusion> = Vec::new();
    for c in cands.iter().filter(|c| c.eval.status == RuleStatus::Fires) {
        for &(kind, value) in &c.conclusions {
            match conclusions
                .iter_mut()
                .find(|x| x.kind == kind && x.value == value)
            {
                Some(x) => x.rules.push(c.eval.rule),
                None => conclusions.push(Conclusion {
                    kind,
                    value,
                    rules: vec![c.eval.rule],
                }),
            }
        }
    }
    conclusions.sort_by(|a, b| a.kind.cmp(&b.kind).then(a.value.cmp(&b.value)));
    let (growth_bound, maximal_growth) = match (flat.d, u64::try_from(flat.s)) {
        (d, Ok(s)) if d >= 1 => match growth(s, d) {
            Ok(b) => {
                let next = seq.get(flat.d + 1).unwrap_or(0);
                (
                    Some(b.to_string()),
                    Some(b == num_bigint::BigUint::from(next.max(0) as u64)),
                )
            }
            Err(_) => (None, None),
        },
        _ => (None, None),
    };
    FlatDiagnosis {
        source,
        d: flat.d,
        s: flat.s,
        growth_bound,
        maximal_growth,
        rules: cands.into_iter().map(|c| c.eval).collect(),
        conclusions,
    }
}

pub const FORMULAS_NOTE: &str =
    "formulas relating the Hilbert functions of Z and its parts on and off the curve are asserted to exist, not computed";
pub const H1_NOTE: &str = "the h1 vanishing hypothesis is a trusted input; it is not computed";
pub const STRUCTURE_NOTE: &str =
    "saturation, regularity, reducedness, unmixedness and irreducibility are theorem conclusions, not independently verified";

pub fn diagnose(input: &DiagnosisInput) -> Result<DiagnosisReport> {
    if input.ambient_n == 0 {
        return Err(Error::InconsistentInput(
            "ambient_n must be positive".into(),
        ));
    }
    let derived = difference(&input.delta_h, 1);
    let delta2 = match &input.delta2_h {
        Some(given) => {
            let common = given.len().min(derived.len());
            if given.values()[..common] != derived.values()[..common] {
                return Err(Error::InconsistentInput(format!(
                    "delta2_h {given} is not the difference of delta_h {}",
                    input.delta_h
                )));
            }
            given.clone()
        }
        None => derived,
    };
    let mut flats: Vec<FlatDiagnosis> = find_flats(&input.delta_h)
        .into_iter()
        .map(|f| {
            settle(
                FlatSource::DeltaH,
                f,
                first_difference_rules(input, f.d, f.s),
                &input.delta_h,
            )
        })
        .collect();
    flats.extend(find_flats(&delta2).into_iter().map(|f| {
        settle(
            FlatSource::Delta2H,
            f,
            second_difference_rules(input, f.d, f.s),
            &delta2,
        )
    }));
    flats.sort_by_key(|f| (f.d, f.source == FlatSource::Delta2H));

    let decreasing_type = decreasing_type_check(&input.delta_h);
    let mut warnings = Vec::new();
    if input.upp == Some(true) && input.ambient_n == 3 && !decreasing_type {
        warnings.push(format!(
            "{}: Delta h is not of decreasing type, so no plane point set with uniform position has it",
            RuleId::R8
        ));
    }
    for f in flats.iter().filter(|f| f.source == FlatSource::DeltaH) {
        if let Some(r2) = input.r2 {
            if f.d as i64 >= f.s && f.d <= r2 {
                warnings.push(format!(
                    "inconsistent data: flat at d = {} has d >= s = {}, which forces d > r2, but r2 = {r2}",
                    f.d, f.s
                ));
            }
        }
        let r6_fires = f
            .rules
            .iter()
            .any(|r| r.rule == RuleId::R6 && r.status == RuleStatus::Fires);
        if r6_fires {
            let v = input.delta_h.values();
            let bad = (f.d + 1..v.len())
                .find(|&t| v[t] > 0 && input.delta_h.get(t + 1).is_some_and(|n| n >= v[t]));
            if let Some(t) = bad {
                warnings.push(format!(
                    "inconsistent data: {} predicts strict decrease after degree {}, but Delta h({t}) <= Delta h({})",
                    RuleId::R6,
                    f.d + 1,
                    t + 1
                ));
            }
        }
    }
    let firing: BTreeSet<RuleId> = flats
        .iter()
        .flat_map(|f| f.rules.iter())
        .filter(|r| r.status == RuleStatus::Fires)
        .map(|r| r.rule)
        .collect();
    let mut notes = Vec::new();
    if firing
        .iter()
        .any(|r| matches!(r, RuleId::R1 | RuleId::R2 | RuleId::R3))
    {
        notes.push(FORMULAS_NOTE.to_string());
    }
    if input.h1_vanishes.is_some() {
        notes.push(H1_NOTE.to_string());
    }
    if !firing.is_empty() {
        notes.push(STRUCTURE_NOTE.to_string());
    }
    Ok(DiagnosisReport {
        ambient_n: input.ambient_n,
        delta_h: input.delta_h.clone(),
        delta2_h: delta2,
        decreasing_type,
        flats,
        firing,
        warnings,
        notes,
        verification: Vec::new(),
    })
}

impl DiagnosisReport {
    /// Degrees of the curves predicted on first-difference flats, by `d`.
    pub fn predicted_curves(&self) -> Vec<(usize, i64)> {
        self.flats
            .iter()
            .filter(|f| f.source == FlatSource::DeltaH)
            .filter_map(|f| {
                f.conclusions
                    .iter()
                    .find(|c| c.kind == ConclusionKind::CurveOfDegree)
                    .map(|c| (f.d, c.value))
            })
            .collect()
    }

    /// Fits the Hilbert polynomial of `<I_{<=d}>` for every predicted curve
    /// and records whether it is a curve of the predicted degree.
    pub fn verify_curves<S: SliceSource + ?Sized>(
        &mut self,
        src: &S,
        cfg: &RankEngineConfig,
    ) -> Result<()> {
        for (d, s) in self.predicted_curves() {
            let fit = truncated_ideal_polynomial(src, d, None, cfg)?;
            let agrees = fit.dimension == Some(1) && fit.degree == s.into();
            self.verification.push(CurveCheck {
                d,
                predicted_degree: s,
                measured_dimension: fit.dimension,
                measured_degree: fit.degree.to_string(),
                agrees,
            });
        }
        Ok(())
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "ambient: P^{}", self.ambient_n - 1);
        let _ = writeln!(out, "Delta h:   {}", self.delta_h);
        let _ = writeln!(out, "Delta^2 h: {}", self.delta2_h);
        let _ = writeln!(out, "decreasing type: {}", self.decreasing_type);
        if self.flats.is_empty() {
            let _ = writeln!(out, "no flats");
        }
        for f in &self.flats {
            let which = match f.source {
                FlatSource::DeltaH => "Delta h",
                FlatSource::Delta2H => "Delta^2 h",
            };
            let _ = write!(out, "\nflat of {which} at d = {}, s = {}", f.d, f.s);
            if let (Some(b), Some(m)) = (&f.growth_bound, f.maximal_growth) {
                let _ = write!(
                    out,
                    " (bound {b}, {})",
                    if m { "maximal" } else { "not maximal" }
                );
            }
            out.push('\n');
            for r in &f.rules {
                let status = match r.status {
                    RuleStatus::Fires => "fires".to_string(),
                    RuleStatus::Subsumed { by } => format!("subsumed by {by}"),
                    RuleStatus::DoesNotApply => "does not apply".to_string(),
                    RuleStatus::NotEvaluable => "not evaluable".to_string(),
                };
                let _ = writeln!(out, "  {} {}: {status}", r.rule, r.theorem);
                for h in &r.hypotheses {
                    let mark = match h.status {
                        Check::Holds => "+",
                        Check::Fails => "-",
                        Check::Unknown => "?",
                    };
                    let _ = writeln!(out, "      [{mark}] {}", h.name);
                }
            }
            for c in &f.conclusions {
                let rules: Vec<String> = c.rules.iter().map(ToString::to_string).collect();
                let _ = writeln!(out, "  => {:?} {} [{}]", c.kind, c.value, rules.join(", "));
            }
        }
        let firing: Vec<String> = self.firing.iter().map(ToString::to_string).collect();
        let _ = writeln!(out, "\nfiring rules: {{{}}}", firing.join(", "));
        for c in &self.verification {
            let _ = writeln!(
                out,
                "check d = {}: predicted curve of degree {}, measured dimension {} degree {} ({})",
                c.d,
                c.predicted_degree,
                c.measured_dimension
                    .map_or("none".into(), |m| m.to_string()),
                c.measured_degree,
                if c.agrees { "agrees" } else { "DISAGREES" }
            );
        }
        for w in &self.warnings {
            let _ = writeln!(out, "warning: {w}");
        }
        for n in &self.notes {
            let _ = writeln!(out, "note: {n}");
        }
        out
    }
}
