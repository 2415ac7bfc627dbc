//! Worked examples bundled with the binary, each with its expected outcome.

use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use hilbertkit::diagnose::{diagnose, DiagnosisInput, RuleId};
use hilbertkit::form::{monomials_of_degree, Form};
use hilbertkit::macaulay::{growth, is_o_sequence, maximal_growth_degrees};
use hilbertkit::modla::{
    quotient_by_generic_linears, reduction_number, truncated_ideal_polynomial, wlp_test,
    GeneratorIdeal, PrimeField, RankEngineConfig,
};
use hilbertkit::monomial::{lex_ideal, minimalize, Monomial, MonomialIdeal};
use hilbertkit::points::{gcd_of_forms, PointSet, UppMode};
use hilbertkit::seq::{ci_h_vector, partial_sum};
use hilbertkit::{HilbertSeq, Result, Tail};

/// Where the expected value comes from.
#[derive(Debug, Clone, Copy, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Origin {
    /// A published worked example.
    Literature,
    /// Immediate from the definitions.
    Trivial,
    /// A construction whose answer is known by design.
    Construction,
}

impl Origin {
    pub fn as_str(self) -> &'static str {
        match self {
            Origin::Literature => "literature",
            Origin::Trivial => "trivial",
            Origin::Construction => "construction",
        }
    }
}

pub struct Fixture {
    pub name: &'static str,
    pub origin: Origin,
    pub about: &'static str,
    check: fn(&RankEngineConfig) -> Result<(bool, String)>,
}

#[derive(Debug, Serialize)]
pub struct Outcome {
    pub name: &'static str,
    pub pass: bool,
    pub summary: String,
}

impl Fixture {
    pub fn run(&self, cfg: &RankEngineConfig) -> Outcome {
        let (pass, summary) = match (self.check)(cfg) {
            Ok(r) => r,
            Err(e) => (false, format!("error: {e}")),
        };
        Outcome {
            name: self.name,
            pass,
            summary,
        }
    }
}

pub fn all() -> Vec<Fixture> {
    vec![
        Fixture {
            name: "growth76",
            origin: Origin::Literature,
            about: "76^<5> = 111",
            check: growth76,
        },
        Fixture {
            name: "osequences",
            origin: Origin::Literature,
            about: "(1,3,6,7,9,9) passes, (1,2,3,1,2) fails at degree 3",
            check: osequences,
        },
        Fixture {
            name: "ci334",
            origin: Origin::Literature,
            about: "complete intersection (3,3,4) in P^3: r1, r2, r3",
            check: ci334,
        },
        Fixture {
            name: "ci56",
            origin: Origin::Literature,
            about: "curve x^4t - y^4z, z^6 - xt^5: Delta h by closed form and by ranks",
            check: ci56,
        },
        Fixture {
            name: "wlp_families",
            origin: Origin::Literature,
            about: "monomial J, its 52 lifted points, WLP failure, r2 and truncation",
            check: wlp_families,
        },
        Fixture {
            name: "lex_betti",
            origin: Origin::Literature,
            about: "lex ideal of (1,3,6,9,11,11,11): Betti totals",
            check: lex_betti,
        },
        Fixture {
            name: "sixteen_points",
            origin: Origin::Literature,
            about: "16 general points in P^3: growth 6 -> 0 is not maximal",
            check: sixteen_points,
        },
        Fixture {
            name: "conic_gcd",
            origin: Origin::Construction,
            about: "10 points on a conic: plane gcd of degree 2, plane rule fires",
            check: conic_gcd,
        },
        Fixture {
            name: "twisted_cubic",
            origin: Origin::Construction,
            about: "16 points on a twisted cubic: predicted and measured curve of degree 3",
            check: twisted_cubic,
        },
        Fixture {
            name: "collinear_triple",
            origin: Origin::Trivial,
            about: "4 points with 3 on a line fail uniform position",
            check: collinear_triple,
        },
        Fixture {
            name: "not_decr_type",
            origin: Origin::Literature,
            about: "diagnosis: unmixed curve of degree 29 at d = 9",
            check: not_decr_type,
        },
        Fixture {
            name: "two_sextics",
            origin: Origin::Literature,
            about: "diagnosis: curve of degree 32 at d = 17",
            check: two_sextics,
        },
        Fixture {
            name: "cant_extend",
            origin: Origin::Literature,
            about: "diagnosis: 16 general points in P^3, no rule applies",
            check: cant_extend,
        },
        Fixture {
            name: "ci334_diagnosis",
            origin: Origin::Literature,
            about: "diagnosis: complete intersection (3,3,4), no rule applies",
            check: ci334_diagnosis,
        },
        Fixture {
            name: "empty_flat",
            origin: Origin::Trivial,
            about: "diagnosis of (1,3,4,2): zero flats",
            check: empty_flat,
        },
    ]
}

fn tail(v: &[i64]) -> HilbertSeq {
    HilbertSeq::with_tail(v.to_vec(), Tail::Zero)
}

fn trimmed(s: &HilbertSeq) -> Vec<i64> {
    s.trim_zeros().values().to_vec()
}

fn growth76(_: &RankEngineConfig) -> Result<(bool, String)> {
    let g = growth(76, 5)?;
    Ok((g == 111u32.into(), format!("76^<5> = {g}")))
}

fn osequences(_: &RankEngineConfig) -> Result<(bool, String)> {
    let a = is_o_sequence(&HilbertSeq::new(vec![1, 3, 6, 7, 9, 9]));
    let b = is_o_sequence(&HilbertSeq::new(vec![1, 2, 3, 1, 2]));
    let at = b.violation.as_ref().map(|v| v.degree());
    Ok((
        a.is_o_sequence && !b.is_o_sequence && at == Some(3),
        format!(
            "first {}, second {} (violation at degree {})",
            a.is_o_sequence,
            b.is_o_sequence,
            at.map_or("none".into(), |d| d.to_string())
        ),
    ))
}

/// Integer coefficients in `[-20, 20]` from a fixed seed.
fn random_ideal(n: usize, degrees: &[usize], seed: u64) -> Result<GeneratorIdeal> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let gens = degrees
        .iter()
        .map(|&d| {
            let terms = monomials_of_degree(n, d).into_iter().map(|e| {
                (
                    e,
                    BigRational::from_integer(rng.gen_range(-20i64..=20).into()),
                )
            });
            Form::from_terms(n, terms)
        })
        .collect::<Result<Vec<_>>>()?;
    GeneratorIdeal::new(n, gens)
}

fn ci334(cfg: &RankEngineConfig) -> Result<(bool, String)> {
    let ideal = random_ideal(4, &[3, 3, 4], 334)?;
    let mut quotients = Vec::new();
    for m in 1..=3 {
        quotients.push(trimmed(&quotient_by_generic_linears(&ideal, m, 10, cfg)?));
    }
    let r: Vec<usize> = (1..=3)
        .map(|m| reduction_number(&ideal, m, cfg))
        .collect::<Result<_>>()?;
    let pass = quotients
        == [
            vec![1, 3, 6, 8, 8, 6, 3, 1],
            vec![1, 2, 3, 2],
            vec![1, 1, 1],
        ]
        && r == [7, 3, 2];
    Ok((pass, format!("r1={}, r2={}, r3={}", r[0], r[1], r[2])))
}

fn ci56(cfg: &RankEngineConfig) -> Result<(bool, String)> {
    let expected = [1, 3, 6, 10, 15, 20, 24, 27, 29, 30, 30, 30];
    let closed = partial_sum(&ci_h_vector(&[5, 6])?);
    let f = Form::monomial(vec![4, 0, 0, 1]).sub(&Form::monomial(vec![0, 4, 1, 0]));
    let g = Form::monomial(vec![0, 0, 6, 0]).sub(&Form::monomial(vec![1, 0, 0, 5]));
    let ranks = quotient_by_generic_linears(
        &GeneratorIdeal::new(4, vec![f, g])?,
        1,
        expected.len() - 1,
        cfg,
    )?;
    let by_closed: Vec<i64> = (0..expected.len())
        .map(|t| closed.get(t).unwrap_or(-1))
        .collect();
    let pass = by_closed == expected && ranks.values() == expected;
    Ok((pass, format!("Delta h = {ranks}")))
}

fn example_j() -> Result<MonomialIdeal> {
    let mut gens: Vec<Monomial> = [[3, 0, 0], [2, 2, 0], [2, 1, 2], [0, 0, 5]]
        .iter()
        .map(|e| Monomial(e.to_vec()))
        .collect();
    gens.extend(monomials_of_degree(3, 7).into_iter().map(Monomial));
    minimalize(3, gens)
}

fn wlp_families(cfg: &RankEngineConfig) -> Result<(bool, String)> {
    let j = example_j()?;
    let hf = trimmed(&j.hilbert_function(8));
    let socle = j.socle_degrees()?;
    let lifted = j.distraction()?;
    let hv = trimmed(&lifted.points.h_vector(cfg)?);
    let wlp = wlp_test(&lifted.ideal, 1, None, cfg)?;
    let r2 = reduction_number(&lifted.ideal, 2, cfg)?;
    let fit = truncated_ideal_polynomial(&lifted.ideal, 5, None, cfg)?;
    let delta = vec![1, 3, 6, 9, 11, 11, 11];
    let pass = hf == delta
        && socle.contains(&4)
        && lifted.points.len() == 52
        && hv == delta
        && wlp.first_failure == Some(4)
        && r2 == 5
        && fit.dimension == Some(1)
        && fit.degree == 10.into();
    Ok((
        pass,
        format!(
            "{} points, WLP fails at t = {}, r2={r2}, truncation at 5 gives degree {}",
            lifted.points.len(),
            wlp.first_failure.map_or("none".into(), |t| t.to_string()),
            fit.degree
        ),
    ))
}

fn lex_betti(_: &RankEngineConfig) -> Result<(bool, String)> {
    let b = lex_ideal(&tail(&[1, 3, 6, 9, 11, 11, 11]), 3)?.ek_betti()?;
    let totals = b.totals();
    Ok((totals == [1, 18, 31, 14], format!("totals {totals:?}")))
}

fn sixteen_points(cfg: &RankEngineConfig) -> Result<(bool, String)> {
    let mut rng = cfg.runs()?[0].rng();
    let z = PointSet::random(3, 16, hilbertkit::points::DEFAULT_BOX, &mut rng)?;
    let hv = z.h_vector(cfg)?;
    let g = maximal_growth_degrees(&tail(&[1, 3, 6, 6, 0]))?;
    let at3 = g.iter().find(|v| v.degree == 3);
    let pass = trimmed(&hv) == [1, 3, 6, 6]
        && at3.is_some_and(|v| v.bound == 7u32.into() && !v.is_maximal);
    Ok((
        pass,
        format!("Delta h = {hv}, bound at 3 is 7, not maximal"),
    ))
}

fn conic_points() -> Result<PointSet> {
    let pts: Vec<Vec<i64>> = (0..10).map(|t| vec![1, t, t * t]).collect();
    PointSet::from_integers(2, &pts)
}

fn conic_gcd(cfg: &RankEngineConfig) -> Result<(bool, String)> {
    let z = conic_points()?;
    let hv = z.h_vector(cfg)?;
    let f2 = z.degree_forms(2, cfg)?;
    let f3 = z.degree_forms(3, cfg)?;
    let field = PrimeField::new(f2.prime)?;
    let mut rng = cfg.runs()?[0].rng();
    let both: Vec<_> = f2.forms.iter().chain(&f3.forms).cloned().collect();
    let g = gcd_of_forms(&both, field, &mut rng)?;
    let report = diagnose(&DiagnosisInput {
        ambient_n: 3,
        delta_h: hv.clone(),
        reduced: Some(true),
        ..Default::default()
    })?;
    let pass =
        trimmed(&hv) == [1, 2, 2, 2, 2, 1] && g.degree == 2 && report.firing.contains(&RuleId::R1);
    Ok((
        pass,
        format!(
            "Delta h = {hv}, gcd {} of degree {}",
            g.gcd.display_lifted(field),
            g.degree
        ),
    ))
}

fn twisted_cubic(cfg: &RankEngineConfig) -> Result<(bool, String)> {
    let pts: Vec<Vec<i64>> = (0..16).map(|t| vec![1, t, t * t, t * t * t]).collect();
    let z = PointSet::from_integers(3, &pts)?;
    let hv = z.h_vector(cfg)?;
    let r2 = reduction_number(&z, 2, cfg)?;
    let upp = z.upp_test(UppMode::Sampled { per_size: 20 }, cfg)?.holds;
    let mut report = diagnose(&DiagnosisInput {
        ambient_n: 4,
        delta_h: hv.clone(),
        r2: Some(r2),
        upp: Some(upp),
        reduced: Some(true),
        ..Default::default()
    })?;
    report.verify_curves(&z, cfg)?;
    let pass = report.firing.contains(&RuleId::R4)
        && !report.verification.is_empty()
        && report
            .verification
            .iter()
            .all(|c| c.agrees && c.predicted_degree == 3);
    let rules: Vec<String> = report.firing.iter().map(ToString::to_string).collect();
    Ok((
        pass,
        format!(
            "Delta h = {hv}, r2 = {r2}, rules {{{}}}, curve degree 3 measured",
            rules.join(", ")
        ),
    ))
}

fn collinear_triple(cfg: &RankEngineConfig) -> Result<(bool, String)> {
    let z = PointSet::from_integers(
        2,
        &[vec![1, 0, 0], vec![0, 1, 0], vec![1, 1, 0], vec![0, 0, 1]],
    )?;
    let v = z.upp_test(UppMode::Exhaustive { cap: 12 }, cfg)?;
    let witness = v.witness.map(|w| w.subset);
    Ok((
        !v.holds && witness.as_deref() == Some(&[0, 1, 2]),
        format!(
            "witness {}",
            witness.as_ref().map_or("none".into(), |w| format!("{w:?}"))
        ),
    ))
}

type Firing = (Vec<RuleId>, Vec<(usize, i64)>);

fn firing(input: &DiagnosisInput) -> Result<Firing> {
    let r = diagnose(input)?;
    Ok((r.firing.iter().copied().collect(), r.predicted_curves()))
}

pub fn not_decr_type_input() -> DiagnosisInput {
    DiagnosisInput {
        ambient_n: 4,
        delta_h: HilbertSeq::new(vec![
            1, 3, 6, 10, 15, 20, 24, 27, 29, 29, 29, 29, 28, 28, 28, 27, 27, 27, 26, 26, 26, 25,
        ]),
        r2: Some(8),
        upp: Some(true),
        reduced: Some(true),
        ..Default::default()
    }
}

fn not_decr_type(_: &RankEngineConfig) -> Result<(bool, String)> {
    let (rules, curves) = firing(&not_decr_type_input())?;
    Ok((
        rules == [RuleId::R5] && curves.contains(&(9, 29)),
        format!("rules {rules:?}, curves (d, degree) {curves:?}"),
    ))
}

fn two_sextics(_: &RankEngineConfig) -> Result<(bool, String)> {
    let mut v: Vec<i64> = (0..16).map(|t| (2 * t + 1).max(1)).collect();
    v[0] = 1;
    v.extend([32, 32, 32]);
    let (rules, curves) = firing(&DiagnosisInput {
        ambient_n: 4,
        delta_h: tail(&v),
        r2: Some(16),
        upp: Some(true),
        reduced: Some(true),
        ..Default::default()
    })?;
    Ok((
        rules == [RuleId::R5] && curves == [(17, 32)],
        format!("rules {rules:?}, curves (d, degree) {curves:?}"),
    ))
}

fn cant_extend(_: &RankEngineConfig) -> Result<(bool, String)> {
    let (rules, _) = firing(&DiagnosisInput {
        ambient_n: 4,
        delta_h: tail(&[1, 3, 6, 6]),
        r2: Some(2),
        upp: Some(true),
        reduced: Some(true),
        ..Default::default()
    })?;
    Ok((rules.is_empty(), format!("rules {rules:?}")))
}

fn ci334_diagnosis(_: &RankEngineConfig) -> Result<(bool, String)> {
    let (rules, _) = firing(&DiagnosisInput {
        ambient_n: 4,
        delta_h: tail(&[1, 3, 6, 8, 8, 6, 3, 1]),
        r2: Some(3),
        r3: Some(2),
        wlp: Some(true),
        reduced: Some(true),
        ..Default::default()
    })?;
    Ok((rules.is_empty(), format!("rules {rules:?}")))
}

fn empty_flat(_: &RankEngineConfig) -> Result<(bool, String)> {
    let r = diagnose(&DiagnosisInput {
        ambient_n: 4,
        delta_h: tail(&[1, 3, 4, 2]),
        ..Default::default()
    })?;
    Ok((
        r.flats.is_empty() && r.firing.is_empty(),
        format!("{} flats", r.flats.len()),
    ))
}
