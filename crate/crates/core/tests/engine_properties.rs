//! Randomized checks of the rank engine, point sets and the diagnosis
//! engine against independent computations.

use std::collections::BTreeSet;

use hilbertkit::diagnose::{
    diagnose, ConclusionKind, DiagnosisInput, FlatSource, RuleId, RuleStatus,
};
use hilbertkit::form::{monomials_of_degree, Form, MonomialBasis};
use hilbertkit::macaulay::is_o_sequence;
use hilbertkit::modla::{
    quotient_by_generic_linears, reduction_number, wlp_test, Echelon, FpForm, GeneratorIdeal,
    PrimeField, RankEngineConfig, SliceSource,
};
use hilbertkit::points::{gcd_of_forms, PointSet, UppMode};
use hilbertkit::seq::difference;
use hilbertkit::{HilbertSeq, Tail};
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn cfg(seed: u64) -> RankEngineConfig {
    RankEngineConfig::default().with_seed(seed)
}

fn random_ci(n: usize, degrees: &[usize], rng: &mut ChaCha8Rng) -> GeneratorIdeal {
    let gens = degrees
        .iter()
        .map(|&d| {
            let terms = monomials_of_degree(n, d).into_iter().map(|e| {
                (
                    e,
                    BigRational::from_integer(BigInt::from(rng.gen_range(-9..=9))),
                )
            });
            Form::from_terms(n, terms).unwrap()
        })
        .collect();
    GeneratorIdeal::new(n, gens).unwrap()
}

fn trimmed(s: &HilbertSeq) -> Vec<i64> {
    s.trim_zeros().values().to_vec()
}

#[test]
fn fixed_seed_gives_identical_answers() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let ideal = random_ci(4, &[2, 3], &mut rng);
    let a = quotient_by_generic_linears(&ideal, 1, 8, &cfg(7)).unwrap();
    let b = quotient_by_generic_linears(&ideal, 1, 8, &cfg(7)).unwrap();
    assert_eq!(a, b);
    let z = PointSet::random(3, 12, 100, &mut rng).unwrap();
    let w1 = serde_json::to_string(&wlp_test(&z, 1, None, &cfg(3)).unwrap()).unwrap();
    let w2 = serde_json::to_string(&wlp_test(&z, 1, None, &cfg(3)).unwrap()).unwrap();
    assert_eq!(w1, w2);
}

#[test]
fn slices_are_closed_under_multiplication_by_variables() {
    let field = PrimeField::new(hilbertkit::modla::DEFAULT_PRIME).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let ideal = random_ci(3, &[2, 3], &mut rng);
    let z = PointSet::random(2, 8, 50, &mut rng).unwrap();
    let sources: [&dyn SliceSource; 2] = [&ideal, &z];
    for src in sources {
        let n = src.num_vars();
        for t in 1..5 {
            let here = MonomialBasis::new(n, t);
            let next = MonomialBasis::new(n, t + 1);
            let mut span = Echelon::new(field, next.len());
            for row in src.slice(t + 1, field).unwrap() {
                span.insert(row);
            }
            for row in src.slice(t, field).unwrap().into_iter().take(6) {
                let f = FpForm::from_dense(&here, &row);
                for i in 0..n {
                    let mut e = vec![0; n];
                    e[i] = 1;
                    assert!(
                        span.contains(&f.times_monomial_row(&e, &next)),
                        "degree {t}, x{i}"
                    );
                }
            }
        }
    }
}

/// When WLP holds, one more cut gives the positive part of the difference.
#[test]
fn weak_lefschetz_predicts_the_next_cut() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut checked = 0;
    for k in 0..6u64 {
        let ideal = match k % 3 {
            0 => random_ci(3, &[2, 2, 3], &mut rng),
            1 => random_ci(4, &[2, 3, 3], &mut rng),
            _ => random_ci(3, &[3, 3, 4], &mut rng),
        };
        let m = ideal.num_vars() - 3;
        let report = wlp_test(&ideal, m, Some(15), &cfg(k)).unwrap();
        if !report.holds {
            continue;
        }
        checked += 1;
        let q = quotient_by_generic_linears(&ideal, m, 15, &cfg(k)).unwrap();
        let next = quotient_by_generic_linears(&ideal, m + 1, 15, &cfg(k)).unwrap();
        let predicted: Vec<i64> = difference(&q, 1)
            .values()
            .iter()
            .map(|&v| v.max(0))
            .collect();
        assert_eq!(
            trimmed(&next),
            trimmed(&HilbertSeq::new(predicted)),
            "ideal {k}"
        );
    }
    assert!(checked >= 3);
}

#[test]
fn point_hilbert_functions_behave() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for k in 0..25u64 {
        let ambient = 2 + (k % 2) as usize;
        let count = rng.gen_range(1..=18);
        let width = if k % 3 == 0 { 2 } else { 1000 };
        let Ok(z) = PointSet::random(ambient, count, width, &mut rng) else {
            continue;
        };
        let h = z.hilbert_function(None, &cfg(k)).unwrap();
        let v = h.values();
        assert!(v.windows(2).all(|w| w[0] <= w[1]), "{h}");
        assert_eq!(*v.last().unwrap(), count as i64);
        assert!(is_o_sequence(&difference(&h, 1)).is_o_sequence, "{h}");
    }
}

#[test]
fn sampled_failure_implies_exhaustive_failure() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut failures = 0;
    for k in 0..20u64 {
        let Ok(z) = PointSet::random(2, rng.gen_range(4..=8), 1, &mut rng) else {
            continue;
        };
        let sampled = z
            .upp_test(UppMode::Sampled { per_size: 4 }, &cfg(k))
            .unwrap();
        let exhaustive = z
            .upp_test(UppMode::Exhaustive { cap: 12 }, &cfg(k))
            .unwrap();
        if !sampled.holds {
            failures += 1;
            assert!(!exhaustive.holds);
        }
    }
    assert!(failures > 0, "no sampled failures to compare");
}

fn curve_points(kind: usize, ts: &[i64]) -> Vec<Vec<i64>> {
    ts.iter()
        .map(|&t| match kind {
            0 => vec![1, t, t * t],
            1 => vec![1, t, t * t * t],
            _ => vec![1, t, 0],
        })
        .collect()
}

/// Plane flats with `d >= s` come with a gcd of degree exactly `s`.
#[test]
fn plane_flats_have_gcd_of_degree_s() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut checked = 0;
    for k in 0..12u64 {
        let kind = (k % 3) as usize;
        let target = rng.gen_range(6..=16);
        let mut ts = BTreeSet::new();
        while ts.len() < target {
            ts.insert(rng.gen_range(-40i64..=40));
        }
        let mut pts = curve_points(kind, &ts.into_iter().collect::<Vec<_>>());
        if kind == 2 {
            pts.push(vec![0, 0, 1]);
        }
        let z = PointSet::from_integers(2, &pts).unwrap();
        let hv = z.h_vector(&cfg(k)).unwrap();
        let v = hv.values();
        for d in 0..v.len().saturating_sub(1) {
            let s = v[d];
            if s > 0 && v[d + 1] == s && d as i64 >= s {
                let forms = z.degree_forms(d, &cfg(k)).unwrap();
                let field = PrimeField::new(forms.prime).unwrap();
                let g = gcd_of_forms(&forms.forms, field, &mut rng).unwrap();
                assert_eq!(g.degree as i64, s, "points {pts:?}, d = {d}");
                checked += 1;
            }
        }
    }
    assert!(checked >= 10);
}

fn conclusions(
    r: &hilbertkit::diagnose::DiagnosisReport,
) -> BTreeSet<(bool, usize, ConclusionKind, i64)> {
    r.flats
        .iter()
        .flat_map(|f| {
            f.conclusions
                .iter()
                .map(move |c| (f.source == FlatSource::Delta2H, f.d, c.kind, c.value))
        })
        .collect()
}

fn random_input(rng: &mut ChaCha8Rng) -> DiagnosisInput {
    let len = rng.gen_range(4..14);
    let mut v = vec![1];
    while v.len() < len {
        let last = *v.last().unwrap();
        let step = match rng.gen_range(0..4) {
            0 => 0,
            1 => rng.gen_range(1..4),
            2 => -rng.gen_range(1..3),
            _ => rng.gen_range(0..2),
        };
        v.push((last + step).max(1));
    }
    let flag = |rng: &mut ChaCha8Rng| Some(rng.gen_bool(0.7));
    DiagnosisInput {
        ambient_n: rng.gen_range(3..=5),
        delta_h: HilbertSeq::with_tail(v, Tail::Zero),
        delta2_h: None,
        r2: Some(rng.gen_range(0..8)),
        r3: Some(rng.gen_range(0..5)),
        upp: flag(rng),
        wlp: flag(rng),
        h1_vanishes: flag(rng),
        reduced: flag(rng),
    }
}

fn erode(input: &DiagnosisInput, rng: &mut ChaCha8Rng) -> DiagnosisInput {
    let mut out = input.clone();
    if rng.gen_bool(0.5) {
        out.r2 = None;
    }
    if rng.gen_bool(0.5) {
        out.r3 = None;
    }
    if rng.gen_bool(0.5) {
        out.upp = None;
    }
    if rng.gen_bool(0.5) {
        out.wlp = None;
    }
    if rng.gen_bool(0.5) {
        out.h1_vanishes = None;
    }
    if rng.gen_bool(0.5) {
        out.reduced = None;
    }
    out
}

#[test]
fn eroding_inputs_never_adds_conclusions() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..300 {
        let full = random_input(&mut rng);
        let all = conclusions(&diagnose(&full).unwrap());
        for _ in 0..4 {
            let less = erode(&full, &mut rng);
            let some = conclusions(&diagnose(&less).unwrap());
            assert!(
                some.is_subset(&all),
                "{less:?}: {:?} not within {:?}",
                some,
                all
            );
        }
    }
}

#[test]
fn every_conclusion_comes_from_a_satisfied_rule() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..300 {
        let input = random_input(&mut rng);
        let r = diagnose(&input).unwrap();
        for f in &r.flats {
            for c in &f.conclusions {
                assert!(!c.rules.is_empty());
                for rule in &c.rules {
                    let eval = f.rules.iter().find(|e| e.rule == *rule).unwrap();
                    assert_eq!(eval.status, RuleStatus::Fires);
                    assert!(eval
                        .hypotheses
                        .iter()
                        .all(|h| h.status == hilbertkit::diagnose::Check::Holds));
                }
            }
            let r2_fires = f.rules.iter().any(|e| {
                e.rule == RuleId::R2
                    && matches!(e.status, RuleStatus::Fires | RuleStatus::Subsumed { .. })
            });
            if let (true, Some(r2)) = (r2_fires, input.r2) {
                assert!(f.d > r2 || r.warnings.iter().any(|w| w.contains("forces d > r2")));
            }
        }
    }
}

/// Predicted curves on point sets small enough to measure directly.
#[test]
fn predicted_curves_match_the_truncated_ideal() {
    let conic = PointSet::from_integers(2, &curve_points(0, &(0..10).collect::<Vec<_>>())).unwrap();
    let cubic: Vec<Vec<i64>> = (0..16).map(|t| vec![1, t, t * t, t * t * t]).collect();
    let cubic = PointSet::from_integers(3, &cubic).unwrap();
    for (z, n, degree) in [(conic, 3, 2), (cubic, 4, 3)] {
        let c = cfg(0);
        let hv = z.h_vector(&c).unwrap();
        let r2 = reduction_number(&z, 2, &c).unwrap();
        let upp = z
            .upp_test(UppMode::Sampled { per_size: 20 }, &c)
            .unwrap()
            .holds;
        let input = DiagnosisInput {
            ambient_n: n,
            delta_h: hv,
            r2: Some(r2),
            upp: Some(upp),
            reduced: Some(true),
            ..Default::default()
        };
        let mut report = diagnose(&input).unwrap();
        assert!(!report.predicted_curves().is_empty());
        report.verify_curves(&z, &c).unwrap();
        for check in &report.verification {
            assert!(check.agrees, "{check:?}");
            assert_eq!(check.predicted_degree, degree);
        }
    }
}
