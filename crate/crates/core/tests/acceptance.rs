//! End-to-end acceptance suite. Each criterion prints one PASS/FAIL line;
//! the test fails if any criterion fails.
//!
//! Set `BLESS_GOLDEN=1` to rewrite the diagnosis golden files.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;

use hilbertkit::diagnose::{diagnose, ConclusionKind, DiagnosisInput, FlatSource, RuleId};
use hilbertkit::form::{monomials_of_degree, Form};
use hilbertkit::gotzmann::{gotzmann_polynomial, persistence_value};
use hilbertkit::macaulay::{
    binomial, binomial_expansion, growth, is_o_sequence, maximal_growth_degrees, Violation,
};
use hilbertkit::modla::{
    hilbert_function, quotient_by_generic_linears, reduction_number, truncated_ideal_polynomial,
    wlp_test, GeneratorIdeal, PrimeField, RankEngineConfig,
};
use hilbertkit::monomial::{lex_ideal, minimalize, Monomial, MonomialIdeal};
use hilbertkit::points::{divide_exact, gcd_of_forms, PointSet, UppMode, DEFAULT_BOX};
use hilbertkit::seq::{ci_h_vector, difference, partial_sum};
use hilbertkit::{HilbertSeq, Tail};
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn cfg() -> RankEngineConfig {
    RankEngineConfig::default()
}

fn trimmed(s: &HilbertSeq) -> Vec<i64> {
    s.trim_zeros().values().to_vec()
}

fn int(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

fn random_form(n: usize, d: usize, rng: &mut ChaCha8Rng) -> Form {
    let terms = monomials_of_degree(n, d)
        .into_iter()
        .map(|e| (e, int(rng.gen_range(-20..=20))));
    Form::from_terms(n, terms).unwrap()
}

fn mono(e: &[u32]) -> Monomial {
    Monomial(e.to_vec())
}

fn example_j() -> MonomialIdeal {
    let mut gens = vec![
        mono(&[3, 0, 0]),
        mono(&[2, 2, 0]),
        mono(&[2, 1, 2]),
        mono(&[0, 0, 5]),
    ];
    gens.extend(monomials_of_degree(3, 7).into_iter().map(Monomial));
    minimalize(3, gens).unwrap()
}

/// Every representation `c = C(m_k, k) + ... + C(m_j, j)` with
/// `m_k > ... > m_j >= j >= 1`.
fn all_expansions(
    c: u64,
    k: usize,
    below: u64,
    acc: &mut Vec<(u64, usize)>,
    out: &mut Vec<Vec<(u64, usize)>>,
) {
    if c == 0 {
        out.push(acc.clone());
        return;
    }
    if k == 0 {
        return;
    }
    for m in k as u64..below {
        let b = binomial(m, k as u64);
        if b > c.into() {
            break;
        }
        let b: u64 = b.try_into().unwrap();
        acc.push((m, k));
        all_expansions(c - b, k - 1, m, acc, out);
        acc.pop();
    }
}

fn criterion_1() -> Outcome {
    ensure!(
        growth(76, 5).map_err(err)? == 111u32.into(),
        "growth(76,5) != 111"
    );
    for i in 1..=6 {
        for c in 1..=200u64 {
            let mut found = Vec::new();
            all_expansions(c, i, c + i as u64 + 1, &mut Vec::new(), &mut found);
            ensure!(
                found.len() == 1,
                "{} expansions of {c} at level {i}",
                found.len()
            );
            let mut ours = binomial_expansion(c, i).map_err(err)?.terms;
            let mut brute = found.pop().unwrap();
            ours.sort();
            brute.sort();
            ensure!(
                ours == brute,
                "expansion of {c} at level {i}: {ours:?} vs {brute:?}"
            );
        }
    }
    for d in 1..=30usize {
        for s in 1..=d as u64 {
            ensure!(
                growth(s, d).map_err(err)? == s.into(),
                "growth({s},{d}) != {s}"
            );
        }
    }
    Ok(())
}

fn criterion_2() -> Outcome {
    let v = is_o_sequence(&HilbertSeq::new(vec![1, 3, 6, 7, 9, 9]));
    ensure!(v.is_o_sequence, "(1,3,6,7,9,9) rejected: {:?}", v.violation);
    let v = is_o_sequence(&HilbertSeq::new(vec![1, 2, 3, 1, 2]));
    ensure!(!v.is_o_sequence, "(1,2,3,1,2) accepted");
    match v.violation {
        Some(Violation::Growth {
            degree: 3,
            value: 1,
            next: 2,
            ..
        }) => Ok(()),
        other => Err(format!("unexpected violation {other:?}")),
    }
}

fn criterion_3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(334);
    let gens = [3, 3, 4]
        .iter()
        .map(|&d| random_form(4, d, &mut rng))
        .collect();
    let ideal = GeneratorIdeal::new(4, gens).map_err(err)?;
    let expected: [&[i64]; 3] = [&[1, 3, 6, 8, 8, 6, 3, 1], &[1, 2, 3, 2], &[1, 1, 1]];
    for (m, want) in (1..=3).zip(expected) {
        let q = quotient_by_generic_linears(&ideal, m, 10, &cfg()).map_err(err)?;
        ensure!(trimmed(&q) == want, "quotient by {m} linears: {q}");
    }
    let r: Vec<usize> = (1..=3)
        .map(|m| reduction_number(&ideal, m, &cfg()))
        .collect::<hilbertkit::Result<_>>()
        .map_err(err)?;
    ensure!(r == vec![7, 3, 2], "reduction numbers {r:?}");
    Ok(())
}

fn criterion_4() -> Outcome {
    let expected = [1, 3, 6, 10, 15, 20, 24, 27, 29, 30, 30, 30, 30];
    let table = partial_sum(&ci_h_vector(&[5, 6]).map_err(err)?);
    let closed: Vec<i64> = (0..expected.len())
        .map(|t| table.get(t).unwrap_or(-1))
        .collect();
    ensure!(closed == expected, "closed form {closed:?}");
    // x, y, z, t
    let f = Form::monomial(vec![4, 0, 0, 1]).sub(&Form::monomial(vec![0, 4, 1, 0]));
    let g = Form::monomial(vec![0, 0, 6, 0]).sub(&Form::monomial(vec![1, 0, 0, 5]));
    let ideal = GeneratorIdeal::new(4, vec![f, g]).map_err(err)?;
    let q = quotient_by_generic_linears(&ideal, 1, expected.len() - 1, &cfg()).map_err(err)?;
    ensure!(q.values() == expected, "rank engine {q}");
    Ok(())
}

fn criterion_5() -> Outcome {
    let j = example_j();
    let hf = j.hilbert_function(8);
    let delta = [1, 3, 6, 9, 11, 11, 11];
    ensure!(trimmed(&hf) == delta, "HF of J {hf}");
    let socle = j.socle().map_err(err)?;
    let in4: Vec<_> = socle.iter().filter(|s| s.degree == 4).collect();
    ensure!(!in4.is_empty(), "no socle element in degree 4: {socle:?}");
    for s in &in4 {
        let w = &s.witness.0;
        ensure!(
            !j.contains(w) && s.witness.degree() == 4,
            "witness {w:?} is not standard of degree 4"
        );
        for i in 0..3 {
            let mut up = w.clone();
            up[i] += 1;
            ensure!(
                j.contains(&up),
                "witness {w:?} times x{} is not in J",
                i + 1
            );
        }
    }
    let dist = j.distraction().map_err(err)?;
    ensure!(dist.points.len() == 52, "{} points", dist.points.len());
    let hv = dist.points.h_vector(&cfg()).map_err(err)?;
    ensure!(trimmed(&hv) == delta, "points h-vector {hv}");
    let wlp = wlp_test(&dist.ideal, 1, None, &cfg()).map_err(err)?;
    ensure!(
        !wlp.holds && wlp.first_failure == Some(4),
        "WLP report {wlp:?}"
    );
    let step = wlp.steps.iter().find(|s| s.t == 4).unwrap();
    ensure!(
        step.source_dim == 11 && step.target_dim == 11 && step.rank < 11,
        "step at 4: {step:?}"
    );
    let r2 = reduction_number(&dist.ideal, 2, &cfg()).map_err(err)?;
    ensure!(r2 == 5, "r2 = {r2}");
    let fit = truncated_ideal_polynomial(&dist.ideal, 5, None, &cfg()).map_err(err)?;
    ensure!(
        fit.polynomial.degree() == Some(1) && fit.polynomial.leading_coefficient() == int(10),
        "truncation fit {:?}",
        fit.polynomial
    );
    Ok(())
}

fn criterion_6() -> Outcome {
    let s = seq_tail(&[1, 3, 6, 9, 11, 11, 11]);
    let b = lex_ideal(&s, 3).map_err(err)?.ek_betti().map_err(err)?;
    ensure!(b.totals() == vec![1, 18, 31, 14], "totals {:?}", b.totals());
    let printed = "\
total:      1    18    31    14
--------------------------------
    0:      1     -     -     -
    1:      -     -     -     -
    2:      -     1     -     -
    3:      -     1     1     -
    4:      -     2     4     2
    5:      -     2     3     1
    6:      -    12    23    11
";
    ensure!(b.render() == printed, "diagram\n{}", b.render());
    Ok(())
}

fn criterion_7() -> Outcome {
    for seed in 0..5u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let z = PointSet::random(3, 16, DEFAULT_BOX, &mut rng).map_err(err)?;
        let hv = z.h_vector(&cfg().with_seed(seed)).map_err(err)?;
        ensure!(trimmed(&hv) == [1, 3, 6, 6], "seed {seed}: h-vector {hv}");
        let padded = HilbertSeq::with_tail(vec![1, 3, 6, 6, 0], Tail::Zero);
        let g = maximal_growth_degrees(&padded).map_err(err)?;
        let at3 = g
            .iter()
            .find(|v| v.degree == 3)
            .ok_or("no verdict at degree 3")?;
        ensure!(
            at3.bound == 7u32.into() && !at3.is_maximal,
            "seed {seed}: {at3:?}"
        );
    }
    Ok(())
}

fn criterion_8() -> Outcome {
    let pts: Vec<Vec<i64>> = (0..10).map(|t| vec![1, t, t * t]).collect();
    let z = PointSet::from_integers(2, &pts).map_err(err)?;
    let hv = z.h_vector(&cfg()).map_err(err)?;
    ensure!(trimmed(&hv) == [1, 2, 2, 2, 2, 1], "h-vector {hv}");
    let f2 = z.degree_forms(2, &cfg()).map_err(err)?;
    let f3 = z.degree_forms(3, &cfg()).map_err(err)?;
    ensure!(f2.prime == f3.prime, "forms over different primes");
    let field = PrimeField::new(f2.prime).map_err(err)?;
    let both: Vec<_> = f2.forms.iter().chain(&f3.forms).cloned().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for (label, forms) in [
        ("degree 2", f2.forms.clone()),
        ("degree 3", f3.forms.clone()),
        ("both", both),
    ] {
        let g = gcd_of_forms(&forms, field, &mut rng).map_err(err)?;
        ensure!(g.degree == 2, "{label}: gcd degree {}", g.degree);
        for f in &forms {
            let q = divide_exact(field, f, &g.gcd)
                .ok_or(format!("{label}: gcd does not divide {f:?}"))?;
            let mut back = q.mul(&g.gcd, field).terms;
            let mut orig = f.terms.clone();
            back.sort();
            orig.sort();
            ensure!(
                back == orig,
                "{label}: quotient times gcd differs from the form"
            );
        }
    }
    Ok(())
}

fn golden_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

fn check_golden(
    name: &str,
    input: &DiagnosisInput,
) -> Result<hilbertkit::diagnose::DiagnosisReport, String> {
    let report = diagnose(input).map_err(err)?;
    let value = serde_json::to_value(&report).map_err(err)?;
    let path = golden_dir().join(format!("{name}.json"));
    if std::env::var_os("BLESS_GOLDEN").is_some() {
        std::fs::create_dir_all(golden_dir()).map_err(err)?;
        std::fs::write(&path, serde_json::to_string_pretty(&value).unwrap() + "\n").map_err(err)?;
    }
    let text = std::fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))?;
    let golden: serde_json::Value = serde_json::from_str(&text).map_err(err)?;
    ensure!(golden == value, "{name}: report differs from golden file");
    Ok(report)
}

fn seq_tail(v: &[i64]) -> HilbertSeq {
    HilbertSeq::with_tail(v.to_vec(), Tail::Zero)
}

fn curve_degrees(r: &hilbertkit::diagnose::DiagnosisReport) -> Vec<(usize, i64)> {
    r.predicted_curves()
}

fn criterion_9() -> Outcome {
    let not_decr = DiagnosisInput {
        ambient_n: 4,
        delta_h: HilbertSeq::new(vec![
            1, 3, 6, 10, 15, 20, 24, 27, 29, 29, 29, 29, 28, 28, 28, 27, 27, 27, 26, 26, 26, 25,
        ]),
        r2: Some(8),
        upp: Some(true),
        reduced: Some(true),
        ..Default::default()
    };
    let r = check_golden("not_decr_type", &not_decr)?;
    ensure!(
        r.firing == [RuleId::R5].into(),
        "not decr type fires {:?}",
        r.firing
    );
    ensure!(
        curve_degrees(&r).contains(&(9, 29)),
        "no degree-29 curve at d = 9: {:?}",
        curve_degrees(&r)
    );

    let mut two: Vec<i64> = (0..16).map(|t| 2 * t + 1).collect();
    two[0] = 1;
    two.extend([32, 32, 32]);
    let two_sextics = DiagnosisInput {
        ambient_n: 4,
        delta_h: seq_tail(&two),
        r2: Some(16),
        upp: Some(true),
        reduced: Some(true),
        ..Default::default()
    };
    let r = check_golden("two_sextics", &two_sextics)?;
    ensure!(
        r.firing == [RuleId::R5].into(),
        "two sextics fires {:?}",
        r.firing
    );
    ensure!(
        curve_degrees(&r) == [(17, 32)],
        "curves {:?}",
        curve_degrees(&r)
    );

    let cant_extend = DiagnosisInput {
        ambient_n: 4,
        delta_h: seq_tail(&[1, 3, 6, 6]),
        r2: Some(2),
        upp: Some(true),
        reduced: Some(true),
        ..Default::default()
    };
    let r = check_golden("cant_extend", &cant_extend)?;
    ensure!(r.firing.is_empty(), "can't extend fires {:?}", r.firing);

    let ci334 = DiagnosisInput {
        ambient_n: 4,
        delta_h: seq_tail(&[1, 3, 6, 8, 8, 6, 3, 1]),
        r2: Some(3),
        r3: Some(2),
        wlp: Some(true),
        reduced: Some(true),
        ..Default::default()
    };
    let r = check_golden("ci334", &ci334)?;
    ensure!(r.firing.is_empty(), "334 fires {:?}", r.firing);
    ensure!(
        r.flats
            .iter()
            .any(|f| f.source == FlatSource::DeltaH && f.d == 3 && f.s == 8),
        "334 flat at d = 3 missing"
    );
    ensure!(
        r.flats.iter().all(|f| f
            .conclusions
            .iter()
            .all(|c| c.kind != ConclusionKind::CurveOfDegree)),
        "334 concludes a curve"
    );
    Ok(())
}

fn criterion_10() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let z = PointSet::random(2, 5, DEFAULT_BOX, &mut rng).map_err(err)?;
    let v = z
        .upp_test(UppMode::Exhaustive { cap: 12 }, &cfg())
        .map_err(err)?;
    ensure!(v.holds, "5 random points fail: {:?}", v.witness);
    let w = PointSet::from_integers(
        2,
        &[vec![1, 0, 0], vec![0, 1, 0], vec![1, 1, 0], vec![0, 0, 1]],
    )
    .map_err(err)?;
    let v = w
        .upp_test(UppMode::Exhaustive { cap: 12 }, &cfg())
        .map_err(err)?;
    ensure!(!v.holds, "collinear triple passes");
    let witness = v.witness.ok_or("no witness")?;
    ensure!(witness.subset == [0, 1, 2], "witness {:?}", witness.subset);
    Ok(())
}

fn random_seq(rng: &mut ChaCha8Rng) -> HilbertSeq {
    let len = rng.gen_range(1..=20);
    HilbertSeq::new((0..len).map(|_| rng.gen_range(-50..=50)).collect())
}

fn random_monomial_ideal(rng: &mut ChaCha8Rng, artinian: bool) -> MonomialIdeal {
    let n = if artinian { 3 } else { rng.gen_range(2..=4) };
    let mut gens = Vec::new();
    if artinian {
        for i in 0..n {
            let mut e = vec![0; n];
            e[i] = rng.gen_range(1..=4);
            gens.push(Monomial(e));
        }
    }
    for _ in 0..rng.gen_range(1..=5) {
        let d = rng.gen_range(1..=4);
        let all = monomials_of_degree(n, d);
        gens.push(Monomial(all[rng.gen_range(0..all.len())].clone()));
    }
    minimalize(n, gens).unwrap()
}

fn criterion_11() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..1000 {
        let s = random_seq(&mut rng);
        ensure!(
            partial_sum(&difference(&s, 1)).values() == s.values(),
            "sum of difference of {s}"
        );
        ensure!(
            difference(&partial_sum(&s), 1).values() == s.values(),
            "difference of sum of {s}"
        );
    }
    for k in 0..50 {
        let m = random_monomial_ideal(&mut rng, false);
        let gens = m
            .gens()
            .iter()
            .map(|g| Form::monomial(g.0.clone()))
            .collect();
        let ideal = GeneratorIdeal::new(m.num_vars(), gens).map_err(err)?;
        let rank = hilbert_function(&ideal, 7, &cfg().with_seed(k)).map_err(err)?;
        let count = m.hilbert_function(7);
        ensure!(
            rank.values()[..8] == count.values()[..8],
            "ideal {m:?}: {rank} vs {count}"
        );
    }
    for _ in 0..30 {
        let m = random_monomial_ideal(&mut rng, true);
        let hf = m.hilbert_function(m.top_degree().map_err(err)? + 1);
        let hv = m
            .distraction()
            .map_err(err)?
            .points
            .h_vector(&cfg())
            .map_err(err)?;
        ensure!(trimmed(&hv) == trimmed(&hf), "ideal {m:?}: {hv} vs {hf}");
    }
    for _ in 0..50 {
        let c = rng.gen_range(1..=500u64);
        let d = rng.gen_range(1..=8usize);
        let g = gotzmann_polynomial(c, d).map_err(err)?;
        for l in 0..=10u64 {
            let want = BigInt::from(persistence_value(c, d, l).map_err(err)?);
            ensure!(
                g.eval((d as u64 + l) as i64) == BigRational::from_integer(want.clone()),
                "c = {c}, d = {d}, l = {l}: expected {want}"
            );
        }
    }
    Ok(())
}

#[test]
fn acceptance() {
    type Criterion = (&'static str, fn() -> Outcome);
    let criteria: [Criterion; 11] = [
        ("Macaulay arithmetic", criterion_1),
        ("O-sequence verdicts", criterion_2),
        ("complete intersection reduction numbers", criterion_3),
        ("CI(5,6) table by closed form and rank engine", criterion_4),
        ("monomial, distraction and WLP pipeline", criterion_5),
        ("lex Betti diagram", criterion_6),
        ("sixteen points without maximal growth", criterion_7),
        ("plane gcd on a conic", criterion_8),
        ("diagnosis fixtures and golden reports", criterion_9),
        ("uniform position by brute force", criterion_10),
        ("property suites", criterion_11),
    ];
    let mut failed = Vec::new();
    for (k, (name, run)) in criteria.iter().enumerate() {
        let started = std::time::Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into()))
        });
        let secs = started.elapsed().as_secs_f64();
        match outcome {
            Ok(()) => println!("criterion {:>2}: PASS  {name} ({secs:.1}s)", k + 1),
            Err(e) => {
                println!("criterion {:>2}: FAIL  {name} ({secs:.1}s): {e}", k + 1);
                failed.push(k + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
