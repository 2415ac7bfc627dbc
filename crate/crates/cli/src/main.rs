mod fixtures;

use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{json, Value};

use hilbertkit::diagnose::{diagnose, DiagnosisInput};
use hilbertkit::gotzmann::{classify_flat, gotzmann_polynomial};
use hilbertkit::macaulay::{
    binomial_expansion, growth, is_differentiable_o_sequence, maximal_growth_degrees,
};
use hilbertkit::modla::{
    initial_degree, reduction_number, slp_test, truncated_ideal_polynomial, wlp_test,
    GeneratorIdeal, LefschetzReport, PrimeField, RankEngineConfig, SliceSource,
};
use hilbertkit::monomial::{lex_ideal, MonomialIdeal};
use hilbertkit::points::{gcd_of_forms, PointSet, UppMode, DEFAULT_UPP_CAP, DEFAULT_UPP_SAMPLES};
use hilbertkit::seq::difference;
use hilbertkit::{HilbertSeq, Tail};

#[derive(Parser)]
#[command(
    name = "hilbertkit",
    version,
    about = "Hilbert functions, Macaulay bounds and base-locus diagnosis"
)]
struct Cli {
    #[command(flatten)]
    opts: GlobalOpts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Debug)]
struct GlobalOpts {
    /// Largest prime to compute over; later runs use the primes below it.
    #[arg(long, global = true)]
    prime: Option<u64>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Independent runs that must agree on every generic answer.
    #[arg(long, global = true)]
    confirmations: Option<usize>,
    /// Last degree to compute.
    #[arg(long, global = true)]
    tmax: Option<usize>,
    /// Degree cap for searches that wait for vanishing.
    #[arg(long, global = true)]
    cap: Option<usize>,
    /// Machine-readable output.
    #[arg(long, global = true)]
    json: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Binomial expansions and the growth bound.
    #[command(subcommand)]
    Macaulay(MacaulayCmd),
    /// Persistence polynomials and flat classification.
    #[command(subcommand)]
    Gotzmann(GotzmannCmd),
    /// Monomial ideals.
    #[command(subcommand)]
    Mono(MonoCmd),
    /// Reduction number r_m of R/I.
    Rnum {
        source: PathBuf,
        #[arg(long)]
        m: usize,
    },
    /// Weak Lefschetz test after cutting by m general linear forms.
    Wlp {
        source: PathBuf,
        #[arg(long, default_value_t = 0)]
        m: usize,
    },
    /// Maximal rank of a general form of degree d after m cuts.
    Slp {
        source: PathBuf,
        #[arg(long, default_value_t = 0)]
        m: usize,
        #[arg(long)]
        d: usize,
    },
    /// Hilbert polynomial of the ideal generated in degrees <= d.
    Truncpoly {
        source: PathBuf,
        #[arg(long)]
        d: usize,
        #[arg(long, requires = "to")]
        from: Option<usize>,
        #[arg(long, requires = "from")]
        to: Option<usize>,
    },
    /// Initial degree of the ideal.
    Alpha { source: PathBuf },
    /// Finite point sets.
    #[command(subcommand)]
    Points(PointsCmd),
    /// Base-locus diagnosis from a first difference.
    Diagnose {
        input: PathBuf,
        /// A source to measure the predicted curves against.
        #[arg(long)]
        verify: Option<PathBuf>,
    },
    /// Bundled worked examples.
    #[command(subcommand)]
    Fixtures(FixturesCmd),
}

#[derive(Subcommand)]
enum MacaulayCmd {
    /// The i-binomial expansion of c.
    Expand { c: u64, i: usize },
    /// The growth bound c^<i>.
    Growth { c: u64, i: usize },
    /// O-sequence, differentiability and maximal-growth verdicts.
    Check {
        seq: String,
        #[arg(long)]
        tail: Option<TailArg>,
    },
}

#[derive(Subcommand)]
enum GotzmannCmd {
    /// Hilbert polynomial of maximal growth from c in degree d.
    Poly { c: u64, d: usize },
    /// Classify a maximal-growth step of a first difference.
    Classify {
        delta_h: String,
        d: usize,
        #[arg(long)]
        n: usize,
    },
}

#[derive(Subcommand)]
enum MonoCmd {
    /// Hilbert function of the quotient.
    Hf { ideal: PathBuf },
    /// Lex ideal with a given Hilbert function.
    Lex {
        seq: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        tail: Option<TailArg>,
    },
    /// Betti diagram of a stable ideal, or of the lex ideal of a sequence.
    Betti {
        #[arg(required_unless_present = "lex")]
        ideal: Option<PathBuf>,
        #[arg(long, requires = "n")]
        lex: Option<String>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        tail: Option<TailArg>,
    },
    /// Socle monomials of an Artinian quotient.
    Socle { ideal: PathBuf },
    /// Distraction to reduced points.
    Lift { ideal: PathBuf },
}

#[derive(Subcommand)]
enum PointsCmd {
    /// Hilbert function and h-vector.
    Hf { points: PathBuf },
    /// Uniform position test.
    Upp {
        points: PathBuf,
        /// Random subsets per size instead of all subsets.
        #[arg(long)]
        sampled: Option<usize>,
    },
    /// Basis of the forms of degree d through the points.
    Forms {
        points: PathBuf,
        #[arg(long)]
        d: usize,
    },
    /// Gcd of the forms of the given degrees (plane sets only).
    Gcd {
        points: PathBuf,
        #[arg(long, num_args = 1.., required = true)]
        d: Vec<usize>,
    },
}

#[derive(Subcommand)]
enum FixturesCmd {
    /// Names and summaries.
    List,
    /// Run every fixture, or one with --only.
    Run {
        #[arg(long)]
        only: Option<String>,
    },
}

#[derive(clap::ValueEnum, Clone, Copy, Debug)]
enum TailArg {
    Constant,
    Zero,
}

enum Failure {
    Io(String),
    Input(String),
    Domain(hilbertkit::Error),
}

impl From<hilbertkit::Error> for Failure {
    fn from(e: hilbertkit::Error) -> Self {
        Failure::Domain(e)
    }
}

struct Output {
    value: Value,
    text: String,
}

fn out<T: Serialize>(value: &T, text: impl Into<String>) -> Result<Output, Failure> {
    Ok(Output {
        value: serde_json::to_value(value).map_err(|e| Failure::Io(e.to_string()))?,
        text: text.into(),
    })
}

fn read_text(path: &Path) -> Result<String, Failure> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Failure::Io(format!("stdin: {e}")))?;
        return Ok(s);
    }
    std::fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn parse_json<T: DeserializeOwned>(path: &Path, text: &str) -> Result<T, Failure> {
    serde_json::from_str(text).map_err(|e| {
        if e.line() == 0 {
            return Failure::Input(format!("invalid input in {}: {e}", path.display()));
        }
        Failure::Input(format!(
            "malformed JSON in {} at line {}, column {}: {e}",
            path.display(),
            e.line(),
            e.column()
        ))
    })
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    parse_json(path, &read_text(path)?)
}

fn parse_seq(text: &str, tail: Option<TailArg>) -> Result<HilbertSeq, Failure> {
    let values = text
        .split(',')
        .map(|v| v.trim().parse::<i64>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| Failure::Input(format!("bad sequence {text:?}: {e}")))?;
    Ok(match tail {
        None => HilbertSeq::new(values),
        Some(TailArg::Constant) => HilbertSeq::with_tail(values, Tail::Constant),
        Some(TailArg::Zero) => HilbertSeq::with_tail(values, Tail::Zero),
    })
}

enum Source {
    Ideal(GeneratorIdeal),
    Monomial(MonomialIdeal),
    Points(PointSet),
}

impl Source {
    fn as_dyn(&self) -> &dyn SliceSource {
        match self {
            Source::Ideal(i) => i,
            Source::Monomial(m) => m,
            Source::Points(p) => p,
        }
    }
}

/// Point sets carry `ambient`; monomial generators are exponent arrays and
/// polynomial generators are objects.
fn read_source(path: &Path) -> Result<Source, Failure> {
    let text = read_text(path)?;
    let value: Value = parse_json(path, &text)?;
    if value.get("ambient").is_some() {
        return Ok(Source::Points(parse_json(path, &text)?));
    }
    let monomial = value
        .get("gens")
        .and_then(Value::as_array)
        .and_then(|g| g.first())
        .is_some_and(Value::is_array);
    if monomial {
        Ok(Source::Monomial(parse_json(path, &text)?))
    } else {
        Ok(Source::Ideal(parse_json(path, &text)?))
    }
}

fn config(o: &GlobalOpts) -> RankEngineConfig {
    let mut cfg = RankEngineConfig::default().with_seed(o.seed);
    if let Some(p) = o.prime {
        cfg.prime = p;
    }
    if let Some(c) = o.confirmations {
        cfg.confirmations = c;
    }
    if let Some(c) = o.cap {
        cfg.cap = c;
    }
    cfg
}

fn join<T: ToString>(v: impl IntoIterator<Item = T>) -> String {
    v.into_iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(", ")
}

fn lefschetz_text(r: &LefschetzReport) -> String {
    let mut s = format!(
        "cuts {}, form degree {}, hilbert function ({})\n",
        r.cuts,
        r.form_degree,
        join(&r.hilbert)
    );
    for st in &r.steps {
        s.push_str(&format!(
            "  t = {:>2}: {:>4} -> {:<4} rank {:>4} expected {:>4} {}\n",
            st.t,
            st.source_dim,
            st.target_dim,
            st.rank,
            st.expected,
            if st.maximal { "ok" } else { "DEFICIENT" }
        ));
    }
    match r.first_failure {
        None => s.push_str("maximal rank in every degree"),
        Some(t) => s.push_str(&format!("fails at t = {t}")),
    }
    s
}

fn run(cli: &Cli) -> Result<Output, Failure> {
    let o = &cli.opts;
    let cfg = config(o);
    match &cli.command {
        Command::Macaulay(cmd) => match cmd {
            MacaulayCmd::Expand { c, i } => {
                let e = binomial_expansion(*c, *i)?;
                let terms: Vec<String> =
                    e.terms.iter().map(|(m, j)| format!("C({m},{j})")).collect();
                out(&e, format!("{c} = {}", terms.join(" + ")))
            }
            MacaulayCmd::Growth { c, i } => {
                let g = growth(*c, *i)?;
                out(
                    &json!({"c": c, "i": i, "growth": g.to_string()}),
                    g.to_string(),
                )
            }
            MacaulayCmd::Check { seq, tail } => {
                let s = parse_seq(seq, *tail)?;
                let v = is_differentiable_o_sequence(&s);
                let maximal = maximal_growth_degrees(&s).ok();
                let mut text = format!(
                    "O-sequence: {}\ndifferentiable: {}",
                    v.sequence.is_o_sequence, v.is_differentiable
                );
                if let Some(viol) = &v.sequence.violation {
                    text.push_str(&format!("\nviolation: {viol:?}"));
                }
                if let Some(m) = &maximal {
                    let degrees: Vec<usize> = m
                        .iter()
                        .filter(|g| g.is_maximal)
                        .map(|g| g.degree)
                        .collect();
                    text.push_str(&format!(
                        "\nmaximal growth out of degrees: [{}]",
                        join(degrees)
                    ));
                }
                out(&json!({"verdict": v, "growth": maximal}), text)
            }
        },
        Command::Gotzmann(cmd) => match cmd {
            GotzmannCmd::Poly { c, d } => {
                let g = gotzmann_polynomial(*c, *d)?;
                let text = format!(
                    "P(x) = {}\ndimension {}, degree {}",
                    g.polynomial, g.dimension, g.degree_of_scheme
                );
                out(&g, text)
            }
            GotzmannCmd::Classify { delta_h, d, n } => {
                let c = classify_flat(&parse_seq(delta_h, None)?, *d, *n)?;
                out(&c, format!("{c:?}"))
            }
        },
        Command::Mono(cmd) => match cmd {
            MonoCmd::Hf { ideal } => {
                let m: MonomialIdeal = read_json(ideal)?;
                let t = match o.tmax {
                    Some(t) => t,
                    None => m.top_degree().map(|t| t + 1).unwrap_or(10),
                };
                let h = m.hilbert_function(t);
                out(&h, h.to_string())
            }
            MonoCmd::Lex { seq, n, tail } => {
                let lex = lex_ideal(&parse_seq(seq, *tail)?, *n)?;
                out(&lex, join(lex.gens()))
            }
            MonoCmd::Betti {
                ideal,
                lex,
                n,
                tail,
            } => {
                let m = match (ideal, lex) {
                    (_, Some(s)) => lex_ideal(&parse_seq(s, *tail)?, n.unwrap_or(0))?,
                    (Some(path), None) => read_json(path)?,
                    (None, None) => unreachable!("clap requires one of them"),
                };
                let b = m.ek_betti()?;
                out(&b, b.render().trim_end().to_string())
            }
            MonoCmd::Socle { ideal } => {
                let m: MonomialIdeal = read_json(ideal)?;
                let socle = m.socle()?;
                let text = socle
                    .iter()
                    .map(|s| format!("degree {}: {}", s.degree, s.witness))
                    .collect::<Vec<_>>()
                    .join("\n");
                out(&socle, text)
            }
            MonoCmd::Lift { ideal } => {
                let m: MonomialIdeal = read_json(ideal)?;
                let d = m.distraction()?;
                let v = serde_json::to_value(&d).map_err(|e| Failure::Io(e.to_string()))?;
                let pts: Vec<String> = d
                    .points
                    .points()
                    .iter()
                    .map(|p| format!("[{}]", join(p)))
                    .collect();
                out(&v, format!("{} points\n{}", pts.len(), pts.join("\n")))
            }
        },
        Command::Rnum { source, m } => {
            let src = read_source(source)?;
            let r = reduction_number(src.as_dyn(), *m, &cfg)?;
            out(
                &json!({"m": m, "reduction_number": r}),
                format!("r_{m} = {r}"),
            )
        }
        Command::Wlp { source, m } => {
            let src = read_source(source)?;
            let r = wlp_test(src.as_dyn(), *m, o.tmax, &cfg)?;
            let text = lefschetz_text(&r);
            out(&r, text)
        }
        Command::Slp { source, m, d } => {
            let src = read_source(source)?;
            let r = slp_test(src.as_dyn(), *m, *d, o.tmax, &cfg)?;
            let text = lefschetz_text(&r);
            out(&r, text)
        }
        Command::Truncpoly {
            source,
            d,
            from,
            to,
        } => {
            let src = read_source(source)?;
            let range = from.zip(*to);
            let fit = truncated_ideal_polynomial(src.as_dyn(), *d, range, &cfg)?;
            let dim = fit.dimension.map_or("empty".to_string(), |v| v.to_string());
            let text = format!(
                "P(x) = {} (fitted from degree {})\ndimension {dim}, degree {}",
                fit.polynomial, fit.fit_from, fit.degree
            );
            out(&fit, text)
        }
        Command::Alpha { source } => {
            let src = read_source(source)?;
            let a = initial_degree(src.as_dyn(), &cfg)?;
            out(&json!({"initial_degree": a}), format!("alpha = {a}"))
        }
        Command::Points(cmd) => points_command(cmd, o, &cfg),
        Command::Diagnose { input, verify } => {
            let input: DiagnosisInput = read_json(input)?;
            let mut report = diagnose(&input)?;
            if let Some(path) = verify {
                let src = read_source(path)?;
                report.verify_curves(src.as_dyn(), &cfg)?;
            }
            let text = report.render().trim_end().to_string();
            out(&report, text)
        }
        Command::Fixtures(FixturesCmd::List) => {
            let list: Vec<Value> = fixtures::all()
                .iter()
                .map(|f| json!({"name": f.name, "origin": f.origin, "about": f.about}))
                .collect();
            let text = fixtures::all()
                .iter()
                .map(|f| format!("{:<24} {:<12} {}", f.name, f.origin.as_str(), f.about))
                .collect::<Vec<_>>()
                .join("\n");
            out(&list, text)
        }
        Command::Fixtures(FixturesCmd::Run { only }) => {
            let selected: Vec<_> = fixtures::all()
                .into_iter()
                .filter(|f| only.as_deref().is_none_or(|n| n == f.name))
                .collect();
            if selected.is_empty() {
                return Err(Failure::Input(format!(
                    "no fixture named {}",
                    only.as_deref().unwrap_or("")
                )));
            }
            let results: Vec<fixtures::Outcome> = selected.iter().map(|f| f.run(&cfg)).collect();
            let text = results
                .iter()
                .map(|r| {
                    format!(
                        "{} {}: {}",
                        if r.pass { "PASS" } else { "FAIL" },
                        r.name,
                        r.summary
                    )
                })
                .collect::<Vec<_>>()
                .join("\n");
            if results.iter().any(|r| !r.pass) {
                let failed: Vec<&str> =
                    results.iter().filter(|r| !r.pass).map(|r| r.name).collect();
                let _ = writeln!(std::io::stdout().lock(), "{text}");
                return Err(Failure::Domain(hilbertkit::Error::Internal(format!(
                    "fixtures failed: {}",
                    failed.join(", ")
                ))));
            }
            out(&results, text)
        }
    }
}

fn points_command(
    cmd: &PointsCmd,
    o: &GlobalOpts,
    cfg: &RankEngineConfig,
) -> Result<Output, Failure> {
    match cmd {
        PointsCmd::Hf { points } => {
            let z: PointSet = read_json(points)?;
            let h = z.hilbert_function(o.tmax, cfg)?;
            let dh = difference(&h, 1);
            out(
                &json!({"hilbert_function": h, "delta_h": dh}),
                format!("h:       {h}\nDelta h: {dh}"),
            )
        }
        PointsCmd::Upp { points, sampled } => {
            let z: PointSet = read_json(points)?;
            let mode = match sampled {
                Some(k) => UppMode::Sampled { per_size: *k },
                None if z.len() <= DEFAULT_UPP_CAP => UppMode::Exhaustive {
                    cap: DEFAULT_UPP_CAP,
                },
                None => UppMode::Sampled {
                    per_size: DEFAULT_UPP_SAMPLES,
                },
            };
            let v = z.upp_test(mode, cfg)?;
            let mut text = format!(
                "uniform position: {} ({} subsets checked)",
                if v.holds { "holds" } else { "fails" },
                v.subsets_checked
            );
            if let Some(w) = &v.witness {
                text.push_str(&format!(
                    "\nwitness [{}]: expected {}, found {}",
                    join(&w.subset),
                    w.expected,
                    w.found
                ));
            }
            out(&v, text)
        }
        PointsCmd::Forms { points, d } => {
            let z: PointSet = read_json(points)?;
            let forms = z.degree_forms(*d, cfg)?;
            let field = PrimeField::new(forms.prime)?;
            let text = forms
                .forms
                .iter()
                .map(|f| f.display_lifted(field))
                .collect::<Vec<_>>()
                .join("\n");
            out(
                &forms,
                format!(
                    "{} forms of degree {d} mod {}\n{text}",
                    forms.forms.len(),
                    forms.prime
                ),
            )
        }
        PointsCmd::Gcd { points, d } => {
            let z: PointSet = read_json(points)?;
            let mut all = Vec::new();
            let mut prime = None;
            for &t in d {
                let f = z.degree_forms(t, cfg)?;
                prime = Some(f.prime);
                all.extend(f.forms);
            }
            let field = PrimeField::new(prime.unwrap_or(cfg.prime))?;
            let mut rng = cfg.runs()?[0].rng();
            let g = gcd_of_forms(&all, field, &mut rng)?;
            let text = format!(
                "gcd of degree {}: {}",
                g.degree,
                g.gcd.display_lifted(field)
            );
            out(&g, text)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(o) => {
            let body = if cli.opts.json {
                serde_json::to_string_pretty(&o.value).expect("values serialize")
            } else {
                o.text
            };
            // a closed pipe downstream is not an error
            let _ = writeln!(std::io::stdout().lock(), "{body}");
            ExitCode::SUCCESS
        }
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        Err(Failure::Input(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(Failure::Domain(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(3)
        }
    }
}
