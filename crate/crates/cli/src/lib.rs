//! The `pencils` command line: expression parsing, subcommands, JSON
//! reports and SVG gardens.

pub mod expr;
pub mod report;
pub mod svg;

use std::ffi::OsString;
use std::fmt::Display;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use garden_core::bwg::{equivalence_classes, equivalence_classes_with_chords};
use garden_core::garden::TraceOptions;
use garden_core::hunt::{hawaii_exhaustive, hunt_driver, Distribution, Target, TrialConfig};
use garden_core::pencil::Pencil;
use garden_core::poly::RealPoly;

pub use expr::{parse_coeffs, parse_complex, parse_poly_expr, ParseError};
pub use svg::{render_garden_svg, SvgOptions};

#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    /// Bad flags or input text; exit code 2.
    Usage(String),
    /// A syntax error in a polynomial argument; exit code 2.
    Parse { arg: &'static str, err: ParseError },
    /// Mathematically invalid input for the command; exit code 1.
    Domain(String),
    /// A verified conjecture violation that fails the run; exit code 3.
    Violation(String),
}

impl CliError {
    pub fn domain(e: impl Display) -> Self {
        CliError::Domain(e.to_string())
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Parse { .. } => 2,
            CliError::Domain(_) => 1,
            CliError::Violation(_) => 3,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Parse { .. } => "parse",
            CliError::Domain(_) => "domain",
            CliError::Violation(_) => "violation",
        }
    }

    pub fn to_json(&self) -> Value {
        let mut e = json!({ "kind": self.kind(), "code": self.exit_code(), "message": self.to_string() });
        if let CliError::Parse { arg, err } = self {
            e["argument"] = json!(arg);
            e["line"] = json!(err.line);
            e["column"] = json!(err.column);
        }
        json!({ "error": e })
    }
}

impl Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Domain(m) | CliError::Violation(m) => f.write_str(m),
            CliError::Parse { arg, err } => write!(f, "in {arg}: {err}"),
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "pencils", version, about = "Real polynomial pencils, their gardens and related conjectures")]
pub struct Cli {
    /// Reports as JSON on stdout, errors as JSON on stderr.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug)]
pub struct PolyPair {
    /// First basis polynomial, an expression in x.
    #[arg(short = 'P', long = "p", allow_hyphen_values = true)]
    pub p: String,
    /// Second basis polynomial.
    #[arg(short = 'Q', long = "q", allow_hyphen_values = true)]
    pub q: String,
    /// Read -P and -Q as comma-separated coefficients, constant term first.
    #[arg(long)]
    pub coeffs: bool,
}

impl PolyPair {
    fn parse(&self) -> Result<(RealPoly, RealPoly), CliError> {
        let one = |text: &str, arg: &'static str| {
            let r = if self.coeffs { parse_coeffs(text) } else { parse_poly_expr(text) };
            r.map_err(|err| CliError::Parse { arg, err })
        };
        Ok((one(&self.p, "P")?, one(&self.q, "Q")?))
    }
}

#[derive(Args, Debug)]
pub struct PencilArgs {
    #[command(flatten)]
    pub polys: PolyPair,
    /// Projective degree; never inferred from the polynomials.
    #[arg(long)]
    pub n: usize,
}

impl PencilArgs {
    fn pencil(&self) -> Result<Pencil, CliError> {
        let (p, q) = self.polys.parse()?;
        Pencil::new(p, q, self.n).map_err(|e| CliError::Usage(e.to_string()))
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Genericity, real-zero profile and Hurwitz check of a pencil.
    Analyze(PencilArgs),
    /// Number of equivalence classes of generic pencils of degree n.
    Classes {
        #[arg(long)]
        n: u32,
        /// Only classes whose gardens have this many chords.
        #[arg(long)]
        chords: Option<usize>,
        /// Also list the representative gardens.
        #[arg(long)]
        list: bool,
    },
    /// Trace the garden of a generic pencil; writes an SVG and a JSON report.
    Garden {
        #[command(flatten)]
        pencil: PencilArgs,
        #[arg(long, default_value = "garden.svg")]
        svg: PathBuf,
        #[arg(long, default_value = "garden.json")]
        report: PathBuf,
        /// Plot raw coordinates instead of the disc picture.
        #[arg(long)]
        raw: bool,
        /// Initial tracing step, relative to the picture.
        #[arg(long, default_value_t = 1e-3)]
        step: f64,
        /// Skip the class lookup.
        #[arg(long)]
        no_class: bool,
    },
    /// Zeros of P + μQ in the two half-planes.
    Hb {
        #[command(flatten)]
        polys: PolyPair,
        /// Complex parameter such as `i` or `1/2 - 3i`.
        #[arg(long, allow_hyphen_values = true)]
        mu: String,
    },
    /// Randomized or exhaustive search for conjecture violations.
    Hunt {
        #[arg(long, default_value = "hawaii")]
        target: String,
        #[arg(long, default_value_t = 6)]
        max_degree: usize,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 10)]
        bound: i64,
        #[arg(long, default_value = "uniform")]
        distribution: String,
        /// Exponents for the QP target; repeat the flag for several.
        #[arg(long, allow_hyphen_values = true)]
        alpha: Vec<f64>,
        /// Exhaustive Hawaii run over every integer polynomial of this degree
        /// with coefficients in [−bound, bound].
        #[arg(long)]
        exhaustive: Option<usize>,
    },
}

fn emit(out: &mut dyn Write, json_mode: bool, value: &Value, text: impl FnOnce() -> String) -> Result<(), CliError> {
    let s = if json_mode { serde_json::to_string_pretty(value).expect("json values serialize") } else { text() };
    writeln!(out, "{s}").map_err(|e| CliError::Usage(format!("cannot write output: {e}")))
}

fn range(lo: &Value, hi: &Value) -> String {
    let show = |v: &Value| v.get("approx").map_or("∞".to_string(), |a| format!("{:.6}", a.as_f64().unwrap_or(f64::NAN)));
    format!("({}, {})", show(lo), show(hi))
}

fn analyze_text(v: &Value) -> String {
    let mut s = format!(
        "pencil: P = {}, Q = {}, n = {}\nwronskian: {}\ngenericity: {}\n",
        v["pencil"]["p"]["expr"].as_str().unwrap_or(""),
        v["pencil"]["q"]["expr"].as_str().unwrap_or(""),
        v["pencil"]["n"],
        v["genericity"]["wronskian"]["expr"].as_str().unwrap_or(""),
        v["genericity"]["status"].as_str().unwrap_or(""),
    );
    if let Some(cc) = v["constant_count"].as_object() {
        s += &format!("constant real count: {}\n", if cc["constant"] == json!(true) { cc["count"].to_string() } else { "no".into() });
    }
    if let Some(crit) = v["profile"]["critical"].as_array() {
        let counts = v["profile"]["counts"].as_array().cloned().unwrap_or_default();
        if crit.is_empty() {
            s += &format!("profile: every member has {} real zeros\n", counts.first().unwrap_or(&json!(0)));
        } else {
            s += "profile:\n";
            for (i, c) in counts.iter().enumerate() {
                s += &format!("  {} -> {}\n", range(&crit[i], &crit[(i + 1) % crit.len()]), c);
            }
        }
    }
    s += &format!("hurwitz generic (advisory): {}", v["hurwitz"]["generic"]);
    s
}

fn write_file(path: &PathBuf, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents).map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))
}

fn dispatch(cli: &Cli, out: &mut dyn Write) -> Result<(), CliError> {
    match &cli.command {
        Command::Analyze(a) => {
            let v = report::analyze(&a.pencil()?)?;
            emit(out, cli.json, &v, || analyze_text(&v))
        }
        Command::Classes { n, chords, list } => {
            if *n == 0 {
                return Err(CliError::Usage("n must be at least 1".into()));
            }
            let summary = match chords {
                Some(k) => equivalence_classes_with_chords(*n, *k),
                None => equivalence_classes(*n),
            };
            let v = serde_json::to_value(&summary).expect("summaries serialize");
            emit(out, cli.json, &v, || {
                let mut s = summary.count.to_string();
                if *list {
                    for r in &summary.representatives {
                        s += &format!("\n{r}");
                    }
                }
                s
            })
        }
        Command::Garden { pencil, svg, report: report_path, raw, step, no_class } => {
            if !(*step > 0.0) {
                return Err(CliError::Usage("--step must be positive".into()));
            }
            let l = pencil.pencil()?;
            let opts = TraceOptions { step: *step, ..TraceOptions::default() };
            let g = report::garden(&l, &opts, SvgOptions { raw: *raw }, !no_class)?;
            write_file(svg, &g.svg)?;
            write_file(report_path, &(serde_json::to_string_pretty(&g.report).expect("json values serialize") + "\n"))?;
            emit(out, cli.json, &g.report, || {
                format!(
                    "vertices {}, chords {}, ovals {}, total weight {:.6}\nboundary-weighted key: {}\nclass id: {}\nwrote {} and {}",
                    g.traced.vertices.len(),
                    g.traced.chords.len(),
                    g.traced.ovals.len(),
                    g.weights.total,
                    g.bwg.as_ref().map_or("unavailable".into(), |b| b.canonical_key()),
                    g.report["class_id"],
                    svg.display(),
                    report_path.display()
                )
            })
        }
        Command::Hb { polys, mu } => {
            let (p, q) = polys.parse()?;
            let mu = parse_complex(mu).map_err(|err| CliError::Parse { arg: "mu", err })?;
            let v = report::hb(&p, &q, &mu)?;
            emit(out, cli.json, &v, || {
                format!(
                    "#₊ = {}\n#₋ = {}\nreal = {}\nT = {}",
                    v["sharp_plus"],
                    v["sharp_minus"],
                    v["real_count"],
                    if v["t"].is_null() { "undefined".into() } else { v["t"].to_string() }
                )
            })
        }
        Command::Hunt { target, max_degree, trials, seed, bound, distribution, alpha, exhaustive } => {
            let target: Target = target.parse().map_err(CliError::Usage)?;
            let distribution: Distribution = distribution.parse().map_err(CliError::Usage)?;
            if *bound < 1 {
                return Err(CliError::Usage("--bound must be at least 1".into()));
            }
            let r = match exhaustive {
                Some(d) if target == Target::Hawaii => hawaii_exhaustive(*d, *bound),
                Some(_) => return Err(CliError::Usage("--exhaustive applies to the hawaii target only".into())),
                None => {
                    let alphas = if alpha.is_empty() { vec![-1.0] } else { alpha.clone() };
                    if let Some(a) = alphas.iter().find(|a| !(**a <= -1.0)) {
                        return Err(CliError::Usage(format!("--alpha must be at most -1, got {a}")));
                    }
                    let cfg = TrialConfig {
                        max_degree: *max_degree,
                        distribution,
                        bound: *bound,
                        trials: *trials,
                        seed: *seed,
                        alphas,
                    };
                    hunt_driver(target, &cfg)
                }
            };
            let v = report::conjecture(&r);
            emit(out, cli.json, &v, || {
                let mut s = format!(
                    "{}: {} trials, {} completed, {} skipped, {} errors, {} violations",
                    r.target,
                    r.trials,
                    r.completed,
                    r.skipped,
                    r.errors,
                    r.violations.len()
                );
                for c in &r.violations {
                    s += &format!("\nviolation: {} {:?}", c.input, c.exact_counts);
                }
                s
            })?;
            if r.fails_policy() {
                return Err(CliError::Violation(format!("{} verified violations of the Hawaii conjecture", r.violations.len())));
            }
            Ok(())
        }
    }
}

fn report_error(err: &mut dyn Write, json_mode: bool, e: &CliError) {
    let _ = if json_mode { writeln!(err, "{}", e.to_json()) } else { writeln!(err, "error: {e}") };
}

/// Runs the command line and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let json_mode = args.iter().any(|a| a == "--json");
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                return 0;
            }
            let ce = CliError::Usage(e.to_string().trim_end().to_string());
            if json_mode {
                report_error(err, true, &ce);
            } else {
                let _ = write!(err, "{e}");
            }
            return ce.exit_code();
        }
    };
    let threads = match std::env::var("GARDEN_THREADS") {
        Ok(v) => match v.parse::<usize>() {
            Ok(k) if k >= 1 => Some(k),
            _ => {
                let e = CliError::Usage(format!("GARDEN_THREADS must be a positive integer, got `{v}`"));
                report_error(err, json_mode, &e);
                return e.exit_code();
            }
        },
        Err(_) => None,
    };
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(k) = threads {
        builder = builder.num_threads(k);
    }
    let pool = match builder.build() {
        Ok(p) => p,
        Err(e) => {
            let e = CliError::Usage(format!("cannot start worker threads: {e}"));
            report_error(err, json_mode, &e);
            return e.exit_code();
        }
    };
    let mut buf: Vec<u8> = Vec::new();
    let result = pool.install(|| dispatch(&cli, &mut buf));
    let _ = out.write_all(&buf);
    match result {
        Ok(()) => 0,
        Err(e) => {
            report_error(err, cli.json, &e);
            e.exit_code()
        }
    }
}
