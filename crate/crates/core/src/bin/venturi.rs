use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};

use venturi::curves::{self, Curve, TestFunction};
use venturi::models::{build_model, Grid, HypergroupModel, PANEL_ORDER};
use venturi::report::{write_atomic, SuiteReport};
use venturi::suites::{run_suite, Suite, SuiteConfig, DEFAULT_NODES, DEFAULT_SEED};
use venturi::Error;

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_IO: u8 = 3;

#[derive(Parser)]
#[command(
    name = "venturi",
    version,
    about = "Verification suites and curve export for hypergroup harmonic analysis"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a verification suite and write a JSON report.
    Verify(VerifyArgs),
    /// Export a curve as CSV.
    Curve(CurveArgs),
    /// Summarise a JSON report.
    Report {
        /// Report file written by `verify`.
        path: PathBuf,
    },
}

#[derive(Args)]
struct Common {
    /// Grid truncation point.
    #[arg(long, default_value_t = 20.0)]
    xmax: f64,
    /// Grid nodes (rounded up to whole panels).
    #[arg(long, default_value_t = DEFAULT_NODES)]
    nodes: usize,
    /// Seed for randomised trials.
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Output file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// characters | transforms | fracint | waves | opcalc | multipliers | all
    #[arg(long)]
    suite: String,
    /// cosh | mehler | sl2c | all
    #[arg(long, default_value = "all")]
    model: String,
    /// Override a registered tolerance, e.g. --tol wave.eigen=1e-5
    #[arg(long = "tol", value_name = "NAME=VALUE")]
    tolerances: Vec<String>,
    #[command(flatten)]
    common: Common,
}

#[derive(Clone, Copy, ValueEnum)]
enum CurveKind {
    Character,
    Transform,
    Wave,
    Growth,
}

#[derive(Args)]
struct CurveArgs {
    kind: CurveKind,
    /// cosh | mehler | sl2c
    #[arg(long, default_value = "cosh")]
    model: String,
    /// Spectral parameter for `character`.
    #[arg(long, default_value_t = 1.0)]
    lambda: f64,
    /// Time for `wave`; largest time for `growth`.
    #[arg(long, default_value_t = 1.0)]
    t: f64,
    /// Exponent for `growth`.
    #[arg(long, default_value_t = 2.0)]
    p: f64,
    /// gauss | sech2 | sech3 | sech5, for `transform`.
    #[arg(long, default_value = "gauss")]
    f: String,
    /// Number of λ or t samples for `transform` and `growth`.
    #[arg(long, default_value_t = 64)]
    points: usize,
    #[command(flatten)]
    common: Common,
}

/// Outcome of a command: exit code and a message for standard error.
struct Failure(u8, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Config(_) | Error::Domain(_) => EXIT_USAGE,
            Error::Io { .. } | Error::Format(_) => EXIT_IO,
            _ => EXIT_FAIL,
        };
        Failure(code, e.to_string())
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => write_atomic(path, text.as_bytes())?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .map_err(|e| Failure(EXIT_IO, format!("writing to standard output: {e}")))?;
        }
    }
    Ok(())
}

fn verify(args: VerifyArgs) -> Result<u8, Failure> {
    let mut cfg = SuiteConfig::new(args.suite.parse::<Suite>()?);
    if args.model != "all" {
        cfg.model = Some(args.model.parse()?);
    }
    cfg.set_x_max(args.common.xmax)?;
    cfg.set_nodes(args.common.nodes)?;
    cfg.seed = args.common.seed;
    for t in &args.tolerances {
        cfg.tolerances.apply(t)?;
    }
    let report = run_suite(&cfg)?;
    emit(args.common.out.as_deref(), &report.to_json())?;
    let passed = report.passed();
    eprintln!("{passed}/{} checks passed", report.checks.len());
    Ok(if !report.checks.is_empty() && passed == report.checks.len() {
        0
    } else {
        EXIT_FAIL
    })
}

fn curve(args: CurveArgs) -> Result<u8, Failure> {
    let model: HypergroupModel = build_model(&args.model)?;
    let common = &args.common;
    if !(common.xmax > 0.0) || common.nodes == 0 || args.points == 0 {
        return Err(Failure(EXIT_USAGE, "xmax, nodes and points must be positive".into()));
    }
    let table: Curve = match args.kind {
        CurveKind::Character => {
            curves::character_curve(&model, args.lambda, &curves::linspace(0.0, common.xmax, common.nodes))?
        }
        CurveKind::Transform => {
            let f: TestFunction = args.f.parse()?;
            let lambdas: Vec<f64> = (1..=args.points).map(|k| 4.0 * k as f64 / args.points as f64).collect();
            curves::transform_curve(&model, f, &lambdas)?
        }
        CurveKind::Wave => {
            let panels = common.nodes.div_ceil(PANEL_ORDER);
            let grid = Arc::new(Grid::new(&model.profile, common.xmax, panels, PANEL_ORDER)?);
            curves::wave_curve(&model, grid, args.t)?
        }
        CurveKind::Growth => {
            let times = curves::linspace(0.0, args.t, args.points);
            curves::growth_curve(&model, args.p, &times, 16, common.seed)?
        }
    };
    emit(common.out.as_deref(), &table.to_csv())?;
    Ok(0)
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map_or_else(|| "-".into(), |x| format!("{x:.6e}"))
}

fn report(path: &Path) -> Result<u8, Failure> {
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let report = SuiteReport::from_json(&text)?;
    println!("suite {} / model {} / seed {}", report.suite, report.model, report.seed);
    let width = report.checks.iter().map(|c| c.name.len()).max().unwrap_or(4).max(4);
    println!(
        "   {:width$}  {:>14}  {:>14}  {:>14}  pass",
        "name", "measured", "expected", "tolerance"
    );
    for c in &report.checks {
        let mark = if c.pass { "  " } else { "!!" };
        println!(
            "{mark} {:width$}  {:>14}  {:>14}  {:>14}  {}",
            c.name,
            fmt_opt(c.measured),
            fmt_opt(c.expected),
            fmt_opt(c.tolerance),
            if c.pass { "yes" } else { "NO" }
        );
    }
    let total = report.checks.len();
    if total == 0 {
        println!("0 checks");
        return Ok(EXIT_FAIL);
    }
    println!("{}/{total} checks passed", report.passed());
    Ok(if report.passed() == total { 0 } else { EXIT_FAIL })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Verify(a) => verify(a),
        Command::Curve(a) => curve(a),
        Command::Report { path } => report(&path),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(Failure(code, msg)) => {
            eprintln!("venturi: {msg}");
            if code == EXIT_USAGE {
                eprintln!("{}", Cli::command().render_usage());
            }
            ExitCode::from(code)
        }
    }
}
