//! `geoprob`: command-line front end for the geometric probability toolkit.
//!
//! Exit codes: 0 success, 1 verification failure, 2 unknown command or
//! experiment, 3 invalid arguments.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use geoprob_core::battery::{self, BatteryConfig, Status};
use geoprob_core::crofton::{self, Polyline};
use geoprob_core::exact::{self, PiRational};
use geoprob_core::geom::{ConvexBody2, ConvexPolygon, Point};
use geoprob_core::mc::{self, Experiment, HistogramGof, McConfig};
use geoprob_core::Error;

const EXIT_FAIL: u8 = 1;
const EXIT_UNKNOWN: u8 = 2;
const EXIT_INVALID: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "geoprob", version, about = "Exact constants, Crofton quadrature and Monte Carlo checks for random convex geometry")]
struct Cli {
    /// Omit the timestamp so reports from identical runs compare byte-for-byte.
    #[arg(long, global = true)]
    compare: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print every exact constant with its rational parts and float value.
    Constants(OutputArgs),
    /// Run a Monte Carlo estimator and compare it with its closed form.
    Estimate(EstimateArgs),
    /// Integral-geometry quadratures: curve length or chord moments.
    Crofton(CroftonArgs),
    /// Histogram goodness-of-fit against an analytic density.
    Density(DensityArgs),
    /// Run the full verification battery.
    Verify(VerifyArgs),
}

#[derive(Args, Debug)]
struct OutputArgs {
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// json (default) or csv; `verify` prints a table unless this is given.
    #[arg(long, value_enum)]
    format: Option<Format>,
}

impl OutputArgs {
    fn format(&self) -> Format {
        self.format.unwrap_or(Format::Json)
    }
}

#[derive(Args, Debug)]
struct McArgs {
    #[arg(long, default_value_t = battery::DEFAULT_SAMPLES)]
    samples: u64,
    #[arg(long, default_value_t = battery::DEFAULT_SEED)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    workers: u32,
}

impl McArgs {
    fn config(&self) -> McConfig {
        McConfig::new(self.samples, self.seed, self.workers)
    }
}

#[derive(Args, Debug)]
struct EstimateArgs {
    /// simplex, sylvester, center-triangle, boundary-triangle, offcut or mean-distance
    experiment: String,
    #[arg(long, default_value_t = 2)]
    dim: u32,
    #[command(flatten)]
    mc: McArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug)]
struct CroftonArgs {
    #[arg(value_enum)]
    target: CroftonTarget,
    #[arg(long, value_enum, default_value_t = Shape::Disk)]
    shape: Shape,
    /// Vertex count for `--shape polygon` (regular, inscribed in the unit circle).
    #[arg(long, default_value_t = 1024)]
    sides: usize,
    #[arg(long, default_value_t = crofton::DEFAULT_PANELS)]
    panels: usize,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug)]
struct DensityArgs {
    /// 2, 3, 4 (secant offsets) or max-radius
    target: String,
    #[arg(long, default_value_t = battery::DEFAULT_BINS)]
    bins: usize,
    #[command(flatten)]
    mc: McArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[command(flatten)]
    mc: McArgs,
    /// Fail, rather than skip, checks that need more samples.
    #[arg(long)]
    strict: bool,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Json,
    Csv,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum CroftonTarget {
    Length,
    Moments,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Shape {
    Disk,
    Square,
    Segment,
    Polygon,
}

#[derive(Debug)]
enum CliError {
    Unknown(String),
    Invalid(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Invalid(e.to_string())
    }
}

type CliResult<T> = Result<T, CliError>;

/// Rendered report plus whether it represents a pass.
struct Outcome {
    body: String,
    passed: bool,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                ErrorKind::InvalidSubcommand
                | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand
                | ErrorKind::MissingSubcommand => EXIT_UNKNOWN,
                _ => EXIT_INVALID,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let (out, result) = match &cli.command {
        Command::Constants(o) => (o.out.clone(), constants(&cli, o)),
        Command::Estimate(a) => (a.output.out.clone(), estimate(&cli, a)),
        Command::Crofton(a) => (a.output.out.clone(), crofton_cmd(&cli, a)),
        Command::Density(a) => (a.output.out.clone(), density(&cli, a)),
        Command::Verify(a) => (a.output.out.clone(), verify(&cli, a)),
    };
    match result {
        Ok(outcome) => {
            if let Err(e) = emit(out.as_ref(), &outcome.body) {
                eprintln!("error: {e}");
                return ExitCode::from(EXIT_INVALID);
            }
            if outcome.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_FAIL)
            }
        }
        Err(CliError::Unknown(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_UNKNOWN)
        }
        Err(CliError::Invalid(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_INVALID)
        }
    }
}

fn emit(out: Option<&PathBuf>, body: &str) -> std::io::Result<()> {
    match out {
        Some(path) => std::fs::write(path, body),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

/// Shared report envelope. `serde_json` without `preserve_order` keeps object
/// keys sorted, so rendering is deterministic.
fn report(cli: &Cli, seed: Option<u64>, results: Value, passed: Option<bool>) -> String {
    let command: Vec<String> = std::env::args().skip(1).collect();
    let mut root = json!({
        "command": command.join(" "),
        "results": results,
    });
    if let Some(seed) = seed {
        root["seed"] = json!(seed);
    }
    if let Some(p) = passed {
        root["pass"] = json!(p);
    }
    if !cli.compare {
        let now = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs());
        root["timestamp"] = json!(now);
    }
    let mut s = serde_json::to_string_pretty(&root).expect("JSON values always serialize");
    s.push('\n');
    s
}

fn pi_rational_json(x: &PiRational) -> Value {
    json!({
        "num": x.num().to_string(),
        "den": x.den().to_string(),
        "pi_half_power": x.pi_half_power(),
        "display": x.to_string(),
    })
}

fn constants(cli: &Cli, o: &OutputArgs) -> CliResult<Outcome> {
    let table = exact::constant_table();
    let body = match o.format() {
        Format::Json => {
            let rows: Vec<Value> = table
                .iter()
                .map(|c| {
                    let mut row = json!({
                        "name": c.name,
                        "value": c.value.to_f64(),
                        "exact": c.value.to_string(),
                        "terms": c.value.terms().iter().map(pi_rational_json).collect::<Vec<_>>(),
                    });
                    if let Some(m) = c.value.as_monomial() {
                        row["num"] = json!(m.num().to_string());
                        row["den"] = json!(m.den().to_string());
                        row["pi_half_power"] = json!(m.pi_half_power());
                    }
                    row
                })
                .collect();
            report(cli, None, Value::Array(rows), None)
        }
        Format::Csv => {
            let mut s = String::from("name,num,den,pi_half_power,value\n");
            for c in &table {
                for t in c.value.terms() {
                    let _ = writeln!(
                        s,
                        "{},{},{},{},{}",
                        c.name,
                        t.num(),
                        t.den(),
                        t.pi_half_power(),
                        c.value.to_f64()
                    );
                }
            }
            s
        }
    };
    Ok(Outcome { body, passed: true })
}

fn estimate(cli: &Cli, a: &EstimateArgs) -> CliResult<Outcome> {
    let exp = Experiment::parse(&a.experiment, a.dim).ok_or_else(|| {
        CliError::Unknown(format!(
            "unknown experiment '{}'; expected one of {}",
            a.experiment,
            Experiment::NAMES.join(", ")
        ))
    })?;
    let e = exp.run(&a.mc.config())?;
    let exact = exp.exact()?;
    let rel_error = (e.mean - exact).abs() / exact;
    let body = match a.output.format() {
        Format::Json => {
            let mut v = serde_json::to_value(&e).expect("Estimate serializes");
            v["exact"] = json!(exact);
            v["rel_error"] = json!(rel_error);
            report(cli, Some(e.seed), v, None)
        }
        Format::Csv => format!(
            "experiment,mean,std_error,n,ci95_lo,ci95_hi,exact,rel_error,seed,workers,degenerate\n\
             {},{},{},{},{},{},{},{},{},{},{}\n",
            e.experiment,
            e.mean,
            e.std_error,
            e.n,
            e.ci95.0,
            e.ci95.1,
            exact,
            rel_error,
            e.seed,
            e.workers,
            e.degenerate
        ),
    };
    Ok(Outcome { body, passed: true })
}

fn shape_body(a: &CroftonArgs) -> CliResult<ConvexBody2> {
    Ok(match a.shape {
        Shape::Disk => ConvexBody2::UnitDisk,
        Shape::Square => ConvexBody2::Polygon(ConvexPolygon::unit_square()),
        Shape::Polygon => ConvexBody2::Polygon(ConvexPolygon::regular(a.sides, 1.0)?),
        Shape::Segment => {
            return Err(CliError::Invalid(
                "chord moments need a convex region; a segment has none".into(),
            ))
        }
    })
}

fn crofton_cmd(cli: &Cli, a: &CroftonArgs) -> CliResult<Outcome> {
    if a.panels < 2 || !a.panels.is_multiple_of(2) {
        return Err(CliError::Invalid(format!("--panels must be even and ≥ 2, got {}", a.panels)));
    }
    let mut rows: Vec<(String, f64, Option<f64>)> = Vec::new();
    let results = match a.target {
        CroftonTarget::Length => {
            let curve = match a.shape {
                Shape::Segment => Polyline::segment(Point::new([0.0, 0.0]), Point::new([1.0, 0.0]))?,
                Shape::Square => Polyline::closed(&ConvexPolygon::unit_square()),
                Shape::Polygon => Polyline::closed(&ConvexPolygon::regular(a.sides, 1.0)?),
                // the circle through its inscribed polygon
                Shape::Disk => Polyline::closed(&ConvexPolygon::regular(a.sides, 1.0)?),
            };
            let value = crofton::crofton_length(&curve, a.panels);
            let length = curve.length();
            rows.push(("crofton_length".into(), value, None));
            rows.push(("polyline_length".into(), length, None));
            json!({
                "shape": format!("{:?}", a.shape).to_lowercase(),
                "vertices": curve.vertices().len(),
                "panels": a.panels,
                "crofton_length": value,
                "polyline_length": length,
                "abs_error": (value - length).abs(),
            })
        }
        CroftonTarget::Moments => {
            let body = shape_body(a)?;
            let mut moments = Vec::new();
            for n in 0..=4 {
                let m = crofton::chord_moment(&body, n)?;
                rows.push((format!("I{n}"), m.value, Some(m.error)));
                moments.push(serde_json::to_value(&m).expect("MomentResult serializes"));
            }
            let j0 = crofton::distance_moment(&body, 0)?;
            let j1 = crofton::distance_moment(&body, 1)?;
            rows.push(("J0".into(), j0.value, Some(j0.error)));
            rows.push(("mean_distance".into(), j1.normalized, Some(j1.error)));
            json!({
                "shape": body.label(),
                "area": body.area(),
                "perimeter": body.perimeter(),
                "moments": moments,
                "J0": j0.value,
                "mean_distance": j1.normalized,
            })
        }
    };
    let body = match a.output.format() {
        Format::Json => report(cli, None, results, None),
        Format::Csv => {
            let mut s = String::from("quantity,value,error\n");
            for (name, value, err) in rows {
                let err = err.map(|e| e.to_string()).unwrap_or_default();
                let _ = writeln!(s, "{name},{value},{err}");
            }
            s
        }
    };
    Ok(Outcome { body, passed: true })
}

fn density(cli: &Cli, a: &DensityArgs) -> CliResult<Outcome> {
    let cfg = a.mc.config();
    let h: HistogramGof = match a.target.as_str() {
        "2" => mc::secant_offset_histogram(2, a.bins, &cfg)?,
        "3" => mc::secant_offset_histogram(3, a.bins, &cfg)?,
        "4" => mc::secant_offset_histogram(4, a.bins, &cfg)?,
        "max-radius" => mc::max_radius_gof(a.bins, &cfg)?,
        other => {
            return Err(CliError::Invalid(format!(
                "unknown density target '{other}'; expected 2, 3, 4 or max-radius"
            )))
        }
    };
    let body = match a.output.format() {
        Format::Json => {
            let v = serde_json::to_value(&h).expect("HistogramGof serializes");
            report(cli, Some(h.seed), v, Some(h.pass))
        }
        Format::Csv => {
            let mut s = String::from("bin_lo,bin_hi,observed,expected\n");
            for i in 0..h.bins() {
                let _ = writeln!(
                    s,
                    "{},{},{},{}",
                    h.edges[i],
                    h.edges[i + 1],
                    h.observed[i],
                    h.expected[i]
                );
            }
            s
        }
    };
    // A failed fit is a verification failure.
    Ok(Outcome { body, passed: h.pass })
}

fn verify(cli: &Cli, a: &VerifyArgs) -> CliResult<Outcome> {
    if a.mc.samples == 0 || a.mc.workers == 0 {
        return Err(CliError::Invalid("--samples and --workers must be positive".into()));
    }
    let cfg = BatteryConfig {
        samples: a.mc.samples,
        seed: a.mc.seed,
        workers: a.mc.workers,
        strict: a.strict,
        ..BatteryConfig::default()
    };
    if cfg.samples < battery::MIN_VERIFY_SAMPLES {
        eprintln!(
            "warning: insufficient samples ({} < {}); Monte Carlo checks {}",
            cfg.samples,
            battery::MIN_VERIFY_SAMPLES,
            if cfg.strict { "fail" } else { "skipped" }
        );
    }
    let checks = battery::run(&cfg)?;
    let passed = battery::all_passed(&checks);
    let body = match a.output.format() {
        Format::Json => report(
            cli,
            Some(cfg.seed),
            serde_json::to_value(&checks).expect("checks serialize"),
            Some(passed),
        ),
        Format::Csv => {
            let mut s = String::from("criterion,status,name,value,expected,tolerance,detail\n");
            for c in &checks {
                let _ = writeln!(
                    s,
                    "{},{},\"{}\",{},{},{},\"{}\"",
                    c.criterion,
                    status_word(c.status),
                    c.name,
                    c.value,
                    c.expected,
                    c.tolerance,
                    c.detail.replace('"', "\"\"")
                );
            }
            s
        }
    };
    // The table always goes to stdout; the machine-readable report to --out.
    let mut table = String::new();
    if !cli.compare {
        let now = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs());
        let _ = writeln!(table, "timestamp {now}");
    }
    let _ = writeln!(
        table,
        "verify: samples {} seed {} workers {}{}",
        cfg.samples,
        cfg.seed,
        cfg.workers,
        if cfg.strict { " strict" } else { "" }
    );
    for c in &checks {
        let _ = writeln!(
            table,
            "{:<4} [{:>2}] {:<48} value {:<24} expected {:<24} tol {}{}",
            status_word(c.status),
            c.criterion,
            c.name,
            num(c.value),
            num(c.expected),
            num(c.tolerance),
            if c.detail.is_empty() { String::new() } else { format!("  ({})", c.detail) }
        );
    }
    let failed = checks.iter().filter(|c| !c.passed()).count();
    let skipped = checks.iter().filter(|c| c.status == Status::Skipped).count();
    let _ = writeln!(
        table,
        "{} checks: {} passed, {} failed, {} skipped",
        checks.len(),
        checks.len() - failed - skipped,
        failed,
        skipped
    );
    let body = match &a.output.out {
        Some(_) => {
            print!("{table}");
            body
        }
        None if a.output.format.is_some() => body,
        None => table,
    };
    Ok(Outcome { body, passed })
}

/// Shortest round-trip rendering, in scientific notation for tiny magnitudes.
fn num(x: f64) -> String {
    if x != 0.0 && x.abs() < 1e-4 {
        format!("{x:e}")
    } else {
        x.to_string()
    }
}

fn status_word(s: Status) -> &'static str {
    match s {
        Status::Pass => "PASS",
        Status::Fail => "FAIL",
        Status::Skipped => "SKIP",
    }
}
