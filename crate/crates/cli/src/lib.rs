//! Command-line front end: argument parsing, experiment dispatch and report
//! formatting for `rpnorm`.
//!
//! Exit codes: 0 when every bound report passes, 1 when any fails, 2 on a
//! usage error (nothing is written), 3 on an I/O failure.

use std::fmt::Write as _;
use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use thiserror::Error;

use rpnorm::ensemble::{run_experiment, EnsembleSpec, ExperimentParams, ReportRecord};
use rpnorm::norms::{
    bernstein_ratio, circle_mean_sq, disc_mean_sq, disc_mean_sq_closed, max_modulus,
    roots_of_unity_average, DiscMeasure, QuadratureGrid, DEFAULT_RADIAL_NODES, MIN_MAX_NODES,
};
use rpnorm::poly::RealPolynomial;
use rpnorm::sampling::CoefficientDistribution;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;

/// Significant digits in the human-readable table.
const TABLE_DIGITS: usize = 12;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Invalid(#[from] rpnorm::Error),
    #[error("I/O error: {0}")]
    Io(#[from] io::Error),
    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),
    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Usage(_) | Self::Invalid(_) => EXIT_USAGE,
            Self::Io(_) | Self::Csv(_) | Self::Json(_) => EXIT_IO,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
    Table,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PolyOp {
    CircleMeanSq,
    DiscMeanSq,
    MaxMod,
    Bernstein,
    Filter,
}

#[derive(Debug, Parser)]
#[command(
    name = "rpnorm",
    version,
    about = "Expected moduli of random polynomials on the unit circle and disc"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// E|P|² = n+1 and E|P| ≤ √(n+1) on the unit circle
    Circle(CommonArgs),
    /// Disc averages of |P|² and |P|
    Disc(CommonArgs),
    /// Markov tail of |P(z)| for a uniformly chosen z on the circle
    Tail(CommonArgs),
    /// Tail of |A₀|+|Aₙ|, the lower bound of max|P| (law chosen by --dist)
    Maxmod(CommonArgs),
    /// Run every experiment
    VerifyAll(CommonArgs),
    /// Deterministic operations on one explicit polynomial
    Poly(PolyArgs),
}

#[derive(Debug, Args)]
struct CommonArgs {
    #[arg(long, default_value_t = 9)]
    degree: usize,
    #[arg(long, default_value_t = 100_000)]
    samples: u64,
    /// Decimal or 0x-prefixed hex
    #[arg(long, env = "RPNORM_SEED", default_value = "42", value_parser = parse_seed)]
    seed: u64,
    /// gaussian | uniform
    #[arg(long, default_value = "gaussian", value_parser = parse_dist)]
    dist: CoefficientDistribution,
    /// Tail threshold c (required for `tail`)
    #[arg(long)]
    threshold: Option<f64>,
    /// Angular node count
    #[arg(long)]
    grid: Option<usize>,
    /// Radial Simpson node count
    #[arg(long)]
    radial_nodes: Option<usize>,
    /// radial | area
    #[arg(long, default_value = "radial", value_parser = parse_measure)]
    measure: DiscMeasure,
    #[arg(long, value_enum, default_value_t = OutputFormat::Table)]
    format: OutputFormat,
    #[arg(long)]
    output: Option<PathBuf>,
    /// Worker threads (results do not depend on it)
    #[arg(long)]
    workers: Option<usize>,
    /// Record wall_time_ms (makes output run-dependent)
    #[arg(long)]
    timing: bool,
}

#[derive(Debug, Args)]
struct PolyArgs {
    /// Comma-separated a0,a1,...,an
    #[arg(long, allow_hyphen_values = true, value_parser = parse_coeffs)]
    coeffs: RealPolynomial,
    #[arg(long, value_enum)]
    op: PolyOp,
    /// Evaluation point RE,IM for `filter`
    #[arg(long, allow_hyphen_values = true, default_value = "1,0", value_parser = parse_point)]
    point: Complex64,
    #[arg(long)]
    grid: Option<usize>,
    #[arg(long)]
    radial_nodes: Option<usize>,
    #[arg(long, default_value = "radial", value_parser = parse_measure)]
    measure: DiscMeasure,
    #[arg(long, value_enum, default_value_t = OutputFormat::Table)]
    format: OutputFormat,
    #[arg(long)]
    output: Option<PathBuf>,
}

pub fn parse_seed(s: &str) -> Result<u64, String> {
    let s = s.trim();
    let parsed = match s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        Some(hex) => u64::from_str_radix(hex, 16),
        None => s.parse(),
    };
    parsed.map_err(|e| format!("invalid seed `{s}`: {e}"))
}

fn parse_dist(s: &str) -> Result<CoefficientDistribution, String> {
    s.parse().map_err(|e: rpnorm::Error| e.to_string())
}

fn parse_measure(s: &str) -> Result<DiscMeasure, String> {
    s.parse().map_err(|e: rpnorm::Error| e.to_string())
}

fn parse_reals(s: &str) -> Result<Vec<f64>, String> {
    s.split(',')
        .map(|t| {
            let t = t.trim();
            f64::from_str(t).map_err(|_| format!("`{t}` is not a number"))
        })
        .collect()
}

fn parse_coeffs(s: &str) -> Result<RealPolynomial, String> {
    RealPolynomial::new(parse_reals(s)?).map_err(|e| e.to_string())
}

fn parse_point(s: &str) -> Result<Complex64, String> {
    match parse_reals(s)?.as_slice() {
        [re, im] => Ok(Complex64::new(*re, *im)),
        _ => Err("expected RE,IM".to_owned()),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Circle,
    Disc,
    Tail,
    MaxMod,
    VerifyAll,
}

impl Mode {
    /// Experiment identifiers run by this subcommand.
    pub fn experiments(self, dist: CoefficientDistribution) -> &'static [&'static str] {
        match self {
            Self::Circle => &["circle-sq", "circle-abs"],
            Self::Disc => &["disc-sq", "disc-abs"],
            Self::Tail => &["markov-tail"],
            Self::MaxMod => match dist {
                CoefficientDistribution::UniformSymmetric => &["max-uniform"],
                CoefficientDistribution::StandardNormal => &["max-gaussian"],
            },
            Self::VerifyAll => &["all"],
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Task {
    Ensemble(Mode),
    Poly {
        polynomial: RealPolynomial,
        op: PolyOp,
        point: Complex64,
    },
}

/// Validated command line.
#[derive(Debug, Clone, PartialEq)]
pub struct CliConfig {
    pub task: Task,
    pub degree: usize,
    pub samples: u64,
    pub seed: u64,
    pub dist: CoefficientDistribution,
    pub threshold: Option<f64>,
    pub grid: Option<usize>,
    pub radial_nodes: Option<usize>,
    pub measure: DiscMeasure,
    pub format: OutputFormat,
    pub output: Option<PathBuf>,
    pub workers: Option<usize>,
    pub timing: bool,
}

/// Parses arguments (without the program name).
pub fn parse_args<I, T>(argv: I) -> Result<CliConfig, clap::Error>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(
        std::iter::once("rpnorm".into()).chain(argv.into_iter().map(Into::into)),
    )?;
    let usage = |msg: &str| Cli::command_error(clap::error::ErrorKind::ValueValidation, msg);
    let (mode, args) = match cli.command {
        Command::Poly(p) => {
            return Ok(CliConfig {
                degree: p.coeffs.degree(),
                task: Task::Poly {
                    polynomial: p.coeffs,
                    op: p.op,
                    point: p.point,
                },
                samples: 2,
                seed: 0,
                dist: CoefficientDistribution::StandardNormal,
                threshold: None,
                grid: p.grid,
                radial_nodes: p.radial_nodes,
                measure: p.measure,
                format: p.format,
                output: p.output,
                workers: None,
                timing: false,
            })
        }
        Command::Circle(a) => (Mode::Circle, a),
        Command::Disc(a) => (Mode::Disc, a),
        Command::Tail(a) => (Mode::Tail, a),
        Command::Maxmod(a) => (Mode::MaxMod, a),
        Command::VerifyAll(a) => (Mode::VerifyAll, a),
    };
    if args.samples < 2 {
        return Err(usage("samples must be ≥ 2"));
    }
    match args.threshold {
        Some(c) if !(c > 0.0 && c.is_finite()) => return Err(usage("threshold must be > 0")),
        None if mode == Mode::Tail => return Err(usage("`tail` requires --threshold")),
        _ => {}
    }
    if args.workers == Some(0) {
        return Err(usage("workers must be ≥ 1"));
    }
    Ok(CliConfig {
        task: Task::Ensemble(mode),
        degree: args.degree,
        samples: args.samples,
        seed: args.seed,
        dist: args.dist,
        threshold: args.threshold,
        grid: args.grid,
        radial_nodes: args.radial_nodes,
        measure: args.measure,
        format: args.format,
        output: args.output,
        workers: args.workers,
        timing: args.timing,
    })
}

impl Cli {
    fn command_error(kind: clap::error::ErrorKind, msg: &str) -> clap::Error {
        use clap::CommandFactory;
        Cli::command().error(kind, msg)
    }
}

/// Rendered output and whether every check passed.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub text: String,
    pub all_pass: bool,
}

/// Runs the configured task and renders its output without writing it.
pub fn execute(config: &CliConfig) -> Result<Outcome, CliError> {
    match &config.task {
        Task::Ensemble(mode) => {
            let pool = match config.workers {
                Some(n) => Some(
                    rayon::ThreadPoolBuilder::new()
                        .num_threads(n)
                        .build()
                        .map_err(|e| CliError::Usage(e.to_string()))?,
                ),
                None => None,
            };
            let work = || ensemble_records(config, *mode);
            let records = match &pool {
                Some(pool) => pool.install(work)?,
                None => work()?,
            };
            Ok(Outcome {
                all_pass: records.iter().all(|r| r.pass),
                text: format_report(&records, config.format)?,
            })
        }
        Task::Poly {
            polynomial,
            op,
            point,
        } => poly_outcome(config, polynomial, *op, *point),
    }
}

fn ensemble_records(config: &CliConfig, mode: Mode) -> Result<Vec<ReportRecord>, CliError> {
    let spec = EnsembleSpec::new(config.degree, config.dist, config.samples, config.seed)?;
    let params = ExperimentParams {
        threshold: config.threshold,
        grid_nodes: config.grid,
        radial_nodes: config.radial_nodes.unwrap_or(DEFAULT_RADIAL_NODES),
        measure: config.measure,
        timing: config.timing,
        ..ExperimentParams::default()
    };
    let mut records = Vec::new();
    for which in mode.experiments(config.dist) {
        records.extend(run_experiment(&spec, which, &params)?);
    }
    Ok(records)
}

fn poly_outcome(
    config: &CliConfig,
    p: &RealPolynomial,
    op: PolyOp,
    point: Complex64,
) -> Result<Outcome, CliError> {
    let n = p.degree();
    let circle = |minimum: usize| QuadratureGrid::circle(config.grid.unwrap_or(minimum));
    let mut all_pass = true;
    let values: Vec<(&str, f64)> = match op {
        PolyOp::CircleMeanSq => {
            vec![("circle_mean_sq", circle_mean_sq(p, &circle(2 * n + 1)?)?)]
        }
        PolyOp::DiscMeanSq => {
            let mut grid = QuadratureGrid::for_disc(n, config.measure);
            if let Some(nodes) = config.grid {
                grid = QuadratureGrid::new(nodes, grid.radial_node_count())?;
            }
            if let Some(radial) = config.radial_nodes {
                grid = grid.with_radial(radial);
            }
            vec![
                ("disc_mean_sq", disc_mean_sq(p, &grid, config.measure)?),
                (
                    "disc_mean_sq_closed",
                    disc_mean_sq_closed(p, config.measure),
                ),
            ]
        }
        PolyOp::MaxMod => {
            let est = max_modulus(p, &circle((2 * n + 1).max(MIN_MAX_NODES))?)?;
            all_pass = est.lower_bound <= est.value && est.value <= est.upper_bound;
            vec![
                ("max_modulus", est.value),
                ("arg_theta", est.arg_theta),
                ("lower_bound", est.lower_bound),
                ("upper_bound", est.upper_bound),
            ]
        }
        PolyOp::Bernstein => {
            let ratio = bernstein_ratio(p, &circle((2 * n + 1).max(MIN_MAX_NODES))?)?;
            all_pass = ratio <= n as f64 * (1.0 + 1e-6);
            vec![("bernstein_ratio", ratio), ("degree", n as f64)]
        }
        PolyOp::Filter => {
            let avg = roots_of_unity_average(p, point)?;
            let direct = p.constant() + p.leading() * point.powi(n as i32);
            vec![
                ("average_re", avg.re),
                ("average_im", avg.im),
                ("a0_plus_an_zn_re", direct.re),
                ("a0_plus_an_zn_im", direct.im),
            ]
        }
    };
    Ok(Outcome {
        text: format_values(&values, config.format)?,
        all_pass,
    })
}

fn format_values(values: &[(&str, f64)], format: OutputFormat) -> Result<String, CliError> {
    Ok(match format {
        OutputFormat::Table => match values {
            [(_, v)] => format!("{}\n", fmt_sig(*v, TABLE_DIGITS)),
            _ => values
                .iter()
                .map(|(k, v)| format!("{k} {}\n", fmt_sig(*v, TABLE_DIGITS)))
                .collect(),
        },
        OutputFormat::Json => {
            let map: serde_json::Map<String, serde_json::Value> = values
                .iter()
                .map(|(k, v)| ((*k).to_owned(), serde_json::Value::from(*v)))
                .collect();
            serde_json::to_string_pretty(&map)? + "\n"
        }
        OutputFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(values.iter().map(|(k, _)| *k))?;
            w.write_record(values.iter().map(|(_, v)| v.to_string()))?;
            into_string(w)?
        }
    })
}

pub const CSV_HEADER: [&str; 11] = [
    "experiment",
    "degree",
    "distribution",
    "samples",
    "seed",
    "empirical",
    "std_error",
    "bound",
    "bound_kind",
    "pass",
    "wall_time_ms",
];

fn into_string(w: csv::Writer<Vec<u8>>) -> Result<String, CliError> {
    let bytes = w
        .into_inner()
        .map_err(|e| CliError::Io(io::Error::other(e.to_string())))?;
    Ok(String::from_utf8(bytes).expect("CSV output is UTF-8"))
}

/// Renders report records as JSON, CSV or an aligned table.
pub fn format_report(records: &[ReportRecord], format: OutputFormat) -> Result<String, CliError> {
    if records.is_empty() {
        return Err(CliError::Usage("no report records to format".to_owned()));
    }
    Ok(match format {
        OutputFormat::Json => serde_json::to_string_pretty(records)? + "\n",
        OutputFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(CSV_HEADER)?;
            for r in records {
                w.write_record([
                    r.experiment.clone(),
                    r.degree.to_string(),
                    r.distribution.name().to_owned(),
                    r.samples.to_string(),
                    r.seed.to_string(),
                    r.empirical.to_string(),
                    r.std_error.to_string(),
                    r.bound.to_string(),
                    r.bound_kind.name().to_owned(),
                    r.pass.to_string(),
                    r.wall_time_ms.map(|t| t.to_string()).unwrap_or_default(),
                ])?;
            }
            into_string(w)?
        }
        OutputFormat::Table => format_table(records),
    })
}

fn format_table(records: &[ReportRecord]) -> String {
    let header = [
        "experiment",
        "n",
        "dist",
        "samples",
        "empirical",
        "std_error",
        "bound",
        "kind",
        "result",
    ];
    let mut rows: Vec<Vec<String>> = vec![header.iter().map(|s| s.to_string()).collect()];
    for r in records {
        rows.push(vec![
            r.experiment.clone(),
            r.degree.to_string(),
            r.distribution.name().to_owned(),
            r.samples.to_string(),
            fmt_sig(r.empirical, TABLE_DIGITS),
            fmt_sig(r.std_error, 4),
            fmt_sig(r.bound, TABLE_DIGITS),
            r.bound_kind.name().to_owned(),
            if r.pass { "PASS" } else { "FAIL" }.to_owned(),
        ]);
    }
    let widths: Vec<usize> = (0..header.len())
        .map(|c| {
            rows.iter()
                .map(|row| row[c].chars().count())
                .max()
                .unwrap_or(0)
        })
        .collect();
    let mut out = String::new();
    for (i, row) in rows.iter().enumerate() {
        let line: Vec<String> = row
            .iter()
            .zip(&widths)
            .map(|(cell, w)| format!("{cell:<w$}"))
            .collect();
        let _ = writeln!(out, "{}", line.join("  ").trim_end());
        if i > 0 {
            let r = &records[i - 1];
            for note in &r.notes {
                let _ = writeln!(out, "    note: {note}");
            }
            if let Some(ms) = r.wall_time_ms {
                let _ = writeln!(out, "    wall time: {ms} ms");
            }
        }
    }
    let passed = records.iter().filter(|r| r.pass).count();
    let _ = writeln!(out, "{passed}/{} passed", records.len());
    out
}

/// `x` with at most `digits` significant digits, trailing zeros trimmed.
pub fn fmt_sig(x: f64, digits: usize) -> String {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 {
            "0".to_owned()
        } else {
            x.to_string()
        };
    }
    let exponent = x.abs().log10().floor() as i32;
    if !(-5..15).contains(&exponent) {
        return format!("{:.*e}", digits.saturating_sub(1), x);
    }
    let decimals = (digits as i32 - 1 - exponent).max(0) as usize;
    let s = format!("{x:.decimals$}");
    let s = if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_owned()
    } else {
        s
    };
    if s == "-0" {
        "0".to_owned()
    } else {
        s
    }
}

fn write_output(config: &CliConfig, text: &str) -> io::Result<()> {
    match &config.output {
        Some(path) => File::create(path)?.write_all(text.as_bytes()),
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()
        }
    }
}

/// Executes `config`, writes the report and returns the process exit code.
pub fn run(config: &CliConfig) -> i32 {
    let outcome = match execute(config) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("rpnorm: {e}");
            return e.exit_code();
        }
    };
    if let Err(e) = write_output(config, &outcome.text) {
        eprintln!("rpnorm: I/O error: {e}");
        return EXIT_IO;
    }
    if outcome.all_pass {
        EXIT_PASS
    } else {
        EXIT_FAIL
    }
}

/// Full entry point: parse, run, map errors to exit codes.
pub fn main_with_args<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match parse_args(argv) {
        Ok(config) => run(&config),
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_USAGE
            } else {
                EXIT_PASS
            };
            let _ = e.print();
            code
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rpnorm::ensemble::BoundKind;

    fn record(pass: bool) -> ReportRecord {
        ReportRecord {
            experiment: "circle-sq".to_owned(),
            degree: 9,
            distribution: CoefficientDistribution::StandardNormal,
            samples: 100_000,
            seed: 42,
            empirical: 10.003_141_592_653_59,
            std_error: 0.014_142,
            bound: 10.0,
            bound_kind: BoundKind::Equal,
            pass,
            wall_time_ms: None,
            notes: vec![],
        }
    }

    #[test]
    fn tail_example_parses() {
        let c = parse_args(["tail", "--degree", "9", "--threshold", "2"]).unwrap();
        assert_eq!(c.task, Task::Ensemble(Mode::Tail));
        assert_eq!(c.degree, 9);
        assert_eq!(c.threshold, Some(2.0));
    }

    #[test]
    fn defaults() {
        std::env::remove_var("RPNORM_SEED");
        let c = parse_args(["circle"]).unwrap();
        assert_eq!(c.degree, 9);
        assert_eq!(c.samples, 100_000);
        assert_eq!(c.seed, 42);
        assert_eq!(c.dist, CoefficientDistribution::StandardNormal);
        assert_eq!(c.format, OutputFormat::Table);
        assert_eq!(c.measure, DiscMeasure::Radial);
    }

    #[test]
    fn usage_errors() {
        let e = parse_args(["circle", "--samples", "1"]).unwrap_err();
        assert!(e.to_string().contains("samples must be ≥ 2"));
        assert!(e.use_stderr());
        assert!(parse_args(["tail", "--degree", "9"])
            .unwrap_err()
            .to_string()
            .contains("--threshold"));
        assert!(parse_args(["circle", "--bogus"]).is_err());
        assert!(parse_args(["circle", "--degree", "nine"]).is_err());
        assert!(parse_args(["tail", "--threshold", "-1"]).is_err());
        assert!(parse_args(["circle", "--dist", "cauchy"]).is_err());
        assert!(parse_args(["circle", "--workers", "0"]).is_err());
    }

    #[test]
    fn seeds_accept_hex() {
        let c = parse_args(["verify-all", "--seed", "0xDEADBEEF"]).unwrap();
        assert_eq!(c.seed, 0xDEAD_BEEF);
        assert_eq!(parse_seed("12345"), Ok(12345));
        assert_eq!(parse_seed("0x10"), Ok(16));
        assert!(parse_seed("0xZZ").is_err());
        assert!(parse_seed("-3").is_err());
    }

    #[test]
    fn poly_parsing_accepts_negative_values() {
        let c = parse_args([
            "poly",
            "--coeffs",
            "-1,2.5,-3",
            "--op",
            "filter",
            "--point",
            "-0.5,1",
        ])
        .unwrap();
        match c.task {
            Task::Poly {
                polynomial,
                op,
                point,
            } => {
                assert_eq!(polynomial.coefficients(), &[-1.0, 2.5, -3.0]);
                assert_eq!(op, PolyOp::Filter);
                assert_eq!(point, Complex64::new(-0.5, 1.0));
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(parse_args(["poly", "--coeffs", "", "--op", "max-mod"]).is_err());
        assert!(parse_args(["poly", "--coeffs", "1,x", "--op", "max-mod"]).is_err());
    }

    #[test]
    fn poly_circle_mean_sq_prints_two() {
        let c = parse_args(["poly", "--coeffs", "1,1", "--op", "circle-mean-sq"]).unwrap();
        let out = execute(&c).unwrap();
        assert_eq!(out.text, "2\n");
        assert!(out.all_pass);
    }

    #[test]
    fn poly_other_ops() {
        let c = parse_args([
            "poly", "--coeffs", "1,-2,1", "--op", "max-mod", "--format", "json",
        ])
        .unwrap();
        let v: serde_json::Value = serde_json::from_str(&execute(&c).unwrap().text).unwrap();
        assert!((v["max_modulus"].as_f64().unwrap() - 4.0).abs() < 1e-12);
        assert_eq!(v["lower_bound"].as_f64().unwrap(), 2.0);

        let c = parse_args(["poly", "--coeffs", "0,0,0,1", "--op", "bernstein"]).unwrap();
        let out = execute(&c).unwrap();
        assert!(out.text.starts_with("bernstein_ratio 3\n"), "{}", out.text);

        let c = parse_args(["poly", "--coeffs", "1,1", "--op", "disc-mean-sq"]).unwrap();
        let text = execute(&c).unwrap().text;
        assert!(text.contains("disc_mean_sq 1.33333333333"), "{text}");

        let c = parse_args([
            "poly",
            "--coeffs",
            "1,0,0,0,1",
            "--op",
            "filter",
            "--point",
            "0,1",
            "--format",
            "csv",
        ])
        .unwrap();
        let text = execute(&c).unwrap().text;
        let mut lines = text.lines();
        assert_eq!(
            lines.next(),
            Some("average_re,average_im,a0_plus_an_zn_re,a0_plus_an_zn_im")
        );
        let row: Vec<f64> = lines
            .next()
            .unwrap()
            .split(',')
            .map(|t| t.parse().unwrap())
            .collect();
        assert!((row[0] - 2.0).abs() < 1e-14 && row[1].abs() < 1e-14);

        let c = parse_args(["poly", "--coeffs", "3", "--op", "bernstein"]).unwrap();
        assert_eq!(execute(&c).unwrap_err().exit_code(), EXIT_USAGE);
    }

    #[test]
    fn csv_has_exact_header_and_one_row() {
        let text = format_report(&[record(true)], OutputFormat::Csv).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 2);
        assert_eq!(
            lines[0],
            "experiment,degree,distribution,samples,seed,empirical,std_error,bound,bound_kind,pass,wall_time_ms"
        );
        assert_eq!(
            lines[1],
            "circle-sq,9,gaussian,100000,42,10.00314159265359,0.014142,10,equal,true,"
        );
    }

    #[test]
    fn empty_report_is_an_error() {
        assert!(format_report(&[], OutputFormat::Json).is_err());
        assert!(format_report(&[], OutputFormat::Table).is_err());
    }

    #[test]
    fn table_marks_pass_and_fail() {
        let mut failing = record(false);
        failing.notes.push("something".to_owned());
        let text = format_report(&[record(true), failing], OutputFormat::Table).unwrap();
        assert!(text.contains("PASS"));
        assert!(text.contains("FAIL"));
        assert!(text.contains("note: something"));
        assert!(text.ends_with("1/2 passed\n"));
    }

    #[test]
    fn significant_digit_formatting() {
        assert_eq!(fmt_sig(2.000_000_000_000_000_4, 12), "2");
        assert_eq!(fmt_sig(4.0 / 3.0, 12), "1.33333333333");
        assert_eq!(fmt_sig(0.0, 12), "0");
        assert_eq!(fmt_sig(-1e-20, 3), "-1.00e-20");
        assert_eq!(fmt_sig(123456.0, 3), "123456");
    }

    mod roundtrip {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn json_round_trips(
                empirical in prop::num::f64::NORMAL,
                se in 0.0f64..1e6,
                bound in -1e9f64..1e9,
                seed in any::<u64>(),
                pass in any::<bool>(),
                ms in proptest::option::of(any::<u32>()),
            ) {
                let mut r = record(pass);
                r.empirical = empirical;
                r.std_error = se;
                r.bound = bound;
                r.seed = seed;
                r.wall_time_ms = ms.map(u64::from);
                let text = format_report(&[r.clone(), record(true)], OutputFormat::Json).unwrap();
                let back: Vec<ReportRecord> = serde_json::from_str(&text).unwrap();
                prop_assert_eq!(back, vec![r, record(true)]);
            }

            #[test]
            fn csv_numbers_round_trip(x in prop::num::f64::NORMAL | prop::num::f64::SUBNORMAL) {
                let mut r = record(true);
                r.empirical = x;
                let text = format_report(&[r], OutputFormat::Csv).unwrap();
                let row = text.lines().nth(1).unwrap();
                let field = row.split(',').nth(5).unwrap();
                prop_assert_eq!(field.parse::<f64>().unwrap().to_bits(), x.to_bits());
            }
        }
    }
}
