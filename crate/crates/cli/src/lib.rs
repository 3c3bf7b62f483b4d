//! Command-line front end for the `supnorm` library.
//!
//! [`run`] parses an argument vector, runs one subcommand and returns the
//! process exit code: 0 when every check passed, 1 when a check failed
//! (reports are still written), 2 on usage or domain errors.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use supnorm::constants::{embedding_constant, gn_constant, young_factor};
use supnorm::extremizer::{
    default_band, extremizer_grid_function, gaussian, random_band_limited, ExtremizerSpec,
};
use supnorm::quadrature::lorentzian_mass;
use supnorm::report::{format_f64, serialize_f64};
use supnorm::spectral::io::{self as grid_io, Encoding};
use supnorm::verifier::{
    check_all, default_extremizer_grid, lambda_sweep, sharpness_report, verify_random_corpus,
    SharpnessMethod, EXACT_SHARPNESS_TOL, GRID_INEQUALITY_TOL, GRID_SHARPNESS_TOL,
};
use supnorm::{GridFunction, GridSpec, InequalityReport, SobolevIndex};

pub const EXIT_PASS: u8 = 0;
pub const EXIT_FAIL: u8 = 1;
pub const EXIT_USAGE: u8 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "supnorm",
    version,
    about = "Sharp supnorm constants for H^s(R^n) and their numerical verification"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print one constant to 15 significant digits
    Constant(ConstantArgs),
    /// Write a CSV table of constants over the product of the given n and s values
    Table(TableArgs),
    /// Check the l1, embedding and interpolation inequalities on grid functions
    Verify(VerifyArgs),
    /// Print the interpolation ratio attained by the extremizer
    Sharpness(SharpnessArgs),
    /// Sample the dilation objective around its closed-form minimiser
    SweepLambda(SweepArgs),
    /// Compare the quadrature Lorentzian mass with its closed form
    QuadratureCheck(QuadratureArgs),
    /// Write a grid function to a file readable by `verify --input`
    Export(ExportArgs),
}

#[derive(Debug, Clone, Copy, Args)]
pub struct IndexArgs {
    /// Space dimension
    #[arg(long)]
    pub n: u32,
    /// Regularity, must exceed n/2
    #[arg(long, allow_negative_numbers = true)]
    pub s: f64,
}

#[derive(Debug, Clone, Copy, Args)]
pub struct GridArgs {
    /// Points per axis (power of two)
    #[arg(long = "N", id = "grid_points")]
    pub points: Option<usize>,
    /// Box side length
    #[arg(long = "L", id = "grid_box_length")]
    pub box_length: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Output file; stdout when absent
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ConstantKind {
    Gn,
    Embedding,
    Young,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FunctionKind {
    Gaussian,
    Extremizer,
    Random,
}

impl FunctionKind {
    fn as_str(self) -> &'static str {
        match self {
            FunctionKind::Gaussian => "gaussian",
            FunctionKind::Extremizer => "extremizer",
            FunctionKind::Random => "random",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodKind {
    Grid,
    Exact,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EncodingKind {
    Text,
    Binary,
}

#[derive(Debug, Args)]
pub struct ConstantArgs {
    #[command(flatten)]
    pub idx: IndexArgs,
    #[arg(long, value_enum, default_value_t = ConstantKind::Gn)]
    pub kind: ConstantKind,
}

#[derive(Debug, Args)]
pub struct TableArgs {
    /// Comma-separated dimensions
    #[arg(long, value_delimiter = ',', required = true)]
    pub n: Vec<u32>,
    /// Comma-separated regularities
    #[arg(
        long,
        value_delimiter = ',',
        required = true,
        allow_negative_numbers = true
    )]
    pub s: Vec<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct FunctionArgs {
    #[arg(long, value_enum)]
    pub function: Option<FunctionKind>,
    /// Width parameter a of the Gaussian e^{-a|x|²}
    #[arg(long, default_value_t = 0.5)]
    pub width: f64,
    /// First seed of the random corpus
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub idx: IndexArgs,
    #[command(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    pub function: FunctionArgs,
    /// Number of random functions, starting at --seed
    #[arg(long, default_value_t = 10)]
    pub seeds: u64,
    /// Pass when ratio <= 1 + tol
    #[arg(long, default_value_t = GRID_INEQUALITY_TOL)]
    pub tol: f64,
    /// Verify a grid function read from a file instead of a generated one
    #[arg(long, conflicts_with_all = ["function", "grid_points", "grid_box_length"])]
    pub input: Option<PathBuf>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SharpnessArgs {
    #[command(flatten)]
    pub idx: IndexArgs,
    #[arg(long, value_enum, default_value_t = MethodKind::Exact)]
    pub method: MethodKind,
    #[command(flatten)]
    pub grid: GridArgs,
    /// Allowed distance from 1; defaults to 1e-9 (exact) or 1e-4 (grid)
    #[arg(long)]
    pub tol: Option<f64>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub idx: IndexArgs,
    #[command(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    pub function: FunctionArgs,
    #[arg(long, default_value_t = 512)]
    pub points: usize,
    /// Allowed relative gap between sampled and closed-form minimum
    #[arg(long, default_value_t = 1e-3)]
    pub tol: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct QuadratureArgs {
    #[command(flatten)]
    pub idx: IndexArgs,
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
}

#[derive(Debug, Args)]
pub struct ExportArgs {
    #[command(flatten)]
    pub idx: IndexArgs,
    #[command(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    pub function: FunctionArgs,
    #[arg(long, value_enum, default_value_t = EncodingKind::Text)]
    pub encoding: EncodingKind,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Lib(supnorm::Error),
    Io(std::io::Error),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "{msg}"),
            CliError::Lib(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

impl From<supnorm::Error> for CliError {
    fn from(e: supnorm::Error) -> Self {
        CliError::Lib(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(e.into())
    }
}

type CliResult<T> = Result<T, CliError>;

/// Output produced by a subcommand, written only after the computation succeeded.
struct Outcome {
    payload: Vec<u8>,
    out: Option<PathBuf>,
    passed: bool,
}

/// Parses `argv` (including the program name) and runs the subcommand.
pub fn run<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(stdout, "{e}");
                return EXIT_PASS;
            }
            let rendered = e.to_string();
            let line = rendered
                .lines()
                .next()
                .unwrap_or("error: invalid arguments");
            let _ = writeln!(stderr, "{line}");
            return EXIT_USAGE;
        }
    };
    let result = dispatch(cli.command).and_then(|outcome| {
        match &outcome.out {
            Some(path) => std::fs::write(path, &outcome.payload)?,
            None => stdout.write_all(&outcome.payload)?,
        }
        Ok(outcome.passed)
    });
    match result {
        Ok(true) => EXIT_PASS,
        Ok(false) => EXIT_FAIL,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_USAGE
        }
    }
}

fn dispatch(command: Command) -> CliResult<Outcome> {
    match command {
        Command::Constant(a) => constant(a),
        Command::Table(a) => table(a),
        Command::Verify(a) => verify(a),
        Command::Sharpness(a) => sharpness(a),
        Command::SweepLambda(a) => sweep(a),
        Command::QuadratureCheck(a) => quadrature_check(a),
        Command::Export(a) => export(a),
    }
}

/// Fixed-point rendering with `digits` significant digits; scientific outside `[1e-5, 1e15)`.
pub fn format_significant(x: f64, digits: usize) -> String {
    let digits = digits.max(1);
    if !x.is_finite() {
        return x.to_string();
    }
    if x == 0.0 {
        return format!("{:.*}", digits - 1, 0.0);
    }
    let sci = format!("{:.*e}", digits - 1, x);
    let exp: i32 = sci[sci.find('e').expect("exponent") + 1..]
        .parse()
        .expect("integer exponent");
    if (-5..15).contains(&exp) {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        format!("{x:.decimals$}")
    } else {
        sci
    }
}

fn index(a: &IndexArgs) -> CliResult<SobolevIndex> {
    Ok(SobolevIndex::new(a.n, a.s)?)
}

fn check_tolerance(tol: f64) -> CliResult<()> {
    if tol.is_finite() && tol >= 0.0 {
        Ok(())
    } else {
        Err(CliError::Usage(format!(
            "tolerance must be finite and non-negative, got {tol}"
        )))
    }
}

fn grid_dimension(n: u32) -> CliResult<()> {
    if (1..=3).contains(&n) {
        Ok(())
    } else {
        Err(CliError::Usage(format!(
            "grid commands support n in {{1, 2, 3}}, got n = {n}"
        )))
    }
}

/// Default grid per function family; overridden by --N / --L.
fn resolve_grid(n: u32, function: FunctionKind, g: &GridArgs) -> CliResult<GridSpec> {
    grid_dimension(n)?;
    let base = match function {
        FunctionKind::Extremizer => default_extremizer_grid(n)?,
        FunctionKind::Gaussian | FunctionKind::Random => match n {
            1 => GridSpec::new(1, 256, 40.0)?,
            2 => GridSpec::new(2, 128, 30.0)?,
            _ => GridSpec::new(3, 32, 16.0)?,
        },
    };
    Ok(GridSpec::new(
        n,
        g.points.unwrap_or(base.points()),
        g.box_length.unwrap_or(base.box_length()),
    )?)
}

fn build_function(
    idx: &SobolevIndex,
    kind: FunctionKind,
    f: &FunctionArgs,
    grid: &GridSpec,
) -> CliResult<GridFunction> {
    Ok(match kind {
        FunctionKind::Gaussian => gaussian(grid, f.width)?,
        FunctionKind::Extremizer => extremizer_grid_function(&ExtremizerSpec::unit(*idx), grid)?,
        FunctionKind::Random => {
            let (cutoff, decay) = default_band(grid);
            random_band_limited(grid, f.seed, cutoff, decay)?
        }
    })
}

fn require_function(f: &FunctionArgs) -> CliResult<FunctionKind> {
    f.function.ok_or_else(|| {
        CliError::Usage("--function is required (gaussian, extremizer or random)".into())
    })
}

fn json_payload<T: Serialize>(value: &T) -> CliResult<Vec<u8>> {
    let mut buf = serde_json::to_vec_pretty(value).map_err(|e| CliError::Io(e.into()))?;
    buf.push(b'\n');
    Ok(buf)
}

fn constant(a: ConstantArgs) -> CliResult<Outcome> {
    let idx = index(&a.idx)?;
    let value = match a.kind {
        ConstantKind::Gn => gn_constant(&idx),
        ConstantKind::Embedding => embedding_constant(&idx),
        ConstantKind::Young => young_factor(&idx),
    };
    Ok(Outcome {
        payload: format!("{}\n", format_significant(value, 15)).into_bytes(),
        out: None,
        passed: true,
    })
}

fn table(a: TableArgs) -> CliResult<Outcome> {
    let mut pairs = Vec::with_capacity(a.n.len() * a.s.len());
    for &n in &a.n {
        for &s in &a.s {
            pairs.push(SobolevIndex::new(n, s)?);
        }
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["n", "s", "K_gn", "C_embedding", "young_factor"])?;
    for idx in &pairs {
        w.write_record([
            idx.n().to_string(),
            format_f64(idx.s()),
            format_f64(gn_constant(idx)),
            format_f64(embedding_constant(idx)),
            format_f64(young_factor(idx)),
        ])?;
    }
    Ok(Outcome {
        payload: w.into_inner().map_err(|e| CliError::Io(e.into_error()))?,
        out: a.out,
        passed: true,
    })
}

#[derive(Serialize)]
struct VerifyEntry {
    seed: Option<u64>,
    reports: Vec<InequalityReport>,
}

#[derive(Serialize)]
struct VerifyOutput<'a> {
    version: &'static str,
    function: &'a str,
    n: u32,
    #[serde(serialize_with = "serialize_f64")]
    s: f64,
    grid: GridSpec,
    #[serde(serialize_with = "serialize_f64")]
    tolerance: f64,
    passed: bool,
    results: Vec<VerifyEntry>,
}

fn verify(a: VerifyArgs) -> CliResult<Outcome> {
    let idx = index(&a.idx)?;
    grid_dimension(idx.n())?;
    check_tolerance(a.tol)?;
    let (label, grid, entries) = if let Some(path) = &a.input {
        let u = grid_io::load(path)?;
        let grid = *u.spec();
        let reports = check_all(&u, &idx, a.tol)?.to_vec();
        (
            "input",
            grid,
            vec![VerifyEntry {
                seed: None,
                reports,
            }],
        )
    } else {
        let kind = require_function(&a.function)?;
        let grid = resolve_grid(idx.n(), kind, &a.grid)?;
        let entries = if kind == FunctionKind::Random {
            if a.seeds == 0 {
                return Err(CliError::Usage("--seeds must be at least 1".into()));
            }
            let end = a
                .function
                .seed
                .checked_add(a.seeds)
                .ok_or_else(|| CliError::Usage("seed range overflows u64".into()))?;
            let (cutoff, decay) = default_band(&grid);
            verify_random_corpus(&grid, &idx, a.function.seed..end, cutoff, decay, a.tol)?
                .into_iter()
                .map(|e| VerifyEntry {
                    seed: Some(e.seed),
                    reports: e.reports,
                })
                .collect()
        } else {
            let u = build_function(&idx, kind, &a.function, &grid)?;
            vec![VerifyEntry {
                seed: None,
                reports: check_all(&u, &idx, a.tol)?.to_vec(),
            }]
        };
        (kind.as_str(), grid, entries)
    };
    let passed = entries.iter().flat_map(|e| &e.reports).all(|r| r.passed);
    let payload = match a.output.format {
        Format::Json => json_payload(&VerifyOutput {
            version: supnorm::VERSION,
            function: label,
            n: idx.n(),
            s: idx.s(),
            grid,
            tolerance: a.tol,
            passed,
            results: entries,
        })?,
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record([
                "function",
                "seed",
                "inequality_id",
                "n",
                "s",
                "lhs",
                "rhs",
                "ratio",
                "constant_used",
                "tolerance",
                "passed",
                "degenerate",
                "points_per_axis",
                "box_length",
            ])?;
            for e in &entries {
                for r in &e.reports {
                    w.write_record([
                        label.to_string(),
                        e.seed.map(|s| s.to_string()).unwrap_or_default(),
                        r.inequality_id.as_str().to_string(),
                        r.n.to_string(),
                        r.s.map(format_f64).unwrap_or_default(),
                        format_f64(r.lhs),
                        format_f64(r.rhs),
                        format_f64(r.ratio),
                        format_f64(r.constant_used),
                        format_f64(r.tolerance),
                        r.passed.to_string(),
                        r.degenerate.to_string(),
                        grid.points().to_string(),
                        format_f64(grid.box_length()),
                    ])?;
                }
            }
            w.into_inner().map_err(|e| CliError::Io(e.into_error()))?
        }
    };
    Ok(Outcome {
        payload,
        out: a.output.out,
        passed,
    })
}

fn sharpness(a: SharpnessArgs) -> CliResult<Outcome> {
    let idx = index(&a.idx)?;
    let (method, default_tol) = match a.method {
        MethodKind::Exact => {
            if a.grid.points.is_some() || a.grid.box_length.is_some() {
                return Err(CliError::Usage(
                    "--N and --L only apply to --method grid".into(),
                ));
            }
            (SharpnessMethod::Exact, EXACT_SHARPNESS_TOL)
        }
        MethodKind::Grid => (
            SharpnessMethod::Grid(resolve_grid(idx.n(), FunctionKind::Extremizer, &a.grid)?),
            GRID_SHARPNESS_TOL,
        ),
    };
    let tol = a.tol.unwrap_or(default_tol);
    check_tolerance(tol)?;
    let report = sharpness_report(&idx, method)?;
    Ok(Outcome {
        payload: format!("{}\n", format_significant(report.ratio, 10)).into_bytes(),
        out: None,
        passed: (report.ratio - 1.0).abs() <= tol,
    })
}

fn sweep(a: SweepArgs) -> CliResult<Outcome> {
    let idx = index(&a.idx)?;
    check_tolerance(a.tol)?;
    let kind = require_function(&a.function)?;
    let grid = resolve_grid(idx.n(), kind, &a.grid)?;
    let u = build_function(&idx, kind, &a.function, &grid)?;
    let result = lambda_sweep(&u, &idx, a.points)?;
    let passed = result.brackets_optimum() && result.min_value_relative_error() <= a.tol;
    let payload = match a.output.format {
        Format::Json => json_payload(&result)?,
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["lambda", "objective"])?;
            for (l, f) in result.lambdas.iter().zip(&result.objective) {
                w.write_record([format_f64(*l), format_f64(*f)])?;
            }
            w.into_inner().map_err(|e| CliError::Io(e.into_error()))?
        }
    };
    Ok(Outcome {
        payload,
        out: a.output.out,
        passed,
    })
}

#[derive(Serialize)]
struct QuadratureOutput {
    version: &'static str,
    n: u32,
    #[serde(serialize_with = "serialize_f64")]
    s: f64,
    #[serde(serialize_with = "serialize_f64")]
    quadrature: f64,
    #[serde(serialize_with = "serialize_f64")]
    closed_form: f64,
    #[serde(serialize_with = "serialize_f64")]
    relative_difference: f64,
    #[serde(serialize_with = "serialize_f64")]
    tolerance: f64,
    passed: bool,
}

fn quadrature_check(a: QuadratureArgs) -> CliResult<Outcome> {
    let idx = index(&a.idx)?;
    check_tolerance(a.tol)?;
    let mass = lorentzian_mass(&idx)?;
    let rel = mass.relative_difference();
    let passed = rel <= a.tol;
    Ok(Outcome {
        payload: json_payload(&QuadratureOutput {
            version: supnorm::VERSION,
            n: idx.n(),
            s: idx.s(),
            quadrature: mass.quadrature,
            closed_form: mass.closed_form,
            relative_difference: rel,
            tolerance: a.tol,
            passed,
        })?,
        out: None,
        passed,
    })
}

fn export(a: ExportArgs) -> CliResult<Outcome> {
    let idx = index(&a.idx)?;
    let kind = require_function(&a.function)?;
    let grid = resolve_grid(idx.n(), kind, &a.grid)?;
    let u = build_function(&idx, kind, &a.function, &grid)?;
    let encoding = match a.encoding {
        EncodingKind::Text => Encoding::Text,
        EncodingKind::Binary => Encoding::Binary,
    };
    Ok(Outcome {
        payload: grid_io::encode(&u, encoding),
        out: Some(a.out),
        passed: true,
    })
}
