//! Command-line front end: algebra specs in, dimension tables and check
//! reports out.
//!
//! Exit codes: 0 success, 1 a check failed, 2 usage or validation error,
//! 3 resource budget exhausted.

#![allow(clippy::needless_range_loop)]

pub mod error;
pub mod reports;
pub mod spec;
pub mod verify;

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use qci_tate::bar::DEFAULT_BUDGET;
use qci_tate::{Coefficient, Policy, QciSpec, TateRequest, Variant};

pub use error::{CliError, CliResult};
pub use reports::CheckRecord;
pub use spec::parse_spec;
pub use verify::{run_verify, Suite};

#[derive(Debug, Parser)]
#[command(
    name = "qci-tate",
    version,
    about = "Tate-Hochschild (co)homology dimensions of quantum complete intersections"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Dimension table over a degree window.
    Dims(DimsArgs),
    /// Run verification suites.
    Verify(VerifyArgs),
    /// Run every applicable route per degree and compare.
    Oracle(OracleArgs),
    /// Check exactness of the complete resolution near zero.
    Exactness(ExactnessArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum VariantArg {
    Homology,
    Cohomology,
}

impl From<VariantArg> for Variant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::Homology => Variant::Homology,
            VariantArg::Cohomology => Variant::Cohomology,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Auto,
    Bar,
    Complex,
    Formula,
}

impl From<MethodArg> for Policy {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Auto => Policy::Auto,
            MethodArg::Bar => Policy::BarOnly,
            MethodArg::Complex => Policy::ComplexOnly,
            MethodArg::Formula => Policy::FormulaOnly,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct WindowArgs {
    #[arg(long)]
    pub spec: PathBuf,
    #[arg(long, allow_hyphen_values = true)]
    pub min: i64,
    #[arg(long, allow_hyphen_values = true)]
    pub max: i64,
    #[arg(long, value_enum, default_value = "homology")]
    pub variant: VariantArg,
    #[arg(long, default_value = "regular", value_parser = parse_coefficient)]
    pub coeff: Coefficient,
    /// Largest bar-complex space, in basis elements.
    #[arg(long, default_value_t = DEFAULT_BUDGET, value_parser = parse_budget)]
    pub budget: u128,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DimsArgs {
    #[command(flatten)]
    pub window: WindowArgs,
    #[arg(long, value_enum, default_value = "auto")]
    pub method: MethodArg,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Suites to run; all of them when omitted.
    #[arg(long, value_enum)]
    pub suite: Vec<Suite>,
    #[arg(long, default_value_t = 3)]
    pub max_degree: usize,
    #[arg(long, default_value_t = DEFAULT_BUDGET, value_parser = parse_budget)]
    pub budget: u128,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[command(flatten)]
    pub window: WindowArgs,
    /// Where matrices of disagreeing routes are written.
    #[arg(long)]
    pub dump_dir: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ExactnessArgs {
    #[arg(long)]
    pub spec: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn parse_coefficient(s: &str) -> Result<Coefficient, String> {
    s.parse().map_err(|e: qci_tate::Error| e.to_string())
}

fn parse_budget(s: &str) -> Result<u128, String> {
    match s.parse::<u128>() {
        Ok(0) => Err("budget must be positive".into()),
        Ok(b) => Ok(b),
        Err(e) => Err(e.to_string()),
    }
}

pub fn load_spec(path: &Path) -> CliResult<QciSpec> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse_spec(&text)
}

fn with_output<F>(out: Option<&Path>, f: F) -> CliResult<()>
where
    F: FnOnce(&mut dyn Write) -> CliResult<()>,
{
    match out {
        Some(path) => {
            let file = File::create(path).map_err(|e| CliError::io(path, e))?;
            let mut w = BufWriter::new(file);
            f(&mut w)?;
            w.flush().map_err(|e| CliError::io(path, e))
        }
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            f(&mut lock)
        }
    }
}

fn request(w: &WindowArgs) -> CliResult<TateRequest> {
    if w.min > w.max {
        return Err(qci_tate::Error::Usage(format!("--min {} exceeds --max {}", w.min, w.max)).into());
    }
    Ok(TateRequest::new(load_spec(&w.spec)?, w.variant.into(), w.min, w.max)
        .with_coefficient(w.coeff)
        .with_budget(w.budget))
}

/// Runs a parsed command and returns the process exit code.
pub fn run(cli: &Cli) -> CliResult<i32> {
    match &cli.command {
        Command::Dims(args) => {
            let req = request(&args.window)?.with_policy(args.method.into());
            let table = qci_tate::tate_dims(&req)?;
            with_output(args.window.out.as_deref(), |w| match args.format {
                Format::Csv => reports::write_csv(&table, w),
                Format::Json => reports::write_json(&table, w),
            })?;
            // A budget-limited table is still written; the exit code flags it.
            let short = table
                .entries
                .iter()
                .any(|e| e.value.is_none() && e.method.source_text().starts_with("resource"));
            Ok(if short { 3 } else { 0 })
        }
        Command::Verify(args) => {
            let suites = if args.suite.is_empty() {
                Suite::ALL.to_vec()
            } else {
                args.suite.clone()
            };
            let records: Vec<CheckRecord> = suites
                .iter()
                .flat_map(|s| run_verify(*s, args.max_degree, args.budget))
                .collect();
            with_output(args.out.as_deref(), |w| reports::write_records(&records, w))?;
            Ok(verify::exit_status(&records))
        }
        Command::Oracle(args) => {
            let req = request(&args.window)?;
            let checks = qci_tate::cross_validate(&req, args.dump_dir.as_deref())?;
            let records = reports::cross_check_records(&checks);
            with_output(args.window.out.as_deref(), |w| reports::write_records(&records, w))?;
            Ok(if records.iter().all(|r| r.pass) { 0 } else { 1 })
        }
        Command::Exactness(args) => {
            let a = load_spec(&args.spec)?;
            let records = verify::exactness_records(&a);
            with_output(args.out.as_deref(), |w| reports::write_records(&records, w))?;
            Ok(verify::exit_status(&records))
        }
    }
}
