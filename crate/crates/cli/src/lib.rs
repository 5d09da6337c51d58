//! Command-line front end: parameter sweeps, random batches, single reports,
//! self-checks and MUB export.
//!
//! Exit codes: 0 success, 1 usage, 2 validation failure, 3 invariant violation.

pub mod commands;
pub mod error;
pub mod format;

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use cmub_eur::mub::{mubs_by_name, mubs_for_dim};
use cmub_eur::selfcheck::CandidateSet;
use cmub_eur::{ExampleId, RandomStateSpec, StateKind};

use crate::commands::{BoundsRequest, RandomConfig, SweepConfig, RANDOM_DIM};
pub use crate::error::{CliError, CliResult, EXIT_INVARIANT, EXIT_OK, EXIT_USAGE, EXIT_VALIDATION};
use crate::format::{parse_angle, parse_fixed};

/// Entropic uncertainty bounds for complete sets of mutually unbiased bases.
#[derive(Parser, Debug)]
#[command(name = "cmub-eur", version, about)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Sweep one parameter of example 1, 2, 4 or 5 and write CSV.
    Sweep(SweepArgs),
    /// Evaluate a seeded batch of random states under example 3 or 6 and write CSV.
    Random(RandomArgs),
    /// Print the full bound report for a state file as JSON.
    Bounds(BoundsArgs),
    /// Run the numerical self-check battery.
    Verify(VerifyArgs),
    /// Write a MUB set as JSON.
    ExportMubs(ExportArgs),
}

fn parse_example(s: &str) -> Result<ExampleId, String> {
    s.parse().map_err(|e: cmub_eur::Error| e.to_string())
}

fn parse_kind(s: &str) -> Result<StateKind, String> {
    s.parse().map_err(|e: cmub_eur::Error| e.to_string())
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    /// example1, example2, example4 or example5 (or just the number)
    #[arg(long, value_parser = parse_example)]
    pub example: ExampleId,
    /// Swept parameter; defaults to the example's first parameter
    #[arg(long)]
    pub param: Option<String>,
    /// Start of the range in radians (accepts e.g. 0.25pi, pi/4)
    #[arg(long, value_parser = parse_angle, allow_hyphen_values = true)]
    pub from: Option<f64>,
    /// End of the range in radians
    #[arg(long, value_parser = parse_angle, allow_hyphen_values = true)]
    pub to: Option<f64>,
    /// Number of grid points, at least 2
    #[arg(long, default_value_t = 201)]
    pub steps: usize,
    /// Hold another parameter fixed, e.g. --fix theta=pi/4 (repeatable)
    #[arg(long = "fix", value_parser = parse_fixed)]
    pub fix: Vec<(String, f64)>,
    /// Override the default partition, e.g. "1|2,3"
    #[arg(long)]
    pub partition: Option<String>,
    /// Output file; stdout when absent
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct RandomArgs {
    /// example3 or example6
    #[arg(long, value_parser = parse_example, default_value = "example3")]
    pub example: ExampleId,
    /// mixed or pure
    #[arg(long, value_parser = parse_kind, default_value = "mixed")]
    pub kind: StateKind,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[arg(long, default_value_t = 1000)]
    pub count: u64,
    /// State dimension; both random examples use 16
    #[arg(long, default_value_t = RANDOM_DIM)]
    pub dim: usize,
    /// Override the default partition
    #[arg(long)]
    pub partition: Option<String>,
    /// Output file; stdout when absent
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also write the batch manifest (seed, kind, dim, count) as JSON
    #[arg(long)]
    pub manifest: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct BoundsArgs {
    /// State file in the JSON state format
    #[arg(long)]
    pub state: PathBuf,
    /// pauli, qutrit, ququart or prime<d>; chosen by dimension when absent
    #[arg(long)]
    pub mub: Option<String>,
    /// Bases per memory, e.g. "1|2,3"; a single memory when absent
    #[arg(long)]
    pub partition: Option<String>,
    /// Measured subsystem; the first label when absent
    #[arg(long)]
    pub measured: Option<String>,
    /// Memory labels in partition order, comma separated
    #[arg(long, value_delimiter = ',')]
    pub memories: Option<Vec<String>>,
    /// Output file; stdout when absent
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Extra basis sets (JSON, export-mubs layout) to run through the battery
    #[arg(long = "mub-file")]
    pub mub_files: Vec<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ExportArgs {
    /// pauli, qutrit, ququart or prime<d>
    #[arg(long, conflicts_with = "dim")]
    pub mub: Option<String>,
    /// Dimension: 2, 3, 4 or an odd prime
    #[arg(long)]
    pub dim: Option<usize>,
    /// Output file; stdout when absent
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

fn emit(out: &mut dyn Write, path: Option<&Path>, text: &str) -> CliResult<()> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| CliError::io(p, e)),
        None => out.write_all(text.as_bytes()).map_err(|e| CliError::io("<stdout>", e)),
    }
}

fn with_newline(mut s: String) -> String {
    if !s.ends_with('\n') {
        s.push('\n');
    }
    s
}

/// Executes a parsed command, writing results to `out`.
pub fn execute(cli: Cli, out: &mut dyn Write) -> CliResult<()> {
    match cli.command {
        Command::Sweep(a) => {
            let cfg = SweepConfig::new(a.example, a.param, a.from, a.to, a.steps, a.fix, a.partition)?;
            emit(out, a.out.as_deref(), &commands::sweep_csv(&cfg)?)
        }
        Command::Random(a) => {
            let spec = RandomStateSpec::new(a.dim, a.kind, a.seed, a.count)?;
            let cfg = RandomConfig::new(a.example, spec, a.partition)?;
            let csv = commands::random_csv(&cfg)?;
            if let Some(m) = &a.manifest {
                fs::write(m, with_newline(cfg.manifest())).map_err(|e| CliError::io(m, e))?;
            }
            emit(out, a.out.as_deref(), &csv)
        }
        Command::Bounds(a) => {
            let req = BoundsRequest {
                mub: a.mub,
                partition: a.partition,
                measured: a.measured,
                memories: a.memories,
            };
            let (report, check) = commands::bounds_report(&read(&a.state)?, &req)?;
            emit(out, a.out.as_deref(), &with_newline(report.to_json()))?;
            check
        }
        Command::Verify(a) => {
            let extra = a
                .mub_files
                .iter()
                .map(|p| Ok(CandidateSet::from_json(p.display().to_string(), &read(p)?)?))
                .collect::<CliResult<Vec<_>>>()?;
            let results = commands::verify(extra)?;
            emit(out, None, &commands::format_checks(&results))?;
            match results.iter().filter(|r| !r.passed).count() {
                0 => Ok(()),
                n => Err(CliError::ChecksFailed(n)),
            }
        }
        Command::ExportMubs(a) => {
            let set = match (a.mub, a.dim) {
                (Some(name), _) => mubs_by_name(&name)?,
                (None, Some(d)) => mubs_for_dim(d)?,
                (None, None) => return Err(CliError::Usage("export-mubs needs --mub or --dim".into())),
            };
            emit(out, a.out.as_deref(), &with_newline(set.to_json()))
        }
    }
}

/// Parses `args` (program name first), runs the command and returns the exit code.
/// Diagnostics go to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(err, "{}", e.render());
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match execute(cli, out) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
