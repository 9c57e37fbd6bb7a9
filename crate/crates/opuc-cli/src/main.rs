//! Command-line front end for the `opuc` toolkit.
//!
//! Two subcommands:
//!
//! * `compute` — read one input file (coefficient sequence, circle
//!   measure, or Jacobi parameters; the schema is auto-detected) and emit
//!   one artifact per requested target.
//! * `verify` — run one or all of the registered verification suites and
//!   print a machine-readable report of every check's residual.
//!
//! Exit codes: 0 success, 1 a verification check failed, 2 input or
//! configuration error, 3 numerical non-convergence. Errors are reported
//! on stderr as a single JSON object `{"error": {"kind", "message"}}`.

use clap::{Args, Parser, Subcommand, ValueEnum};
use opuc::suites::SuiteConfig;
use serde::Deserialize;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

mod compute;
mod verify;

#[derive(Parser)]
#[command(
    name = "opuc",
    version,
    about = "Orthogonal polynomials on the unit circle: computation targets and verification suites",
    long_about = "Orthogonal polynomials on the unit circle: computation targets and \
verification suites.\n\nAll output is byte-deterministic for a fixed configuration and \
seed. Numbers in JSON artifacts use the shortest representation that round-trips; \
complex values are [re, im] pairs.\n\nExit codes: 0 success, 1 verification check \
failed, 2 input/configuration error, 3 numerical non-convergence."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    Compute(compute::ComputeArgs),
    Verify(verify::VerifyArgs),
}

/// Flags shared by both subcommands, resolvable into a [`RunConfig`].
#[derive(Args, Debug)]
pub struct ConfigArgs {
    /// Quadrature grid size for synthesized measures [default: 8192]
    #[arg(long)]
    grid: Option<usize>,

    /// Power-series truncation order [default: 48]
    #[arg(long)]
    order: Option<usize>,

    /// Largest recursion depth / moment index exercised [default: 12]
    #[arg(long = "max-n")]
    max_n: Option<usize>,

    /// Seed for every randomized check [default: 20240816]
    #[arg(long)]
    seed: Option<u64>,

    /// Output directory for artifacts [default: $OPUC_OUT_DIR, else .]
    #[arg(long)]
    out: Option<PathBuf>,

    /// Artifact and report format
    #[arg(long, value_enum)]
    format: Option<OutputFormat>,

    /// JSON file whose fields override the flags. Recognized keys:
    /// grid_size, series_order, max_n, seed, samples, format.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
}

impl OutputFormat {
    fn extension(self) -> &'static str {
        match self {
            OutputFormat::Json => "json",
            OutputFormat::Csv => "csv",
        }
    }
}

/// Optional overrides loaded from `--config`.
#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    grid_size: Option<usize>,
    series_order: Option<usize>,
    max_n: Option<usize>,
    seed: Option<u64>,
    samples: Option<usize>,
    format: Option<String>,
}

/// Fully resolved run configuration: defaults, then flags, then the
/// `--config` file (strongest).
pub struct RunConfig {
    pub suite: SuiteConfig,
    pub format: OutputFormat,
    pub out_dir: PathBuf,
}

pub fn resolve(args: &ConfigArgs) -> Result<RunConfig, Failure> {
    let mut suite = SuiteConfig::default();
    if let Some(g) = args.grid {
        suite.grid_size = g;
    }
    if let Some(o) = args.order {
        suite.series_order = o;
    }
    if let Some(n) = args.max_n {
        suite.max_n = n;
    }
    if let Some(s) = args.seed {
        suite.seed = s;
    }
    let mut format = args.format.unwrap_or(OutputFormat::Json);

    if let Some(path) = &args.config {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::Input(format!("cannot read config {}: {e}", path.display())))?;
        let file: ConfigFile = serde_json::from_str(&text)
            .map_err(|e| Failure::Input(format!("config {} is not valid: {e}", path.display())))?;
        if let Some(g) = file.grid_size {
            suite.grid_size = g;
        }
        if let Some(o) = file.series_order {
            suite.series_order = o;
        }
        if let Some(n) = file.max_n {
            suite.max_n = n;
        }
        if let Some(s) = file.seed {
            suite.seed = s;
        }
        if let Some(m) = file.samples {
            suite.samples = m;
        }
        if let Some(f) = &file.format {
            format = match f.as_str() {
                "json" => OutputFormat::Json,
                "csv" => OutputFormat::Csv,
                other => {
                    return Err(Failure::Input(format!(
                        "config format '{other}' is neither 'json' nor 'csv'"
                    )))
                }
            };
        }
    }

    let out_dir = match &args.out {
        Some(dir) => dir.clone(),
        None => std::env::var_os("OPUC_OUT_DIR")
            .map(PathBuf::from)
            .unwrap_or_else(|| PathBuf::from(".")),
    };

    Ok(RunConfig {
        suite,
        format,
        out_dir,
    })
}

/// A terminal failure: carries the exit code and the stderr diagnostic.
#[derive(Debug)]
pub enum Failure {
    /// Bad input data or configuration (exit 2).
    Input(String),
    /// An iteration failed to converge (exit 3).
    NonConvergence(String),
}

impl Failure {
    fn kind(&self) -> &'static str {
        match self {
            Failure::Input(_) => "input-error",
            Failure::NonConvergence(_) => "non-convergence",
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Input(m) | Failure::NonConvergence(m) => m,
        }
    }

    fn exit_code(&self) -> ExitCode {
        match self {
            Failure::Input(_) => ExitCode::from(2),
            Failure::NonConvergence(_) => ExitCode::from(3),
        }
    }

    fn to_json(&self) -> String {
        serde_json::json!({
            "error": { "kind": self.kind(), "message": self.message() }
        })
        .to_string()
    }
}

impl From<opuc::Error> for Failure {
    fn from(e: opuc::Error) -> Self {
        match &e {
            opuc::Error::NonConvergence { .. } => Failure::NonConvergence(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

/// Prints one line to stdout, tolerating a downstream pipe that closed
/// early (`opuc verify | head` must not panic): a broken pipe ends the
/// process quietly, any other write failure is reported on stderr.
pub fn emit(text: &str) {
    use std::io::{ErrorKind, Write};
    let mut out = std::io::stdout().lock();
    if let Err(e) = writeln!(out, "{text}") {
        if e.kind() == ErrorKind::BrokenPipe {
            std::process::exit(0);
        }
        eprintln!("{}", Failure::Input(format!("stdout write failed: {e}")).to_json());
        std::process::exit(2);
    }
}

/// Writes one artifact and reports its path on stdout.
pub fn write_artifact(dir: &Path, stem: &str, format: OutputFormat, body: &str) -> Result<(), Failure> {
    std::fs::create_dir_all(dir)
        .map_err(|e| Failure::Input(format!("cannot create {}: {e}", dir.display())))?;
    let path = dir.join(format!("{stem}.{}", format.extension()));
    std::fs::write(&path, body)
        .map_err(|e| Failure::Input(format!("cannot write {}: {e}", path.display())))?;
    emit(&format!("wrote {}", path.display()));
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Compute(args) => compute::run(&args),
        Command::Verify(args) => verify::run(&args),
    };
    match outcome {
        Ok(code) => code,
        Err(failure) => {
            eprintln!("{}", failure.to_json());
            failure.exit_code()
        }
    }
}
