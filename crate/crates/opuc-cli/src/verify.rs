//! The `verify` subcommand: run verification suites and report residuals.
//!
//! Every suite is a fixed set of named checks, each with a measured
//! residual and a tolerance; the report carries all of them so a failure
//! is diagnosable from the output alone. Checks are deterministic in the
//! configured seed.

use crate::{emit, resolve, ConfigArgs, Failure, OutputFormat};
use clap::Args;
use opuc::suites::{run_suite, SuiteReport, SUITE_NAMES};
use std::fmt::Write as _;
use std::process::ExitCode;

#[derive(Args, Debug)]
#[command(
    about = "Run verification suites and print a per-check report",
    long_about = "Run verification suites and print a per-check report.\n\n\
With --suite NAME one suite runs; without it, every registered suite runs:\n  \
recursion-roundtrip, geronimus, cmv-charpoly, cd-formula, weyl, toeplitz,\n  \
strong-szego, aleksandrov, periodic-bands, szego-map, haar\n\n\
The JSON report is {\"passed\": bool, \"reports\": [...]} with one entry per \
suite, each listing its checks (name, residual, tolerance, pass), sorted by \
check name. CSV columns: suite,check,residual,tolerance,pass.\n\n\
Exit code 0 when every check passes, 1 when any check fails."
)]
pub struct VerifyArgs {
    /// Suite to run (omit to run every registered suite).
    #[arg(long)]
    suite: Option<String>,

    #[command(flatten)]
    config: ConfigArgs,
}

pub fn run(args: &VerifyArgs) -> Result<ExitCode, Failure> {
    let rc = resolve(&args.config)?;
    let names: Vec<&str> = match &args.suite {
        Some(name) => vec![name.as_str()],
        None => SUITE_NAMES.to_vec(),
    };

    let mut reports: Vec<SuiteReport> = Vec::with_capacity(names.len());
    for name in names {
        reports.push(run_suite(name, &rc.suite)?);
    }
    let passed = reports.iter().all(|r| r.passed);

    match rc.format {
        OutputFormat::Json => {
            let body = serde_json::to_string_pretty(&serde_json::json!({
                "passed": passed,
                "reports": reports,
            }))
            .map_err(|e| Failure::Input(format!("serialization failed: {e}")))?;
            emit(&body);
        }
        OutputFormat::Csv => {
            let mut s = String::from("suite,check,residual,tolerance,pass\n");
            for r in &reports {
                for c in &r.checks {
                    writeln!(
                        s,
                        "{},{},{},{},{}",
                        r.suite, c.name, c.residual, c.tolerance, c.pass
                    )
                    .unwrap();
                }
            }
            emit(s.trim_end());
        }
    }

    Ok(if passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}
