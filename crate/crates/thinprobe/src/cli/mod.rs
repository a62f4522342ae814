//! Declarative scenario configs, experiment orchestration, and report
//! emission.
//!
//! Scenarios are sectioned TOML files validated before any computation
//! (unknown keys rejected). A run writes per-experiment artifacts plus a
//! `checks.json` verdict list and a `manifest.txt` (scenario hash, tool
//! version, timestamp); everything except the manifest is byte-reproducible
//! for a fixed seed. Exit codes: 0 all checks pass, 2 a check failed,
//! 1 configuration or runtime error.

mod experiments;
mod report;
mod scenario;

pub use experiments::run_scenario;
pub use report::{format_sig, merge_reports, ReportRow};
pub use scenario::{
    CgoBlock, Check, ExperimentBlock, GeometryBlock, ModelBlock, OutputBlock, Scenario,
    SolverBlock, Verdict,
};

use std::path::PathBuf;

use clap::{Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(
    name = "thinprobe",
    about = "Numerical laboratory for flux/source operator identification on thin domains",
    version
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the built-in consistency suites (probe residuals, Green formula,
    /// frame invariants, exponent grids).
    Selfcheck {
        /// Output directory for the selfcheck report.
        #[arg(long, default_value = "out/selfcheck")]
        out: PathBuf,
        /// RNG seed override.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Run a scenario file.
    Run {
        scenario: PathBuf,
        /// Override the scenario's eps (single-eps experiments).
        #[arg(long)]
        eps_override: Option<f64>,
        /// Refine quadrature rules k times (doubling per axis each time).
        #[arg(long, default_value_t = 0)]
        quad_refine: u32,
        /// Dump solver fields as CSV (t, x1, eta, value).
        #[arg(long)]
        dump_fields: bool,
        /// RNG seed override.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Merge run directories into one summary (FAIL rows first).
    Report {
        dirs: Vec<PathBuf>,
        /// Where to write report.txt / report.json (defaults to stdout only).
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Entry point used by `main`; returns the process exit code.
pub fn run_cli(cli: Cli) -> i32 {
    match cli.command {
        Command::Selfcheck { out, seed } => {
            let scenario = Scenario::builtin_selfcheck(seed.unwrap_or(1));
            match run_scenario(&scenario, &out, "<builtin selfcheck>".as_bytes(), 0, false) {
                Ok(all_pass) => {
                    if all_pass {
                        0
                    } else {
                        2
                    }
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    1
                }
            }
        }
        Command::Run {
            scenario,
            eps_override,
            quad_refine,
            dump_fields,
            seed,
        } => {
            let bytes = match std::fs::read(&scenario) {
                Ok(b) => b,
                Err(e) => {
                    eprintln!("error: cannot read {}: {e}", scenario.display());
                    return 1;
                }
            };
            let mut sc: Scenario = match scenario::load_scenario(&bytes) {
                Ok(s) => s,
                Err(e) => {
                    eprintln!("error: invalid scenario: {e}");
                    return 1;
                }
            };
            if let Some(eps) = eps_override {
                sc.geometry.eps = Some(eps);
            }
            if let Some(s) = seed {
                sc.seed = s;
            }
            let out = PathBuf::from(&sc.output.dir);
            match run_scenario(&sc, &out, &bytes, quad_refine, dump_fields) {
                Ok(all_pass) => {
                    if all_pass {
                        0
                    } else {
                        2
                    }
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    1
                }
            }
        }
        Command::Report { dirs, out } => match merge_reports(&dirs, out.as_deref()) {
            Ok(all_pass) => {
                if all_pass {
                    0
                } else {
                    2
                }
            }
            Err(e) => {
                eprintln!("error: {e}");
                1
            }
        },
    }
}
