//! Command-line front end: configuration, runs, parameter sweeps and the
//! property report.

mod config;
mod output;
mod run;
mod sweep;
mod verify;

use thiserror::Error;

use crate::error::SweError;

pub use config::{Resolved, ResolvedSettings, RunConfig, OUTPUT_DIR_ENV};
pub use output::{format_float, write_diagnostics_csv, write_solution_csv};
pub use run::{run, simulate, RunSummary, Simulation};
pub use sweep::{sweep, ParamRange, SweepRow};
pub use verify::{verify, Check, VerifyReport};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Solver(SweError),
}

impl From<SweError> for CliError {
    fn from(e: SweError) -> Self {
        match e {
            SweError::Config(msg) => CliError::Config(msg),
            e @ (SweError::UnsupportedDegree { .. } | SweError::InfeasibleEquilibrium { .. }) => {
                CliError::Config(e.to_string())
            }
            e => CliError::Solver(e),
        }
    }
}

impl CliError {
    /// 1 for configuration and i/o problems, 2 for solver aborts.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Solver(_) => 2,
            _ => 1,
        }
    }
}
