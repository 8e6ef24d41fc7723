//! Library side of the `hodc` command-line tool: run specifications,
//! single runs with audits, and `(p, q)` sweeps.

mod commands;
mod spec;

use std::path::PathBuf;

use thiserror::Error;

pub use commands::{
    execute, run_command, sweep_command, trace_to_csv, write_trace, AuditReport, OutcomeSummary, RunReport,
    SweepRow, TRACE_COLUMNS,
};
pub use spec::{mode_name, parse_mode, Prepared, RunSpec, TraceFormat, X0Policy, DEFAULT_GAMMA, DEFAULT_HINT_FACTOR};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("input error: {0}")]
    Input(String),

    #[error("cannot write {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Solver(#[from] hodc::Error),
}

impl CliError {
    /// Process exit code: 3 for numerical failures inside the solver, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Solver(hodc::Error::Numerical(_)) => 3,
            _ => 1,
        }
    }
}
