use thiserror::Error;

/// Errors raised by the solver library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("invalid input: {0}")]
    Input(String),

    /// An oracle returned a non-finite value at a point where it must be defined.
    #[error("oracle failure at {point:?}: {message}")]
    Oracle { point: Vec<f64>, message: String },

    /// The requested `(p, q)` / ψ combination has no certified subproblem solver.
    #[error("unsupported configuration p={p}, q={q}: {detail} (supported: {SUPPORTED_REGIMES})")]
    Capability { p: usize, q: usize, detail: String },

    #[error("numerical failure: {0}")]
    Numerical(String),
}

/// Human-readable list of the regimes `solve_inner` can handle.
pub const SUPPORTED_REGIMES: &str =
    "(1,1) with any psi; (2,1) with any psi; (1,2) and (2,2) with psi = 0";

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_dim(expected: usize, got: usize) -> Result<()> {
    if expected != got {
        return Err(Error::Dimension { expected, got });
    }
    Ok(())
}
