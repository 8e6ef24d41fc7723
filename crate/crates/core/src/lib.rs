//! Higher-order regularized Taylor methods for difference-of-convex problems
//! `min f(x) + ψ(x) - g(x)`.
//!
//! * [`oracles`]: problem interface, built-in test problems, derivative checks.
//! * [`model`]: Taylor models and the regularized surrogate.
//! * [`subsolvers`]: cubic-regularized subproblems and inner solvers.
//! * [`solver`]: fixed and adaptive outer loops with full traces.
//! * [`diagnostics`]: post-hoc audits of descent and rate bounds on traces.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod diagnostics;
pub mod error;
pub mod linalg;
pub mod model;
pub mod oracles;
pub mod solver;
pub mod subsolvers;

pub use error::{Error, Result};
pub use model::{ModelAnchor, ModelParams};
pub use oracles::{DcProblem, SimpleConvexTerm, SmoothOracle};

pub use solver::{run, run_ahodc, run_hodc, stationarity_residual, IterationRecord, Mode, SolveOutcome, SolveStatus, SolverConfig};
