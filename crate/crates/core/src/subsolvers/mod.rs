//! Minimizers of the regularized surrogate around an anchor point.

mod cubic;
mod inner;

pub use cubic::{solve_cubic_global, CubicSolution, CubicSubproblem, SECULAR_MAX_ITER, SECULAR_TOL};
pub use inner::{solve_inner, solve_prox_linear, InnerSolveResult, InnerStatus, DEFAULT_INNER_MAX_ITER};
