//! Problem interface for `F(x) = f(x) + ψ(x) - g(x)`.
//!
//! `f` and `g` are convex and smooth; they are queried through [`SmoothOracle`],
//! which exposes derivatives up to a declared order (at most three). The
//! nonsmooth convex part ψ is queried through [`SimpleConvexTerm`], i.e. only
//! through its value and its proximal operator.
//!
//! Third derivatives are never materialized as dense tensors: an oracle of
//! order three returns the matrix `D³φ(x)[h]` for a direction `h`.

mod builtin;
mod check;
mod functions;
mod psi;

use std::sync::Arc;

use nalgebra::{DMatrix, DVector};

use crate::error::{check_dim, Error, Result};

pub use builtin::{
    builtin_problem, lse_lipschitz_hints, quad_minus_quad_instance, BUILTIN_NAMES, POLY_HINT_RADIUS,
};
pub use check::{check_derivatives, fd_step, DerivativeReport};
pub use functions::{LogSumExp, Quadratic, SeparableQuartic};
pub use psi::{BoxIndicator, L1Norm, NonnegativeOrthant, ZeroTerm};

/// A convex function with derivatives available up to `derivative_order()`.
///
/// Implementations must be pure: calling any method must not change what a
/// later call returns.
pub trait SmoothOracle: Send + Sync {
    fn dim(&self) -> usize;

    fn value(&self, x: &DVector<f64>) -> f64;

    fn gradient(&self, x: &DVector<f64>) -> DVector<f64>;

    /// Must return `Some` whenever `derivative_order() >= 2`.
    fn hessian(&self, _x: &DVector<f64>) -> Option<DMatrix<f64>> {
        None
    }

    /// The symmetric matrix `D³φ(x)[h]`, i.e. `(u, w) ↦ D³φ(x)[h, u, w]`.
    /// Must return `Some` whenever `derivative_order() >= 3`.
    fn third_derivative_apply(&self, _x: &DVector<f64>, _h: &DVector<f64>) -> Option<DMatrix<f64>> {
        None
    }

    /// Highest derivative order the oracle supplies, in `1..=3`.
    fn derivative_order(&self) -> usize;

    /// Upper bound on the Lipschitz constant of the `order`-th derivative.
    fn lipschitz_hint(&self, _order: usize) -> Option<f64> {
        None
    }
}

/// A proper closed convex function with a cheap proximal operator.
pub trait SimpleConvexTerm: Send + Sync {
    /// `+∞` outside the domain.
    fn value(&self, x: &DVector<f64>) -> f64;

    /// `argmin_u ψ(u) + ‖u - x‖² / (2t)` for `t > 0`.
    fn prox(&self, x: &DVector<f64>, t: f64) -> DVector<f64>;

    fn in_domain(&self, x: &DVector<f64>) -> bool;

    /// True only for ψ ≡ 0. Solvers use this to select unconstrained paths.
    fn is_zero(&self) -> bool {
        false
    }
}

/// A difference-of-convex problem `min f(x) + ψ(x) - g(x)`.
#[derive(Clone)]
pub struct DcProblem {
    pub f: Arc<dyn SmoothOracle>,
    pub g: Arc<dyn SmoothOracle>,
    pub psi: Arc<dyn SimpleConvexTerm>,
    dimension: usize,
    /// Known value `F*` with `F(x) >= F*` on the domain, if any.
    pub known_lower_bound: Option<f64>,
    /// When set, the Lipschitz hints of `f` and `g` are only valid on the box
    /// `‖x‖∞ <= radius`.
    pub hint_radius: Option<f64>,
    pub name: String,
}

impl std::fmt::Debug for DcProblem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("DcProblem")
            .field("name", &self.name)
            .field("dimension", &self.dimension)
            .field("known_lower_bound", &self.known_lower_bound)
            .field("hint_radius", &self.hint_radius)
            .finish()
    }
}

impl DcProblem {
    pub fn new(
        f: Arc<dyn SmoothOracle>,
        g: Arc<dyn SmoothOracle>,
        psi: Arc<dyn SimpleConvexTerm>,
    ) -> Result<Self> {
        let dimension = f.dim();
        check_dim(dimension, g.dim())?;
        if dimension == 0 {
            return Err(Error::Input("problem dimension must be at least 1".into()));
        }
        for (name, order) in [("f", f.derivative_order()), ("g", g.derivative_order())] {
            if !(1..=3).contains(&order) {
                return Err(Error::Input(format!(
                    "{name} declares derivative order {order}, expected 1..=3"
                )));
            }
        }
        Ok(Self {
            f,
            g,
            psi,
            dimension,
            known_lower_bound: None,
            hint_radius: None,
            name: "custom".into(),
        })
    }

    pub fn with_lower_bound(mut self, lower: f64) -> Self {
        self.known_lower_bound = Some(lower);
        self
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    /// `F(x) = f(x) + ψ(x) - g(x)`, or `+∞` when `x ∉ dom ψ`.
    pub fn objective(&self, x: &DVector<f64>) -> Result<f64> {
        evaluate_objective(self, x)
    }

    /// `(L_p^f, L_q^g)` when both oracles carry hints for these orders.
    pub fn lipschitz_pair(&self, p: usize, q: usize) -> Option<(f64, f64)> {
        Some((self.f.lipschitz_hint(p)?, self.g.lipschitz_hint(q)?))
    }

    /// Errors unless `f` supplies order `p` and `g` supplies order `q`.
    pub fn require_orders(&self, p: usize, q: usize) -> Result<()> {
        if self.f.derivative_order() < p {
            return Err(Error::Input(format!(
                "f supplies derivatives up to order {}, but p = {p}",
                self.f.derivative_order()
            )));
        }
        if self.g.derivative_order() < q {
            return Err(Error::Input(format!(
                "g supplies derivatives up to order {}, but q = {q}",
                self.g.derivative_order()
            )));
        }
        Ok(())
    }
}

/// Evaluates `F(x) = f(x) + ψ(x) - g(x)`; returns `+∞` iff `x ∉ dom ψ`.
pub fn evaluate_objective(problem: &DcProblem, x: &DVector<f64>) -> Result<f64> {
    check_dim(problem.dimension, x.len())?;
    if !problem.psi.in_domain(x) {
        return Ok(f64::INFINITY);
    }
    let value = problem.f.value(x) + problem.psi.value(x) - problem.g.value(x);
    if value.is_nan() {
        return Err(Error::Oracle {
            point: x.iter().copied().collect(),
            message: "objective evaluated to NaN".into(),
        });
    }
    Ok(value)
}
