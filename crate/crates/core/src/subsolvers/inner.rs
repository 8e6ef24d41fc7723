//! Dispatch from a surrogate model to the matching subproblem solver.
//!
//! | (p, q) | ψ        | method                                   |
//! |--------|----------|------------------------------------------|
//! | (1, 1) | any      | one proximal step, exact                 |
//! | (2, 2) | zero     | cubic solver, `H = ∇²f - ∇²g`            |
//! | (2, 1) | zero     | cubic solver, `H = ∇²f + M_q I`          |
//! | (1, 2) | zero     | cubic solver, `H = M_p I - ∇²g`          |
//! | (2, 1) | nonzero  | backtracking proximal gradient on model  |

use nalgebra::DVector;
use serde::Serialize;

use super::cubic::{solve_cubic_global, CubicSubproblem, SECULAR_TOL};
use crate::error::{Error, Result};
use crate::model::{ModelAnchor, ModelParams};
use crate::oracles::SimpleConvexTerm;

pub const DEFAULT_INNER_MAX_ITER: usize = 5000;

/// Absolute floor for the inexact stopping rule; lets the scheme stop at `y = x`.
const RESIDUAL_FLOOR: f64 = 1e-12;
const TOLERANCE_RETRIES: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum InnerStatus {
    Exact,
    ToleranceMet,
    MaxIter,
}

impl InnerStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Exact => "exact",
            Self::ToleranceMet => "tolerance_met",
            Self::MaxIter => "max_iter",
        }
    }
}

#[derive(Debug, Clone)]
pub struct InnerSolveResult {
    pub y: DVector<f64>,
    /// Norm of a model subgradient at `y` (smooth gradient plus an element of `∂ψ(y)`).
    pub model_subgradient_norm_bound: f64,
    pub iterations: usize,
    pub status: InnerStatus,
    /// `m(y; x)`.
    pub model_value: f64,
}

fn descent_slack(anchor_value: f64) -> f64 {
    1e-10 * (1.0 + anchor_value.abs())
}

/// Exact minimizer of the (1, 1) model:
/// `y = prox_{ψ,t}(x - t(∇f(x) - ∇g(x)))` with `t = 1 / (M_p + M_q)`.
pub fn solve_prox_linear(
    anchor: &ModelAnchor<'_>,
    params: &ModelParams,
    psi: &dyn SimpleConvexTerm,
) -> Result<InnerSolveResult> {
    if params.p != 1 || params.q != 1 {
        return Err(Error::Input(format!(
            "prox-linear step needs p = q = 1, got ({}, {})",
            params.p, params.q
        )));
    }
    let t = 1.0 / (params.m_p + params.m_q);
    let direction = &anchor.f.gradient - &anchor.g.gradient;
    let y = psi.prox(&(&anchor.x - direction * t), t);
    Ok(InnerSolveResult {
        model_value: anchor.surrogate_value(params, psi, &y)?,
        y,
        model_subgradient_norm_bound: 0.0,
        iterations: 1,
        status: InnerStatus::Exact,
    })
}

/// Computes `x⁺`, a certified stationary point of `m(·; x)` with
/// `m(x⁺; x) <= F(x)`.
///
/// Exact paths return [`InnerStatus::Exact`]. The composite path stops once
/// `‖model subgradient‖ <= max(θ‖y - x‖^{min(p,q)}, 1e-12)` and reports
/// [`InnerStatus::MaxIter`] when `max_iter` passes first.
pub fn solve_inner(
    anchor: &ModelAnchor<'_>,
    params: &ModelParams,
    psi: &dyn SimpleConvexTerm,
    max_iter: usize,
) -> Result<InnerSolveResult> {
    params.validate()?;
    let (p, q) = (params.p, params.q);
    let capability = |detail: &str| Error::Capability {
        p,
        q,
        detail: detail.to_string(),
    };
    if p > 2 || q > 2 {
        return Err(capability("no subproblem solver for third-order models"));
    }
    if (p, q) == (1, 1) {
        return solve_prox_linear(anchor, params, psi);
    }
    if !psi.is_zero() {
        if q == 2 {
            return Err(capability("the model is nonconvex when q = 2 and psi is nonzero"));
        }
        return solve_composite(anchor, params, psi, max_iter);
    }
    solve_cubic_model(anchor, params, psi)
}

fn solve_cubic_model(
    anchor: &ModelAnchor<'_>,
    params: &ModelParams,
    psi: &dyn SimpleConvexTerm,
) -> Result<InnerSolveResult> {
    let n = anchor.x.len();
    let identity = nalgebra::DMatrix::<f64>::identity(n, n);
    let hess = |data: &crate::model::SideData| data.hessian.clone().expect("anchor caches hessian");
    let v = &anchor.f.gradient - &anchor.g.gradient;
    let (h, m) = match (params.p, params.q) {
        (2, 2) => (hess(&anchor.f) - hess(&anchor.g), params.m_p + params.m_q),
        (2, 1) => (hess(&anchor.f) + identity * params.m_q, params.m_p),
        (1, 2) => (identity * params.m_p - hess(&anchor.g), params.m_q),
        _ => unreachable!("dispatch covers every cubic regime"),
    };
    let h = (&h + h.transpose()) * 0.5;
    let sub = CubicSubproblem::new(v, h, m)?;
    let sol = solve_cubic_global(&sub, SECULAR_TOL)?;
    let y = &anchor.x + &sol.h_star;
    let model_value = anchor.surrogate_value(params, psi, &y)?;
    let anchor_value = anchor.anchor_objective(psi);
    if model_value > anchor_value + descent_slack(anchor_value) {
        return Err(Error::Numerical(format!(
            "cubic step increased the model: {model_value} > {anchor_value}"
        )));
    }
    Ok(InnerSolveResult {
        model_subgradient_norm_bound: anchor.surrogate_gradient_smooth_part(params, &y)?.norm(),
        y,
        iterations: sol.iterations,
        status: InnerStatus::Exact,
        model_value,
    })
}

/// (2, 1) with ψ ≠ 0: retries with θ shrunk tenfold when the result fails
/// the descent test against `F(x)`.
fn solve_composite(
    anchor: &ModelAnchor<'_>,
    params: &ModelParams,
    psi: &dyn SimpleConvexTerm,
    max_iter: usize,
) -> Result<InnerSolveResult> {
    let anchor_value = anchor.anchor_objective(psi);
    let mut theta = params.theta;
    for attempt in 0..=TOLERANCE_RETRIES {
        let result = proximal_gradient(anchor, params, psi, theta, max_iter)?;
        if result.model_value <= anchor_value + descent_slack(anchor_value) {
            return Ok(result);
        }
        log::debug!(
            "composite inner attempt {attempt}: model {} above F(x) = {anchor_value}",
            result.model_value
        );
        theta *= 0.1;
    }
    Err(Error::Numerical(format!(
        "composite inner solver failed the descent test after {TOLERANCE_RETRIES} tolerance reductions"
    )))
}

/// Backtracking proximal gradient on `s(y) + ψ(y)` from `y₀ = x`, where `s`
/// is the smooth part of the model.
fn proximal_gradient(
    anchor: &ModelAnchor<'_>,
    params: &ModelParams,
    psi: &dyn SimpleConvexTerm,
    theta: f64,
    max_iter: usize,
) -> Result<InnerSolveResult> {
    let smooth = |y: &DVector<f64>| anchor.smooth_value(params, y);
    let grad = |y: &DVector<f64>| anchor.surrogate_gradient_smooth_part(params, y);
    let order = params.min_order() as i32;

    let mut y = anchor.x.clone();
    let mut s_y = smooth(&y)?;
    let mut g_y = grad(&y)?;
    let curvature = anchor.f.hessian.as_ref().map_or(0.0, |h| h.norm());
    let mut lipschitz = (curvature + params.m_q).max(1e-8);
    let mut residual = f64::INFINITY;

    for it in 1..=max_iter {
        lipschitz *= 0.5;
        let (z, s_z, g_z) = loop {
            let z = psi.prox(&(&y - &g_y / lipschitz), 1.0 / lipschitz);
            let s_z = smooth(&z)?;
            let g_z = grad(&z)?;
            let d = &z - &y;
            let d_sq = d.norm_squared();
            let excess = s_z - s_y - g_y.dot(&d);
            // Once value differences drop to roundoff, fall back to the
            // curvature along the step, which is exact for quadratic models.
            let at_roundoff = (s_z - s_y).abs() <= 1e3 * f64::EPSILON * (1.0 + s_y.abs());
            let accepted = excess <= 0.5 * lipschitz * d_sq
                || (at_roundoff && (&g_z - &g_y).dot(&d) <= lipschitz * d_sq);
            if accepted {
                break (z, s_z, g_z);
            }
            lipschitz *= 2.0;
            if !lipschitz.is_finite() {
                return Err(Error::Numerical("composite inner backtracking diverged".into()));
            }
        };
        // ∇s(z) + ξ with ξ = Λ(y - z) - ∇s(y) ∈ ∂ψ(z) from the prox optimality condition.
        residual = ((&g_z - &g_y) - (&z - &y) * lipschitz).norm();
        y = z;
        s_y = s_z;
        g_y = g_z;
        let target = (theta * (&y - &anchor.x).norm().powi(order)).max(RESIDUAL_FLOOR);
        if residual <= target {
            return Ok(InnerSolveResult {
                model_value: s_y + psi.value(&y),
                y,
                model_subgradient_norm_bound: residual,
                iterations: it,
                status: InnerStatus::ToleranceMet,
            });
        }
    }
    Ok(InnerSolveResult {
        model_value: s_y + psi.value(&y),
        y,
        model_subgradient_norm_bound: residual,
        iterations: max_iter,
        status: InnerStatus::MaxIter,
    })
}
