//! Regularized Taylor surrogate of `F` around an anchor point `x`:
//!
//! ```text
//! m(y; x) = T_p^f(y; x) + M_p/(p+1)! ‖y-x‖^{p+1} + ψ(y)
//!         - T_q^g(y; x) + M_q/(q+1)! ‖y-x‖^{q+1}
//! ```
//!
//! When `M_p` and `M_q` exceed the Lipschitz constants of `D^p f` and `D^q g`,
//! `m(·; x) >= F` with equality at `y = x`.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::linalg::factorial;
use crate::oracles::{DcProblem, SimpleConvexTerm, SmoothOracle};

/// Default multiplier for the inexact inner stopping rule.
pub const DEFAULT_THETA: f64 = 0.1;

/// Smallest regularization weight produced by [`ModelParams::from_hints`];
/// used where a derivative is constant and its exact Lipschitz constant is 0.
pub const MIN_REGULARIZATION: f64 = 1e-2;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub p: usize,
    pub q: usize,
    pub m_p: f64,
    pub m_q: f64,
    /// Inner tolerance multiplier θ in `‖model subgradient‖ <= θ‖y-x‖^{min(p,q)}`.
    pub theta: f64,
}

impl ModelParams {
    pub fn new(p: usize, q: usize, m_p: f64, m_q: f64) -> Result<Self> {
        let params = Self {
            p,
            q,
            m_p,
            m_q,
            theta: DEFAULT_THETA,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn with_theta(mut self, theta: f64) -> Result<Self> {
        self.theta = theta;
        self.validate()?;
        Ok(self)
    }

    /// `M = factor · max(L, MIN_REGULARIZATION)` on each side, using the
    /// problem's Lipschitz hints.
    pub fn from_hints(problem: &DcProblem, p: usize, q: usize, factor: f64) -> Result<Self> {
        let (lf, lg) = problem.lipschitz_pair(p, q).ok_or_else(|| {
            Error::Input(format!("problem has no Lipschitz hints for p={p}, q={q}"))
        })?;
        Self::new(
            p,
            q,
            factor * lf.max(MIN_REGULARIZATION),
            factor * lg.max(MIN_REGULARIZATION),
        )
    }

    pub fn validate(&self) -> Result<()> {
        for (name, order) in [("p", self.p), ("q", self.q)] {
            if !(1..=3).contains(&order) {
                return Err(Error::Input(format!("{name} must be in 1..=3, got {order}")));
            }
        }
        for (name, m) in [("M_p", self.m_p), ("M_q", self.m_q)] {
            if !(m > 0.0 && m.is_finite()) {
                return Err(Error::Input(format!("{name} must be positive and finite, got {m}")));
            }
        }
        if !(self.theta >= 0.0 && self.theta.is_finite()) {
            return Err(Error::Input(format!("theta must be nonnegative, got {}", self.theta)));
        }
        Ok(())
    }

    /// For `p = 3` the regularized `f`-model is convex only when `M_p >= 3 L_3^f`.
    pub fn check_convexity_preserving(&self, problem: &DcProblem) -> Result<()> {
        if self.p == 3 {
            let l3 = problem.f.lipschitz_hint(3).ok_or_else(|| {
                Error::Input("convexity check for p = 3 needs an L_3 hint for f".into())
            })?;
            if self.m_p < 3.0 * l3 {
                return Err(Error::Input(format!(
                    "M_p = {} is below 3 L_3^f = {}; the order-3 model may be nonconvex",
                    self.m_p,
                    3.0 * l3
                )));
            }
        }
        Ok(())
    }

    pub fn min_order(&self) -> usize {
        self.p.min(self.q)
    }

    /// Exponent `(p + q + 2) / 2` of the step norm in the descent bound.
    pub fn descent_exponent(&self) -> f64 {
        (self.p + self.q + 2) as f64 / 2.0
    }

    pub fn with_regularization(&self, m_p: f64, m_q: f64) -> Self {
        Self { m_p, m_q, ..*self }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    F,
    G,
}

/// Derivative data of one smooth part at the anchor.
#[derive(Debug, Clone)]
pub struct SideData {
    pub value: f64,
    pub gradient: DVector<f64>,
    pub hessian: Option<DMatrix<f64>>,
    pub order: usize,
}

/// Derivatives of `f` and `g` cached at `x`, reused across regularization
/// retries. Third derivatives stay as on-demand directional queries.
pub struct ModelAnchor<'a> {
    pub x: DVector<f64>,
    pub f: SideData,
    pub g: SideData,
    f_oracle: &'a dyn SmoothOracle,
    g_oracle: &'a dyn SmoothOracle,
}

fn side_data(oracle: &dyn SmoothOracle, x: &DVector<f64>, order: usize, label: &str) -> Result<SideData> {
    let oracle_err = |what: &str| Error::Oracle {
        point: x.iter().copied().collect(),
        message: format!("{label}: {what}"),
    };
    let value = oracle.value(x);
    if !value.is_finite() {
        return Err(oracle_err("non-finite value"));
    }
    let gradient = oracle.gradient(x);
    let hessian = if order >= 2 {
        Some(oracle.hessian(x).ok_or_else(|| oracle_err("missing hessian"))?)
    } else {
        None
    };
    Ok(SideData {
        value,
        gradient,
        hessian,
        order,
    })
}

/// `(M / (p+1)!) ‖h‖^{p+1}`.
pub fn regularizer_value(weight: f64, order: usize, h: &DVector<f64>) -> f64 {
    weight / factorial(order + 1) * h.norm().powi(order as i32 + 1)
}

/// Gradient of [`regularizer_value`]: `(M / p!) ‖h‖^{p-1} h`, zero at `h = 0`.
pub fn regularizer_gradient(weight: f64, order: usize, h: &DVector<f64>) -> DVector<f64> {
    let r = h.norm();
    if r == 0.0 {
        return DVector::zeros(h.len());
    }
    h * (weight / factorial(order) * r.powi(order as i32 - 1))
}

impl<'a> ModelAnchor<'a> {
    /// Caches `f` to order `p` and `g` to order `q` at `x`.
    pub fn new(problem: &'a DcProblem, x: &DVector<f64>, p: usize, q: usize) -> Result<Self> {
        check_dim(problem.dimension(), x.len())?;
        problem.require_orders(p, q)?;
        Ok(Self {
            x: x.clone(),
            f: side_data(problem.f.as_ref(), x, p, "f")?,
            g: side_data(problem.g.as_ref(), x, q, "g")?,
            f_oracle: problem.f.as_ref(),
            g_oracle: problem.g.as_ref(),
        })
    }

    fn side(&self, which: Side) -> (&SideData, &dyn SmoothOracle) {
        match which {
            Side::F => (&self.f, self.f_oracle),
            Side::G => (&self.g, self.g_oracle),
        }
    }

    fn check_order(&self, which: Side, order: usize) -> Result<()> {
        let cached = self.side(which).0.order;
        if order == 0 || order > cached {
            return Err(Error::Input(format!(
                "Taylor order {order} requested for {which:?}, anchor caches up to {cached}"
            )));
        }
        Ok(())
    }

    /// `D³φ(x)[h]` for the anchor's `x`.
    fn third(&self, oracle: &dyn SmoothOracle, h: &DVector<f64>) -> Result<DMatrix<f64>> {
        oracle.third_derivative_apply(&self.x, h).ok_or_else(|| Error::Oracle {
            point: self.x.iter().copied().collect(),
            message: "missing third derivative".into(),
        })
    }

    /// `φ(x) + Σ_{i=1}^{order} D^iφ(x)[y-x]^i / i!`.
    pub fn taylor_value(&self, which: Side, order: usize, y: &DVector<f64>) -> Result<f64> {
        self.check_order(which, order)?;
        check_dim(self.x.len(), y.len())?;
        let (data, oracle) = self.side(which);
        let h = y - &self.x;
        let mut value = data.value + data.gradient.dot(&h);
        if order >= 2 {
            let hess = data.hessian.as_ref().expect("cached hessian");
            value += 0.5 * h.dot(&(hess * &h));
        }
        if order >= 3 {
            value += h.dot(&(self.third(oracle, &h)? * &h)) / 6.0;
        }
        Ok(value)
    }

    /// `∇_y T_order^φ(y; x)`.
    pub fn taylor_gradient(&self, which: Side, order: usize, y: &DVector<f64>) -> Result<DVector<f64>> {
        self.check_order(which, order)?;
        check_dim(self.x.len(), y.len())?;
        let (data, oracle) = self.side(which);
        let h = y - &self.x;
        let mut grad = data.gradient.clone();
        if order >= 2 {
            grad += data.hessian.as_ref().expect("cached hessian") * &h;
        }
        if order >= 3 {
            grad += self.third(oracle, &h)? * &h * 0.5;
        }
        Ok(grad)
    }

    /// The smooth part `T_{p,q}(y; x)` of the surrogate (everything but ψ).
    pub fn smooth_value(&self, params: &ModelParams, y: &DVector<f64>) -> Result<f64> {
        let h = y - &self.x;
        Ok(self.taylor_value(Side::F, params.p, y)? + regularizer_value(params.m_p, params.p, &h)
            - self.taylor_value(Side::G, params.q, y)?
            + regularizer_value(params.m_q, params.q, &h))
    }

    /// `m_p^q(y; x)`; `+∞` when `y ∉ dom ψ`.
    pub fn surrogate_value(
        &self,
        params: &ModelParams,
        psi: &dyn SimpleConvexTerm,
        y: &DVector<f64>,
    ) -> Result<f64> {
        if !psi.in_domain(y) {
            return Ok(f64::INFINITY);
        }
        Ok(self.smooth_value(params, y)? + psi.value(y))
    }

    /// `∇_y T_{p,q}(y; x)`.
    pub fn surrogate_gradient_smooth_part(
        &self,
        params: &ModelParams,
        y: &DVector<f64>,
    ) -> Result<DVector<f64>> {
        let h = y - &self.x;
        Ok(self.taylor_gradient(Side::F, params.p, y)?
            + regularizer_gradient(params.m_p, params.p, &h)
            - self.taylor_gradient(Side::G, params.q, y)?
            + regularizer_gradient(params.m_q, params.q, &h))
    }

    /// `F(x)` at the anchor, i.e. `m(x; x)`.
    pub fn anchor_objective(&self, psi: &dyn SimpleConvexTerm) -> f64 {
        if !psi.in_domain(&self.x) {
            return f64::INFINITY;
        }
        self.f.value + psi.value(&self.x) - self.g.value
    }
}
