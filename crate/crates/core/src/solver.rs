//! Outer loops: fixed regularization and the adaptive doubling variant.

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::linalg::factorial;
use crate::model::{ModelAnchor, ModelParams};
use crate::oracles::DcProblem;
use crate::subsolvers::{solve_inner, InnerSolveResult, InnerStatus, DEFAULT_INNER_MAX_ITER};

/// Smallest regularization weight the adaptive update may reach.
pub const MIN_ADAPTIVE_WEIGHT: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Fixed,
    Adaptive,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SolverConfig {
    /// Regularization weights; in adaptive mode these are the initial values.
    pub params: ModelParams,
    pub mode: Mode,
    /// Sufficient-decrease constant of the adaptive acceptance test.
    pub gamma: f64,
    pub max_outer: usize,
    pub stop_step_norm: f64,
    pub stop_residual: f64,
    pub max_line_search_doublings: usize,
    pub inner_max_iter: usize,
}

impl SolverConfig {
    pub fn fixed(params: ModelParams) -> Self {
        Self {
            params,
            mode: Mode::Fixed,
            gamma: 1.0,
            max_outer: 500,
            stop_step_norm: 1e-9,
            stop_residual: 1e-8,
            max_line_search_doublings: 60,
            inner_max_iter: DEFAULT_INNER_MAX_ITER,
        }
    }

    pub fn adaptive(params: ModelParams, gamma: f64) -> Self {
        Self {
            mode: Mode::Adaptive,
            gamma,
            ..Self::fixed(params)
        }
    }

    pub fn with_max_outer(mut self, max_outer: usize) -> Self {
        self.max_outer = max_outer;
        self
    }

    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        if self.mode == Mode::Adaptive && !(self.gamma > 0.0 && self.gamma.is_finite()) {
            return Err(Error::Input(format!("gamma must be positive, got {}", self.gamma)));
        }
        if !(self.stop_step_norm >= 0.0) || !(self.stop_residual >= 0.0) {
            return Err(Error::Input("stopping thresholds must be nonnegative".into()));
        }
        Ok(())
    }
}

/// One row of the solver trace. Record `k = 0` describes the starting point.
#[derive(Debug, Clone, Serialize)]
pub struct IterationRecord {
    pub k: usize,
    pub x: Vec<f64>,
    #[serde(rename = "F")]
    pub f_value: f64,
    /// `‖x_k - x_{k-1}‖`; zero for `k = 0`.
    pub step_norm: f64,
    /// Upper bound on `dist(0, ∂F(x_k))`: the Taylor-remainder bound when the
    /// problem has Lipschitz hints, otherwise the proximal residual.
    pub residual_bound: f64,
    #[serde(rename = "M_p_used")]
    pub m_p_used: f64,
    #[serde(rename = "M_q_used")]
    pub m_q_used: f64,
    pub doublings: usize,
    pub inner_iters: usize,
    pub inner_status: Option<InnerStatus>,
    /// Model subgradient norm reported by the inner solver.
    pub inner_residual: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveStatus {
    ConvergedStep,
    ConvergedResidual,
    MaxIters,
    InnerFailure,
}

impl SolveStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::ConvergedStep => "converged_step",
            Self::ConvergedResidual => "converged_residual",
            Self::MaxIters => "max_iters",
            Self::InnerFailure => "inner_failure",
        }
    }

    pub fn converged(&self) -> bool {
        matches!(self, Self::ConvergedStep | Self::ConvergedResidual)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SolveOutcome {
    pub final_x: Vec<f64>,
    pub trace: Vec<IterationRecord>,
    pub status: SolveStatus,
    #[serde(rename = "F_final")]
    pub f_final: f64,
    pub message: Option<String>,
    pub warnings: Vec<String>,
}

/// `(1/t) ‖x - prox_{ψ,t}(x - t(∇f(x) - ∇g(x)))‖`; zero exactly at
/// stationary points.
pub fn stationarity_residual(problem: &DcProblem, x: &DVector<f64>, t: f64) -> Result<f64> {
    check_dim(problem.dimension(), x.len())?;
    if !(t > 0.0) {
        return Err(Error::Input(format!("prox step must be positive, got {t}")));
    }
    let direction = problem.f.gradient(x) - problem.g.gradient(x);
    let moved = problem.psi.prox(&(x - direction * t), t);
    Ok((x - moved).norm() / t)
}

fn residual_bound(
    problem: &DcProblem,
    params: &ModelParams,
    x_new: &DVector<f64>,
    step: f64,
    inner_residual: f64,
) -> Result<f64> {
    match problem.lipschitz_pair(params.p, params.q) {
        Some((lf, lg)) => Ok((lf + params.m_p) / factorial(params.p) * step.powi(params.p as i32)
            + (lg + params.m_q) / factorial(params.q) * step.powi(params.q as i32)
            + inner_residual),
        None => stationarity_residual(problem, x_new, 1.0 / (params.m_p + params.m_q)),
    }
}

struct Run<'a> {
    problem: &'a DcProblem,
    config: &'a SolverConfig,
    trace: Vec<IterationRecord>,
    warnings: Vec<String>,
    left_hint_box: bool,
}

impl<'a> Run<'a> {
    fn start(problem: &'a DcProblem, x0: &DVector<f64>, config: &'a SolverConfig) -> Result<(Self, f64)> {
        config.validate()?;
        check_dim(problem.dimension(), x0.len())?;
        problem.require_orders(config.params.p, config.params.q)?;
        if !problem.psi.in_domain(x0) {
            return Err(Error::Input("x0 is outside the domain of psi".into()));
        }
        let f0 = problem.objective(x0)?;
        let params = &config.params;
        let r0 = stationarity_residual(problem, x0, 1.0 / (params.m_p + params.m_q))?;
        let mut run = Self {
            problem,
            config,
            trace: Vec::with_capacity(config.max_outer.min(10_000) + 1),
            warnings: Vec::new(),
            left_hint_box: false,
        };
        run.trace.push(IterationRecord {
            k: 0,
            x: x0.iter().copied().collect(),
            f_value: f0,
            step_norm: 0.0,
            residual_bound: r0,
            m_p_used: params.m_p,
            m_q_used: params.m_q,
            doublings: 0,
            inner_iters: 0,
            inner_status: None,
            inner_residual: 0.0,
        });
        Ok((run, f0))
    }

    fn warn(&mut self, message: String) {
        log::warn!("{message}");
        self.warnings.push(message);
    }

    fn check_hint_box(&mut self, x: &DVector<f64>) {
        if let Some(radius) = self.problem.hint_radius {
            if !self.left_hint_box && x.amax() > radius {
                self.left_hint_box = true;
                self.warn(format!(
                    "iterate left the box |x|_inf <= {radius} on which the Lipschitz hints hold"
                ));
            }
        }
    }

    /// Appends a record and returns the stopping status it triggers, if any.
    fn push(
        &mut self,
        x_new: &DVector<f64>,
        f_new: f64,
        step: f64,
        used: &ModelParams,
        doublings: usize,
        inner: &InnerSolveResult,
    ) -> Result<Option<SolveStatus>> {
        let bound = residual_bound(self.problem, used, x_new, step, inner.model_subgradient_norm_bound)?;
        let k = self.trace.len();
        self.trace.push(IterationRecord {
            k,
            x: x_new.iter().copied().collect(),
            f_value: f_new,
            step_norm: step,
            residual_bound: bound,
            m_p_used: used.m_p,
            m_q_used: used.m_q,
            doublings,
            inner_iters: inner.iterations,
            inner_status: Some(inner.status),
            inner_residual: inner.model_subgradient_norm_bound,
        });
        if inner.status == InnerStatus::MaxIter {
            self.warn(format!("inner solver hit its iteration cap at outer iteration {k}"));
        }
        self.check_hint_box(x_new);
        Ok(if step < self.config.stop_step_norm {
            Some(SolveStatus::ConvergedStep)
        } else if bound < self.config.stop_residual {
            Some(SolveStatus::ConvergedResidual)
        } else {
            None
        })
    }

    fn finish(self, x: DVector<f64>, f: f64, status: SolveStatus, message: Option<String>) -> SolveOutcome {
        SolveOutcome {
            final_x: x.iter().copied().collect(),
            trace: self.trace,
            status,
            f_final: f,
            message,
            warnings: self.warnings,
        }
    }
}

/// Runs the fixed-regularization method; each step moves to a certified
/// stationary point of the surrogate at the current iterate.
pub fn run_hodc(problem: &DcProblem, x0: &DVector<f64>, config: &SolverConfig) -> Result<SolveOutcome> {
    let (mut run, mut f) = Run::start(problem, x0, config)?;
    let params = config.params;
    if let Some((lf, lg)) = problem.lipschitz_pair(params.p, params.q) {
        if params.m_p <= lf || params.m_q <= lg {
            run.warn(format!(
                "M_p = {}, M_q = {} do not exceed the Lipschitz hints ({lf}, {lg}); descent is not guaranteed",
                params.m_p, params.m_q
            ));
        }
    }
    let psi = problem.psi.as_ref();
    let mut x = x0.clone();
    for k in 0..config.max_outer {
        let anchor = ModelAnchor::new(problem, &x, params.p, params.q)?;
        let inner = match solve_inner(&anchor, &params, psi, config.inner_max_iter) {
            Ok(inner) => inner,
            Err(Error::Numerical(msg)) => {
                return Ok(run.finish(x, f, SolveStatus::InnerFailure, Some(msg)));
            }
            Err(e) => return Err(e),
        };
        let f_new = problem.objective(&inner.y)?;
        if f_new > f + 1e-8 * (1.0 + f.abs()) {
            run.warn(format!("objective increased at iteration {}: {f} -> {f_new}", k + 1));
        }
        let step = (&inner.y - &x).norm();
        let stop = run.push(&inner.y, f_new, step, &params, 0, &inner)?;
        x = inner.y;
        f = f_new;
        if let Some(status) = stop {
            return Ok(run.finish(x, f, status, None));
        }
    }
    Ok(run.finish(x, f, SolveStatus::MaxIters, None))
}

/// Runs the adaptive method. At each iterate both weights are doubled together
/// until `F(y) <= F(x) - γ‖y - x‖^{(p+q+2)/2}`; after acceptance with `i`
/// doublings the next weights are `2^{i-1}` times the current ones, so an
/// immediate acceptance halves them.
pub fn run_ahodc(problem: &DcProblem, x0: &DVector<f64>, config: &SolverConfig) -> Result<SolveOutcome> {
    let (mut run, mut f) = Run::start(problem, x0, config)?;
    if config.mode != Mode::Adaptive {
        return Err(Error::Input("run_ahodc needs an adaptive configuration".into()));
    }
    let base = config.params;
    let exponent = base.descent_exponent();
    let psi = problem.psi.as_ref();
    let mut x = x0.clone();
    let (mut m_p, mut m_q) = (base.m_p, base.m_q);

    for k in 0..config.max_outer {
        let anchor = ModelAnchor::new(problem, &x, base.p, base.q)?;
        let mut accepted = None;
        for i in 0..=config.max_line_search_doublings {
            let scale = 2f64.powi(i as i32);
            let trial = base.with_regularization(scale * m_p, scale * m_q);
            let inner = match solve_inner(&anchor, &trial, psi, config.inner_max_iter) {
                Ok(inner) => inner,
                Err(Error::Numerical(msg)) => {
                    return Ok(run.finish(x, f, SolveStatus::InnerFailure, Some(msg)));
                }
                Err(e) => return Err(e),
            };
            let f_new = problem.objective(&inner.y)?;
            let step = (&inner.y - &x).norm();
            if f_new <= f - config.gamma * step.powf(exponent) {
                accepted = Some((i, trial, inner, f_new, step));
                break;
            }
        }
        let Some((i, trial, inner, f_new, step)) = accepted else {
            let msg = format!(
                "line search exceeded {} doublings at iteration {}; check the oracles and the convexity of f and g",
                config.max_line_search_doublings,
                k + 1
            );
            return Ok(run.finish(x, f, SolveStatus::InnerFailure, Some(msg)));
        };
        let stop = run.push(&inner.y, f_new, step, &trial, i, &inner)?;
        let factor = 2f64.powi(i as i32 - 1);
        m_p = (factor * m_p).max(MIN_ADAPTIVE_WEIGHT);
        m_q = (factor * m_q).max(MIN_ADAPTIVE_WEIGHT);
        x = inner.y;
        f = f_new;
        if let Some(status) = stop {
            return Ok(run.finish(x, f, status, None));
        }
    }
    Ok(run.finish(x, f, SolveStatus::MaxIters, None))
}

pub fn run(problem: &DcProblem, x0: &DVector<f64>, config: &SolverConfig) -> Result<SolveOutcome> {
    match config.mode {
        Mode::Fixed => run_hodc(problem, x0, config),
        Mode::Adaptive => run_ahodc(problem, x0, config),
    }
}
