//! Run specifications: everything needed to reproduce one solve.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use hodc::model::MIN_REGULARIZATION;
use hodc::oracles::{builtin_problem, BUILTIN_NAMES};
use hodc::{DcProblem, Mode, ModelParams, SolverConfig};
use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::CliError;

/// Sufficient-decrease constant used when an adaptive spec leaves it unset.
pub const DEFAULT_GAMMA: f64 = 0.1;
/// Regularization multiple of the Lipschitz hints used when a fixed spec leaves `M` unset.
pub const DEFAULT_HINT_FACTOR: f64 = 1.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum X0Policy {
    Zeros,
    Ones,
    /// Uniform entries in `[-1, 1]` drawn from this seed.
    Random(u64),
}

impl X0Policy {
    pub fn point(&self, n: usize) -> DVector<f64> {
        match *self {
            X0Policy::Zeros => DVector::zeros(n),
            X0Policy::Ones => DVector::from_element(n, 1.0),
            X0Policy::Random(seed) => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                DVector::from_fn(n, |_, _| rng.random_range(-1.0..=1.0))
            }
        }
    }
}

impl FromStr for X0Policy {
    type Err = String;

    /// Accepts `zeros`, `ones`, `random` (seed 0) or `random:<seed>`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "zeros" => Ok(X0Policy::Zeros),
            "ones" => Ok(X0Policy::Ones),
            "random" => Ok(X0Policy::Random(0)),
            other => other
                .strip_prefix("random:")
                .and_then(|seed| seed.parse().ok())
                .map(X0Policy::Random)
                .ok_or_else(|| format!("expected zeros, ones or random:<seed>, got '{other}'")),
        }
    }
}

impl fmt::Display for X0Policy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            X0Policy::Zeros => f.write_str("zeros"),
            X0Policy::Ones => f.write_str("ones"),
            X0Policy::Random(seed) => write!(f, "random:{seed}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TraceFormat {
    Csv,
    Json,
}

impl TraceFormat {
    pub fn extension(&self) -> &'static str {
        match self {
            TraceFormat::Csv => "csv",
            TraceFormat::Json => "json",
        }
    }
}

impl FromStr for TraceFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(TraceFormat::Csv),
            "json" => Ok(TraceFormat::Json),
            other => Err(format!("expected csv or json, got '{other}'")),
        }
    }
}

pub fn parse_mode(s: &str) -> Result<Mode, String> {
    match s {
        "fixed" => Ok(Mode::Fixed),
        "adaptive" => Ok(Mode::Adaptive),
        other => Err(format!("expected fixed or adaptive, got '{other}'")),
    }
}

pub fn mode_name(mode: Mode) -> &'static str {
    match mode {
        Mode::Fixed => "fixed",
        Mode::Adaptive => "adaptive",
    }
}

/// One solve, fully determined by its fields. Field names match the JSON
/// accepted by `--config`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunSpec {
    pub problem_name: String,
    pub n: usize,
    pub seed: u64,
    pub p: usize,
    pub q: usize,
    pub mode: Mode,
    #[serde(rename = "M_p")]
    pub m_p: Option<f64>,
    #[serde(rename = "M_q")]
    pub m_q: Option<f64>,
    #[serde(rename = "M_p0")]
    pub m_p0: Option<f64>,
    #[serde(rename = "M_q0")]
    pub m_q0: Option<f64>,
    pub gamma: Option<f64>,
    pub theta: Option<f64>,
    pub x0_policy: X0Policy,
    pub max_outer: usize,
    pub output_path: Option<PathBuf>,
    pub format: TraceFormat,
}

impl Default for RunSpec {
    fn default() -> Self {
        Self {
            problem_name: "quad_minus_quad".into(),
            n: 10,
            seed: 0,
            p: 2,
            q: 1,
            mode: Mode::Fixed,
            m_p: None,
            m_q: None,
            m_p0: None,
            m_q0: None,
            gamma: None,
            theta: None,
            x0_policy: X0Policy::Ones,
            max_outer: 500,
            output_path: None,
            format: TraceFormat::Csv,
        }
    }
}

/// A spec resolved into the objects the solver consumes.
pub struct Prepared {
    pub problem: DcProblem,
    pub x0: DVector<f64>,
    pub config: SolverConfig,
    pub hints: Option<(f64, f64)>,
}

fn positive(name: &str, value: Option<f64>) -> Result<(), CliError> {
    match value {
        Some(v) if !(v > 0.0 && v.is_finite()) => {
            Err(CliError::Input(format!("{name} must be positive and finite, got {v}")))
        }
        _ => Ok(()),
    }
}

impl RunSpec {
    pub fn validate(&self) -> Result<(), CliError> {
        if !BUILTIN_NAMES.contains(&self.problem_name.as_str()) {
            return Err(CliError::Input(format!(
                "unknown problem '{}'; available: {}",
                self.problem_name,
                BUILTIN_NAMES.join(", ")
            )));
        }
        if self.n == 0 {
            return Err(CliError::Input("n must be at least 1".into()));
        }
        for (name, order) in [("p", self.p), ("q", self.q)] {
            if !(1..=3).contains(&order) {
                return Err(CliError::Input(format!("{name} must be 1, 2 or 3, got {order}")));
            }
        }
        if self.max_outer == 0 {
            return Err(CliError::Input("max_outer must be at least 1".into()));
        }
        positive("M_p", self.m_p)?;
        positive("M_q", self.m_q)?;
        positive("M_p0", self.m_p0)?;
        positive("M_q0", self.m_q0)?;
        positive("gamma", self.gamma)?;
        positive("theta", self.theta)?;
        Ok(())
    }

    /// Trace path, defaulting to `trace.<format>` in the working directory.
    pub fn trace_path(&self) -> PathBuf {
        self.output_path
            .clone()
            .unwrap_or_else(|| PathBuf::from(format!("trace.{}", self.format.extension())))
    }

    /// Audit path: the trace path with its extension replaced by `audit.json`.
    pub fn audit_path(&self) -> PathBuf {
        self.trace_path().with_extension("audit.json")
    }

    /// Builds the problem, starting point and solver configuration.
    ///
    /// Unset weights fall back to the problem's Lipschitz hints: `1.5·L` in
    /// fixed mode, `γ + L` for the initial weights in adaptive mode.
    pub fn prepare(&self) -> Result<Prepared, CliError> {
        self.validate()?;
        let problem = builtin_problem(&self.problem_name, self.n, self.seed)?;
        let hints = problem.lipschitz_pair(self.p, self.q);
        let need_hints = || {
            hints.ok_or_else(|| {
                CliError::Input(format!(
                    "problem '{}' has no Lipschitz hints for p={}, q={}; set the weights explicitly",
                    self.problem_name, self.p, self.q
                ))
            })
        };
        let (m_p, m_q, gamma) = match self.mode {
            Mode::Fixed => {
                let (m_p, m_q) = match (self.m_p, self.m_q) {
                    (Some(a), Some(b)) => (a, b),
                    (a, b) => {
                        let (lf, lg) = need_hints()?;
                        (
                            a.unwrap_or(DEFAULT_HINT_FACTOR * lf.max(MIN_REGULARIZATION)),
                            b.unwrap_or(DEFAULT_HINT_FACTOR * lg.max(MIN_REGULARIZATION)),
                        )
                    }
                };
                (m_p, m_q, self.gamma.unwrap_or(DEFAULT_GAMMA))
            }
            Mode::Adaptive => {
                let gamma = self.gamma.unwrap_or(DEFAULT_GAMMA);
                let (m_p, m_q) = match (self.m_p0, self.m_q0) {
                    (Some(a), Some(b)) => (a, b),
                    (a, b) => {
                        let (lf, lg) = need_hints()?;
                        (a.unwrap_or(gamma + lf), b.unwrap_or(gamma + lg))
                    }
                };
                (m_p, m_q, gamma)
            }
        };
        let mut params = ModelParams::new(self.p, self.q, m_p, m_q)?;
        if let Some(theta) = self.theta {
            params = params.with_theta(theta)?;
        }
        let mut config = match self.mode {
            Mode::Fixed => SolverConfig::fixed(params),
            Mode::Adaptive => SolverConfig::adaptive(params, gamma),
        };
        config.max_outer = self.max_outer;
        Ok(Prepared {
            x0: self.x0_policy.point(self.n),
            problem,
            config,
            hints,
        })
    }
}
