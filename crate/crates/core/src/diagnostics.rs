//! Post-hoc audits of solver traces: per-step descent, summability of step
//! norms, the residual rate envelope and an empirical rate classification.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::factorial;
use crate::model::ModelParams;
use crate::solver::IterationRecord;
use crate::subsolvers::InnerStatus;

/// Audits of rate envelopes only consider `k` from here on.
pub const ENVELOPE_START: usize = 10;
pub const MIN_RATE_TRACE: usize = 10;

fn descent_slack(f: f64) -> f64 {
    1e-8 * (1.0 + f.abs())
}

/// `(M_p - L_p)/(p+1)!` and `(M_q - L_q)/(q+1)!` for one record.
fn margins(rec: &IterationRecord, params: &ModelParams, hints: (f64, f64)) -> (f64, f64) {
    (
        (rec.m_p_used - hints.0) / factorial(params.p + 1),
        (rec.m_q_used - hints.1) / factorial(params.q + 1),
    )
}

fn first_inapplicable(trace: &[IterationRecord], hints: (f64, f64)) -> Option<String> {
    trace.iter().skip(1).find(|r| r.m_p_used <= hints.0 || r.m_q_used <= hints.1).map(|r| {
        format!(
            "record {} uses M = ({}, {}) not above the hints ({}, {})",
            r.k, r.m_p_used, r.m_q_used, hints.0, hints.1
        )
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct Violation {
    pub k: usize,
    /// `rhs - lhs`, positive.
    pub gap: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct DescentAudit {
    /// `F(x_k) - F(x_{k+1})` for each step.
    pub per_step_lhs: Vec<f64>,
    /// Guaranteed decrease `2 sqrt(ab) s^{(p+q+2)/2}` for each step.
    pub per_step_rhs: Vec<f64>,
    pub violations: Vec<Violation>,
    pub applicable: bool,
    pub pass: bool,
    pub note: Option<String>,
}

/// Checks every step of `trace` against the guaranteed per-step decrease for
/// the regularization weights the step used, with slack `1e-8(1 + |F(x_k)|)`.
/// Violations are indexed by the record `k` of the step's end point.
pub fn audit_descent(trace: &[IterationRecord], params: &ModelParams, hints: (f64, f64)) -> DescentAudit {
    if let Some(note) = first_inapplicable(trace, hints) {
        return DescentAudit {
            per_step_lhs: Vec::new(),
            per_step_rhs: Vec::new(),
            violations: Vec::new(),
            applicable: false,
            pass: false,
            note: Some(format!("audit inapplicable: {note}")),
        };
    }
    let exponent = params.descent_exponent();
    let mut audit = DescentAudit {
        per_step_lhs: Vec::with_capacity(trace.len()),
        per_step_rhs: Vec::with_capacity(trace.len()),
        violations: Vec::new(),
        applicable: true,
        pass: true,
        note: None,
    };
    for w in trace.windows(2) {
        let (prev, next) = (&w[0], &w[1]);
        let (a, b) = margins(next, params, hints);
        let lhs = prev.f_value - next.f_value;
        let rhs = 2.0 * (a * b).sqrt() * next.step_norm.powf(exponent);
        if lhs < rhs - descent_slack(prev.f_value) {
            audit.violations.push(Violation { k: next.k, gap: rhs - lhs });
        }
        audit.per_step_lhs.push(lhs);
        audit.per_step_rhs.push(rhs);
    }
    audit.pass = audit.violations.is_empty();
    audit
}

#[derive(Debug, Clone, Serialize)]
pub struct SummabilityReport {
    pub lhs_sum: f64,
    pub rhs_cap: f64,
    pub pass: bool,
    pub note: Option<String>,
}

/// `Σ s_k^{(p+q+2)/2} <= (F(x_0) - F_lower) / (2 sqrt(ab))`, with `a`, `b`
/// the smallest margins over the trace.
pub fn summability_check(
    trace: &[IterationRecord],
    params: &ModelParams,
    hints: (f64, f64),
    f_lower: f64,
) -> SummabilityReport {
    let exponent = params.descent_exponent();
    let lhs_sum: f64 = trace.iter().skip(1).map(|r| r.step_norm.powf(exponent)).sum();
    let Some(first) = trace.first() else {
        return SummabilityReport {
            lhs_sum,
            rhs_cap: 0.0,
            pass: true,
            note: Some("empty trace".into()),
        };
    };
    if let Some(note) = first_inapplicable(trace, hints) {
        return SummabilityReport {
            lhs_sum,
            rhs_cap: f64::NAN,
            pass: false,
            note: Some(format!("check inapplicable: {note}")),
        };
    }
    let (a, b) = trace
        .iter()
        .skip(1)
        .map(|r| margins(r, params, hints))
        .fold((f64::INFINITY, f64::INFINITY), |acc, m| (acc.0.min(m.0), acc.1.min(m.1)));
    let gap = first.f_value - f_lower;
    if gap < 0.0 {
        return SummabilityReport {
            lhs_sum,
            rhs_cap: gap,
            pass: false,
            note: Some(format!(
                "misconfigured lower bound: F_lower = {f_lower} exceeds F(x0) = {}",
                first.f_value
            )),
        };
    }
    if !a.is_finite() {
        // Only the starting record: nothing to sum.
        return SummabilityReport {
            lhs_sum,
            rhs_cap: 0.0,
            pass: lhs_sum == 0.0,
            note: None,
        };
    }
    let denom = 2.0 * (a * b).sqrt();
    let rhs_cap = gap / denom;
    SummabilityReport {
        lhs_sum,
        rhs_cap,
        pass: lhs_sum <= rhs_cap + descent_slack(first.f_value) / denom,
        note: None,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    Sublinear,
    Linear,
    SuperlinearObserved,
}

#[derive(Debug, Clone, Serialize)]
pub struct EnvelopeCheck {
    /// Constant multiplying `k^{-2 min(p,q)/(p+q+2)}`.
    pub constant: f64,
    pub c_x: f64,
    pub c_pq: f64,
    /// Largest observed `inner_residual / s^{min(p,q)}`, added to `c_pq`.
    pub theta_eff: f64,
    pub f_lower: f64,
    /// Largest model residual of an exact inner solve, used as absolute slack.
    pub roundoff: f64,
    /// Records `k >= ENVELOPE_START` where the running minimum exceeds the envelope.
    pub violations: Vec<usize>,
    pub holds: bool,
}

/// Running minimum of `residual_bound` over records `1..=k` against
/// `C / (4ab)^{m/(p+q+2)} · (F(x_0) - F_lower)^{2m/(p+q+2)} / k^{2m/(p+q+2)}`
/// with `m = min(p,q)` and `C` built from the trace's largest step `C_x` and
/// largest weights. Returns `None` when some record's weights do not exceed
/// the hints.
pub fn check_rate_envelope(
    trace: &[IterationRecord],
    params: &ModelParams,
    hints: (f64, f64),
    f_lower: f64,
) -> Option<EnvelopeCheck> {
    if first_inapplicable(trace, hints).is_some() {
        return None;
    }
    let steps = trace.get(1..).unwrap_or(&[]);
    let (p, q) = (params.p as i32, params.q as i32);
    let m = params.min_order() as i32;
    let total = (p + q + 2) as f64;
    let c_x = steps.iter().map(|r| r.step_norm).fold(0.0, f64::max);
    let m_p = steps.iter().map(|r| r.m_p_used).fold(0.0, f64::max);
    let m_q = steps.iter().map(|r| r.m_q_used).fold(0.0, f64::max);
    let wp = (hints.0 + m_p) / factorial(params.p);
    let wq = (hints.1 + m_q) / factorial(params.q);
    let c_pq = if c_x > 0.0 {
        (wp * c_x.powi(p - q) + wq).max(wp + wq * c_x.powi(q - p))
    } else {
        wp + wq
    };
    // Inexact inner solves scale with the step; exact ones only carry roundoff,
    // which enters as an absolute slack instead.
    let exact = |r: &&IterationRecord| r.inner_status == Some(InnerStatus::Exact);
    let theta_eff = steps
        .iter()
        .filter(|r| !exact(r) && r.step_norm > 0.0)
        .map(|r| r.inner_residual / r.step_norm.powi(m))
        .fold(0.0, f64::max);
    let roundoff = steps.iter().filter(exact).map(|r| r.inner_residual).fold(0.0, f64::max);
    let (a, b) = steps
        .iter()
        .map(|r| margins(r, params, hints))
        .fold((f64::INFINITY, f64::INFINITY), |acc, mg| (acc.0.min(mg.0), acc.1.min(mg.1)));
    let f0 = trace.first().map_or(f_lower, |r| r.f_value);
    let rate = 2.0 * m as f64 / total;
    let constant = if steps.is_empty() {
        0.0
    } else {
        (c_pq + theta_eff) / (4.0 * a * b).powf(m as f64 / total) * (f0 - f_lower).max(0.0).powf(rate)
    };
    let mut running = f64::INFINITY;
    let mut violations = Vec::new();
    for (i, rec) in steps.iter().enumerate() {
        let k = i + 1;
        running = running.min(rec.residual_bound);
        let envelope = constant / (k as f64).powf(rate);
        if k >= ENVELOPE_START && running > envelope * (1.0 + 1e-9) + roundoff + 1e-14 {
            violations.push(k);
        }
    }
    Some(EnvelopeCheck {
        constant,
        c_x,
        c_pq,
        theta_eff,
        roundoff,
        f_lower,
        holds: violations.is_empty(),
        violations,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct RateFitReport {
    /// Slope of `log(running-min residual)` against `log k` over the tail.
    pub fitted_exponent: Option<f64>,
    /// `-2 min(p,q) / (p+q+2)`.
    pub theoretical_exponent: f64,
    pub regime: Option<Regime>,
    /// Local geometry exponent consistent with the observed sublinear rate.
    pub kl_r_estimate: Option<f64>,
    /// Ratio and `R²` of the geometric fit of `‖x_k - x_last‖` over the tail.
    pub geometric_ratio: Option<f64>,
    pub geometric_r2: Option<f64>,
    pub envelope: Option<EnvelopeCheck>,
    pub notes: Vec<String>,
}

/// Least-squares line `y = intercept + slope·x`; returns `(slope, intercept, R²)`.
fn linear_fit(xs: &[f64], ys: &[f64]) -> Option<(f64, f64, f64)> {
    let n = xs.len();
    if n < 3 {
        return None;
    }
    let mean_x = xs.iter().sum::<f64>() / n as f64;
    let mean_y = ys.iter().sum::<f64>() / n as f64;
    let sxx: f64 = xs.iter().map(|x| (x - mean_x).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mean_x) * (y - mean_y)).sum();
    let syy: f64 = ys.iter().map(|y| (y - mean_y).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    let r2 = if syy == 0.0 { 1.0 } else { (sxy * sxy) / (sxx * syy) };
    Some((slope, mean_y - slope * mean_x, r2))
}

fn median(values: &mut [f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    values.sort_by(f64::total_cmp);
    let mid = values.len() / 2;
    Some(if values.len().is_multiple_of(2) {
        0.5 * (values[mid - 1] + values[mid])
    } else {
        values[mid]
    })
}

fn distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt()
}

/// `-2 min(p,q) / (p+q+2)`: predicted log-log slope of the running-min residual.
pub fn theoretical_rate_exponent(params: &ModelParams) -> f64 {
    -2.0 * params.min_order() as f64 / (params.p + params.q + 2) as f64
}

/// Fits the observed rate on the tail of `trace` (the last `max(10, 30%)`
/// steps) and, when hints are given, checks the residual envelope.
/// `f_lower` defaults to the smallest objective value in the trace.
pub fn audit_rate(
    trace: &[IterationRecord],
    params: &ModelParams,
    hints: Option<(f64, f64)>,
    f_lower: Option<f64>,
) -> Result<RateFitReport> {
    if trace.len() < MIN_RATE_TRACE {
        return Err(Error::Input(format!(
            "rate audit needs at least {MIN_RATE_TRACE} records, got {}",
            trace.len()
        )));
    }
    let m = params.min_order() as f64;
    let mut report = RateFitReport {
        fitted_exponent: None,
        theoretical_exponent: theoretical_rate_exponent(params),
        regime: None,
        kl_r_estimate: None,
        geometric_ratio: None,
        geometric_r2: None,
        envelope: None,
        notes: Vec::new(),
    };

    let f_lower = match f_lower {
        Some(v) => v,
        None => {
            let best = trace.iter().map(|r| r.f_value).fold(f64::INFINITY, f64::min);
            report.notes.push(format!(
                "no known lower bound; envelope uses the best observed value F = {best} in place of F*"
            ));
            best
        }
    };
    if let Some(hints) = hints {
        report.envelope = check_rate_envelope(trace, params, hints, f_lower);
        if report.envelope.is_none() {
            report.notes.push("envelope check skipped: weights do not exceed the Lipschitz hints".into());
        }
    }

    let steps = &trace[1..];
    let window = steps.len().min(MIN_RATE_TRACE.max((0.3 * steps.len() as f64).ceil() as usize));
    let tail_start = steps.len() - window;

    // Running-min residual against k on the tail, zeros dropped.
    let mut running = f64::INFINITY;
    let mut log_k = Vec::new();
    let mut log_r = Vec::new();
    for (i, rec) in steps.iter().enumerate() {
        running = running.min(rec.residual_bound);
        if i >= tail_start && running > 0.0 && running.is_finite() {
            log_k.push(((i + 1) as f64).ln());
            log_r.push(running.ln());
        }
    }
    report.fitted_exponent = linear_fit(&log_k, &log_r).map(|(slope, _, _)| slope);

    let last = &trace[trace.len() - 1].x;
    let moved = trace.iter().any(|r| distance(&r.x, last) > 0.0);
    if !moved {
        report.fitted_exponent = None;
        report
            .notes
            .push("degenerate trace: the iterate never moves, so no rate can be fitted".into());
        return Ok(report);
    }
    if report.fitted_exponent.is_none() {
        report
            .notes
            .push("residuals vanish on the tail; the residual exponent is undefined".into());
    }

    // Distances to the final iterate on the tail, excluding the final record.
    let tail: Vec<(f64, f64)> = (tail_start..steps.len())
        .map(|i| ((i + 1) as f64, distance(&steps[i].x, last)))
        .filter(|(_, d)| *d > 0.0)
        .collect();
    let ks: Vec<f64> = tail.iter().map(|(k, _)| *k).collect();
    let log_d: Vec<f64> = tail.iter().map(|(_, d)| d.ln()).collect();
    let geometric = linear_fit(&ks, &log_d);
    if let Some((slope, _, r2)) = geometric {
        report.geometric_ratio = Some(slope.exp());
        report.geometric_r2 = Some(r2);
    }

    let ratios: Vec<f64> = steps
        .windows(2)
        .filter(|w| w[0].step_norm > 0.0)
        .map(|w| w[1].step_norm / w[0].step_norm)
        .collect();
    let superlinear = if ratios.len() >= 4 {
        let half = ratios.len() / 2;
        let early = median(&mut ratios[..half].to_vec());
        let late = median(&mut ratios[half..].to_vec());
        let last_ratio = *ratios.last().unwrap();
        matches!((early, late), (Some(e), Some(l)) if l < 0.25 * e) && last_ratio < 0.1
    } else {
        false
    };

    let linear = matches!(geometric, Some((slope, _, r2)) if r2 >= 0.9 && slope < 0.0);
    report.regime = Some(if superlinear {
        Regime::SuperlinearObserved
    } else if linear {
        Regime::Linear
    } else {
        Regime::Sublinear
    });

    match report.regime {
        Some(Regime::Sublinear) => {
            // ‖x_k - x*‖ ~ k^{-β} makes the steps decay like k^{-β-1}; fitting
            // steps avoids using the last iterate as a stand-in for x*.
            let (log_k, log_s): (Vec<f64>, Vec<f64>) = steps[tail_start..]
                .iter()
                .filter(|r| r.step_norm > 0.0)
                .map(|r| ((r.k as f64).ln(), r.step_norm.ln()))
                .unzip();
            match linear_fit(&log_k, &log_s) {
                Some((slope, _, _)) if slope < -1.0 => {
                    let beta = -slope - 1.0;
                    let a = beta / (1.0 + beta);
                    report.kl_r_estimate = Some(1.0 + a / m);
                }
                _ => report.notes.push("no decaying power law on the tail; r not estimated".into()),
            }
        }
        Some(_) => report
            .notes
            .push(format!("fast regime is consistent with (r - 1)·{m} >= 1; r is not identified")),
        None => {}
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracles::{builtin_problem, quad_minus_quad_instance};
    use crate::solver::{run_hodc, SolverConfig};
    use nalgebra::{DMatrix, DVector};
    use proptest::prelude::*;

    fn record(k: usize, x: f64, f: f64, step: f64, residual: f64) -> IterationRecord {
        IterationRecord {
            k,
            x: vec![x],
            f_value: f,
            step_norm: step,
            residual_bound: residual,
            m_p_used: 2.0,
            m_q_used: 2.0,
            doublings: 0,
            inner_iters: 1,
            inner_status: None,
            inner_residual: 0.0,
        }
    }

    /// `x_k = ρ^k`, `F = x²`.
    fn geometric_trace(rho: f64, len: usize) -> Vec<IterationRecord> {
        (0..len)
            .map(|k| {
                let x = rho.powi(k as i32);
                let step = if k == 0 { 0.0 } else { x / rho - x };
                record(k, x, x * x, step, x)
            })
            .collect()
    }

    /// `x_k = (k+1)^{-2}`, a sublinear trace.
    fn power_trace(len: usize) -> Vec<IterationRecord> {
        (0..len)
            .map(|k| {
                let x = ((k + 1) as f64).powi(-2);
                let step = if k == 0 { 0.0 } else { (k as f64).powi(-2) - x };
                record(k, x, x, step, step)
            })
            .collect()
    }

    fn quad_run(n: usize, seed: u64, p: usize, q: usize) -> (crate::DcProblem, ModelParams, Vec<IterationRecord>) {
        let problem = builtin_problem("quad_minus_quad", n, seed).unwrap();
        let params = ModelParams::from_hints(&problem, p, q, 1.5).unwrap();
        let out = run_hodc(&problem, &DVector::from_element(n, 1.0), &SolverConfig::fixed(params)).unwrap();
        (problem, params, out.trace)
    }

    #[test]
    fn single_record_passes_vacuously() {
        let params = ModelParams::new(1, 1, 2.0, 2.0).unwrap();
        let trace = vec![record(0, 1.0, 1.0, 0.0, 0.0)];
        let audit = audit_descent(&trace, &params, (1.0, 1.0));
        assert!(audit.pass && audit.violations.is_empty());
        let sum = summability_check(&trace, &params, (1.0, 1.0), 0.0);
        assert!(sum.pass);
        assert_eq!(sum.lhs_sum, 0.0);
    }

    #[test]
    fn quadratic_run_passes_audits() {
        let (problem, params, trace) = quad_run(5, 3, 1, 1);
        let hints = problem.lipschitz_pair(1, 1).unwrap();
        let audit = audit_descent(&trace, &params, hints);
        assert!(audit.pass, "{:?}", audit.violations);
        let sum = summability_check(&trace, &params, hints, problem.known_lower_bound.unwrap());
        assert!(sum.pass && sum.lhs_sum > 0.0, "{sum:?}");
    }

    #[test]
    fn injected_increase_is_flagged() {
        let (problem, params, mut trace) = quad_run(4, 8, 1, 1);
        let hints = problem.lipschitz_pair(1, 1).unwrap();
        trace[3].f_value = trace[2].f_value + 1.0;
        let audit = audit_descent(&trace, &params, hints);
        assert!(!audit.pass);
        assert_eq!(audit.violations[0].k, 3);
    }

    #[test]
    fn weights_below_hints_make_audit_inapplicable() {
        let params = ModelParams::new(1, 1, 2.0, 2.0).unwrap();
        let trace = geometric_trace(0.5, 5);
        let audit = audit_descent(&trace, &params, (3.0, 1.0));
        assert!(!audit.applicable && !audit.pass);
        assert!(audit.note.is_some());
    }

    #[test]
    fn inflated_lower_bound_is_misconfiguration() {
        let params = ModelParams::new(1, 1, 2.0, 2.0).unwrap();
        let trace = geometric_trace(0.5, 5);
        let sum = summability_check(&trace, &params, (1.0, 1.0), trace[0].f_value + 1.0);
        assert!(sum.rhs_cap < 0.0 && !sum.pass);
    }

    #[test]
    fn quadratic_run_is_linear() {
        let (problem, params, trace) = quad_run(6, 2, 1, 1);
        let hints = problem.lipschitz_pair(1, 1).unwrap();
        let report = audit_rate(&trace, &params, Some(hints), problem.known_lower_bound).unwrap();
        assert_eq!(report.regime, Some(Regime::Linear), "{report:?}");
        assert!(report.geometric_r2.unwrap() >= 0.9);
        assert!(report.envelope.unwrap().holds);
    }

    #[test]
    fn synthetic_regimes() {
        let params = ModelParams::new(1, 1, 2.0, 2.0).unwrap();
        let linear = audit_rate(&geometric_trace(0.7, 40), &params, None, Some(0.0)).unwrap();
        assert_eq!(linear.regime, Some(Regime::Linear));
        let sub = audit_rate(&power_trace(200), &params, None, Some(0.0)).unwrap();
        assert_eq!(sub.regime, Some(Regime::Sublinear));
        // ‖x_k - x_last‖ decays like k^{-2}, close to β = 2, so r ≈ 1 + 2/3.
        let r = sub.kl_r_estimate.unwrap();
        assert!(r > 1.5 && r < 1.7, "{r}");
    }

    #[test]
    fn constant_trace_is_degenerate() {
        let params = ModelParams::new(1, 1, 2.0, 2.0).unwrap();
        let trace: Vec<_> = (0..12).map(|k| record(k, 3.0, 1.0, 0.0, 0.0)).collect();
        let report = audit_rate(&trace, &params, None, None).unwrap();
        assert!(report.fitted_exponent.is_none());
        assert!(report.regime.is_none());
        assert!(report.notes.iter().any(|n| n.contains("degenerate")));
    }

    #[test]
    fn short_trace_is_rejected() {
        let params = ModelParams::new(1, 1, 2.0, 2.0).unwrap();
        assert!(audit_rate(&geometric_trace(0.5, 9), &params, None, None).is_err());
    }

    #[test]
    fn envelope_uses_trace_constants() {
        // A = I, μ = ½: one first-order step maps x to 0.75x.
        let problem = quad_minus_quad_instance(DMatrix::identity(2, 2), DVector::zeros(2), 0.5).unwrap();
        let params = ModelParams::new(1, 1, 1.5, 0.75).unwrap();
        let out = run_hodc(&problem, &DVector::from_vec(vec![1.0, 1.0]), &SolverConfig::fixed(params)).unwrap();
        let hints = problem.lipschitz_pair(1, 1).unwrap();
        let env = check_rate_envelope(&out.trace, &params, hints, 0.0).unwrap();
        assert!(env.holds);
        assert_eq!(env.c_x, out.trace[1].step_norm);
        assert!((env.c_pq - ((1.0 + 1.5) + (0.5 + 0.75))).abs() < 1e-12);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]
        #[test]
        fn rate_fit_is_scale_invariant(scale in 1e-3f64..1e3, rho in 0.3f64..0.9) {
            let params = ModelParams::new(1, 1, 2.0, 2.0).unwrap();
            let trace = geometric_trace(rho, 30);
            let scaled: Vec<_> = trace
                .iter()
                .cloned()
                .map(|mut r| { r.residual_bound *= scale; r })
                .collect();
            let a = audit_rate(&trace, &params, None, Some(0.0)).unwrap();
            let b = audit_rate(&scaled, &params, None, Some(0.0)).unwrap();
            prop_assert!((a.fitted_exponent.unwrap() - b.fitted_exponent.unwrap()).abs() < 1e-9);
            prop_assert_eq!(a.regime, b.regime);
        }
    }
}
