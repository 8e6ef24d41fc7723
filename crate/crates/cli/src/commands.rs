use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use hodc::diagnostics::{
    audit_descent, audit_rate, summability_check, theoretical_rate_exponent, DescentAudit, RateFitReport, SummabilityReport,
};
use hodc::{run, stationarity_residual, IterationRecord, ModelParams, SolveOutcome, SolveStatus};
use nalgebra::DVector;
use rayon::prelude::*;
use serde::Serialize;

use crate::spec::{mode_name, RunSpec, TraceFormat};
use crate::CliError;

pub const TRACE_COLUMNS: [&str; 9] = [
    "k",
    "F",
    "step_norm",
    "residual_bound",
    "M_p_used",
    "M_q_used",
    "doublings",
    "inner_iters",
    "inner_status",
];

#[derive(Debug, Clone, Serialize)]
pub struct OutcomeSummary {
    pub status: SolveStatus,
    pub iterations: usize,
    #[serde(rename = "F_final")]
    pub f_final: f64,
    pub final_x: Vec<f64>,
    /// Proximal stationarity residual at the final point, step `1/(M_p + M_q)`.
    pub final_residual: f64,
    pub message: Option<String>,
    pub warnings: Vec<String>,
}

/// Contents of the audit JSON written next to each trace.
#[derive(Debug, Clone, Serialize)]
pub struct AuditReport {
    pub spec: RunSpec,
    pub params: ModelParams,
    pub lipschitz_hints: Option<(f64, f64)>,
    pub outcome: OutcomeSummary,
    pub descent_audit: Option<DescentAudit>,
    pub summability: Option<SummabilityReport>,
    pub rate_fit: Option<RateFitReport>,
    pub rate_fit_error: Option<String>,
}

pub struct RunReport {
    pub outcome: SolveOutcome,
    pub audit: AuditReport,
}

/// Solves `spec` and runs every audit the available hints allow.
pub fn execute(spec: &RunSpec) -> Result<RunReport, CliError> {
    let prepared = spec.prepare()?;
    let problem = &prepared.problem;
    let params = prepared.config.params;
    let outcome = run(problem, &prepared.x0, &prepared.config)?;

    let final_x = DVector::from_vec(outcome.final_x.clone());
    let final_residual = stationarity_residual(problem, &final_x, 1.0 / (params.m_p + params.m_q))?;
    let descent_audit = prepared.hints.map(|h| audit_descent(&outcome.trace, &params, h));
    let summability = match (prepared.hints, problem.known_lower_bound) {
        (Some(h), Some(lower)) => Some(summability_check(&outcome.trace, &params, h, lower)),
        _ => None,
    };
    let (rate_fit, rate_fit_error) =
        match audit_rate(&outcome.trace, &params, prepared.hints, problem.known_lower_bound) {
            Ok(report) => (Some(report), None),
            Err(e) => (None, Some(e.to_string())),
        };

    let audit = AuditReport {
        spec: spec.clone(),
        params,
        lipschitz_hints: prepared.hints,
        outcome: OutcomeSummary {
            status: outcome.status,
            iterations: outcome.trace.len().saturating_sub(1),
            f_final: outcome.f_final,
            final_x: outcome.final_x.clone(),
            final_residual,
            message: outcome.message.clone(),
            warnings: outcome.warnings.clone(),
        },
        descent_audit,
        summability,
        rate_fit,
        rate_fit_error,
    };
    Ok(RunReport { outcome, audit })
}

/// Shortest round-trip text for `v`, in scientific notation when very small or large.
fn num(v: f64) -> String {
    let a = v.abs();
    if a == 0.0 || !a.is_finite() || (1e-4..1e15).contains(&a) {
        v.to_string()
    } else {
        format!("{v:e}")
    }
}

/// One CSV row per record, columns as in [`TRACE_COLUMNS`].
pub fn trace_to_csv(trace: &[IterationRecord]) -> String {
    let mut out = TRACE_COLUMNS.join(",");
    out.push('\n');
    for r in trace {
        let status = r.inner_status.map_or("none", |s| s.as_str());
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            r.k,
            num(r.f_value),
            num(r.step_norm),
            num(r.residual_bound),
            num(r.m_p_used),
            num(r.m_q_used),
            r.doublings,
            r.inner_iters,
            status
        );
    }
    out
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|source| CliError::Io { path: dir.to_path_buf(), source })?;
    }
    fs::write(path, contents).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("report types serialize");
    text.push('\n');
    text
}

pub fn write_trace(path: &Path, format: TraceFormat, trace: &[IterationRecord]) -> Result<(), CliError> {
    let body = match format {
        TraceFormat::Csv => trace_to_csv(trace),
        TraceFormat::Json => to_json(&trace),
    };
    write_file(path, &body)
}

/// Runs one spec and writes its trace and audit files. Returns the report
/// and the paths written.
pub fn run_command(spec: &RunSpec) -> Result<(RunReport, PathBuf, PathBuf), CliError> {
    let report = execute(spec)?;
    let trace_path = spec.trace_path();
    let audit_path = spec.audit_path();
    write_trace(&trace_path, spec.format, &report.outcome.trace)?;
    write_file(&audit_path, &to_json(&report.audit))?;
    Ok((report, trace_path, audit_path))
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    pub p: usize,
    pub q: usize,
    pub mode: &'static str,
    pub status: SolveStatus,
    /// Outer iterations when the run converged.
    pub iterations_to_tolerance: Option<usize>,
    pub final_residual: f64,
    pub fitted_exponent: Option<f64>,
    pub theoretical_exponent: f64,
}

impl SweepRow {
    const HEADER: &'static str =
        "p,q,mode,status,iterations_to_tolerance,final_residual,fitted_exponent,theoretical_exponent";

    fn csv_line(&self) -> String {
        let opt = |v: Option<String>| v.unwrap_or_default();
        format!(
            "{},{},{},{},{},{},{},{}",
            self.p,
            self.q,
            self.mode,
            self.status.as_str(),
            opt(self.iterations_to_tolerance.map(|k| k.to_string())),
            num(self.final_residual),
            opt(self.fitted_exponent.map(num)),
            num(self.theoretical_exponent)
        )
    }
}

fn check_homogeneous(grid: &[RunSpec]) -> Result<(), CliError> {
    let Some(first) = grid.first() else {
        return Err(CliError::Input("sweep grid is empty".into()));
    };
    for (i, spec) in grid.iter().enumerate().skip(1) {
        let differing = [
            ("problem_name", spec.problem_name != first.problem_name),
            ("n", spec.n != first.n),
            ("seed", spec.seed != first.seed),
            ("x0_policy", spec.x0_policy != first.x0_policy),
            ("max_outer", spec.max_outer != first.max_outer),
        ];
        if let Some((field, _)) = differing.iter().find(|(_, d)| *d) {
            return Err(CliError::Input(format!(
                "sweep entries must differ only in p, q and mode; entry {i} changes {field}"
            )));
        }
    }
    Ok(())
}

/// Runs every spec (in parallel), writes per-spec traces for specs that name
/// an output path, and writes the summary table to `summary_path` in grid order.
pub fn sweep_command(grid: &[RunSpec], summary_path: &Path) -> Result<Vec<SweepRow>, CliError> {
    check_homogeneous(grid)?;
    for spec in grid {
        spec.validate()?;
    }
    let rows = grid
        .par_iter()
        .map(|spec| {
            let report = match &spec.output_path {
                Some(_) => run_command(spec)?.0,
                None => execute(spec)?,
            };
            let audit = &report.audit;
            let status = audit.outcome.status;
            Ok(SweepRow {
                p: spec.p,
                q: spec.q,
                mode: mode_name(spec.mode),
                status,
                iterations_to_tolerance: status.converged().then_some(audit.outcome.iterations),
                final_residual: audit.outcome.final_residual,
                fitted_exponent: audit.rate_fit.as_ref().and_then(|r| r.fitted_exponent),
                theoretical_exponent: theoretical_rate_exponent(&audit.params),
            })
        })
        .collect::<Result<Vec<_>, CliError>>()?;

    let mut table = String::from(SweepRow::HEADER);
    table.push('\n');
    for row in &rows {
        table.push_str(&row.csv_line());
        table.push('\n');
    }
    write_file(summary_path, &table)?;
    Ok(rows)
}
