use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use hodc::{Mode, SolveStatus};
use hodc_cli::{parse_mode, run_command, sweep_command, CliError, RunSpec, TraceFormat, X0Policy};

/// Higher-order regularized DC solver: single runs and (p, q) sweeps.
#[derive(Parser)]
#[command(name = "hodc", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one problem; write its trace and an audit JSON.
    Run(RunArgs),
    /// Solve a grid of specs and write a summary table.
    Sweep(SweepArgs),
}

/// Flags override values loaded from `--config`.
#[derive(Args)]
struct SpecArgs {
    /// JSON file with RunSpec fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    problem: Option<String>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    x0: Option<X0Policy>,
    #[arg(long)]
    max_outer: Option<usize>,
    #[arg(long)]
    gamma: Option<f64>,
    /// Inner stopping multiplier.
    #[arg(long)]
    theta: Option<f64>,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    common: SpecArgs,
    #[arg(long)]
    p: Option<usize>,
    #[arg(long)]
    q: Option<usize>,
    #[arg(long, value_parser = parse_mode)]
    mode: Option<Mode>,
    #[arg(long = "Mp")]
    m_p: Option<f64>,
    #[arg(long = "Mq")]
    m_q: Option<f64>,
    #[arg(long = "Mp0")]
    m_p0: Option<f64>,
    #[arg(long = "Mq0")]
    m_q0: Option<f64>,
    /// Trace file; the audit goes next to it as `<stem>.audit.json`.
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long)]
    format: Option<TraceFormat>,
}

#[derive(Args)]
struct SweepArgs {
    /// JSON array of RunSpec objects. Without it the grid is built from
    /// `--orders` and `--modes` over the shared flags.
    #[arg(long)]
    grid: Option<PathBuf>,
    #[command(flatten)]
    common: SpecArgs,
    /// Orders as `p,q`; repeatable.
    #[arg(long = "orders", value_parser = parse_orders, default_values = ["1,1", "2,1", "1,2", "2,2"])]
    orders: Vec<(usize, usize)>,
    #[arg(long = "modes", value_parser = parse_mode, default_values = ["fixed"])]
    modes: Vec<Mode>,
    /// Summary CSV path.
    #[arg(long)]
    output: PathBuf,
}

fn parse_orders(s: &str) -> Result<(usize, usize), String> {
    let (p, q) = s.split_once(',').ok_or_else(|| format!("expected p,q, got '{s}'"))?;
    let parse = |t: &str| t.trim().parse::<usize>().map_err(|e| format!("'{t}': {e}"));
    Ok((parse(p)?, parse(q)?))
}

fn load_json<T: serde::de::DeserializeOwned>(path: &PathBuf) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

impl SpecArgs {
    fn base(&self) -> Result<RunSpec, CliError> {
        let mut spec = match &self.config {
            Some(path) => load_json(path)?,
            None => RunSpec::default(),
        };
        if let Some(v) = &self.problem {
            spec.problem_name = v.clone();
        }
        macro_rules! set {
            ($($field:ident => $target:ident),*) => {$(
                if let Some(v) = self.$field { spec.$target = v; }
            )*};
        }
        set!(n => n, seed => seed, x0 => x0_policy, max_outer => max_outer);
        spec.gamma = self.gamma.or(spec.gamma);
        spec.theta = self.theta.or(spec.theta);
        Ok(spec)
    }
}

impl RunArgs {
    fn spec(&self) -> Result<RunSpec, CliError> {
        let mut spec = self.common.base()?;
        spec.p = self.p.unwrap_or(spec.p);
        spec.q = self.q.unwrap_or(spec.q);
        spec.mode = self.mode.unwrap_or(spec.mode);
        spec.m_p = self.m_p.or(spec.m_p);
        spec.m_q = self.m_q.or(spec.m_q);
        spec.m_p0 = self.m_p0.or(spec.m_p0);
        spec.m_q0 = self.m_q0.or(spec.m_q0);
        spec.format = self.format.unwrap_or(spec.format);
        spec.output_path = self.output.clone().or(spec.output_path);
        Ok(spec)
    }
}

impl SweepArgs {
    fn grid(&self) -> Result<Vec<RunSpec>, CliError> {
        if let Some(path) = &self.grid {
            return load_json(path);
        }
        let base = self.common.base()?;
        Ok(self
            .modes
            .iter()
            .flat_map(|&mode| {
                let base = &base;
                self.orders.iter().map(move |&(p, q)| RunSpec { p, q, mode, ..base.clone() })
            })
            .collect())
    }
}

fn run(args: &RunArgs) -> Result<ExitCode, CliError> {
    let spec = args.spec()?;
    let (report, trace_path, audit_path) = run_command(&spec)?;
    let outcome = &report.audit.outcome;
    for warning in &outcome.warnings {
        eprintln!("hodc: warning: {warning}");
    }
    let summary = format!(
        "{} after {} iterations, F = {}, residual = {:e}; trace {}, audit {}",
        outcome.status.as_str(),
        outcome.iterations,
        outcome.f_final,
        outcome.final_residual,
        trace_path.display(),
        audit_path.display()
    );
    let code = match outcome.status {
        SolveStatus::ConvergedStep | SolveStatus::ConvergedResidual => 0,
        SolveStatus::MaxIters => 2,
        SolveStatus::InnerFailure => 3,
    };
    if code == 0 {
        println!("{summary}");
    } else {
        let detail = outcome.message.as_deref().map(|m| format!(" ({m})")).unwrap_or_default();
        eprintln!("hodc: {summary}{detail}");
    }
    Ok(ExitCode::from(code))
}

fn sweep(args: &SweepArgs) -> Result<ExitCode, CliError> {
    let grid = args.grid()?;
    let rows = sweep_command(&grid, &args.output)?;
    for row in &rows {
        println!(
            "p={} q={} {:<8} {:<18} fitted={} theoretical={:.4}",
            row.p,
            row.q,
            row.mode,
            row.status.as_str(),
            row.fitted_exponent.map_or("n/a".into(), |v| format!("{v:.4}")),
            row.theoretical_exponent
        );
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let _ = err.print();
            return ExitCode::from(if err.use_stderr() { 1 } else { 0 });
        }
    };
    let result = match &cli.command {
        Command::Run(args) => run(args),
        Command::Sweep(args) => sweep(args),
    };
    result.unwrap_or_else(|err| {
        eprintln!("hodc: {err}");
        ExitCode::from(err.exit_code() as u8)
    })
}
