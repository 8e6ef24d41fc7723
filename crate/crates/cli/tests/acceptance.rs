//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits nonzero when any criterion fails.

use std::path::Path;
use std::process::{Command, Stdio};

use hodc::diagnostics::{audit_descent, audit_rate, Regime, MIN_RATE_TRACE};
use hodc::model::ModelAnchor;
use hodc::oracles::{builtin_problem, check_derivatives, BUILTIN_NAMES};
use hodc::subsolvers::{solve_cubic_global, CubicSubproblem, SECULAR_TOL};
use hodc::{run, stationarity_residual, DcProblem, ModelParams, SolveOutcome, SolverConfig};
use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

const ORDERS: [(usize, usize); 4] = [(1, 1), (2, 1), (1, 2), (2, 2)];
const SWEEP: [(&str, usize); 4] =
    [("quad_minus_quad", 10), ("lasso_minus_concave", 10), ("lse_minus_lse", 5), ("poly_dc", 3)];
const SEED: u64 = 1;
const GAMMA: f64 = 0.1;

type Check<'a> = (&'static str, Box<dyn Fn() -> Verdict + 'a>);

struct Verdict {
    pass: bool,
    detail: String,
}

impl Verdict {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Self { pass, detail: detail.into() }
    }
}

fn supported(problem: &DcProblem, q: usize) -> bool {
    problem.psi.is_zero() || q == 1
}

struct SweepRun {
    label: String,
    problem: DcProblem,
    params: ModelParams,
    hints: (f64, f64),
    outcome: SolveOutcome,
}

/// Fixed-step runs with `M = 1.5·L` over every builtin and supported order pair.
fn fixed_sweep() -> Vec<SweepRun> {
    let mut runs = Vec::new();
    for (name, n) in SWEEP {
        let problem = builtin_problem(name, n, SEED).unwrap();
        for (p, q) in ORDERS {
            if !supported(&problem, q) {
                continue;
            }
            let params = ModelParams::from_hints(&problem, p, q, 1.5).unwrap();
            let hints = problem.lipschitz_pair(p, q).unwrap();
            let x0 = DVector::from_element(n, 1.0);
            let outcome = run(&problem, &x0, &SolverConfig::fixed(params)).unwrap();
            runs.push(SweepRun { label: format!("{name}({p},{q})"), problem: problem.clone(), params, hints, outcome });
        }
    }
    runs
}

// ---------------------------------------------------------------- 1

fn random_symmetric(rng: &mut ChaCha8Rng, n: usize) -> DMatrix<f64> {
    let a = DMatrix::from_fn(n, n, |_, _| rng.sample::<f64, _>(StandardNormal));
    (&a + a.transpose()) * 0.5
}

fn random_orthogonal(rng: &mut ChaCha8Rng, n: usize) -> DMatrix<f64> {
    let a = DMatrix::from_fn(n, n, |_, _| rng.sample::<f64, _>(StandardNormal));
    a.qr().q()
}

/// Best objective over a 401-point-per-axis grid covering every global
/// minimizer. The grid lives in the eigenbasis of `h`, where the objective
/// is separable apart from the cubic term.
fn grid_minimum(v: &DVector<f64>, h: &DMatrix<f64>, m: f64) -> f64 {
    const POINTS: usize = 401;
    let n = v.len();
    let eig = SymmetricEigen::new(h.clone());
    let w = eig.eigenvectors.transpose() * v;
    let lam_min = eig.eigenvalues.min();
    // ‖h*‖ <= (-λ_min + sqrt(λ_min² + 2M‖v‖)) / M at any global minimizer.
    let radius = 1.05 * (-lam_min + (lam_min * lam_min + 2.0 * m * v.norm()).sqrt()) / m + 1e-9;
    let ticks: Vec<f64> = (0..POINTS).map(|j| -radius + 2.0 * radius * j as f64 / (POINTS - 1) as f64).collect();
    let quad: Vec<Vec<f64>> = (0..n)
        .map(|i| ticks.iter().map(|&t| w[i] * t + 0.5 * eig.eigenvalues[i] * t * t).collect())
        .collect();
    let sq: Vec<f64> = ticks.iter().map(|t| t * t).collect();
    let cube = |s: f64| m / 6.0 * s * s.sqrt();
    let mut best = f64::INFINITY;
    match n {
        1 => {
            for a in 0..POINTS {
                best = best.min(quad[0][a] + cube(sq[a]));
            }
        }
        2 => {
            for a in 0..POINTS {
                for b in 0..POINTS {
                    best = best.min(quad[0][a] + quad[1][b] + cube(sq[a] + sq[b]));
                }
            }
        }
        3 => {
            for a in 0..POINTS {
                for b in 0..POINTS {
                    let (qab, sab) = (quad[0][a] + quad[1][b], sq[a] + sq[b]);
                    for c in 0..POINTS {
                        best = best.min(qab + quad[2][c] + cube(sab + sq[c]));
                    }
                }
            }
        }
        _ => unreachable!(),
    }
    best
}

fn criterion_cubic() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let masses = [0.5, 2.0, 10.0];
    let mut failures = Vec::new();
    let (mut hard_built, mut hard_flagged) = (0, 0);
    for i in 0..100 {
        let n = 1 + i % 3;
        let m = masses[(i / 3) % 3];
        let constructed_hard = i % 10 == 9;
        let (v, h) = if constructed_hard {
            // Negative, simple minimal eigenvalue; v orthogonal to its
            // eigenvector and small enough that the hard case is active.
            hard_built += 1;
            let q = random_orthogonal(&mut rng, n);
            let mut lam: Vec<f64> = (0..n).map(|k| if k == 0 { -1.5 } else { 0.5 + k as f64 }).collect();
            lam[0] -= rng.random_range(0.0..1.0);
            let h = &q * DMatrix::from_diagonal(&DVector::from_vec(lam)) * q.transpose();
            let mut coeffs = DVector::from_fn(n, |_, _| rng.sample::<f64, _>(StandardNormal) * 0.05);
            coeffs[0] = 0.0;
            (&q * coeffs, h)
        } else {
            let v = DVector::from_fn(n, |_, _| rng.sample::<f64, _>(StandardNormal));
            (v, random_symmetric(&mut rng, n))
        };
        let sub = CubicSubproblem::new(v.clone(), h.clone(), m).unwrap();
        let sol = solve_cubic_global(&sub, SECULAR_TOL).unwrap();
        if constructed_hard && sol.hard_case {
            hard_flagged += 1;
        }
        let objective = sub.objective(&sol.h_star);
        let grid = grid_minimum(&v, &h, m);
        let r = sol.h_star.norm();
        let stationarity = (&h * &sol.h_star + &sol.h_star * (0.5 * m * r) + &v).norm();
        let scale = 1e-8 * (1.0 + v.norm());
        let shifted = SymmetricEigen::new(&h + DMatrix::identity(n, n) * (0.5 * m * r)).eigenvalues.min();
        if objective > grid + 1e-3 {
            failures.push(format!("#{i}: objective {objective} above grid best {grid}"));
        }
        if stationarity > scale || (sol.r_star - r).abs() > scale {
            failures.push(format!("#{i}: secular residual {stationarity:e}, |r*-‖h‖| {:e}", (sol.r_star - r).abs()));
        }
        if shifted < -1e-8 {
            failures.push(format!("#{i}: λ_min(H + Mr/2 I) = {shifted:e}"));
        }
    }
    let pass = failures.is_empty() && hard_built >= 5 && hard_flagged == hard_built;
    let mut detail = format!("100 instances, {hard_built} constructed hard cases ({hard_flagged} flagged)");
    if !failures.is_empty() {
        detail += &format!("; {} failures, first: {}", failures.len(), failures[0]);
    }
    Verdict::new(pass, detail)
}

// ---------------------------------------------------------------- 2, 3, 4

fn criterion_descent(runs: &[SweepRun]) -> Verdict {
    let mut bad = Vec::new();
    for r in runs {
        let audit = audit_descent(&r.outcome.trace, &r.params, r.hints);
        if !audit.applicable || !audit.pass || !audit.violations.is_empty() {
            bad.push(format!("{} ({} violations, applicable={})", r.label, audit.violations.len(), audit.applicable));
        }
    }
    Verdict::new(bad.is_empty(), format!("{} runs audited; failing: {:?}", runs.len(), bad))
}

fn criterion_envelope(runs: &[SweepRun]) -> Verdict {
    let (mut checked, mut short) = (0, Vec::new());
    let mut bad = Vec::new();
    for r in runs {
        if r.outcome.trace.len() < MIN_RATE_TRACE {
            // No k >= 10 to check.
            short.push(r.label.clone());
            continue;
        }
        match audit_rate(&r.outcome.trace, &r.params, Some(r.hints), r.problem.known_lower_bound) {
            Ok(report) => match report.envelope {
                Some(env) if env.holds => checked += 1,
                Some(env) => bad.push(format!("{} (violations at k = {:?})", r.label, env.violations)),
                None => bad.push(format!("{} (envelope not computable)", r.label)),
            },
            Err(e) => bad.push(format!("{}: {e}", r.label)),
        }
    }
    Verdict::new(
        bad.is_empty(),
        format!("{checked} envelopes hold; converged before k = 10: {short:?}; failing: {bad:?}"),
    )
}

fn quad_stationary_point(problem: &DcProblem) -> DVector<f64> {
    let n = problem.dimension();
    let zero = DVector::zeros(n);
    let hess = problem.f.hessian(&zero).unwrap() - problem.g.hessian(&zero).unwrap();
    let rhs = problem.g.gradient(&zero) - problem.f.gradient(&zero);
    hess.cholesky().unwrap().solve(&rhs)
}

fn criterion_fixed_point(runs: &[SweepRun]) -> Verdict {
    let mut bad = Vec::new();
    let mut starts = 0;
    for (name, n) in [("poly_dc", 3), ("quad_minus_quad", 10)] {
        for seed in [SEED, 7] {
            let problem = builtin_problem(name, n, seed).unwrap();
            let x_star = match name {
                "poly_dc" => DVector::from_element(n, 6f64.sqrt()),
                _ => quad_stationary_point(&problem),
            };
            for (p, q) in ORDERS {
                starts += 1;
                let params = ModelParams::from_hints(&problem, p, q, 1.5).unwrap();
                let out = run(&problem, &x_star, &SolverConfig::fixed(params).with_max_outer(1)).unwrap();
                let step = out.trace.get(1).map_or(0.0, |r| r.step_norm);
                if step > 1e-10 {
                    bad.push(format!("{name}/{seed}({p},{q}) step {step:e}"));
                }
            }
        }
    }
    let mut worst: f64 = 0.0;
    for r in runs {
        let x = DVector::from_vec(r.outcome.final_x.clone());
        let res = stationarity_residual(&r.problem, &x, 1.0 / (r.params.m_p + r.params.m_q)).unwrap();
        worst = worst.max(res);
        if res > 1e-7 {
            bad.push(format!("{} final residual {res:e}", r.label));
        }
    }
    Verdict::new(
        bad.is_empty(),
        format!("{starts} stationary starts, {} runs from x0 = 1 (worst residual {worst:e}); failing: {bad:?}", runs.len()),
    )
}

// ---------------------------------------------------------------- 5

fn criterion_adaptive() -> Verdict {
    let mut with_doublings = Vec::new();
    let mut over_cap = Vec::new();
    let mut runs = 0;
    for (name, n) in SWEEP {
        let problem = builtin_problem(name, n, SEED).unwrap();
        let x0 = DVector::from_element(n, 1.0);
        for (p, q) in ORDERS {
            if !supported(&problem, q) {
                continue;
            }
            runs += 1;
            let (lf, lg) = problem.lipschitz_pair(p, q).unwrap();
            let informed = ModelParams::new(p, q, GAMMA + lf, GAMMA + lg).unwrap();
            let out = run(&problem, &x0, &SolverConfig::adaptive(informed, GAMMA)).unwrap();
            let total: usize = out.trace.iter().map(|r| r.doublings).sum();
            if total > 0 {
                let first = out.trace.iter().find(|r| r.doublings > 0).map_or(0, |r| r.k);
                with_doublings.push(format!("{name}({p},{q}): {total} from k={first}"));
            }

            let tiny = ModelParams::new(p, q, 1e-6, 1e-6).unwrap();
            let out = run(&problem, &x0, &SolverConfig::adaptive(tiny, GAMMA)).unwrap();
            let cap = ((GAMMA + lf.max(lg)) / 1e-6).log2().ceil() as usize + 1;
            let first = out.trace.get(1).map_or(0, |r| r.doublings);
            if first > cap {
                over_cap.push(format!("{name}({p},{q}): {first} > {cap}"));
            }
        }
    }
    Verdict::new(
        with_doublings.is_empty() && over_cap.is_empty(),
        format!(
            "{runs} configs; M0 = γ+L runs with doublings: {with_doublings:?}; M0 = 1e-6 first-iteration cap exceeded: {over_cap:?}"
        ),
    )
}

// ---------------------------------------------------------------- 6

fn criterion_linear_regime() -> Verdict {
    let mut classified = 0;
    let mut short = Vec::new();
    let mut bad = Vec::new();
    for seed in 1..=3 {
        let problem = builtin_problem("quad_minus_quad", 10, seed).unwrap();
        let x0 = DVector::from_element(10, 1.0);
        for (p, q) in ORDERS {
            let params = ModelParams::from_hints(&problem, p, q, 1.5).unwrap();
            let hints = problem.lipschitz_pair(p, q);
            let out = run(&problem, &x0, &SolverConfig::fixed(params)).unwrap();
            let label = format!("seed {seed} ({p},{q})");
            if out.trace.len() < MIN_RATE_TRACE {
                short.push(format!("{label}: {} records", out.trace.len()));
                continue;
            }
            let report = audit_rate(&out.trace, &params, hints, problem.known_lower_bound).unwrap();
            let r2 = report.geometric_r2.unwrap_or(f64::NAN);
            if report.regime == Some(Regime::Linear) && r2 >= 0.9 {
                classified += 1;
            } else {
                bad.push(format!("{label}: {:?}, R² {r2}", report.regime));
            }
        }
    }
    Verdict::new(
        bad.is_empty() && classified > 0,
        format!("{classified} traces linear with R² >= 0.9; too short to fit: {short:?}; failing: {bad:?}"),
    )
}

// ---------------------------------------------------------------- 7, 8

fn sample_points(rng: &mut ChaCha8Rng, problem: &DcProblem, count: usize, spread: f64) -> Vec<DVector<f64>> {
    let n = problem.dimension();
    let bound = problem.hint_radius.unwrap_or(f64::INFINITY);
    (0..count)
        .map(|_| DVector::from_fn(n, |_, _| (rng.sample::<f64, _>(StandardNormal) * spread).clamp(-bound, bound)))
        .collect()
}

fn criterion_derivatives() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let mut bad = Vec::new();
    let mut checked = Vec::new();
    for name in BUILTIN_NAMES {
        for n in [1, 4, 12] {
            let problem = builtin_problem(name, n, SEED).unwrap();
            let points = sample_points(&mut rng, &problem, 8, 2.0);
            for (side, oracle) in [("f", &problem.f), ("g", &problem.g)] {
                let report = check_derivatives(oracle.as_ref(), &points, 1e-4).unwrap();
                if n == 4 {
                    checked.push(format!("{name}.{side}:{}", oracle.derivative_order()));
                }
                if !report.pass {
                    bad.push(format!("{name}.{side} n={n}: {report:?}"));
                }
            }
        }
    }
    Verdict::new(bad.is_empty(), format!("oracles (name.side:order) {checked:?}; failing: {bad:?}"))
}

fn criterion_majorization() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut worst = f64::INFINITY;
    let mut bad = Vec::new();
    let mut pairs = 0;
    for name in BUILTIN_NAMES {
        let problem = builtin_problem(name, 6, SEED).unwrap();
        let orders: Vec<(usize, usize)> = (1..=problem.f.derivative_order())
            .flat_map(|p| (1..=problem.g.derivative_order()).map(move |q| (p, q)))
            .filter(|&(p, q)| problem.lipschitz_pair(p, q).is_some())
            .collect();
        let mut count = 0;
        while count < 1000 {
            let (p, q) = orders[count % orders.len()];
            let params = ModelParams::from_hints(&problem, p, q, 1.5).unwrap();
            let spread = rng.random_range(0.1..3.0);
            let pts = sample_points(&mut rng, &problem, 2, spread);
            let (x, y) = (&pts[0], &pts[1]);
            let anchor = ModelAnchor::new(&problem, x, p, q).unwrap();
            let model = anchor.surrogate_value(&params, problem.psi.as_ref(), y).unwrap();
            let gap = model - problem.objective(y).unwrap();
            worst = worst.min(gap);
            if gap < -1e-9 {
                bad.push(format!("{name}({p},{q}) gap {gap:e}"));
            }
            count += 1;
        }
        pairs += count;
    }
    Verdict::new(
        bad.is_empty(),
        format!("{pairs} pairs, smallest m(y;x) - F(y) = {worst:e}; failing: {:?}", &bad[..bad.len().min(5)]),
    )
}

// ---------------------------------------------------------------- 9

fn criterion_determinism() -> Verdict {
    let dir = tempfile::tempdir().unwrap();
    let exe = env!("CARGO_BIN_EXE_hodc");
    let mut mismatched = Vec::new();
    let specs: [&[&str]; 3] = [
        &["--problem", "lse_minus_lse", "--n", "6", "--seed", "3", "--p", "2", "--q", "2", "--x0", "random:5"],
        &["--problem", "lasso_minus_concave", "--n", "8", "--p", "2", "--q", "1", "--mode", "adaptive"],
        &["--problem", "poly_dc", "--n", "3", "--p", "1", "--q", "2", "--format", "json"],
    ];
    for (i, args) in specs.iter().enumerate() {
        let ext = if args.contains(&"json") { "json" } else { "csv" };
        let paths: Vec<_> = ["a", "b"].iter().map(|t| dir.path().join(format!("{i}{t}.{ext}"))).collect();
        for path in &paths {
            let status = Command::new(exe)
                .arg("run")
                .args(*args)
                .arg("--output")
                .arg(path)
                .stdout(Stdio::null())
                .stderr(Stdio::null())
                .status()
                .unwrap();
            assert!(status.code().is_some());
        }
        let read = |p: &Path| std::fs::read(p).unwrap();
        if read(&paths[0]) != read(&paths[1]) {
            mismatched.push(format!("spec {i} trace"));
        }
        let audits: Vec<_> = paths.iter().map(|p| p.with_extension("audit.json")).collect();
        // Audits embed the output path; compare everything else.
        let strip = |p: &Path| {
            let mut value: serde_json::Value = serde_json::from_slice(&read(p)).unwrap();
            value["spec"]["output_path"] = serde_json::Value::Null;
            value
        };
        if strip(&audits[0]) != strip(&audits[1]) {
            mismatched.push(format!("spec {i} audit"));
        }
    }
    Verdict::new(mismatched.is_empty(), format!("3 specs run twice; mismatches: {mismatched:?}"))
}

fn main() {
    let runs = fixed_sweep();
    let criteria: Vec<Check> = vec![
        ("cubic subproblem global optimality", Box::new(criterion_cubic)),
        ("descent inequality", Box::new(|| criterion_descent(&runs))),
        ("rate envelope", Box::new(|| criterion_envelope(&runs))),
        ("fixed point and stationarity", Box::new(|| criterion_fixed_point(&runs))),
        ("adaptive line search doublings", Box::new(criterion_adaptive)),
        ("linear regime on strongly convex quadratics", Box::new(criterion_linear_regime)),
        ("derivative integrity", Box::new(criterion_derivatives)),
        ("majorization", Box::new(criterion_majorization)),
        ("determinism", Box::new(criterion_determinism)),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = std::time::Instant::now();
        let verdict = check();
        if !verdict.pass {
            failed += 1;
        }
        println!(
            "criterion {}: {} - {name} [{:.1}s] {}",
            i + 1,
            if verdict.pass { "PASS" } else { "FAIL" },
            start.elapsed().as_secs_f64(),
            verdict.detail
        );
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
