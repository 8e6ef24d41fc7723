//! Reproducible test problems selectable by name and seed.
//!
//! | name                  | f                  | g               | ψ      |
//! |-----------------------|--------------------|-----------------|--------|
//! | `quad_minus_quad`     | ½xᵀAx - bᵀx        | (μ/2)‖x‖²       | 0      |
//! | `lasso_minus_concave` | ½‖Gx - y‖²         | (μ/2)‖x‖²       | λ‖x‖₁  |
//! | `lse_minus_lse`       | lse(Ax)            | lse(Bx)         | 0      |
//! | `poly_dc`             | Σ xᵢ⁴/12           | ‖x‖²            | 0      |
//!
//! Every instance is bounded below; `known_lower_bound` carries a valid
//! (not necessarily tight) bound.

use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::{DcProblem, L1Norm, LogSumExp, Quadratic, SeparableQuartic, ZeroTerm};
use crate::error::{Error, Result};
use crate::linalg;

pub const BUILTIN_NAMES: [&str; 4] = [
    "quad_minus_quad",
    "lasso_minus_concave",
    "lse_minus_lse",
    "poly_dc",
];

/// Half-width of the box on which `poly_dc` Lipschitz hints hold.
pub const POLY_HINT_RADIUS: f64 = 5.0;

/// `(‖A‖₂², 2‖A‖₂³, 4‖A‖₂⁴)`: Lipschitz bounds for derivatives 1..3 of `lse(Ax)`.
pub fn lse_lipschitz_hints(a: &DMatrix<f64>) -> [f64; 3] {
    let s = linalg::spectral_norm(a);
    [s.powi(2), 2.0 * s.powi(3), 4.0 * s.powi(4)]
}

fn gaussian_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> DMatrix<f64> {
    DMatrix::from_fn(rows, cols, |_, _| rng.sample::<f64, _>(StandardNormal))
}

fn gaussian_vector(rng: &mut ChaCha8Rng, n: usize) -> DVector<f64> {
    DVector::from_fn(n, |_, _| rng.sample::<f64, _>(StandardNormal))
}

/// Builds a named builtin problem of dimension `n`.
pub fn builtin_problem(name: &str, n: usize, seed: u64) -> Result<DcProblem> {
    if n == 0 {
        return Err(Error::Input("problem dimension must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let problem = match name {
        "quad_minus_quad" => {
            let b_mat = gaussian_matrix(&mut rng, n, n);
            let s = &b_mat * b_mat.transpose();
            let (_, top) = linalg::extreme_eigenvalues(&s)?;
            let a = DMatrix::identity(n, n) + s * (0.5 / top.max(f64::MIN_POSITIVE));
            let b = gaussian_vector(&mut rng, n);
            quad_minus_quad_instance(a, b, 0.5)?
        }
        "lasso_minus_concave" => lasso_minus_concave(&mut rng, n)?,
        "lse_minus_lse" => lse_minus_lse(&mut rng, n)?,
        "poly_dc" => poly_dc(n)?,
        other => {
            return Err(Error::Input(format!(
                "unknown problem '{other}'; available: {}",
                BUILTIN_NAMES.join(", ")
            )))
        }
    };
    Ok(problem.with_name(name))
}

/// `f = ½xᵀAx - bᵀx`, `g = (μ/2)‖x‖²`, ψ = 0. Requires `A - μI ≻ 0`.
pub fn quad_minus_quad_instance(a: DMatrix<f64>, b: DVector<f64>, mu: f64) -> Result<DcProblem> {
    let n = b.len();
    let shifted = &a - DMatrix::identity(n, n) * mu;
    let chol = shifted.clone().cholesky().ok_or_else(|| {
        Error::Input("quad_minus_quad needs A - mu*I positive definite".into())
    })?;
    let x_star = chol.solve(&b);
    let lower = -0.5 * b.dot(&x_star);
    let problem = DcProblem::new(
        Arc::new(Quadratic::new(a, b, 0.0)),
        Arc::new(Quadratic::scaled_identity(n, mu)),
        Arc::new(ZeroTerm),
    )?;
    Ok(problem.with_lower_bound(lower).with_name("quad_minus_quad"))
}

fn lasso_minus_concave(rng: &mut ChaCha8Rng, n: usize) -> Result<DcProblem> {
    let m = 10 * n;
    let g_mat = gaussian_matrix(rng, m, n) / (m as f64).sqrt();
    let support = n.div_ceil(4);
    let mut x_true = DVector::zeros(n);
    for _ in 0..support {
        let i = rng.random_range(0..n);
        x_true[i] = rng.sample::<f64, _>(StandardNormal);
    }
    let noise = gaussian_vector(rng, m) * 0.1;
    let y = &g_mat * &x_true + noise;

    let f = Quadratic::least_squares(&g_mat, &y);
    let (lambda_min, _) = linalg::extreme_eigenvalues(f.matrix())?;
    let mu = 0.25 * lambda_min;
    let lambda = 0.1 * f.linear().amax();

    // Drop the l1 term and minimize the remaining strongly convex quadratic.
    let shifted = f.matrix() - DMatrix::identity(n, n) * mu;
    let chol = shifted
        .cholesky()
        .ok_or_else(|| Error::Numerical("lasso design is rank deficient".into()))?;
    let lower = 0.5 * y.norm_squared() - 0.5 * f.linear().dot(&chol.solve(f.linear()));

    let problem = DcProblem::new(
        Arc::new(f),
        Arc::new(Quadratic::scaled_identity(n, mu)),
        Arc::new(L1Norm::new(lambda)),
    )?;
    Ok(problem.with_lower_bound(lower))
}

fn lse_minus_lse(rng: &mut ChaCha8Rng, n: usize) -> Result<DcProblem> {
    // f rows ±dᵢeᵢ with dᵢ in [0.8, 1.2], so lse(Ax) >= 0.8‖x‖∞.
    let d: Vec<f64> = (0..n).map(|_| rng.random_range(0.8..1.2)).collect();
    let a = DMatrix::from_fn(2 * n, n, |i, j| {
        if i == j {
            d[j]
        } else if i == j + n {
            -d[j]
        } else {
            0.0
        }
    });
    // g rows have norm 0.5/√n, so lse(Bx) <= 0.5‖x‖∞ + ln(n+1).
    let mut b = gaussian_matrix(rng, n + 1, n);
    let target = 0.5 / (n as f64).sqrt();
    for mut row in b.row_iter_mut() {
        let norm = row.norm();
        if norm > 0.0 {
            row *= target / norm;
        }
    }
    let lower = -((n + 1) as f64).ln();
    let problem = DcProblem::new(
        Arc::new(LogSumExp::new(a)),
        Arc::new(LogSumExp::new(b)),
        Arc::new(ZeroTerm),
    )?;
    Ok(problem.with_lower_bound(lower))
}

/// Seed-independent: `f = Σ xᵢ⁴/12`, `g = ‖x‖²`. Per coordinate the
/// stationary points are `{0, ±√6}` and `F` has minimum value `-3n`.
fn poly_dc(n: usize) -> Result<DcProblem> {
    let mut problem = DcProblem::new(
        Arc::new(SeparableQuartic::new(DVector::from_element(n, 1.0), POLY_HINT_RADIUS)),
        Arc::new(Quadratic::scaled_identity(n, 2.0)),
        Arc::new(ZeroTerm),
    )?
    .with_lower_bound(-3.0 * n as f64);
    problem.hint_radius = Some(POLY_HINT_RADIUS);
    Ok(problem)
}
