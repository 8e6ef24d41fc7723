//! Global minimization of `⟨v, h⟩ + ½⟨Hh, h⟩ + (M/6)‖h‖³` for symmetric,
//! possibly indefinite `H`.
//!
//! A point `h` is a global minimizer iff, with `r = ‖h‖`,
//! `(H + (Mr/2) I) h = -v` and `H + (Mr/2) I ⪰ 0`. In the eigenbasis of `H`
//! this reduces to the scalar secular equation
//! `φ(r) = ‖(H + (Mr/2) I)⁻¹ v‖ - r = 0` on `r > max(0, -2λ_min/M)`, where `φ`
//! is convex and strictly decreasing. When `v` has no component along the
//! minimal eigenspace the root may not exist (the hard case) and the step is
//! completed along a minimal eigenvector.

use nalgebra::{DMatrix, DVector};

use crate::error::{check_dim, Error, Result};
use crate::linalg;

/// Default tolerance on `|φ(r)| / (1 + ‖v‖)`.
pub const SECULAR_TOL: f64 = 1e-10;
pub const SECULAR_MAX_ITER: usize = 200;

#[derive(Debug, Clone)]
pub struct CubicSubproblem {
    pub v: DVector<f64>,
    pub h: DMatrix<f64>,
    pub m: f64,
}

impl CubicSubproblem {
    pub fn new(v: DVector<f64>, h: DMatrix<f64>, m: f64) -> Result<Self> {
        let sub = Self { v, h, m };
        sub.validate()?;
        Ok(sub)
    }

    fn validate(&self) -> Result<()> {
        let n = self.v.len();
        if self.h.nrows() != self.h.ncols() {
            return Err(Error::Input("cubic subproblem matrix must be square".into()));
        }
        check_dim(n, self.h.nrows())?;
        if !(self.m > 0.0 && self.m.is_finite()) {
            return Err(Error::Input(format!("cubic weight M must be positive, got {}", self.m)));
        }
        if !linalg::all_finite(&self.v) || !linalg::all_finite_mat(&self.h) {
            return Err(Error::Input("cubic subproblem has non-finite entries".into()));
        }
        let asym = linalg::asymmetry(&self.h);
        if asym > 1e-12 * self.h.amax().max(1.0) {
            return Err(Error::Input(format!("cubic subproblem matrix is not symmetric ({asym:e})")));
        }
        Ok(())
    }

    pub fn objective(&self, h: &DVector<f64>) -> f64 {
        self.v.dot(h) + 0.5 * h.dot(&(&self.h * h)) + self.m / 6.0 * h.norm().powi(3)
    }

    /// `‖(H + (M‖h‖/2) I) h + v‖`.
    pub fn kkt_residual(&self, h: &DVector<f64>) -> f64 {
        let shift = 0.5 * self.m * h.norm();
        (&self.h * h + h * shift + &self.v).norm()
    }
}

#[derive(Debug, Clone)]
pub struct CubicSolution {
    pub h_star: DVector<f64>,
    /// Root of the secular equation (or the hard-case radius).
    pub r_star: f64,
    pub lambda_min_h: f64,
    pub objective: f64,
    pub kkt_residual: f64,
    pub hard_case: bool,
    pub iterations: usize,
}

impl CubicSolution {
    /// `λ_min(H + (M‖h*‖/2) I)`; nonnegative at a global minimizer.
    pub fn shifted_lambda_min(&self, m: f64) -> f64 {
        self.lambda_min_h + 0.5 * m * self.h_star.norm()
    }
}

/// Secular function in the eigenbasis: `w = Qᵀv`, eigenvalues `lambda`.
struct Secular<'a> {
    w: &'a DVector<f64>,
    lambda: &'a DVector<f64>,
    half_m: f64,
}

impl Secular<'_> {
    /// `(φ(r), φ'(r))`.
    fn eval(&self, r: f64) -> (f64, f64) {
        let mut norm_sq = 0.0;
        let mut cubic = 0.0;
        for (wi, li) in self.w.iter().zip(self.lambda.iter()) {
            if *wi == 0.0 {
                continue;
            }
            let d = li + self.half_m * r;
            norm_sq += wi * wi / (d * d);
            cubic += wi * wi / (d * d * d);
        }
        let norm = norm_sq.sqrt();
        if norm == 0.0 {
            return (-r, -1.0);
        }
        (norm - r, -self.half_m * cubic / norm - 1.0)
    }

    /// Eigenbasis coordinates of `h(r) = -(Λ + (Mr/2) I)⁻¹ w`.
    fn step(&self, r: f64) -> DVector<f64> {
        DVector::from_iterator(
            self.w.len(),
            self.w.iter().zip(self.lambda.iter()).map(|(wi, li)| {
                if *wi == 0.0 {
                    0.0
                } else {
                    -wi / (li + self.half_m * r)
                }
            }),
        )
    }
}

/// Globally minimizes the cubic model. `tol` bounds `|φ(r*)| / (1 + ‖v‖)`.
pub fn solve_cubic_global(sub: &CubicSubproblem, tol: f64) -> Result<CubicSolution> {
    sub.validate()?;
    if !(tol > 0.0) {
        return Err(Error::Input(format!("secular tolerance must be positive, got {tol}")));
    }
    let n = sub.v.len();
    let eig = linalg::symmetric_eigen(&sub.h)?;
    let q = &eig.eigenvectors;
    let lambda = &eig.eigenvalues;
    let (i_min, lambda_min) = lambda
        .iter()
        .copied()
        .enumerate()
        .fold((0, f64::INFINITY), |acc, (i, l)| if l < acc.1 { (i, l) } else { acc });
    let w = q.tr_mul(&sub.v);
    let v_norm = sub.v.norm();
    let tol_abs = tol * (1.0 + v_norm);
    let half_m = 0.5 * sub.m;
    let r_low = (-lambda_min / half_m).max(0.0);

    let finish = |coords: DVector<f64>, r_star: f64, hard_case: bool, iterations: usize| {
        let h_star = q * coords;
        CubicSolution {
            objective: sub.objective(&h_star),
            kkt_residual: sub.kkt_residual(&h_star),
            h_star,
            r_star,
            lambda_min_h: lambda_min,
            hard_case,
            iterations,
        }
    };

    if v_norm == 0.0 && lambda_min >= 0.0 {
        return Ok(finish(DVector::zeros(n), 0.0, false, 0));
    }

    // Eigenvalues indistinguishable from λ_min form the critical cluster.
    let spread = lambda.amax().max(1.0);
    let in_cluster = |l: f64| l - lambda_min <= 1e-12 * spread;
    let cluster_weight: f64 = w
        .iter()
        .zip(lambda.iter())
        .filter(|(_, l)| in_cluster(**l))
        .map(|(wi, _)| wi * wi)
        .sum::<f64>()
        .sqrt();

    // Hard-case candidate: the off-cluster step at r_low, topped up along the
    // minimal eigenvector to reach norm r_low.
    let hard_candidate = || -> Option<DVector<f64>> {
        if lambda_min >= 0.0 {
            return None;
        }
        let perp = DVector::from_iterator(
            n,
            w.iter().zip(lambda.iter()).map(|(wi, li)| {
                if in_cluster(*li) {
                    0.0
                } else {
                    -wi / (li - lambda_min)
                }
            }),
        );
        let perp_norm = perp.norm();
        if perp_norm > r_low {
            return None;
        }
        let mut coords = perp;
        coords[i_min] += (r_low * r_low - perp_norm * perp_norm).max(0.0).sqrt();
        Some(coords)
    };

    if lambda_min < 0.0 && cluster_weight <= 1e-14 * (1.0 + v_norm) {
        if let Some(coords) = hard_candidate() {
            return Ok(finish(coords, r_low, true, 0));
        }
    }

    let secular = Secular {
        w: &w,
        lambda,
        half_m,
    };
    // φ(hi) <= 0 where (M/2) r² + λ_min r = ‖v‖, since ‖h(r)‖ <= ‖v‖ / (λ_min + Mr/2).
    let mut hi = (-lambda_min + (lambda_min * lambda_min + 2.0 * sub.m * v_norm).sqrt()) / sub.m;
    hi = hi.max(r_low);
    let mut lo = r_low;
    let mut r = hi;
    let mut best: Option<(f64, f64)> = None;
    let mut iterations = 0;
    let mut converged = false;
    for it in 1..=SECULAR_MAX_ITER {
        iterations = it;
        let (phi, dphi) = secular.eval(r);
        if phi.is_finite() && best.is_none_or(|(_, b)| phi.abs() < b) {
            best = Some((r, phi.abs()));
        }
        if phi.is_finite() && phi.abs() <= tol_abs {
            converged = true;
            break;
        }
        if phi > 0.0 || phi.is_nan() {
            lo = r;
        } else {
            hi = r;
        }
        if hi - lo <= 4.0 * f64::EPSILON * hi.max(f64::MIN_POSITIVE) {
            break;
        }
        let newton = r - phi / dphi;
        r = if newton.is_finite() && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
    }

    let (r_star, _) = best.ok_or_else(|| {
        Error::Numerical("secular equation could not be evaluated on the feasible ray".into())
    })?;
    let regular = finish(secular.step(r_star), r_star, false, iterations);
    if converged {
        return Ok(regular);
    }
    // Root pinned against the pole: fall back to the eigenvector completion
    // when it certifies better.
    if let Some(coords) = hard_candidate() {
        let hard = finish(coords, r_low, true, iterations);
        if hard.kkt_residual < regular.kkt_residual {
            return Ok(hard);
        }
    }
    Ok(regular)
}
