//! Finite-difference validation of user-supplied derivative oracles.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use super::SmoothOracle;
use crate::error::{Error, Result};
use crate::linalg;

/// Central-difference step `max(1e-6, 1e-6‖x‖)`.
pub fn fd_step(x: &DVector<f64>) -> f64 {
    (1e-6 * x.norm()).max(1e-6)
}

/// Outcome of [`check_derivatives`].
///
/// Errors are measured as `‖analytic - fd‖ / max(1, ‖analytic‖)`, so they are
/// relative for large derivatives and absolute near zero.
#[derive(Debug, Clone, Serialize)]
pub struct DerivativeReport {
    /// Index `i` holds the worst error for derivative order `i + 1`;
    /// `None` for orders the oracle does not supply.
    pub max_rel_error: [Option<f64>; 3],
    pub max_asymmetry: Option<f64>,
    pub min_hessian_eigenvalue: Option<f64>,
    pub pass: bool,
}

fn rel_err(analytic_minus_fd: f64, analytic: f64) -> f64 {
    analytic_minus_fd / analytic.max(1.0)
}

fn oracle_error(x: &DVector<f64>, what: &str) -> Error {
    Error::Oracle {
        point: x.iter().copied().collect(),
        message: format!("{what} is not finite"),
    }
}

fn fd_gradient(oracle: &dyn SmoothOracle, x: &DVector<f64>, h: f64) -> Result<DVector<f64>> {
    let mut out = DVector::zeros(x.len());
    let mut probe = x.clone();
    for j in 0..x.len() {
        probe[j] = x[j] + h;
        let plus = oracle.value(&probe);
        probe[j] = x[j] - h;
        let minus = oracle.value(&probe);
        probe[j] = x[j];
        if !plus.is_finite() || !minus.is_finite() {
            return Err(oracle_error(x, "value near point"));
        }
        out[j] = (plus - minus) / (2.0 * h);
    }
    Ok(out)
}

fn fd_hessian(oracle: &dyn SmoothOracle, x: &DVector<f64>, h: f64) -> Result<DMatrix<f64>> {
    let n = x.len();
    let mut out = DMatrix::zeros(n, n);
    let mut probe = x.clone();
    for j in 0..n {
        probe[j] = x[j] + h;
        let plus = oracle.gradient(&probe);
        probe[j] = x[j] - h;
        let minus = oracle.gradient(&probe);
        probe[j] = x[j];
        if !linalg::all_finite(&plus) || !linalg::all_finite(&minus) {
            return Err(oracle_error(x, "gradient near point"));
        }
        out.set_column(j, &((plus - minus) / (2.0 * h)));
    }
    Ok(out)
}

/// Compares each supplied derivative order against central differences of
/// the order below, at every point. Fails when any error exceeds `tol`, the
/// Hessian is asymmetric beyond `1e-12`, or `λ_min(∇²φ) < -1e-8`.
///
/// Third derivatives are checked along every coordinate direction:
/// `D³φ(x)[eⱼ]` against the central difference of `∇²φ` along `eⱼ`.
pub fn check_derivatives(
    oracle: &dyn SmoothOracle,
    points: &[DVector<f64>],
    tol: f64,
) -> Result<DerivativeReport> {
    if !(tol > 0.0) {
        return Err(Error::Input(format!("tolerance must be positive, got {tol}")));
    }
    let n = oracle.dim();
    let order = oracle.derivative_order();
    let mut worst: [Option<f64>; 3] = [None; 3];
    let mut asym: Option<f64> = None;
    let mut min_eig: Option<f64> = None;
    let bump = |slot: &mut Option<f64>, v: f64| *slot = Some(slot.map_or(v, |s| s.max(v)));

    for x in points {
        crate::error::check_dim(n, x.len())?;
        let h = fd_step(x);
        if !oracle.value(x).is_finite() {
            return Err(oracle_error(x, "value"));
        }

        let grad = oracle.gradient(x);
        if !linalg::all_finite(&grad) {
            return Err(oracle_error(x, "gradient"));
        }
        let fd = fd_gradient(oracle, x, h)?;
        bump(&mut worst[0], rel_err((&grad - fd).norm(), grad.norm()));

        if order >= 2 {
            let hess = oracle
                .hessian(x)
                .filter(linalg::all_finite_mat)
                .ok_or_else(|| oracle_error(x, "hessian"))?;
            let fd = fd_hessian(oracle, x, h)?;
            bump(&mut worst[1], rel_err((&hess - fd).norm(), hess.norm()));
            bump(&mut asym, linalg::asymmetry(&hess) / hess.norm().max(1.0));
            let (lo, _) = linalg::extreme_eigenvalues(&((&hess + hess.transpose()) * 0.5))?;
            min_eig = Some(min_eig.map_or(lo, |m: f64| m.min(lo)));
        }

        if order >= 3 {
            let mut probe = x.clone();
            for j in 0..n {
                let mut e = DVector::zeros(n);
                e[j] = 1.0;
                let third = oracle
                    .third_derivative_apply(x, &e)
                    .filter(linalg::all_finite_mat)
                    .ok_or_else(|| oracle_error(x, "third derivative"))?;
                probe[j] = x[j] + h;
                let plus = oracle.hessian(&probe).ok_or_else(|| oracle_error(x, "hessian"))?;
                probe[j] = x[j] - h;
                let minus = oracle.hessian(&probe).ok_or_else(|| oracle_error(x, "hessian"))?;
                probe[j] = x[j];
                let fd = (plus - minus) / (2.0 * h);
                bump(&mut worst[2], rel_err((&third - fd).norm(), third.norm()));
            }
        }
    }

    let errors_ok = worst.iter().flatten().all(|&e| e <= tol);
    let sym_ok = asym.is_none_or(|a| a <= 1e-12);
    let convex_ok = min_eig.is_none_or(|m| m >= -1e-8);
    Ok(DerivativeReport {
        max_rel_error: worst,
        max_asymmetry: asym,
        min_hessian_eigenvalue: min_eig,
        pass: errors_ok && sym_ok && convex_ok,
    })
}
