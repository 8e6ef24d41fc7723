//! Small dense linear-algebra helpers shared across modules.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};

pub fn factorial(k: usize) -> f64 {
    (1..=k).map(|i| i as f64).product()
}

/// Symmetric eigendecomposition with a bounded iteration count.
pub fn symmetric_eigen(h: &DMatrix<f64>) -> Result<SymmetricEigen<f64, nalgebra::Dyn>> {
    let n = h.nrows();
    SymmetricEigen::try_new(h.clone(), f64::EPSILON, 1000 * n.max(1)).ok_or_else(|| {
        Error::Numerical(format!("symmetric eigendecomposition did not converge (n={n})"))
    })
}

/// `(λ_min, λ_max)` of a symmetric matrix.
pub fn extreme_eigenvalues(h: &DMatrix<f64>) -> Result<(f64, f64)> {
    let eig = symmetric_eigen(h)?;
    let min = eig.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
    let max = eig.eigenvalues.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok((min, max))
}

pub fn spectral_norm(a: &DMatrix<f64>) -> f64 {
    a.singular_values().iter().copied().fold(0.0, f64::max)
}

/// Largest absolute deviation from symmetry, `max |h_ij - h_ji|`.
pub fn asymmetry(h: &DMatrix<f64>) -> f64 {
    let n = h.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in (i + 1)..n {
            worst = worst.max((h[(i, j)] - h[(j, i)]).abs());
        }
    }
    worst
}

pub fn all_finite(v: &DVector<f64>) -> bool {
    v.iter().all(|x| x.is_finite())
}

pub fn all_finite_mat(m: &DMatrix<f64>) -> bool {
    m.iter().all(|x| x.is_finite())
}
