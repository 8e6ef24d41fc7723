//! Concrete smooth convex oracles used by the builtin problems.

use nalgebra::{DMatrix, DVector};

use super::SmoothOracle;
use crate::linalg;

/// `φ(x) = ½ xᵀAx - bᵀx + c` with `A` symmetric positive semidefinite.
#[derive(Debug, Clone)]
pub struct Quadratic {
    a: DMatrix<f64>,
    b: DVector<f64>,
    c: f64,
    lambda_max: f64,
}

impl Quadratic {
    pub fn new(a: DMatrix<f64>, b: DVector<f64>, c: f64) -> Self {
        assert_eq!(a.nrows(), a.ncols(), "quadratic form must be square");
        assert_eq!(a.nrows(), b.len(), "linear term has wrong length");
        let a = (&a + a.transpose()) * 0.5;
        let (_, lambda_max) =
            linalg::extreme_eigenvalues(&a).expect("eigendecomposition of quadratic form");
        Self {
            a,
            b,
            c,
            lambda_max: lambda_max.max(0.0),
        }
    }

    /// `(μ/2)‖x‖²`.
    pub fn scaled_identity(n: usize, mu: f64) -> Self {
        Self::new(DMatrix::identity(n, n) * mu, DVector::zeros(n), 0.0)
    }

    /// `½‖Mx - y‖²` expanded into normal form.
    pub fn least_squares(m: &DMatrix<f64>, y: &DVector<f64>) -> Self {
        Self::new(m.tr_mul(m), m.tr_mul(y), 0.5 * y.norm_squared())
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.a
    }

    pub fn linear(&self) -> &DVector<f64> {
        &self.b
    }
}

impl SmoothOracle for Quadratic {
    fn dim(&self) -> usize {
        self.b.len()
    }

    fn value(&self, x: &DVector<f64>) -> f64 {
        0.5 * x.dot(&(&self.a * x)) - self.b.dot(x) + self.c
    }

    fn gradient(&self, x: &DVector<f64>) -> DVector<f64> {
        &self.a * x - &self.b
    }

    fn hessian(&self, _x: &DVector<f64>) -> Option<DMatrix<f64>> {
        Some(self.a.clone())
    }

    fn third_derivative_apply(&self, _x: &DVector<f64>, _h: &DVector<f64>) -> Option<DMatrix<f64>> {
        let n = self.dim();
        Some(DMatrix::zeros(n, n))
    }

    fn derivative_order(&self) -> usize {
        3
    }

    fn lipschitz_hint(&self, order: usize) -> Option<f64> {
        match order {
            1 => Some(self.lambda_max),
            2 | 3 => Some(0.0),
            _ => None,
        }
    }
}

/// `φ(x) = log Σᵢ exp(⟨aᵢ, x⟩)` where the `aᵢ` are the rows of `A`.
///
/// With `π = softmax(Ax)` and `C = A - 1(Aᵀπ)ᵀ` the derivatives are
/// cumulants of `⟨aᵢ, ·⟩` under `π`:
/// `∇φ = Aᵀπ`, `∇²φ = Cᵀ diag(π) C`, `D³φ[h] = Cᵀ diag(π ∘ (Ch)) C`.
#[derive(Debug, Clone)]
pub struct LogSumExp {
    a: DMatrix<f64>,
    hints: [f64; 3],
}

impl LogSumExp {
    /// Lipschitz hints default to `s², 2s³, 4s⁴` with `s = ‖A‖₂`.
    pub fn new(a: DMatrix<f64>) -> Self {
        let hints = super::lse_lipschitz_hints(&a);
        Self { a, hints }
    }

    pub fn rows(&self) -> &DMatrix<f64> {
        &self.a
    }

    fn softmax(&self, x: &DVector<f64>) -> (DVector<f64>, f64) {
        let u = &self.a * x;
        let shift = u.max();
        let w = u.map(|v| (v - shift).exp());
        let total = w.sum();
        (w / total, shift + total.ln())
    }

    fn centered(&self, pi: &DVector<f64>) -> DMatrix<f64> {
        let mean = self.a.tr_mul(pi);
        let mut c = self.a.clone();
        for mut row in c.row_iter_mut() {
            row -= mean.transpose();
        }
        c
    }
}

fn weighted_gram(c: &DMatrix<f64>, weights: &DVector<f64>) -> DMatrix<f64> {
    let mut scaled = c.clone();
    for (i, mut row) in scaled.row_iter_mut().enumerate() {
        row *= weights[i];
    }
    let g = c.tr_mul(&scaled);
    (&g + g.transpose()) * 0.5
}

impl SmoothOracle for LogSumExp {
    fn dim(&self) -> usize {
        self.a.ncols()
    }

    fn value(&self, x: &DVector<f64>) -> f64 {
        self.softmax(x).1
    }

    fn gradient(&self, x: &DVector<f64>) -> DVector<f64> {
        let (pi, _) = self.softmax(x);
        self.a.tr_mul(&pi)
    }

    fn hessian(&self, x: &DVector<f64>) -> Option<DMatrix<f64>> {
        let (pi, _) = self.softmax(x);
        Some(weighted_gram(&self.centered(&pi), &pi))
    }

    fn third_derivative_apply(&self, x: &DVector<f64>, h: &DVector<f64>) -> Option<DMatrix<f64>> {
        let (pi, _) = self.softmax(x);
        let c = self.centered(&pi);
        let ch = &c * h;
        Some(weighted_gram(&c, &pi.component_mul(&ch)))
    }

    fn derivative_order(&self) -> usize {
        3
    }

    fn lipschitz_hint(&self, order: usize) -> Option<f64> {
        (1..=3).contains(&order).then(|| self.hints[order - 1])
    }
}

/// `φ(x) = Σᵢ cᵢ xᵢ⁴ / 12` with `cᵢ >= 0`.
///
/// Hints for orders 1 and 2 hold on the box `‖x‖∞ <= radius` only; the
/// third-derivative hint `2 max cᵢ` is global.
#[derive(Debug, Clone)]
pub struct SeparableQuartic {
    coeffs: DVector<f64>,
    radius: f64,
}

impl SeparableQuartic {
    pub fn new(coeffs: DVector<f64>, radius: f64) -> Self {
        assert!(coeffs.iter().all(|&c| c >= 0.0), "quartic weights must be nonnegative");
        assert!(radius > 0.0);
        Self { coeffs, radius }
    }

    fn cmax(&self) -> f64 {
        self.coeffs.iter().copied().fold(0.0, f64::max)
    }
}

impl SmoothOracle for SeparableQuartic {
    fn dim(&self) -> usize {
        self.coeffs.len()
    }

    fn value(&self, x: &DVector<f64>) -> f64 {
        self.coeffs
            .iter()
            .zip(x.iter())
            .map(|(c, v)| c * v.powi(4) / 12.0)
            .sum()
    }

    fn gradient(&self, x: &DVector<f64>) -> DVector<f64> {
        x.zip_map(&self.coeffs, |v, c| c * v.powi(3) / 3.0)
    }

    fn hessian(&self, x: &DVector<f64>) -> Option<DMatrix<f64>> {
        Some(DMatrix::from_diagonal(&x.zip_map(&self.coeffs, |v, c| c * v * v)))
    }

    fn third_derivative_apply(&self, x: &DVector<f64>, h: &DVector<f64>) -> Option<DMatrix<f64>> {
        let d = DVector::from_iterator(
            x.len(),
            x.iter()
                .zip(h.iter())
                .zip(self.coeffs.iter())
                .map(|((v, hv), c)| 2.0 * c * v * hv),
        );
        Some(DMatrix::from_diagonal(&d))
    }

    fn derivative_order(&self) -> usize {
        3
    }

    fn lipschitz_hint(&self, order: usize) -> Option<f64> {
        let c = self.cmax();
        let r = self.radius;
        match order {
            1 => Some(c * r * r),
            2 => Some(2.0 * c * r),
            3 => Some(2.0 * c),
            _ => None,
        }
    }
}
