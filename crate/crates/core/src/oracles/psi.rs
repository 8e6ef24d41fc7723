//! Simple convex terms ψ with closed-form proximal operators.

use nalgebra::DVector;

use super::SimpleConvexTerm;

/// ψ ≡ 0; its prox is the identity.
#[derive(Debug, Clone, Copy, Default)]
pub struct ZeroTerm;

impl SimpleConvexTerm for ZeroTerm {
    fn value(&self, _x: &DVector<f64>) -> f64 {
        0.0
    }

    fn prox(&self, x: &DVector<f64>, _t: f64) -> DVector<f64> {
        x.clone()
    }

    fn in_domain(&self, _x: &DVector<f64>) -> bool {
        true
    }

    fn is_zero(&self) -> bool {
        true
    }
}

/// ψ(x) = λ‖x‖₁, prox is soft-thresholding at level `λt`.
#[derive(Debug, Clone, Copy)]
pub struct L1Norm {
    pub lambda: f64,
}

impl L1Norm {
    pub fn new(lambda: f64) -> Self {
        assert!(lambda >= 0.0, "l1 weight must be nonnegative");
        Self { lambda }
    }
}

fn soft_threshold(v: f64, level: f64) -> f64 {
    v.signum() * (v.abs() - level).max(0.0)
}

impl SimpleConvexTerm for L1Norm {
    fn value(&self, x: &DVector<f64>) -> f64 {
        self.lambda * x.iter().map(|v| v.abs()).sum::<f64>()
    }

    fn prox(&self, x: &DVector<f64>, t: f64) -> DVector<f64> {
        let level = self.lambda * t;
        x.map(|v| soft_threshold(v, level))
    }

    fn in_domain(&self, _x: &DVector<f64>) -> bool {
        true
    }

    fn is_zero(&self) -> bool {
        self.lambda == 0.0
    }
}

/// Indicator of `{x : x >= 0}`.
#[derive(Debug, Clone, Copy, Default)]
pub struct NonnegativeOrthant;

impl SimpleConvexTerm for NonnegativeOrthant {
    fn value(&self, x: &DVector<f64>) -> f64 {
        if self.in_domain(x) {
            0.0
        } else {
            f64::INFINITY
        }
    }

    fn prox(&self, x: &DVector<f64>, _t: f64) -> DVector<f64> {
        x.map(|v| v.max(0.0))
    }

    fn in_domain(&self, x: &DVector<f64>) -> bool {
        x.iter().all(|&v| v >= 0.0)
    }
}

/// Indicator of the box `{x : lower <= x <= upper}` (componentwise).
#[derive(Debug, Clone)]
pub struct BoxIndicator {
    lower: DVector<f64>,
    upper: DVector<f64>,
}

impl BoxIndicator {
    pub fn new(lower: DVector<f64>, upper: DVector<f64>) -> Self {
        assert_eq!(lower.len(), upper.len(), "box bounds must have equal length");
        assert!(
            lower.iter().zip(upper.iter()).all(|(l, u)| l <= u),
            "empty box"
        );
        Self { lower, upper }
    }
}

impl SimpleConvexTerm for BoxIndicator {
    fn value(&self, x: &DVector<f64>) -> f64 {
        if self.in_domain(x) {
            0.0
        } else {
            f64::INFINITY
        }
    }

    fn prox(&self, x: &DVector<f64>, _t: f64) -> DVector<f64> {
        DVector::from_iterator(
            x.len(),
            x.iter()
                .zip(self.lower.iter().zip(self.upper.iter()))
                .map(|(&v, (&l, &u))| v.clamp(l, u)),
        )
    }

    fn in_domain(&self, x: &DVector<f64>) -> bool {
        x.iter()
            .zip(self.lower.iter().zip(self.upper.iter()))
            .all(|(&v, (&l, &u))| l <= v && v <= u)
    }
}
