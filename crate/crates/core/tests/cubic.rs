use hodc::subsolvers::{solve_cubic_global, CubicSubproblem, SECULAR_TOL};
use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;

fn symmetric(n: usize) -> impl Strategy<Value = DMatrix<f64>> {
    proptest::collection::vec(-3.0f64..3.0, n * n).prop_map(move |e| {
        let a = DMatrix::from_vec(n, n, e);
        (&a + a.transpose()) * 0.5
    })
}

fn vector(n: usize) -> impl Strategy<Value = DVector<f64>> {
    proptest::collection::vec(-3.0f64..3.0, n).prop_map(DVector::from_vec)
}

/// Exhaustive 2-D minimum on a grid around the origin.
fn grid_min_2d(sub: &CubicSubproblem, radius: f64, points: usize) -> f64 {
    let step = 2.0 * radius / (points - 1) as f64;
    let mut best = f64::INFINITY;
    for i in 0..points {
        for j in 0..points {
            let h = DVector::from_vec(vec![-radius + i as f64 * step, -radius + j as f64 * step]);
            best = best.min(sub.objective(&h));
        }
    }
    best
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn beats_brute_force_in_two_dimensions(h in symmetric(2), v in vector(2), m in 0.5f64..10.0) {
        let sub = CubicSubproblem::new(v.clone(), h.clone(), m).unwrap();
        let sol = solve_cubic_global(&sub, SECULAR_TOL).unwrap();
        let lam = h.symmetric_eigenvalues().min();
        let radius = 1.05 * (-lam + (lam * lam + 2.0 * m * v.norm()).sqrt()) / m + 1e-9;
        prop_assert!(sol.objective <= grid_min_2d(&sub, radius, 201) + 1e-9);
    }

    #[test]
    fn rotation_equivariant(h in symmetric(3), v in vector(3), m in 0.5f64..10.0, angle in 0.0f64..std::f64::consts::TAU) {
        let (c, s) = (angle.cos(), angle.sin());
        let q = DMatrix::from_row_slice(3, 3, &[c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0]);
        let base = solve_cubic_global(&CubicSubproblem::new(v.clone(), h.clone(), m).unwrap(), SECULAR_TOL).unwrap();
        let rotated = CubicSubproblem::new(&q * &v, &q * &h * q.transpose(), m).unwrap();
        let sol = solve_cubic_global(&rotated, SECULAR_TOL).unwrap();
        prop_assert!((sol.objective - base.objective).abs() <= 1e-9 * (1.0 + base.objective.abs()));
        if !base.hard_case {
            prop_assert!((&sol.h_star - &q * &base.h_star).norm() <= 1e-6 * (1.0 + base.h_star.norm()));
        }
    }

    #[test]
    fn certificate_holds(h in symmetric(3), v in vector(3), m in 0.1f64..20.0) {
        let sub = CubicSubproblem::new(v.clone(), h.clone(), m).unwrap();
        let sol = solve_cubic_global(&sub, SECULAR_TOL).unwrap();
        prop_assert!(sub.kkt_residual(&sol.h_star) <= 1e-8 * (1.0 + v.norm()));
        prop_assert!(sol.shifted_lambda_min(m) >= -1e-8);
    }
}

#[test]
fn hard_case_reaches_both_minimizers() {
    // H = diag(-1, 2), v = (0, 1e-3): the minimizer leaves the v direction.
    let h = DMatrix::from_diagonal(&DVector::from_vec(vec![-1.0, 2.0]));
    let v = DVector::from_vec(vec![0.0, 1e-3]);
    let sub = CubicSubproblem::new(v, h, 1.0).unwrap();
    let sol = solve_cubic_global(&sub, SECULAR_TOL).unwrap();
    assert!(sol.hard_case);
    assert!((sol.h_star.norm() - 2.0).abs() < 1e-6, "{}", sol.h_star);
    let mirrored = DVector::from_vec(vec![-sol.h_star[0], sol.h_star[1]]);
    assert!((sub.objective(&mirrored) - sol.objective).abs() < 1e-12);
}
