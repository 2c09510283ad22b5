mod common;

use common::*;
use nalgebra::DMatrix;
use podfem::frac::{
    frac_stiffness_1d, gl_frac_deriv, left_rl_deriv_hat, mass_1d, riesz_constant, right_rl_deriv_hat, Grid1D,
    Side,
};
use podfem::quadrature::GaussLegendre;
use podfem::special::{beta, gamma};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn gamma_matches_known_constants() {
    let pi = std::f64::consts::PI;
    assert!((gamma(0.5) - pi.sqrt()).abs() < 1e-14);
    assert!((gamma(1.5) - 0.5 * pi.sqrt()).abs() < 1e-14);
    assert!((gamma(2.5) - 0.75 * pi.sqrt()).abs() < 1e-14);
    assert!((gamma(1.0) - 1.0).abs() < 1e-14);
    assert!((gamma(3.0) - 2.0).abs() < 1e-13);
    // Γ(1/3), Γ(0.25) to 16 digits
    assert!((gamma(1.0 / 3.0) - 2.678_938_534_707_747_6).abs() < 1e-13);
    assert!((gamma(0.25) - 3.625_609_908_221_908_3).abs() < 1e-13);
    assert!((beta(2.0, 3.0) - 1.0 / 12.0).abs() < 1e-15);
}

#[test]
fn hat_derivative_at_documented_points() {
    let g = Grid1D::new(4).unwrap();
    let h1 = |s: f64| hat(1, 4, s);
    let kinks = [0.0, 0.25, 0.5];
    let oracle = rl_left_oracle(&h1, &kinks, 0.75, 0.6);
    let value = left_rl_deriv_hat(1, 0.75, &g, 0.6).unwrap();
    assert!((value - oracle).abs() < 1e-8, "{value} vs {oracle}");

    let h2 = |s: f64| hat(2, 4, s);
    let kinks = [0.25, 0.5, 0.75];
    let oracle = rl_right_oracle(&h2, &kinks, 0.8, 0.3);
    let value = right_rl_deriv_hat(2, 0.8, &g, 0.3).unwrap();
    assert!((value - oracle).abs() < 1e-8, "{value} vs {oracle}");
}

#[test]
fn hat_derivatives_match_the_integral_oracle_at_random_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for trial in 0..20 {
        let cells = rng.random_range(4..=6);
        let h = 1.0 / cells as f64;
        let j = rng.random_range(1..cells);
        let mu = rng.random_range(0.55..0.95);
        // keep the five-point stencil clear of the hat kinks
        let cell = rng.random_range(0..cells);
        let x = (cell as f64 + rng.random_range(0.2..0.8)) * h;
        let grid = Grid1D::new(cells).unwrap();
        let f = |s: f64| hat(j, cells, s);
        let kinks: Vec<f64> = (0..=cells).map(|k| k as f64 * h).collect();
        let (value, oracle) = if trial % 2 == 0 {
            (left_rl_deriv_hat(j, mu, &grid, x).unwrap(), rl_left_oracle(&f, &kinks, mu, x))
        } else {
            (right_rl_deriv_hat(j, mu, &grid, x).unwrap(), rl_right_oracle(&f, &kinks, mu, x))
        };
        assert!(
            (value - oracle).abs() < 1e-8,
            "trial {trial}: j={j} mu={mu} x={x} cells={cells}: {value} vs {oracle}"
        );
    }
}

#[test]
fn stiffness_matches_the_beta_function_closed_form() {
    for (cells, alpha) in [(4, 1.5), (8, 1.3), (7, 1.8), (16, 1.6)] {
        let mu = alpha / 2.0;
        let c = riesz_constant(alpha);
        let s = frac_stiffness_1d(mu, c, &Grid1D::new(cells).unwrap()).unwrap();
        for i in 0..cells - 1 {
            for j in 0..cells - 1 {
                let exact = stiffness_entry_exact(i + 1, j + 1, cells, mu, c);
                let got = s.entry(i, j);
                assert!((got - exact).abs() < 1e-9 * (1.0 + exact.abs()), "cells={cells} ({i},{j}): {got} vs {exact}");
            }
        }
    }
}

#[test]
fn diagonal_entry_matches_refined_adaptive_quadrature() {
    let cells = 4;
    let mu = 0.75;
    let c = riesz_constant(1.5);
    let s = frac_stiffness_1d(mu, c, &Grid1D::new(cells).unwrap()).unwrap();
    // 40 subintervals: ten per cell, so every kink is a subinterval end.
    let integrand = |x: f64| {
        2.0 * left_hat_deriv(1, cells, mu, x) * right_hat_deriv(1, cells, mu, x)
    };
    let pieces = 10 * cells;
    let oracle: f64 = (0..pieces)
        .map(|p| {
            let a = p as f64 / pieces as f64;
            let b = (p + 1) as f64 / pieces as f64;
            tanh_sinh(a, b, 1.0 / 32.0, 160)
                .into_iter()
                .map(|(x, w)| w * integrand(x))
                .sum::<f64>()
        })
        .sum::<f64>()
        * c;
    assert!((s.entry(0, 0) - oracle).abs() < 1e-8, "{} vs {oracle}", s.entry(0, 0));
}

#[test]
fn classical_limit() {
    let cells = 8;
    let s = frac_stiffness_1d(0.9995, riesz_constant(1.999), &Grid1D::new(cells).unwrap())
        .unwrap()
        .to_dense();
    let n = cells - 1;
    let classical = DMatrix::from_fn(n, n, |i, j| match i.abs_diff(j) {
        0 => 2.0 * cells as f64,
        1 => -(cells as f64),
        _ => 0.0,
    });
    let rel = (&s - &classical).norm() / classical.norm();
    assert!(rel < 1e-2, "relative distance {rel}");
}

#[test]
fn mass_quadratic_form() {
    let grid = Grid1D::new(4).unwrap();
    let m = mass_1d(&grid).to_dense();
    let v = [0.3, -1.2, 0.7];
    let u = |x: f64| (1..=3).map(|j| v[j - 1] * hat(j, 4, x)).sum::<f64>();
    let gauss = GaussLegendre::new(4);
    let quad: f64 = (0..4).map(|c| gauss.integrate(c as f64 * 0.25, (c + 1) as f64 * 0.25, |x| u(x) * u(x))).sum();
    let vv = nalgebra::DVector::from_column_slice(&v);
    let form = vv.dot(&(&m * &vv));
    assert!((form - quad).abs() < 1e-12);
}

#[test]
fn grunwald_letnikov_is_first_order_against_an_exact_derivative() {
    // ₀D^{1.5} x² = Γ(3)/Γ(1.5) x^{0.5}
    let exact = |x: f64| 2.0 / gamma(1.5) * x.sqrt();
    let err = |cells: usize| {
        let h = 1.0 / cells as f64;
        // x² is not zero at x = 1, so only the left derivative is meaningful here
        let samples: Vec<f64> = (0..=cells).map(|i| (i as f64 * h).powi(2)).collect();
        let d = gl_frac_deriv(&samples, 1.5, h, Side::Left).unwrap();
        let mid = cells / 2;
        (d[mid] - exact(0.5)).abs()
    };
    let (e1, e2, e3) = (err(200), err(400), err(800));
    let r1 = e1 / e2;
    let r2 = e2 / e3;
    assert!((1.7..2.3).contains(&r1) && (1.7..2.3).contains(&r2), "{r1} {r2}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn reflection_identity_holds(cells in 2usize..12, mu in 0.51f64..0.99, x in 0.0f64..=1.0, pick in 0usize..100) {
        let g = Grid1D::new(cells).unwrap();
        let n = g.n_interior();
        let j = 1 + pick % n;
        let r = right_rl_deriv_hat(j, mu, &g, x).unwrap();
        let l = left_rl_deriv_hat(n + 1 - j, mu, &g, 1.0 - x).unwrap();
        prop_assert!((r - l).abs() <= 1e-12 * (1.0 + l.abs()));
    }

    #[test]
    fn stiffness_is_toeplitz_symmetric_and_positive_definite(cells in 2usize..14, alpha in 1.05f64..1.95) {
        let mu = alpha / 2.0;
        let c = riesz_constant(alpha);
        let s = frac_stiffness_1d(mu, c, &Grid1D::new(cells).unwrap()).unwrap();
        let dense = s.to_dense();
        let n = s.n();
        for i in 0..n {
            for j in 0..n {
                prop_assert_eq!(dense[(i, j)], dense[(j, i)]);
                if i + 1 < n && j + 1 < n {
                    // independently assembled entries depend on i − j only
                    let a = stiffness_entry_exact(i + 1, j + 1, cells, mu, c);
                    let b = stiffness_entry_exact(i + 2, j + 2, cells, mu, c);
                    prop_assert!((a - b).abs() <= 1e-11 * (1.0 + a.abs()));
                }
            }
        }
        prop_assert!(dense.cholesky().is_some());
    }
}
