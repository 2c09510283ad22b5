//! Riemann–Liouville derivatives of hat functions and the Toeplitz fractional
//! stiffness matrix, including its approach to the classical Laplacian stiffness
//! as α → 2.
//!
//! cargo run --release --example fractional_stiffness

use podfem::frac::{frac_stiffness_1d, left_rl_deriv_hat, right_rl_deriv_hat, riesz_constant, Grid1D};

fn main() -> podfem::Result<()> {
    let grid = Grid1D::new(8)?;
    let mu = 0.75;
    println!("D^0.75 of the hat at x_4 (left / right):");
    for i in 0..=8 {
        let x = i as f64 / 8.0;
        println!(
            "  x = {x:.3}  {:>10.5}  {:>10.5}",
            left_rl_deriv_hat(4, mu, &grid, x)?,
            right_rl_deriv_hat(4, mu, &grid, x)?
        );
    }

    for alpha in [1.2, 1.5, 1.8] {
        let s = frac_stiffness_1d(alpha / 2.0, riesz_constant(alpha), &grid)?;
        let row: Vec<String> = s.first_row().iter().map(|v| format!("{v:.4}")).collect();
        println!("alpha = {alpha}: first row [{}]", row.join(", "));
    }

    // Classical stiffness (1/h)·tridiag(−1, 2, −1).
    let fine = Grid1D::new(16)?;
    let s = frac_stiffness_1d(0.9995, riesz_constant(1.999), &fine)?.to_dense();
    let n = s.nrows();
    let classical = nalgebra::DMatrix::from_fn(n, n, |i, j| match i.abs_diff(j) {
        0 => 32.0,
        1 => -16.0,
        _ => 0.0,
    });
    println!(
        "alpha = 1.999 vs classical: relative Frobenius distance {:.3e}",
        (&s - &classical).norm() / classical.norm()
    );
    Ok(())
}
