//! Shifted Grünwald–Letnikov derivatives on samples, the Riesz combination, and
//! the discrete adjoint pairing of left and right derivatives.
//!
//! cargo run --release --example grunwald_letnikov

use podfem::frac::{adjoint_pairing, gl_frac_deriv, riesz_of_samples, Side};
use std::f64::consts::PI;

fn main() -> podfem::Result<()> {
    // x²(1−x)² vanishes at both ends, so the zero extension is smooth enough.
    let f = |x: f64| x * x * (1.0 - x) * (1.0 - x);
    for cells in [64usize, 128, 256, 512] {
        let h = 1.0 / cells as f64;
        let u: Vec<f64> = (0..=cells).map(|i| f(i as f64 * h)).collect();
        let left = gl_frac_deriv(&u, 1.5, h, Side::Left)?;
        let riesz = riesz_of_samples(&u, 1.5, h)?;
        println!(
            "h = 1/{cells:<4} left D^1.5 at 1/2 = {:>10.6}  Riesz at 1/2 = {:>10.6}",
            left[cells / 2],
            riesz[cells / 2]
        );
    }

    let mu = 0.7;
    for cells in [64usize, 256, 1024] {
        let h = 1.0 / cells as f64;
        let u: Vec<f64> = (0..=cells).map(|i| (PI * i as f64 * h).sin()).collect();
        let p = adjoint_pairing(&u, &u, mu, h)?;
        println!(
            "h = 1/{cells:<4} (D_L u, D_R u) = {:.6}, cos(mu pi)|D_L u|^2 = {:.6}",
            p.weak, p.coercive
        );
    }
    Ok(())
}
