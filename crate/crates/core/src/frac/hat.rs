use super::Grid1D;
use crate::error::{Error, Result};
use crate::special::gamma;

/// Closed-form Riemann–Liouville derivatives of order μ ∈ (0,1) of the hat functions
/// of a uniform grid.
///
/// With ν = 1 − μ and (z)₊ the positive part,
///
/// ```text
/// ₀D_x^μ φ_j(x) = [ (x−x_{j−1})₊^ν − 2(x−x_j)₊^ν + (x−x_{j+1})₊^ν ] / (h Γ(2−μ))
/// ₓD₁^μ φ_j(x) = [ (x_{j+1}−x)₊^ν − 2(x_j−x)₊^ν + (x_{j−1}−x)₊^ν ] / (h Γ(2−μ))
/// ```
///
/// Indices are 1-based interior node numbers and are not range-checked here;
/// use [`left_rl_deriv_hat`] / [`right_rl_deriv_hat`] for validated access.
#[derive(Debug, Clone, Copy)]
pub struct HatDerivatives {
    grid: Grid1D,
    nu: f64,
    scale: f64,
}

impl HatDerivatives {
    pub fn new(mu: f64, grid: Grid1D) -> Self {
        Self {
            grid,
            nu: 1.0 - mu,
            scale: 1.0 / (grid.h() * gamma(2.0 - mu)),
        }
    }

    #[inline]
    fn tpow(&self, z: f64) -> f64 {
        if z > 0.0 {
            z.powf(self.nu)
        } else {
            0.0
        }
    }

    /// ₀D_x^μ φ_j(x).
    #[inline]
    pub fn left(&self, j: usize, x: f64) -> f64 {
        // Offsets are formed in grid units so that nodes hit the kinks exactly.
        let h = self.grid.h();
        let z = x * self.grid.n_cells() as f64 - j as f64;
        self.scale * (self.tpow((z + 1.0) * h) - 2.0 * self.tpow(z * h) + self.tpow((z - 1.0) * h))
    }

    /// ₓD₁^μ φ_j(x).
    #[inline]
    pub fn right(&self, j: usize, x: f64) -> f64 {
        let h = self.grid.h();
        let z = j as f64 - x * self.grid.n_cells() as f64;
        self.scale * (self.tpow((z + 1.0) * h) - 2.0 * self.tpow(z * h) + self.tpow((z - 1.0) * h))
    }
}

fn check(j: usize, mu: f64, grid: &Grid1D, x: f64) -> Result<()> {
    if !(mu > 0.0 && mu < 1.0) {
        return Err(Error::param(format!("half-order mu = {mu} must lie in (0, 1)")));
    }
    if j < 1 || j > grid.n_interior() {
        return Err(Error::param(format!(
            "hat index {j} outside 1..={}",
            grid.n_interior()
        )));
    }
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::param(format!("evaluation point {x} outside [0, 1]")));
    }
    Ok(())
}

/// ₀D_x^μ φ_j(x) for the hat centred at interior node `j` (1-based).
pub fn left_rl_deriv_hat(j: usize, mu: f64, grid: &Grid1D, x: f64) -> Result<f64> {
    check(j, mu, grid, x)?;
    Ok(HatDerivatives::new(mu, *grid).left(j, x))
}

/// ₓD₁^μ φ_j(x) for the hat centred at interior node `j` (1-based).
pub fn right_rl_deriv_hat(j: usize, mu: f64, grid: &Grid1D, x: f64) -> Result<f64> {
    check(j, mu, grid, x)?;
    Ok(HatDerivatives::new(mu, *grid).right(j, x))
}
