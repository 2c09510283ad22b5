//! Fractional calculus on uniform 1-D grids.
//!
//! Hat-function Riemann–Liouville derivatives in closed form, the Toeplitz
//! fractional stiffness and tridiagonal mass matrices they produce, and a
//! shifted Grünwald–Letnikov differentiator for sampled functions.

mod grunwald;
mod hat;
mod stiffness;

pub use grunwald::{
    adjoint_identity_residual, adjoint_pairing, gl_frac_deriv, gl_weights, riesz_of_samples,
    AdjointPairing,
};
pub use hat::{left_rl_deriv_hat, right_rl_deriv_hat, HatDerivatives};
pub use stiffness::{frac_stiffness_1d, mass_1d, FracStiffness1D, Mass1D, StiffnessQuadrature};

use crate::error::{Error, Result};
use std::f64::consts::PI;

/// Which end of the interval a one-sided operator integrates from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// ₀D_x: integrates from the left end.
    Left,
    /// ₓD₁: integrates from the right end.
    Right,
}

/// 1 / (2 cos(order·π/2)), negative for order in (1, 2).
pub fn riesz_constant(order: f64) -> f64 {
    1.0 / (2.0 * (order * PI / 2.0).cos())
}

/// Fractional orders (α, β) of the x and y Riesz derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FracOrder {
    alpha: f64,
    beta: f64,
    c_alpha: f64,
    c_beta: f64,
}

impl FracOrder {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        for (name, v) in [("alpha", alpha), ("beta", beta)] {
            if !(v > 1.0 && v < 2.0) {
                return Err(Error::param(format!("{name} = {v} must lie in (1, 2)")));
            }
        }
        Ok(Self {
            alpha,
            beta,
            c_alpha: riesz_constant(alpha),
            c_beta: riesz_constant(beta),
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// C_α = 1/(2cos(απ/2)) < 0.
    pub fn c_alpha(&self) -> f64 {
        self.c_alpha
    }

    pub fn c_beta(&self) -> f64 {
        self.c_beta
    }

    /// Half-order α/2 used by the bilinear form in x.
    pub fn mu_x(&self) -> f64 {
        0.5 * self.alpha
    }

    pub fn mu_y(&self) -> f64 {
        0.5 * self.beta
    }

    /// γ = max(α, β), the order that limits spatial convergence.
    pub fn gamma(&self) -> f64 {
        self.alpha.max(self.beta)
    }
}

/// Uniform grid on [0, 1] with `n_cells` cells and `n_cells − 1` interior nodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Grid1D {
    n_cells: usize,
}

impl Grid1D {
    pub fn new(n_cells: usize) -> Result<Self> {
        if n_cells < 2 {
            return Err(Error::param(format!(
                "a grid needs at least 2 cells to have an interior node, got {n_cells}"
            )));
        }
        Ok(Self { n_cells })
    }

    pub fn n_cells(&self) -> usize {
        self.n_cells
    }

    /// Number of interior nodes (degrees of freedom).
    pub fn n_interior(&self) -> usize {
        self.n_cells - 1
    }

    pub fn h(&self) -> f64 {
        1.0 / self.n_cells as f64
    }

    /// x_j = j·h for j = 0..=n_cells.
    pub fn node(&self, j: usize) -> f64 {
        j as f64 / self.n_cells as f64
    }

    /// Value of the hat function centred at interior node `j` (1-based).
    pub fn hat(&self, j: usize, x: f64) -> f64 {
        let s = (x - self.node(j)).abs() / self.h();
        (1.0 - s).max(0.0)
    }

    /// Index of the cell containing x, clamped to the last cell at x = 1.
    pub fn cell_of(&self, x: f64) -> usize {
        ((x * self.n_cells as f64).floor() as isize).clamp(0, self.n_cells as isize - 1) as usize
    }
}
