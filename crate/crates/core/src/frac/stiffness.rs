use super::{Grid1D, HatDerivatives};
use crate::error::{Error, Result};
use crate::quadrature::GradedRule;
use nalgebra::DMatrix;
use rayon::prelude::*;

/// Refinement schedule for the stiffness-entry quadrature.
///
/// Each level is a `(gauss_points, grading_depth)` pair for a [`GradedRule`]
/// applied on every grid cell. An entry is accepted once two successive levels
/// agree to within `tolerance`; running out of levels is an error.
#[derive(Debug, Clone)]
pub struct StiffnessQuadrature {
    pub tolerance: f64,
    pub ratio: f64,
    pub schedule: Vec<(usize, usize)>,
}

impl Default for StiffnessQuadrature {
    fn default() -> Self {
        Self {
            tolerance: 1e-10,
            ratio: 0.15,
            schedule: vec![(8, 8), (12, 12), (16, 16), (20, 22), (24, 30), (30, 40)],
        }
    }
}

/// Symmetric Toeplitz matrix of the symmetrized 1-D fractional form
///
/// ```text
/// S_ij = C [ (₀D^μ φ_i, ₓD₁^μ φ_j) + (ₓD₁^μ φ_i, ₀D^μ φ_j) ]
/// ```
///
/// on the interior hats of a uniform grid. Only the first row s(0..n) is stored;
/// s(−k) = s(k).
#[derive(Debug, Clone)]
pub struct FracStiffness1D {
    mu: f64,
    c: f64,
    grid: Grid1D,
    first_row: Vec<f64>,
}

impl FracStiffness1D {
    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }

    pub fn n(&self) -> usize {
        self.first_row.len()
    }

    pub fn first_row(&self) -> &[f64] {
        &self.first_row
    }

    /// s(k) for k = −(n−1)..=(n−1).
    pub fn symbol(&self, k: isize) -> f64 {
        self.first_row[k.unsigned_abs()]
    }

    /// Entry S_ij with 0-based indices.
    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.first_row[i.abs_diff(j)]
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let n = self.n();
        DMatrix::from_fn(n, n, |i, j| self.entry(i, j))
    }
}

/// Unscaled entry (C = 1) for Toeplitz offset `k`, evaluated on the pair
/// (i, j) = (k+1, 1). Its support is [0, x_{k+2}].
fn offset_integral(hats: &HatDerivatives, grid: &Grid1D, k: usize, rule: &GradedRule) -> f64 {
    let i = k + 1;
    let j = 1;
    let integrand = |x: f64| hats.left(i, x) * hats.right(j, x) + hats.right(i, x) * hats.left(j, x);
    (0..k + 2)
        .map(|cell| rule.integrate(grid.node(cell), grid.node(cell + 1), &integrand))
        .sum()
}

fn converged_offset(
    hats: &HatDerivatives,
    grid: &Grid1D,
    k: usize,
    quad: &StiffnessQuadrature,
) -> Result<f64> {
    let mut prev: Option<f64> = None;
    let mut change = f64::INFINITY;
    for &(points, depth) in &quad.schedule {
        let rule = GradedRule::new(points, depth, quad.ratio);
        let value = offset_integral(hats, grid, k, &rule);
        if let Some(p) = prev {
            change = (value - p).abs();
            if change <= quad.tolerance {
                return Ok(value);
            }
        }
        prev = Some(value);
    }
    Err(Error::Quadrature { offset: k, change })
}

/// Assembles the 1-D fractional stiffness matrix for half-order `mu` ∈ (1/2, 1)
/// scaled by the sign-carrying constant `c` (C_α or C_β).
pub fn frac_stiffness_1d(mu: f64, c: f64, grid: &Grid1D) -> Result<FracStiffness1D> {
    frac_stiffness_1d_with(mu, c, grid, &StiffnessQuadrature::default())
}

pub fn frac_stiffness_1d_with(
    mu: f64,
    c: f64,
    grid: &Grid1D,
    quad: &StiffnessQuadrature,
) -> Result<FracStiffness1D> {
    if !(mu > 0.5 && mu < 1.0) {
        return Err(Error::param(format!("half-order mu = {mu} must lie in (1/2, 1)")));
    }
    if !c.is_finite() {
        return Err(Error::param("stiffness constant must be finite"));
    }
    let hats = HatDerivatives::new(mu, *grid);
    // The tolerance is absolute on the scaled entry.
    let scaled = StiffnessQuadrature {
        tolerance: quad.tolerance / c.abs().max(f64::MIN_POSITIVE),
        ..quad.clone()
    };
    let row = (0..grid.n_interior())
        .into_par_iter()
        .map(|k| converged_offset(&hats, grid, k, &scaled).map(|v| c * v))
        .collect::<Result<Vec<f64>>>()?;
    Ok(FracStiffness1D {
        mu,
        c,
        grid: *grid,
        first_row: row,
    })
}

/// Tridiagonal P1 mass matrix tridiag(h/6, 2h/3, h/6) on the interior hats.
#[derive(Debug, Clone, Copy)]
pub struct Mass1D {
    grid: Grid1D,
}

impl Mass1D {
    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }

    pub fn n(&self) -> usize {
        self.grid.n_interior()
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        let h = self.grid.h();
        match i.abs_diff(j) {
            0 => 2.0 * h / 3.0,
            1 => h / 6.0,
            _ => 0.0,
        }
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let n = self.n();
        DMatrix::from_fn(n, n, |i, j| self.entry(i, j))
    }
}

pub fn mass_1d(grid: &Grid1D) -> Mass1D {
    Mass1D { grid: *grid }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frac::riesz_constant;
    use nalgebra::Cholesky;

    #[test]
    fn single_interior_node_mass() {
        let m = mass_1d(&Grid1D::new(2).unwrap()).to_dense();
        assert_eq!(m.shape(), (1, 1));
        assert!((m[(0, 0)] - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn mass_is_symmetric_with_interior_row_sum_h() {
        let g = Grid1D::new(9).unwrap();
        let m = mass_1d(&g).to_dense();
        assert_eq!(m, m.transpose());
        for i in 1..g.n_interior() - 1 {
            assert!((m.row(i).sum() - g.h()).abs() < 1e-15);
        }
        assert!(Cholesky::new(m).is_some());
    }

    #[test]
    fn stiffness_entries_are_symmetric_in_the_pair() {
        // Evaluate (i, j) and (j, i) independently through the integrand.
        let g = Grid1D::new(6).unwrap();
        let hats = HatDerivatives::new(0.8, g);
        let rule = GradedRule::new(16, 20, 0.15);
        let pair = |i: usize, j: usize| -> f64 {
            let f = |x: f64| hats.left(i, x) * hats.right(j, x) + hats.right(i, x) * hats.left(j, x);
            (0..g.n_cells())
                .map(|c| rule.integrate(g.node(c), g.node(c + 1), &f))
                .sum()
        };
        for (i, j) in [(1, 3), (2, 5), (1, 5), (4, 2)] {
            assert!((pair(i, j) - pair(j, i)).abs() < 1e-11, "({i},{j})");
        }
    }

    #[test]
    fn stiffness_is_positive_definite() {
        for &alpha in &[1.05, 1.3, 1.5, 1.8, 1.95] {
            for &cells in &[2usize, 5, 12] {
                let g = Grid1D::new(cells).unwrap();
                let s = frac_stiffness_1d(alpha / 2.0, riesz_constant(alpha), &g).unwrap();
                assert!(
                    Cholesky::new(s.to_dense()).is_some(),
                    "alpha={alpha} cells={cells}"
                );
            }
        }
    }

    #[test]
    fn starved_schedule_reports_the_offset() {
        let g = Grid1D::new(4).unwrap();
        let quad = StiffnessQuadrature {
            tolerance: 1e-30,
            ratio: 0.5,
            schedule: vec![(2, 1), (3, 1)],
        };
        let err = frac_stiffness_1d_with(0.75, riesz_constant(1.5), &g, &quad).unwrap_err();
        assert!(matches!(err, Error::Quadrature { offset: _, .. }));
    }

    #[test]
    fn rejects_bad_half_order() {
        let g = Grid1D::new(4).unwrap();
        assert!(frac_stiffness_1d(0.5, -1.0, &g).is_err());
        assert!(frac_stiffness_1d(1.0, -1.0, &g).is_err());
    }
}
