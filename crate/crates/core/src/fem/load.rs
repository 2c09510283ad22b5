use super::TensorMesh;
use crate::frac::Grid1D;
use crate::quadrature::GaussLegendre;
use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

/// A source term f(x, y, t), frozen one time level at a time.
///
/// Freezing lets expensive sources (for instance ones that integrate fractional
/// derivatives along grid lines) do their per-time work once per load vector.
pub trait SpaceTimeField: Sync {
    fn at_time(&self, t: f64) -> Box<dyn Fn(f64, f64) -> f64 + '_>;
}

/// Adapter for plain closures `f(x, y, t)`.
pub struct FnField<F>(pub F);

impl<F> SpaceTimeField for FnField<F>
where
    F: Fn(f64, f64, f64) -> f64 + Sync,
{
    fn at_time(&self, t: f64) -> Box<dyn Fn(f64, f64) -> f64 + '_> {
        Box::new(move |x, y| (self.0)(x, y, t))
    }
}

/// f ≡ 0.
#[derive(Debug, Clone, Copy, Default)]
pub struct ZeroField;

impl SpaceTimeField for ZeroField {
    fn at_time(&self, _t: f64) -> Box<dyn Fn(f64, f64) -> f64 + '_> {
        Box::new(|_, _| 0.0)
    }
}

struct AxisRule {
    points: Vec<f64>,
    // weighted hat values: n_interior × points
    basis: DMatrix<f64>,
}

impl AxisRule {
    fn new(grid: &Grid1D, rule: &GaussLegendre) -> Self {
        let mut points = Vec::with_capacity(grid.n_cells() * rule.len());
        let mut weights = Vec::with_capacity(points.capacity());
        for c in 0..grid.n_cells() {
            for (x, w) in rule.mapped(grid.node(c), grid.node(c + 1)) {
                points.push(x);
                weights.push(w);
            }
        }
        let basis = DMatrix::from_fn(grid.n_interior(), points.len(), |j, k| {
            grid.hat(j + 1, points[k]) * weights[k]
        });
        Self { points, basis }
    }
}

/// Tensor Gauss–Legendre assembly of (f, φ_pq) with a fixed number of points per
/// cell and direction. Reusable across time levels.
pub struct LoadAssembler {
    x: AxisRule,
    y: AxisRule,
}

impl LoadAssembler {
    pub fn new(mesh: &TensorMesh, points_per_cell: usize) -> Self {
        let rule = GaussLegendre::new(points_per_cell);
        Self {
            x: AxisRule::new(mesh.grid_x(), &rule),
            y: AxisRule::new(mesh.grid_y(), &rule),
        }
    }

    pub fn assemble(&self, f: &dyn Fn(f64, f64) -> f64) -> DVector<f64> {
        let values = DMatrix::from_fn(self.x.points.len(), self.y.points.len(), |i, j| {
            f(self.x.points[i], self.y.points[j])
        });
        let loads = &self.x.basis * values * self.y.basis.transpose();
        DVector::from_column_slice(loads.as_slice())
    }
}

/// Gauss points per cell and direction used by [`load_vector`] and [`load_sequence`].
pub const LOAD_POINTS: usize = 5;

/// Load vector (f, φ_pq) with `LOAD_POINTS` Gauss points per cell and direction.
pub fn load_vector(f: &dyn Fn(f64, f64) -> f64, mesh: &TensorMesh) -> DVector<f64> {
    LoadAssembler::new(mesh, LOAD_POINTS).assemble(f)
}

/// Load vectors F^1..F^N at t_n = n·τ.
pub fn load_sequence(
    source: &dyn SpaceTimeField,
    mesh: &TensorMesh,
    tau: f64,
    n_steps: usize,
) -> Vec<DVector<f64>> {
    let assembler = LoadAssembler::new(mesh, LOAD_POINTS);
    (1..=n_steps)
        .into_par_iter()
        .map(|n| {
            let f = source.at_time(n as f64 * tau);
            assembler.assemble(&*f)
        })
        .collect()
}

/// Nodal interpolant of g at the interior nodes.
pub fn interpolate_initial(g: &dyn Fn(f64, f64) -> f64, mesh: &TensorMesh) -> DVector<f64> {
    DVector::from_fn(mesh.dofs(), |k, _| {
        let (x, y) = mesh.coords(k);
        g(x, y)
    })
}

/// ‖u_h − exact‖_{L²(Ω)} by 5×5 Gauss quadrature on every cell.
pub fn l2_error(u: &DVector<f64>, exact: &dyn Fn(f64, f64) -> f64, mesh: &TensorMesh) -> f64 {
    let rule = GaussLegendre::new(5);
    let (gx, gy) = (mesh.grid_x(), mesh.grid_y());
    let mut sum = 0.0;
    for cy in 0..gy.n_cells() {
        let ys: Vec<(f64, f64)> = rule.mapped(gy.node(cy), gy.node(cy + 1)).collect();
        for cx in 0..gx.n_cells() {
            let v00 = mesh.nodal(u, cx, cy);
            let v10 = mesh.nodal(u, cx + 1, cy);
            let v01 = mesh.nodal(u, cx, cy + 1);
            let v11 = mesh.nodal(u, cx + 1, cy + 1);
            for (x, wx) in rule.mapped(gx.node(cx), gx.node(cx + 1)) {
                let sx = (x - gx.node(cx)) / gx.h();
                for &(y, wy) in &ys {
                    let sy = (y - gy.node(cy)) / gy.h();
                    let uh = (1.0 - sx) * (1.0 - sy) * v00
                        + sx * (1.0 - sy) * v10
                        + (1.0 - sx) * sy * v01
                        + sx * sy * v11;
                    let d = uh - exact(x, y);
                    sum += wx * wy * d * d;
                }
            }
        }
    }
    sum.sqrt()
}
