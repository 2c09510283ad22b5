use crate::error::Result;
use crate::frac::Grid1D;
use nalgebra::{DMatrix, DVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TensorMesh {
    grid_x: Grid1D,
    grid_y: Grid1D,
}

impl TensorMesh {
    pub fn new(n_cells_x: usize, n_cells_y: usize) -> Result<Self> {
        Ok(Self {
            grid_x: Grid1D::new(n_cells_x)?,
            grid_y: Grid1D::new(n_cells_y)?,
        })
    }

    pub fn grid_x(&self) -> &Grid1D {
        &self.grid_x
    }

    pub fn grid_y(&self) -> &Grid1D {
        &self.grid_y
    }

    pub fn n_x(&self) -> usize {
        self.grid_x.n_interior()
    }

    pub fn n_y(&self) -> usize {
        self.grid_y.n_interior()
    }

    /// Interior degree-of-freedom count m = n_x·n_y.
    pub fn dofs(&self) -> usize {
        self.n_x() * self.n_y()
    }

    /// Dof index of interior node (p, q), both 0-based.
    pub fn index(&self, p: usize, q: usize) -> usize {
        p + q * self.n_x()
    }

    /// Inverse of [`TensorMesh::index`].
    pub fn node_of(&self, dof: usize) -> (usize, usize) {
        (dof % self.n_x(), dof / self.n_x())
    }

    /// Physical coordinates of a dof.
    pub fn coords(&self, dof: usize) -> (f64, f64) {
        let (p, q) = self.node_of(dof);
        (self.grid_x.node(p + 1), self.grid_y.node(q + 1))
    }

    /// Nodal value at grid vertex (i, j), i ∈ 0..=n_cells_x; zero on the boundary.
    pub fn nodal(&self, u: &DVector<f64>, i: usize, j: usize) -> f64 {
        if i == 0 || j == 0 || i > self.n_x() || j > self.n_y() {
            0.0
        } else {
            u[self.index(i - 1, j - 1)]
        }
    }

    /// Evaluates the bilinear FE function with coefficients `u` at (x, y).
    pub fn eval(&self, u: &DVector<f64>, x: f64, y: f64) -> f64 {
        let (cx, cy) = (self.grid_x.cell_of(x), self.grid_y.cell_of(y));
        let sx = (x - self.grid_x.node(cx)) / self.grid_x.h();
        let sy = (y - self.grid_y.node(cy)) / self.grid_y.h();
        let v00 = self.nodal(u, cx, cy);
        let v10 = self.nodal(u, cx + 1, cy);
        let v01 = self.nodal(u, cx, cy + 1);
        let v11 = self.nodal(u, cx + 1, cy + 1);
        (1.0 - sx) * (1.0 - sy) * v00 + sx * (1.0 - sy) * v10 + (1.0 - sx) * sy * v01 + sx * sy * v11
    }

    /// Reflects a dof vector across the diagonal (swaps x and y indices).
    /// Only defined for square meshes.
    pub fn transpose_dofs(&self, u: &DVector<f64>) -> DVector<f64> {
        assert_eq!(self.n_x(), self.n_y(), "transpose needs a square mesh");
        DVector::from_fn(self.dofs(), |k, _| {
            let (p, q) = self.node_of(k);
            u[self.index(q, p)]
        })
    }
}

/// (A_x ⊗ A_y) action in the x-fastest ordering: reshapes `u` to an n_x × n_y
/// matrix U and returns vec(A_x · U · A_yᵀ).
pub fn kron_apply(ax: &DMatrix<f64>, ay: &DMatrix<f64>, u: &DVector<f64>) -> DVector<f64> {
    let (nx, ny) = (ax.nrows(), ay.nrows());
    let grid = DMatrix::from_column_slice(nx, ny, u.as_slice());
    let r = ax * grid * ay.transpose();
    DVector::from_column_slice(r.as_slice())
}
