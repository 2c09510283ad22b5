use super::{kron_apply, FullSystem};
use crate::error::{Error, Result};
use crate::pod::symmetric_eig;
use nalgebra::{DMatrix, DVector};

/// A square-root factor R of the stiffness matrix, A = RᵀR.
///
/// Each direction's pencil (S, M) is diagonalized with M-orthonormal
/// eigenvectors Q (QᵀMQ = I, QᵀSQ = Λ), so
///
/// ```text
/// A = M·(Q_y⊗Q_x)·D·(Q_y⊗Q_x)ᵀ·M,   D = I⊗Λ_x + Λ_y⊗I,   R = D^{1/2}(Q_y⊗Q_x)ᵀM.
/// ```
///
/// Applying R costs two small dense products per vector.
#[derive(Debug, Clone)]
pub struct EnergyFactor {
    px: DMatrix<f64>,
    py: DMatrix<f64>,
    scale: DVector<f64>,
}

/// (QᵀM, Λ) for the pencil (S, M).
fn pencil(s: &DMatrix<f64>, m: &DMatrix<f64>) -> Result<(DMatrix<f64>, DVector<f64>)> {
    let l = m
        .clone()
        .cholesky()
        .ok_or_else(|| Error::numeric("mass matrix is not positive definite"))?
        .l();
    let ls = l
        .solve_lower_triangular(s)
        .ok_or_else(|| Error::numeric("singular mass factor"))?;
    let c = l
        .solve_lower_triangular(&ls.transpose())
        .ok_or_else(|| Error::numeric("singular mass factor"))?;
    let c = (&c + c.transpose()) * 0.5;
    let eig = symmetric_eig(&c)?;
    if eig.values.iter().any(|&v| v <= 0.0) {
        return Err(Error::numeric("fractional stiffness is not positive definite"));
    }
    // Q = L^{-T}Z, so QᵀM = ZᵀLᵀ.
    Ok(((&l * &eig.vectors).transpose(), eig.values))
}

impl EnergyFactor {
    pub fn new(sys: &FullSystem) -> Result<Self> {
        let (px, lx) = pencil(&sys.stiffness_x().to_dense(), &sys.mass_x().to_dense())?;
        let (py, ly) = pencil(&sys.stiffness_y().to_dense(), &sys.mass_y().to_dense())?;
        let nx = lx.len();
        let scale = DVector::from_fn(nx * ly.len(), |i, _| (lx[i % nx] + ly[i / nx]).sqrt());
        Ok(Self { px, py, scale })
    }

    pub fn apply(&self, u: &DVector<f64>) -> DVector<f64> {
        kron_apply(&self.px, &self.py, u).component_mul(&self.scale)
    }

    /// R applied to every column.
    pub fn apply_columns(&self, u: &DMatrix<f64>) -> DMatrix<f64> {
        let mut out = DMatrix::zeros(u.nrows(), u.ncols());
        for (j, c) in u.column_iter().enumerate() {
            out.set_column(j, &self.apply(&c.into_owned()));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fem::{assemble, TensorMesh};
    use crate::frac::FracOrder;

    #[test]
    fn factor_reproduces_energy_products() {
        let sys = assemble(FracOrder::new(1.3, 1.8).unwrap(), TensorMesh::new(5, 4).unwrap(), 0.1, 1).unwrap();
        let r = EnergyFactor::new(&sys).unwrap();
        let a = sys.stiffness_dense();
        let rd = r.apply_columns(&DMatrix::identity(sys.dofs(), sys.dofs()));
        let defect = (rd.transpose() * &rd - &a).amax();
        assert!(defect < 1e-12 * a.amax(), "defect {defect:e}");
    }
}
