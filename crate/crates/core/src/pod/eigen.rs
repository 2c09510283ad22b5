use crate::error::{Error, Result};
use nalgebra::{DMatrix, DVector};

/// Eigenvalues at or below `RANK_TOL·λ_1` are treated as zero.
pub const RANK_TOL: f64 = 1e-12;

const OFF_TOL: f64 = 1e-14;
const MAX_SWEEPS: usize = 100;

/// Eigenpairs of a symmetric matrix, sorted by descending eigenvalue.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenDecomposition {
    pub values: DVector<f64>,
    /// Orthonormal eigenvectors stored as columns, in the order of `values`.
    pub vectors: DMatrix<f64>,
    /// Numerical rank l: count of λ_k > RANK_TOL·λ_1.
    pub rank: usize,
}

impl EigenDecomposition {
    /// Σ_{j>d} λ_j over every computed eigenvalue, including those below the rank
    /// cutoff; with them the tail equals the snapshot reconstruction error.
    pub fn tail(&self, d: usize) -> f64 {
        self.values.iter().skip(d).fold(0.0, |acc, v| acc + v)
    }
}

fn off_diagonal_norm(a: &DMatrix<f64>) -> f64 {
    let n = a.nrows();
    let mut s = 0.0;
    for j in 0..n {
        for i in 0..n {
            if i != j {
                s += a[(i, j)] * a[(i, j)];
            }
        }
    }
    s.sqrt()
}

/// Cyclic Jacobi eigensolver.
///
/// Sweeps the strict upper triangle row by row, annihilating each a_pq with a
/// plane rotation, until the off-diagonal Frobenius mass falls below
/// 1e-14·‖G‖_F. The sweep order is fixed, so results are deterministic.
pub fn symmetric_eig(g: &DMatrix<f64>) -> Result<EigenDecomposition> {
    let n = g.nrows();
    if g.ncols() != n {
        return Err(Error::param("eigenproblem matrix must be square"));
    }
    let scale = g.amax();
    let asym = (g - g.transpose()).amax();
    if asym > 1e-12 * scale {
        return Err(Error::param(format!(
            "matrix is not symmetric (max |G − Gᵀ| = {asym:.3e})"
        )));
    }
    let mut a = g.clone();
    let mut v = DMatrix::<f64>::identity(n, n);
    let norm = a.norm();
    let mut converged = n < 2;
    for _ in 0..MAX_SWEEPS {
        if off_diagonal_norm(&a) <= OFF_TOL * norm {
            converged = true;
            break;
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                let apq = a[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                // A ← JᵀAJ with J the (p, q) rotation [[c, s], [−s, c]].
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = c * akp - s * akq;
                    a[(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = c * apk - s * aqk;
                    a[(q, k)] = s * apk + c * aqk;
                }
                a[(p, q)] = 0.0;
                a[(q, p)] = 0.0;
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
    }
    if !converged && off_diagonal_norm(&a) > OFF_TOL * norm {
        return Err(Error::numeric("Jacobi eigensolver did not converge"));
    }

    let mut order: Vec<usize> = (0..n).collect();
    // stable: equal eigenvalues keep their original index order
    order.sort_by(|&i, &j| a[(j, j)].partial_cmp(&a[(i, i)]).unwrap_or(std::cmp::Ordering::Equal));
    let values = DVector::from_iterator(n, order.iter().map(|&i| a[(i, i)]));
    let vectors = DMatrix::from_fn(n, n, |r, c| v[(r, order[c])]);
    let rank = if n == 0 || values[0] <= 0.0 {
        0
    } else {
        let cut = RANK_TOL * values[0];
        values.iter().take_while(|&&l| l > cut).count()
    };
    Ok(EigenDecomposition {
        values,
        vectors,
        rank,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_has_unit_eigenvalues() {
        let e = symmetric_eig(&DMatrix::identity(3, 3)).unwrap();
        assert!(e.values.iter().all(|&l| l == 1.0));
        assert_eq!(e.rank, 3);
        assert_eq!(e.vectors, DMatrix::identity(3, 3));
    }

    #[test]
    fn rotated_diagonal_2x2() {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let q = DMatrix::from_row_slice(2, 2, &[r, -r, r, r]);
        let g = &q * DMatrix::from_diagonal(&DVector::from_vec(vec![3.0, 1.0])) * q.transpose();
        let e = symmetric_eig(&g).unwrap();
        assert!((e.values[0] - 3.0).abs() < 1e-14);
        assert!((e.values[1] - 1.0).abs() < 1e-14);
        for k in 0..2 {
            let dot = e.vectors.column(k).dot(&q.column(k)).abs();
            assert!((dot - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn rejects_non_symmetric_input() {
        let g = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.1, 1.0]);
        assert!(matches!(symmetric_eig(&g), Err(Error::Parameter(_))));
    }

    #[test]
    fn rank_counts_only_significant_eigenvalues() {
        let g = DMatrix::from_diagonal(&DVector::from_vec(vec![1.0, 1e-6, 1e-13, 0.0]));
        let e = symmetric_eig(&g).unwrap();
        assert_eq!(e.rank, 2);
        assert!((e.tail(1) - (1e-6 + 1e-13)).abs() < 1e-20);
        let z = symmetric_eig(&DMatrix::zeros(3, 3)).unwrap();
        assert_eq!(z.rank, 0);
    }

    #[test]
    fn ties_keep_index_order() {
        let e = symmetric_eig(&DMatrix::from_diagonal(&DVector::from_vec(vec![2.0, 5.0, 2.0]))).unwrap();
        assert_eq!(e.values.as_slice(), &[5.0, 2.0, 2.0]);
        assert_eq!(e.vectors[(0, 1)], 1.0);
        assert_eq!(e.vectors[(2, 2)], 1.0);
    }
}
