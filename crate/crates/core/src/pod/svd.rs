use super::snapshots::SnapshotSet;
use super::{EigenDecomposition, RANK_TOL};
use crate::error::{Error, Result};
use crate::fem::{EnergyFactor, FullSystem};
use nalgebra::{DMatrix, DVector};

const MAX_SWEEPS: usize = 100;
const ORTH_TOL: f64 = 1e-15;

/// Thin SVD B = WΣVᵀ by one-sided (Hestenes) Jacobi.
///
/// Columns are rotated pairwise until every pair is orthogonal to
/// `ORTH_TOL` relative to the column norms. Returns the singular values in
/// descending order, the rotated columns BV = WΣ, and V.
pub fn one_sided_jacobi(b: &DMatrix<f64>) -> Result<(DVector<f64>, DMatrix<f64>, DMatrix<f64>)> {
    let n = b.ncols();
    let mut a = b.clone();
    let mut v = DMatrix::<f64>::identity(n, n);
    let mut converged = n < 2;
    for _ in 0..MAX_SWEEPS {
        if converged {
            break;
        }
        let mut rotated = false;
        for p in 0..n.saturating_sub(1) {
            for q in p + 1..n {
                let alpha = a.column(p).norm_squared();
                let beta = a.column(q).norm_squared();
                let gamma = a.column(p).dot(&a.column(q));
                if gamma == 0.0 || gamma.abs() <= ORTH_TOL * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for m in [&mut a, &mut v] {
                    for k in 0..m.nrows() {
                        let xp = m[(k, p)];
                        let xq = m[(k, q)];
                        m[(k, p)] = c * xp - s * xq;
                        m[(k, q)] = s * xp + c * xq;
                    }
                }
            }
        }
        converged = !rotated;
    }
    if !converged {
        return Err(Error::numeric("one-sided Jacobi SVD did not converge"));
    }
    let norms: Vec<f64> = (0..n).map(|j| a.column(j).norm()).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| norms[j].partial_cmp(&norms[i]).unwrap_or(std::cmp::Ordering::Equal));
    let sigma = DVector::from_iterator(n, order.iter().map(|&i| norms[i]));
    let cols = DMatrix::from_fn(a.nrows(), n, |r, c| a[(r, order[c])]);
    let vs = DMatrix::from_fn(n, n, |r, c| v[(r, order[c])]);
    Ok((sigma, cols, vs))
}

/// B = RU/√L with A = RᵀR, so that BᵀB = G.
pub(crate) fn weighted_snapshots(snaps: &SnapshotSet, factor: &EnergyFactor) -> DMatrix<f64> {
    factor.apply_columns(&snaps.matrix) / (snaps.len() as f64).sqrt()
}

/// Eigenpairs of the correlation matrix G = UᵀAU/L, computed as the squared
/// singular values and right singular vectors of the energy-weighted snapshots.
///
/// Forming G and diagonalizing it loses every eigenvalue below roughly
/// ε·λ_1 to roundoff; working on the factor keeps small eigenvalues with
/// high relative accuracy.
pub fn snapshot_eig(snaps: &SnapshotSet, sys: &FullSystem) -> Result<EigenDecomposition> {
    if snaps.dofs() != sys.dofs() {
        return Err(Error::param(format!(
            "snapshots have {} dofs, system has {}",
            snaps.dofs(),
            sys.dofs()
        )));
    }
    let b = weighted_snapshots(snaps, &EnergyFactor::new(sys)?);
    let (sigma, _, vectors) = one_sided_jacobi(&b)?;
    let values = sigma.map(|s| s * s);
    let rank = match values.iter().next() {
        Some(&top) if top > 0.0 => values.iter().filter(|&&v| v > RANK_TOL * top).count(),
        _ => 0,
    };
    Ok(EigenDecomposition { values, vectors, rank })
}
