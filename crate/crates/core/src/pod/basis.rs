use super::svd::weighted_snapshots;
use super::{EigenDecomposition, SnapshotSet};
use crate::error::{Error, Result};
use crate::fem::{EnergyFactor, FullSystem};
use nalgebra::{DMatrix, DVector};

/// A-orthonormal POD basis ψ_k = U v^k / √(Lλ_k), k = 1..d.
#[derive(Debug, Clone, PartialEq)]
pub struct PODBasis {
    /// m × d, one basis vector per column.
    pub psi: DMatrix<f64>,
    /// All eigenvalues of G (descending), not only the retained ones.
    pub eigenvalues: DVector<f64>,
    /// Numerical rank l of G.
    pub rank: usize,
    /// L, the snapshot count the basis was built from.
    pub snapshot_count: usize,
}

impl PODBasis {
    pub fn d(&self) -> usize {
        self.psi.ncols()
    }

    pub fn dofs(&self) -> usize {
        self.psi.nrows()
    }

    pub fn retained(&self) -> &[f64] {
        &self.eigenvalues.as_slice()[..self.d()]
    }

    /// Σ_{j>d} λ_j for this basis's own d.
    pub fn discarded_tail(&self) -> f64 {
        self.tail(self.d())
    }

    /// Σ_{j>d} λ_j over all eigenvalues of G.
    pub fn tail(&self, d: usize) -> f64 {
        self.eigenvalues.iter().skip(d).fold(0.0, |acc, v| acc + v)
    }

    /// The leading `d` basis vectors.
    pub fn truncate(&self, d: usize) -> Result<PODBasis> {
        if d > self.d() {
            return Err(Error::param(format!(
                "cannot truncate a {}-vector basis to {d}",
                self.d()
            )));
        }
        Ok(PODBasis {
            psi: self.psi.columns(0, d).into_owned(),
            ..self.clone()
        })
    }

    /// Empty basis for an all-zero snapshot set.
    pub fn empty(dofs: usize, eig: &EigenDecomposition, snapshot_count: usize) -> Self {
        PODBasis {
            psi: DMatrix::zeros(dofs, 0),
            eigenvalues: eig.values.clone(),
            rank: eig.rank,
            snapshot_count,
        }
    }
}

/// Builds the first `d` POD basis vectors. Each is oriented so that its
/// largest-magnitude entry is positive.
pub fn pod_basis(snaps: &SnapshotSet, eig: &EigenDecomposition, d: usize) -> Result<PODBasis> {
    let l = snaps.len();
    if eig.values.len() != l {
        return Err(Error::param(format!(
            "{} eigenpairs for {l} snapshots",
            eig.values.len()
        )));
    }
    if d > eig.rank {
        return Err(Error::param(format!(
            "requested {d} basis vectors but the correlation matrix has numerical rank {}",
            eig.rank
        )));
    }
    let mut psi = DMatrix::zeros(snaps.dofs(), d);
    for k in 0..d {
        let mut col = &snaps.matrix * eig.vectors.column(k);
        col /= (l as f64 * eig.values[k]).sqrt();
        let pivot = col.iamax();
        if col[pivot] < 0.0 {
            col.neg_mut();
        }
        psi.set_column(k, &col);
    }
    Ok(PODBasis {
        psi,
        eigenvalues: eig.values.clone(),
        rank: eig.rank,
        snapshot_count: l,
    })
}

/// (1/L) Σ_i ‖U_i − Σ_j (U_i, φ_j)_w φ_j‖²_w for the A-orthonormal columns of `phi`.
pub fn projection_error(snaps: &SnapshotSet, sys: &FullSystem, phi: &DMatrix<f64>) -> Result<f64> {
    if phi.nrows() != snaps.dofs() || snaps.dofs() != sys.dofs() {
        return Err(Error::param("basis, snapshot and system dimensions differ"));
    }
    // With A = RᵀR the sum is ‖B − WWᵀB‖²_F for B = RU/√L and W = RΦ.
    let factor = EnergyFactor::new(sys)?;
    let b = weighted_snapshots(snaps, &factor);
    let w = factor.apply_columns(phi);
    let residual = &b - &w * (w.transpose() * &b);
    Ok(residual.norm_squared())
}

/// Mean squared energy-norm error of projecting the snapshots onto the leading
/// `d` basis vectors. Equals Σ_{j>d} λ_j.
pub fn reconstruction_error(
    snaps: &SnapshotSet,
    basis: &PODBasis,
    sys: &FullSystem,
    d: usize,
) -> Result<f64> {
    if d > basis.d() {
        return Err(Error::param(format!(
            "d = {d} exceeds the {} available basis vectors",
            basis.d()
        )));
    }
    projection_error(snaps, sys, &basis.psi.columns(0, d).into_owned())
}

/// Outcome of the basis-count rule L·(Σ_{j>d} λ_j)^{1/2} ≤ max(τ, h^{k+1−γ}).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BasisChoice {
    pub d: usize,
    pub criterion_met: bool,
    pub threshold: f64,
    /// L·(Σ_{j>d} λ_j)^{1/2} at the chosen d.
    pub pod_term: f64,
}

/// Smallest d ∈ [1, l) satisfying the rule.
///
/// At d = l the tail is empty, so the rule holds trivially there; when no proper
/// truncation d < l satisfies it the result is d = l with `criterion_met = false`
/// (unless l = 1, where no truncation exists). A rank-zero spectrum yields d = 0.
pub fn choose_d(
    eig: &EigenDecomposition,
    l_snapshots: usize,
    tau: f64,
    h: f64,
    k: u32,
    gamma: f64,
) -> BasisChoice {
    let threshold = tau.max(h.powf(k as f64 + 1.0 - gamma));
    let pod_term = |d: usize| l_snapshots as f64 * eig.tail(d).max(0.0).sqrt();
    if eig.rank == 0 {
        return BasisChoice {
            d: 0,
            criterion_met: true,
            threshold,
            pod_term: 0.0,
        };
    }
    for d in 1..eig.rank {
        let term = pod_term(d);
        if term <= threshold {
            return BasisChoice {
                d,
                criterion_met: true,
                threshold,
                pod_term: term,
            };
        }
    }
    BasisChoice {
        d: eig.rank,
        criterion_met: eig.rank == 1,
        threshold,
        pod_term: pod_term(eig.rank),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pod::symmetric_eig;

    fn spectrum(values: &[f64]) -> EigenDecomposition {
        symmetric_eig(&DMatrix::from_diagonal(&DVector::from_column_slice(values))).unwrap()
    }

    #[test]
    fn rule_picks_one_basis_for_fast_decay() {
        let mut lams = vec![1.0, 1e-8];
        lams.extend(std::iter::repeat(1e-12 * 0.99).take(15));
        let eig = spectrum(&lams);
        let c = choose_d(&eig, 17, 1.0 / 256.0, 1.0 / 16.0, 1, 1.6);
        assert!((c.threshold - 16f64.powf(-0.4)).abs() < 1e-15);
        assert!((c.threshold - 0.3299).abs() < 1e-4);
        assert_eq!(c.d, 1);
        assert!(c.criterion_met);
        assert!((c.pod_term - 17.0 * (1e-8 + 15.0 * 0.99e-12f64).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn rule_with_no_tail() {
        let c = choose_d(&spectrum(&[1.0]), 1, 0.1, 0.5, 1, 1.5);
        assert_eq!(c.d, 1);
        assert!(c.criterion_met);
    }

    #[test]
    fn unsatisfiable_rule_flags() {
        let c = choose_d(&spectrum(&[5.0; 4]), 4, 1e-6, 1e-3, 1, 1.9);
        assert_eq!(c.d, 4);
        assert!(!c.criterion_met);
        assert_eq!(c.pod_term, 0.0);
    }

    #[test]
    fn zero_spectrum_chooses_nothing() {
        let c = choose_d(&spectrum(&[0.0, 0.0]), 2, 0.1, 0.1, 1, 1.5);
        assert_eq!(c.d, 0);
    }
}
