use crate::error::{Error, Result};
use crate::fem::{FullSystem, Trajectory};
use nalgebra::DMatrix;

/// Snapshot matrix U (m × L) with the trajectory indices it was drawn from.
#[derive(Debug, Clone, PartialEq)]
pub struct SnapshotSet {
    pub matrix: DMatrix<f64>,
    pub indices: Vec<usize>,
    /// N of the source trajectory.
    pub n_steps: usize,
}

impl SnapshotSet {
    /// L, the number of snapshot columns.
    pub fn len(&self) -> usize {
        self.matrix.ncols()
    }

    pub fn is_empty(&self) -> bool {
        self.matrix.ncols() == 0
    }

    pub fn dofs(&self) -> usize {
        self.matrix.nrows()
    }

    /// True when every snapshot is identically zero.
    pub fn is_degenerate(&self) -> bool {
        self.matrix.iter().all(|&v| v == 0.0)
    }

    /// Builds a set directly from columns (used when snapshots come from elsewhere).
    pub fn from_columns(matrix: DMatrix<f64>) -> Self {
        let l = matrix.ncols();
        Self {
            matrix,
            indices: (1..=l).collect(),
            n_steps: l,
        }
    }
}

/// Uniformly spaced indices n_i = round(i·N/L), i = 1..L, excluding n = 0.
/// Repeated indices (only possible when L > N) are collapsed.
pub fn snapshot_indices(n_steps: usize, l: usize) -> Result<Vec<usize>> {
    if l < 1 {
        return Err(Error::param("at least one snapshot is required"));
    }
    if n_steps < 1 {
        return Err(Error::param("trajectory has no post-initial states"));
    }
    let mut idx: Vec<usize> = (1..=l)
        .map(|i| ((i * n_steps) as f64 / l as f64).round().max(1.0) as usize)
        .collect();
    idx.dedup();
    Ok(idx)
}

pub fn select_snapshots(traj: &Trajectory, l: usize) -> Result<SnapshotSet> {
    let n_steps = traj.n_steps();
    let indices = snapshot_indices(n_steps, l)?;
    let cols: Vec<_> = indices.iter().map(|&n| traj.states[n].clone()).collect();
    Ok(SnapshotSet {
        matrix: DMatrix::from_columns(&cols),
        indices,
        n_steps,
    })
}

/// G = (1/L)·UᵀAU, the Gram matrix of the snapshots in the energy inner product.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationMatrix {
    pub g: DMatrix<f64>,
    pub snapshot_count: usize,
}

impl CorrelationMatrix {
    pub fn trace(&self) -> f64 {
        self.g.trace()
    }
}

pub fn correlation_matrix(snaps: &SnapshotSet, sys: &FullSystem) -> Result<CorrelationMatrix> {
    if snaps.dofs() != sys.dofs() {
        return Err(Error::param(format!(
            "snapshots have {} dofs, system has {}",
            snaps.dofs(),
            sys.dofs()
        )));
    }
    let l = snaps.len();
    let au = stiffness_columns(&snaps.matrix, sys);
    let mut g = snaps.matrix.transpose() * au / l as f64;
    // exact symmetry
    let gt = g.transpose();
    g = (g + gt) * 0.5;
    Ok(CorrelationMatrix {
        g,
        snapshot_count: l,
    })
}

pub(crate) fn stiffness_columns(u: &DMatrix<f64>, sys: &FullSystem) -> DMatrix<f64> {
    let cols: Vec<_> = u
        .column_iter()
        .map(|c| sys.apply_stiffness(&c.into_owned()))
        .collect();
    if cols.is_empty() {
        DMatrix::zeros(u.nrows(), 0)
    } else {
        DMatrix::from_columns(&cols)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn indices_follow_the_rounding_rule() {
        assert_eq!(snapshot_indices(10, 5).unwrap(), vec![2, 4, 6, 8, 10]);
        assert_eq!(snapshot_indices(7, 7).unwrap(), (1..=7).collect::<Vec<_>>());
        let seventeen = snapshot_indices(256, 17).unwrap();
        assert_eq!(seventeen.len(), 17);
        assert_eq!(seventeen[0], 15);
        assert_eq!(*seventeen.last().unwrap(), 256);
        assert!(seventeen.windows(2).all(|w| w[0] < w[1]));
        // more snapshots than steps collapse duplicates
        assert_eq!(snapshot_indices(3, 7).unwrap(), vec![1, 2, 3]);
        assert!(snapshot_indices(10, 0).is_err());
    }
}
