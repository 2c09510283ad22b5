//! Offline phase: snapshots → correlation matrix → eigenpairs → POD basis.
//!
//! Everything is measured in the energy inner product (u, v)_w = a(u, v) = uᵀAv
//! of the fractional bilinear form, so the basis is A-orthonormal.

mod basis;
mod eigen;
mod snapshots;
mod svd;

pub use basis::{choose_d, pod_basis, projection_error, reconstruction_error, BasisChoice, PODBasis};
pub use eigen::{symmetric_eig, EigenDecomposition, RANK_TOL};
pub use svd::{one_sided_jacobi, snapshot_eig};
pub use snapshots::{correlation_matrix, select_snapshots, snapshot_indices, CorrelationMatrix, SnapshotSet};
