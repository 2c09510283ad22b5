//! Full-order solver on a tensor-product grid of bilinear (hat ⊗ hat) elements.
//!
//! The fractional form separates across directions, so the operators are
//!
//! ```text
//! A = S_x ⊗ M_y + M_x ⊗ S_y        M = M_x ⊗ M_y
//! ```
//!
//! and are applied through their 1-D factors. Degrees of freedom are interior
//! nodes in lexicographic order with x fastest: `dof = p + q·n_x`.

mod factor;
mod load;
mod mesh;
mod system;
mod timestep;

pub use factor::EnergyFactor;
pub use load::{
    interpolate_initial, l2_error, load_sequence, load_vector, FnField, LOAD_POINTS, LoadAssembler,
    SpaceTimeField, ZeroField,
};
pub use mesh::{kron_apply, TensorMesh};
pub use system::{assemble, assemble_with, FullSystem, SolverKind, StepSolver, DENSE_LIMIT};
pub use timestep::{backward_euler_solve, backward_euler_with_loads, backward_euler_with_solver, Trajectory};
