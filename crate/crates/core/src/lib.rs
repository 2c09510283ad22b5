//! Reduced-order finite elements for the 2D Riesz space-fractional diffusion equation
//!
//! ```text
//! u_t − ∂^α u/∂|x|^α − ∂^β u/∂|y|^β = f   on (0,1)² × (0,T],   u = 0 outside (0,1)²
//! ```
//!
//! The crate is organised as the offline/online pipeline it implements:
//!
//! * [`frac`] — hat-function Riemann–Liouville derivatives, Toeplitz fractional
//!   stiffness, Grünwald–Letnikov differentiation of sampled data.
//! * [`fem`] — tensor-product bilinear elements, Kronecker-structured operators,
//!   backward-Euler time stepping.
//! * [`pod`] — snapshot selection, the energy-inner-product correlation matrix,
//!   cyclic Jacobi eigensolver, POD basis and the basis-count rule.
//! * [`rom`] — Galerkin projection onto the POD space and the reduced time loop.
//! * [`bench`] — manufactured problems, the end-to-end pipeline, artifact I/O and
//!   convergence studies.
//!
//! See the `examples/` directory for one runnable program per stage.

pub mod bench;
pub mod error;
pub mod fem;
pub mod frac;
pub mod pod;
pub mod quadrature;
pub mod rom;
pub mod special;

pub use error::{Error, Result};
