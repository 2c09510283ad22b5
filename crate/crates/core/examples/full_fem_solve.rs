//! Backward-Euler finite elements on a tensor mesh for
//! u_t = ∂^αu/∂|x|^α + ∂^βu/∂|y|^β + f with a user-supplied source.
//!
//! cargo run --release --example full_fem_solve

use podfem::fem::{assemble, backward_euler_solve, interpolate_initial, FnField, TensorMesh};
use podfem::frac::FracOrder;
use std::f64::consts::PI;

fn main() -> podfem::Result<()> {
    let order = FracOrder::new(1.4, 1.7)?;
    let mesh = TensorMesh::new(20, 16)?;
    let sys = assemble(order, mesh, 1.0 / 100.0, 100)?;
    println!("{} interior dofs ({} x {})", sys.dofs(), mesh.n_x(), mesh.n_y());

    let u0 = interpolate_initial(&|x, y| (PI * x).sin() * (PI * y).sin(), &mesh);
    // A heat source switched on in the left half after t = 0.3.
    let source = FnField(|x: f64, _y: f64, t: f64| if t > 0.3 && x < 0.5 { 5.0 } else { 0.0 });
    let traj = backward_euler_solve(&sys, &u0, &source)?;

    for n in (0..=100).step_by(20) {
        let u = &traj.states[n];
        println!(
            "t = {:.2}  |u|_M = {:.5}  u(0.25, 0.5) = {:.5}  u(0.75, 0.5) = {:.5}",
            traj.time(n),
            sys.mass_norm(u),
            mesh.eval(u, 0.25, 0.5),
            mesh.eval(u, 0.75, 0.5)
        );
    }
    Ok(())
}
