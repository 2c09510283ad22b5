//! Snapshot POD of a full FE trajectory: eigenvalue decay of the correlation
//! matrix, the energy-orthonormal basis, and the reconstruction error identity.
//!
//! cargo run --release --example pod_basis

use podfem::bench::{Example, Problem, RunConfig, Timings};
use podfem::pod::{
    choose_d, correlation_matrix, pod_basis, reconstruction_error, select_snapshots, snapshot_eig,
};

fn main() -> podfem::Result<()> {
    let cfg = RunConfig::for_example(Example::MovingGaussian);
    let problem = Problem::new(&cfg, &mut Timings::default())?;
    let sys = &problem.system;
    let traj = problem.solve_full()?;

    let snaps = select_snapshots(&traj, cfg.snapshots)?;
    let g = correlation_matrix(&snaps, sys)?;
    let eig = snapshot_eig(&snaps, sys)?;
    println!("{} snapshots, trace(G) = {:.6e}, numerical rank {}", snaps.len(), g.trace(), eig.rank);

    let basis = pod_basis(&snaps, &eig, eig.rank)?;
    let gram = basis.psi.transpose() * sys.stiffness_dense() * &basis.psi;
    let defect = (gram - nalgebra::DMatrix::identity(basis.d(), basis.d())).amax();
    println!("max |Psi^T A Psi - I| = {defect:.2e}");

    println!("{:>3} {:>14} {:>14}", "d", "sum_{j>d} lam", "recon. error");
    for d in [0, 1, 2, 4, 8, 12, 16] {
        let recon = reconstruction_error(&snaps, &basis, sys, d)?;
        println!("{d:>3} {:>14.6e} {recon:>14.6e}", eig.tail(d));
    }

    let c = choose_d(&eig, snaps.len(), cfg.tau(), cfg.h(), 1, cfg.alpha.max(cfg.beta));
    println!("rule: d = {} (L sqrt(tail) = {:.3e} <= {:.3e})", c.d, c.pod_term, c.threshold);
    Ok(())
}
