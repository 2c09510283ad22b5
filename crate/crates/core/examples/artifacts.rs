//! Persisting the offline phase and replaying the online phase from disk.
//!
//! cargo run --release --example artifacts

use podfem::bench::{fem_only, pod_from_artifacts, rom_from_artifacts, Example, RunConfig};
use podfem::bench::io::{read_basis, read_trajectory};

fn main() -> podfem::Result<()> {
    let dir = std::env::temp_dir().join("podfem_artifacts_example");
    let cfg = RunConfig {
        out_dir: dir.clone(),
        ..RunConfig::for_example(Example::Smooth)
    };

    fem_only(&cfg)?;
    let (header, traj) = read_trajectory(&dir.join("trajectory.bin"))?;
    println!("trajectory: {header:?}, {} states", traj.states.len());

    pod_from_artifacts(&cfg)?;
    let basis = read_basis(&dir.join("basis.bin"))?;
    println!("basis: {} vectors of length {}, {} eigenvalues", basis.d(), basis.dofs(), basis.eigenvalues.len());

    let rom = rom_from_artifacts(&cfg)?;
    println!("rom: d = {}, L2 error at T {:.4e} (FE {:.4e})", rom.choice.d, rom.rom_error, rom.fe_error);
    for f in ["eigs.csv", "errors.csv", "discrepancy.csv", "timing.csv", "trajectory.csv"] {
        println!("wrote {}", dir.join(f).display());
    }
    Ok(())
}
