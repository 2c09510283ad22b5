//! Smooth separable benchmark: 16×16 cells, τ = 1/256, 17 snapshots, automatic d.
//!
//! cargo run --release --example smooth_separable_pipeline

use podfem::bench::{run_in_memory, Example, RunConfig};

fn main() -> podfem::Result<()> {
    let cfg = RunConfig::for_example(Example::Smooth);
    let run = run_in_memory(&cfg)?;
    let r = &run.report;

    println!("full dofs {}, reduced dofs {}", r.full_dofs, r.reduced_dofs);
    println!("numerical rank of G: {}", r.rank);
    for (k, lam) in r.eigenvalues.iter().enumerate().take(6) {
        println!("  lambda_{:<2} = {lam:.6e}", k + 1);
    }
    println!(
        "basis rule: L*sqrt(tail) = {:.3e} vs threshold {:.3e} (met: {})",
        r.choice.pod_term, r.choice.threshold, r.choice.criterion_met
    );
    println!("L2 error at T: FE {:.4e}, ROM {:.4e}", r.fe_error, r.rom_error);
    println!("max FE-vs-ROM discrepancy {:.4e}", r.discrepancy.max);
    println!(
        "time loops: FE {:.3e} s, ROM {:.3e} s, speedup {:.0}x",
        r.full_loop_seconds,
        r.rom_loop_seconds,
        r.speedup()
    );
    Ok(())
}
