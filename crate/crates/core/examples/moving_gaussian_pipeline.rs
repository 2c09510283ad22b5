//! Moving Gaussian benchmark with 34 snapshots: error and FE-vs-ROM discrepancy
//! for every basis size up to the numerical rank.
//!
//! cargo run --release --example moving_gaussian_pipeline

use podfem::bench::{run_in_memory, Example, RunConfig};

fn main() -> podfem::Result<()> {
    let cfg = RunConfig::for_example(Example::MovingGaussian);
    let run = run_in_memory(&cfg)?;
    let r = &run.report;

    println!("rank l = {}, rule selects d = {}", r.rank, r.choice.d);
    println!("FE L2 error at T: {:.4e}", r.fe_error);
    println!("{:>3} {:>12} {:>14} {:>12}", "d", "lambda_d", "max discrep.", "ROM error");
    for ((d, disc), (_, err)) in r.max_discrepancy_by_d.iter().zip(&r.errors_by_d) {
        println!("{d:>3} {:>12.4e} {disc:>14.4e} {err:>12.4e}", r.eigenvalues[d - 1]);
    }
    Ok(())
}
