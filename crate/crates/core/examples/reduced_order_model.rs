//! Offline/online split: build a POD basis from a coarse set of snapshots, then
//! run the reduced model for several basis sizes and compare against the full
//! FE trajectory.
//!
//! cargo run --release --example reduced_order_model

use podfem::bench::{Example, PodStage, Problem, RunConfig, Timings};
use podfem::rom::{discrepancy_report, project_initial, reduced_solve_with_loads, ReducedSystem};
use std::time::Instant;

fn main() -> podfem::Result<()> {
    let cfg = RunConfig::for_example(Example::Smooth);
    let problem = Problem::new(&cfg, &mut Timings::default())?;
    let sys = &problem.system;

    let start = Instant::now();
    let full = problem.solve_full()?;
    let t_full = start.elapsed();
    let pod = PodStage::new(&full, sys, cfg.snapshots)?;

    for d in 1..=pod.basis.d() {
        let start = Instant::now();
        let rsys = ReducedSystem::new(pod.basis.truncate(d)?, sys)?;
        let c0 = project_initial(&problem.initial, rsys.basis(), sys)?;
        let red = reduced_solve_with_loads(&rsys, &c0, &problem.loads)?;
        let t_red = start.elapsed();
        let report = discrepancy_report(&full, &red, rsys.basis(), sys)?;
        println!(
            "d = {d}: |A_d - I| = {:.1e}, max discrepancy {:.3e} (at T {:.3e}), time {:.1}x faster",
            rsys.stiffness_defect(),
            report.max,
            report.rows.last().map(|r| r.l2).unwrap_or(0.0),
            t_full.as_secs_f64() / t_red.as_secs_f64()
        );
    }
    Ok(())
}
