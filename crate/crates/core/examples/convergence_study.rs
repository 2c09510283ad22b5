//! Spatial convergence of the full FE solution for the smooth benchmark at a
//! small fixed time step.
//!
//! cargo run --release --example convergence_study

use podfem::bench::{convergence_study, Example, RunConfig};

fn main() -> podfem::Result<()> {
    let cfg = RunConfig {
        n_steps: 1024,
        ..RunConfig::for_example(Example::Smooth)
    };
    let table = convergence_study(&cfg, &[8, 16, 32])?;
    for row in &table.rows {
        let order = row.observed_order.map(|p| format!("{p:.3}")).unwrap_or_default();
        println!("h = 1/{:<3} error {:.6e} {order}", row.n_cells, row.error);
    }
    println!("strictly decreasing: {}", table.strictly_decreasing());
    Ok(())
}
