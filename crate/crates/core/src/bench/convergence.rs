use super::config::RunConfig;
use super::pipeline::{Problem, Timings};
use crate::error::{Error, Result};
use rayon::prelude::*;
use std::fmt::Write as _;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceRow {
    pub n_cells: usize,
    pub h: f64,
    /// Full-FE L² error against the exact solution at T.
    pub error: f64,
    /// log(e_{i−1}/e_i)/log(h_{i−1}/h_i); `None` on the first level or when an error is zero.
    pub observed_order: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceTable {
    pub rows: Vec<ConvergenceRow>,
}

impl ConvergenceTable {
    pub fn strictly_decreasing(&self) -> bool {
        self.rows.windows(2).all(|w| w[1].error < w[0].error)
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("n_cells,h,l2_error,observed_order\n");
        for r in &self.rows {
            let order = r.observed_order.map(|o| o.to_string()).unwrap_or_default();
            let _ = writeln!(s, "{},{:e},{:e},{order}", r.n_cells, r.h, r.error);
        }
        s
    }
}

/// Final-time FE errors of `base` on square meshes with the given cell counts,
/// keeping τ and T from `base`. Levels are solved concurrently.
pub fn convergence_study(base: &RunConfig, cells: &[usize]) -> Result<ConvergenceTable> {
    if cells.len() < 3 {
        return Err(Error::config("a convergence study needs at least 3 mesh levels"));
    }
    let errors = cells
        .par_iter()
        .map(|&n| {
            let cfg = RunConfig {
                n_cells_x: n,
                n_cells_y: n,
                ..base.clone()
            };
            let problem = Problem::new(&cfg, &mut Timings::default())?;
            let traj = problem.solve_full()?;
            Ok(problem.error_at(traj.final_state(), cfg.n_steps))
        })
        .collect::<Result<Vec<f64>>>()?;
    let rows = cells
        .iter()
        .zip(&errors)
        .enumerate()
        .map(|(i, (&n, &error))| {
            let h = 1.0 / n as f64;
            let observed_order = (i > 0 && error > 0.0 && errors[i - 1] > 0.0).then(|| {
                let h_prev = 1.0 / cells[i - 1] as f64;
                (errors[i - 1] / error).ln() / (h_prev / h).ln()
            });
            ConvergenceRow {
                n_cells: n,
                h,
                error,
                observed_order,
            }
        })
        .collect();
    Ok(ConvergenceTable { rows })
}
