//! Pipeline stages that communicate through the artifacts in the output directory.

use super::config::RunConfig;
use super::io::{self, TrajectoryHeader};
use super::pipeline::{compare_rom, select_d, PodStage, Problem, Timings, TIMING_REPEATS};
use crate::error::{Error, PhaseExt, Result};
use crate::fem::{assemble, TensorMesh, Trajectory};
use crate::pod::{BasisChoice, EigenDecomposition, PODBasis};
use nalgebra::DMatrix;
use rayon::prelude::*;
use std::path::{Path, PathBuf};
use std::time::Instant;

pub const CONFIG_FILE: &str = "config.txt";
pub const TRAJECTORY_FILE: &str = "trajectory.bin";
pub const BASIS_FILE: &str = "basis.bin";

fn path(cfg: &RunConfig, name: &str) -> PathBuf {
    cfg.out_dir.join(name)
}

/// Eigenvalue data of a persisted basis (eigenvectors of G are not stored).
fn spectrum(basis: &PODBasis) -> EigenDecomposition {
    EigenDecomposition {
        values: basis.eigenvalues.clone(),
        vectors: DMatrix::zeros(basis.eigenvalues.len(), 0),
        rank: basis.rank,
    }
}

fn load_trajectory(cfg: &RunConfig) -> Result<(TrajectoryHeader, Trajectory)> {
    io::read_trajectory(&path(cfg, TRAJECTORY_FILE)).phase("read trajectory")
}

/// Full FE solve only: writes the config, the trajectory container, a CSV
/// export of u at n = 0, N/2, N and the phase timings.
pub fn fem_only(cfg: &RunConfig) -> Result<Trajectory> {
    let mut timings = Timings::default();
    let problem = Problem::new(cfg, &mut timings)?;
    let traj = timings.record("fem_time_loop", || problem.solve_full()).phase("fem")?;
    let dir = &cfg.out_dir;
    std::fs::create_dir_all(dir)?;
    std::fs::write(dir.join(CONFIG_FILE), cfg.to_text())?;
    let header = problem.header();
    io::write_trajectory(&dir.join(TRAJECTORY_FILE), &header, &traj)?;
    let n = cfg.n_steps;
    std::fs::write(dir.join("trajectory.csv"), io::trajectory_csv(&header, &traj, &[0, n / 2, n])?)?;
    std::fs::write(dir.join("timing.csv"), io::timing_csv(&timings.0))?;
    Ok(traj)
}

/// Snapshots, POD and the eigenvalue report from a persisted trajectory.
pub fn pod_from_artifacts(cfg: &RunConfig) -> Result<PodStage> {
    let (header, traj) = load_trajectory(cfg)?;
    let mesh = TensorMesh::new(cfg.n_cells_x, cfg.n_cells_y)?;
    let sys = assemble(cfg.order()?, mesh, cfg.tau(), cfg.n_steps).phase("assemble")?;
    let expected = TrajectoryHeader {
        n_x: mesh.n_x(),
        n_y: mesh.n_y(),
        n_steps: cfg.n_steps,
        tau: cfg.tau(),
        alpha: cfg.alpha,
        beta: cfg.beta,
    };
    if header != expected {
        return Err(Error::config(format!(
            "persisted trajectory {header:?} does not match the configuration {expected:?}"
        )));
    }
    let stage = PodStage::new(&traj, &sys, cfg.snapshots).phase("pod")?;
    io::write_basis(&path(cfg, BASIS_FILE), &stage.basis)?;
    let values: Vec<f64> = stage.eigen.values.iter().copied().collect();
    std::fs::write(path(cfg, "eigs.csv"), io::eigs_csv(&values))?;
    Ok(stage)
}

/// Outcome of the artifact-driven ROM stage.
#[derive(Debug, Clone)]
pub struct RomStageReport {
    pub choice: BasisChoice,
    pub fe_error: f64,
    pub rom_error: f64,
    pub max_discrepancy: f64,
    pub rom_loop_seconds: f64,
}

fn rom_reports(cfg: &RunConfig, timed: bool) -> Result<RomStageReport> {
    let (header, traj) = load_trajectory(cfg)?;
    let basis = io::read_basis(&path(cfg, BASIS_FILE)).phase("read basis")?;
    let problem = Problem::new(cfg, &mut Timings::default())?;
    problem.check_header(&header)?;
    let choice = select_d(cfg, &spectrum(&basis), basis.snapshot_count).phase("rom")?;

    let mut rom_loop_seconds = f64::NAN;
    if timed {
        rom_loop_seconds = f64::INFINITY;
        for _ in 0..TIMING_REPEATS {
            let start = Instant::now();
            problem.solve_reduced(&basis, choice.d).phase("rom")?;
            rom_loop_seconds = rom_loop_seconds.min(start.elapsed().as_secs_f64());
        }
        let rows = vec![("rom_time_loop".to_string(), rom_loop_seconds)];
        std::fs::write(path(cfg, "timing_rom.csv"), io::timing_csv(&rows))?;
    }

    let chosen = compare_rom(&problem, &traj, &basis, choice.d).phase("rom")?;
    let sweep = (1..=basis.d())
        .into_par_iter()
        .map(|d| compare_rom(&problem, &traj, &basis, d).map(|r| (d, r.final_error)))
        .collect::<Result<Vec<_>>>()
        .phase("rom")?;
    let fe_error = problem.error_at(traj.final_state(), cfg.n_steps);
    std::fs::write(path(cfg, "errors.csv"), io::errors_csv(&sweep, fe_error))?;
    std::fs::write(path(cfg, "discrepancy.csv"), io::discrepancy_csv(&chosen.discrepancy))?;
    Ok(RomStageReport {
        choice,
        fe_error,
        rom_error: chosen.final_error,
        max_discrepancy: chosen.discrepancy.max,
        rom_loop_seconds,
    })
}

/// Reduced model from the persisted basis and trajectory: writes errors.csv,
/// discrepancy.csv and the timed reduced loop to timing_rom.csv.
pub fn rom_from_artifacts(cfg: &RunConfig) -> Result<RomStageReport> {
    rom_reports(cfg, true)
}

/// Re-renders eigs.csv, errors.csv, discrepancy.csv and trajectory.csv from the
/// persisted artifacts without timing anything.
pub fn render_reports(cfg: &RunConfig) -> Result<RomStageReport> {
    let basis = io::read_basis(&path(cfg, BASIS_FILE)).phase("read basis")?;
    let values: Vec<f64> = basis.eigenvalues.iter().copied().collect();
    std::fs::write(path(cfg, "eigs.csv"), io::eigs_csv(&values))?;
    let (header, traj) = load_trajectory(cfg)?;
    let n = header.n_steps;
    std::fs::write(path(cfg, "trajectory.csv"), io::trajectory_csv(&header, &traj, &[0, n / 2, n])?)?;
    rom_reports(cfg, false)
}

/// Loads `out_dir/config.txt` when it exists.
pub fn persisted_config(out_dir: &Path) -> Result<Option<RunConfig>> {
    let p = out_dir.join(CONFIG_FILE);
    if p.exists() {
        RunConfig::load(&p).map(Some)
    } else {
        Ok(None)
    }
}
