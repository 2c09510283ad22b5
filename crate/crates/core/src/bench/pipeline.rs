use super::config::{DSelection, RunConfig};
use super::io::{self, TrajectoryHeader};
use super::problem::ManufacturedSource;
use crate::error::{Error, PhaseExt, Result};
use crate::fem::{
    assemble, backward_euler_with_solver, interpolate_initial, l2_error, load_sequence, FullSystem,
    SolverKind, StepSolver, TensorMesh, Trajectory,
};
use crate::pod::{
    choose_d, correlation_matrix, pod_basis, select_snapshots, snapshot_eig, BasisChoice,
    CorrelationMatrix, EigenDecomposition, PODBasis, SnapshotSet,
};
use crate::rom::{
    discrepancy_report, lift, project_initial, reduced_solve_with_loads, DiscrepancyReport,
    ReducedSystem, ReducedTrajectory,
};
use nalgebra::DVector;
use rayon::prelude::*;
use std::path::Path;
use std::time::Instant;

/// Each timed time loop is repeated this many times and the fastest run kept.
pub const TIMING_REPEATS: usize = 3;

/// Wall-clock seconds per named phase, in execution order.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Timings(pub Vec<(String, f64)>);

impl Timings {
    pub fn record<T>(&mut self, phase: &str, f: impl FnOnce() -> T) -> T {
        let start = Instant::now();
        let out = f();
        self.0.push((phase.to_string(), start.elapsed().as_secs_f64()));
        out
    }

    pub fn get(&self, phase: &str) -> Option<f64> {
        self.0.iter().find(|(p, _)| p == phase).map(|(_, s)| *s)
    }
}

/// Fastest of `TIMING_REPEATS` runs of `f`, with the output of the last run.
fn best_of<T>(mut f: impl FnMut() -> Result<T>) -> Result<(T, f64)> {
    let mut best = f64::INFINITY;
    let mut out = None;
    for _ in 0..TIMING_REPEATS {
        let start = Instant::now();
        let v = f()?;
        best = best.min(start.elapsed().as_secs_f64());
        out = Some(v);
    }
    Ok((out.expect("at least one repeat"), best))
}

/// Assembled operators, source loads and initial data for one configuration.
pub struct Problem {
    pub config: RunConfig,
    pub system: FullSystem,
    pub source: ManufacturedSource,
    /// F^1..F^N.
    pub loads: Vec<DVector<f64>>,
    pub initial: DVector<f64>,
}

impl Problem {
    pub fn new(cfg: &RunConfig, timings: &mut Timings) -> Result<Self> {
        cfg.validate()?;
        let order = cfg.order()?;
        let mesh = TensorMesh::new(cfg.n_cells_x, cfg.n_cells_y)?;
        let system = timings
            .record("assemble", || assemble(order, mesh, cfg.tau(), cfg.n_steps))
            .phase("assemble")?;
        let source = timings
            .record("source", || ManufacturedSource::new(cfg.example, order, &mesh, cfg.refinement))
            .phase("source")?;
        let loads = timings.record("loads", || load_sequence(&source, &mesh, cfg.tau(), cfg.n_steps));
        let ex = cfg.example;
        let initial = interpolate_initial(&|x, y| ex.exact(x, y, 0.0), &mesh);
        Ok(Self {
            config: cfg.clone(),
            system,
            source,
            loads,
            initial,
        })
    }

    pub fn mesh(&self) -> &TensorMesh {
        self.system.mesh()
    }

    /// L² distance of a coefficient vector from the exact solution at t_n.
    pub fn error_at(&self, u: &DVector<f64>, n: usize) -> f64 {
        let ex = self.config.example;
        let t = n as f64 * self.config.tau();
        l2_error(u, &|x, y| ex.exact(x, y, t), self.mesh())
    }

    pub fn header(&self) -> TrajectoryHeader {
        TrajectoryHeader {
            n_x: self.mesh().n_x(),
            n_y: self.mesh().n_y(),
            n_steps: self.config.n_steps,
            tau: self.config.tau(),
            alpha: self.config.alpha,
            beta: self.config.beta,
        }
    }

    /// Fresh factorization plus N backward-Euler steps.
    pub fn solve_full(&self) -> Result<Trajectory> {
        let solver = StepSolver::factorize(&self.system, SolverKind::Auto)?;
        backward_euler_with_solver(&self.system, &solver, &self.initial, &self.loads)
    }

    /// Reduced operators and N reduced steps on the leading `d` vectors of `basis`.
    pub fn solve_reduced(&self, basis: &PODBasis, d: usize) -> Result<(ReducedSystem, ReducedTrajectory)> {
        let rsys = ReducedSystem::new(basis.truncate(d)?, &self.system)?;
        let c0 = project_initial(&self.initial, rsys.basis(), &self.system)?;
        let red = reduced_solve_with_loads(&rsys, &c0, &self.loads)?;
        Ok((rsys, red))
    }

    /// Checks that a persisted trajectory belongs to this configuration.
    pub fn check_header(&self, header: &TrajectoryHeader) -> Result<()> {
        let mine = self.header();
        if *header != mine {
            return Err(Error::config(format!(
                "persisted trajectory {header:?} does not match the configuration {mine:?}"
            )));
        }
        Ok(())
    }
}

/// Offline POD artifacts: snapshots, G, its eigenpairs and the full rank-l basis.
pub struct PodStage {
    pub snapshots: SnapshotSet,
    pub correlation: CorrelationMatrix,
    pub eigen: EigenDecomposition,
    pub basis: PODBasis,
}

impl PodStage {
    pub fn new(traj: &Trajectory, sys: &FullSystem, l: usize) -> Result<Self> {
        let snapshots = select_snapshots(traj, l)?;
        let correlation = correlation_matrix(&snapshots, sys)?;
        let eigen = snapshot_eig(&snapshots, sys)?;
        let basis = pod_basis(&snapshots, &eigen, eigen.rank)?;
        Ok(Self {
            snapshots,
            correlation,
            eigen,
            basis,
        })
    }
}

/// Resolves the configured d against a spectrum.
pub fn select_d(cfg: &RunConfig, eig: &EigenDecomposition, snapshot_count: usize) -> Result<BasisChoice> {
    let gamma = cfg.alpha.max(cfg.beta);
    let auto = choose_d(eig, snapshot_count, cfg.tau(), cfg.h(), 1, gamma);
    match cfg.d {
        DSelection::Auto => Ok(auto),
        DSelection::Fixed(d) if d <= eig.rank => Ok(BasisChoice {
            d,
            criterion_met: auto.threshold >= snapshot_count as f64 * eig.tail(d).max(0.0).sqrt(),
            threshold: auto.threshold,
            pod_term: snapshot_count as f64 * eig.tail(d).max(0.0).sqrt(),
        }),
        DSelection::Fixed(d) => Err(Error::config(format!(
            "d = {d} exceeds the numerical rank l = {} of the snapshot set",
            eig.rank
        ))),
    }
}

/// One ROM run compared against the full trajectory.
#[derive(Debug, Clone)]
pub struct RomComparison {
    pub d: usize,
    pub reduced: ReducedTrajectory,
    pub final_error: f64,
    pub discrepancy: DiscrepancyReport,
}

pub fn compare_rom(problem: &Problem, full: &Trajectory, basis: &PODBasis, d: usize) -> Result<RomComparison> {
    let (rsys, reduced) = problem.solve_reduced(basis, d)?;
    let n = problem.config.n_steps;
    let final_error = problem.error_at(&lift(&reduced.coeffs[n], rsys.basis()), n);
    let discrepancy = discrepancy_report(full, &reduced, rsys.basis(), &problem.system)?;
    Ok(RomComparison {
        d,
        reduced,
        final_error,
        discrepancy,
    })
}

/// Everything a run reports.
#[derive(Debug, Clone)]
pub struct BenchReport {
    pub full_dofs: usize,
    pub reduced_dofs: usize,
    pub choice: BasisChoice,
    /// All eigenvalues of G, descending.
    pub eigenvalues: Vec<f64>,
    pub rank: usize,
    pub fe_error: f64,
    pub rom_error: f64,
    /// (d, ROM L² error at T) for d = 1..l.
    pub errors_by_d: Vec<(usize, f64)>,
    /// (d, max_n ‖u_h^n − u_d^n‖) for d = 1..l.
    pub max_discrepancy_by_d: Vec<(usize, f64)>,
    pub discrepancy: DiscrepancyReport,
    pub timings: Timings,
    /// Factorization plus N solves, fastest of several runs.
    pub full_loop_seconds: f64,
    /// Reduced operators plus N reduced solves, fastest of several runs.
    pub rom_loop_seconds: f64,
}

impl BenchReport {
    pub fn speedup(&self) -> f64 {
        self.full_loop_seconds / self.rom_loop_seconds
    }
}

/// In-memory results of [`run_pipeline`].
pub struct PipelineRun {
    pub problem: Problem,
    pub trajectory: Trajectory,
    pub pod: PodStage,
    pub rom: RomComparison,
    pub report: BenchReport,
}

/// Full FEM, snapshots, POD, basis choice and ROM, without touching the disk.
pub fn run_in_memory(cfg: &RunConfig) -> Result<PipelineRun> {
    let mut timings = Timings::default();
    let problem = Problem::new(cfg, &mut timings)?;
    let (trajectory, full_loop_seconds) = best_of(|| problem.solve_full()).phase("fem")?;
    timings.0.push(("fem_time_loop".into(), full_loop_seconds));

    let pod = timings
        .record("pod", || PodStage::new(&trajectory, &problem.system, cfg.snapshots))
        .phase("pod")?;
    let choice = select_d(cfg, &pod.eigen, pod.snapshots.len()).phase("pod")?;

    let (_, rom_loop_seconds) = best_of(|| problem.solve_reduced(&pod.basis, choice.d)).phase("rom")?;
    timings.0.push(("rom_time_loop".into(), rom_loop_seconds));
    let rom = compare_rom(&problem, &trajectory, &pod.basis, choice.d).phase("rom")?;

    let sweep = timings
        .record("rom_sweep", || {
            (1..=pod.eigen.rank)
                .into_par_iter()
                .map(|d| compare_rom(&problem, &trajectory, &pod.basis, d))
                .collect::<Result<Vec<_>>>()
        })
        .phase("rom")?;

    let fe_error = problem.error_at(trajectory.final_state(), cfg.n_steps);
    let report = BenchReport {
        full_dofs: problem.system.dofs(),
        reduced_dofs: choice.d,
        choice,
        eigenvalues: pod.eigen.values.iter().copied().collect(),
        rank: pod.eigen.rank,
        fe_error,
        rom_error: rom.final_error,
        errors_by_d: sweep.iter().map(|r| (r.d, r.final_error)).collect(),
        max_discrepancy_by_d: sweep.iter().map(|r| (r.d, r.discrepancy.max)).collect(),
        discrepancy: rom.discrepancy.clone(),
        timings,
        full_loop_seconds,
        rom_loop_seconds,
    };
    Ok(PipelineRun {
        problem,
        trajectory,
        pod,
        rom,
        report,
    })
}

/// [`run_in_memory`] followed by writing every artifact to the configured output directory.
pub fn run_pipeline(cfg: &RunConfig) -> Result<BenchReport> {
    let run = run_in_memory(cfg)?;
    persist(&run, &cfg.out_dir)?;
    Ok(run.report)
}

pub fn persist(run: &PipelineRun, dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    std::fs::write(dir.join("config.txt"), run.problem.config.to_text())?;
    io::write_trajectory(&dir.join("trajectory.bin"), &run.problem.header(), &run.trajectory)?;
    io::write_basis(&dir.join("basis.bin"), &run.pod.basis)?;
    let r = &run.report;
    std::fs::write(dir.join("eigs.csv"), io::eigs_csv(&r.eigenvalues))?;
    std::fs::write(dir.join("errors.csv"), io::errors_csv(&r.errors_by_d, r.fe_error))?;
    std::fs::write(dir.join("discrepancy.csv"), io::discrepancy_csv(&r.discrepancy))?;
    std::fs::write(dir.join("timing.csv"), io::timing_csv(&r.timings.0))?;
    Ok(())
}
