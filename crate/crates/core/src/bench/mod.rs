//! Manufactured benchmarks, the end-to-end pipeline and artifact persistence.

pub mod config;
pub mod convergence;
pub mod io;
pub mod pipeline;
pub mod problem;
pub mod stages;

pub use config::{DSelection, RunConfig};
pub use convergence::{convergence_study, ConvergenceRow, ConvergenceTable};
pub use pipeline::{
    compare_rom, persist, run_in_memory, run_pipeline, select_d, BenchReport, PipelineRun, PodStage,
    Problem, RomComparison, Timings,
};
pub use problem::{exact_solution_1, exact_solution_2, Example, ManufacturedSource, RieszProfile};
pub use stages::{fem_only, pod_from_artifacts, render_reports, rom_from_artifacts, RomStageReport};
