use clap::{Args, Parser, Subcommand};
use podfem::bench::{
    convergence_study, fem_only, pod_from_artifacts, render_reports, rom_from_artifacts, run_pipeline,
    stages::persisted_config, DSelection, Example, RunConfig,
};
use std::path::PathBuf;
use std::process::ExitCode;

/// POD reduced-order finite elements for the 2-D space-fractional diffusion equation.
#[derive(Parser)]
#[command(name = "podfem", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Full FEM, POD, basis choice and ROM; writes every artifact.
    Run(Common),
    /// Full FE solve only; writes trajectory.bin.
    Fem(Common),
    /// POD from a persisted trajectory; writes basis.bin and eigs.csv.
    Pod(Common),
    /// Reduced model from a persisted basis; writes errors.csv and discrepancy.csv.
    Rom(Common),
    /// Final-time FE errors over several mesh levels; writes convergence.csv.
    Converge {
        #[command(flatten)]
        common: Common,
        /// Cells per direction on each level.
        #[arg(long, value_delimiter = ',', default_value = "8,16,32")]
        levels: Vec<usize>,
    },
    /// Re-render the CSV reports from persisted artifacts.
    Report(Common),
}

#[derive(Args)]
struct Common {
    /// `key = value` configuration file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory (overrides the configuration).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Basis size: an integer or `auto`.
    #[arg(long)]
    d: Option<String>,
    /// Number of snapshots.
    #[arg(long = "L")]
    l: Option<usize>,
    /// Built-in problem: 1, 2 or custom.
    #[arg(long)]
    example: Option<String>,
}

impl Common {
    /// The explicit config, else `<out>/config.txt` for stages that read
    /// artifacts, else the example defaults; then flag overrides.
    fn resolve(&self, from_artifacts: bool) -> podfem::Result<RunConfig> {
        let mut cfg = match (&self.config, &self.out) {
            (Some(p), _) => RunConfig::load(p)?,
            (None, Some(out)) if from_artifacts => match persisted_config(out)? {
                Some(c) => c,
                None => self.example_defaults()?,
            },
            _ => self.example_defaults()?,
        };
        if let Some(e) = &self.example {
            cfg.example = Example::parse(e)?;
        }
        if let Some(out) = &self.out {
            cfg.out_dir = out.clone();
        }
        if let Some(d) = &self.d {
            cfg.d = DSelection::parse(d)?;
        }
        if let Some(l) = self.l {
            cfg.snapshots = l;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    fn example_defaults(&self) -> podfem::Result<RunConfig> {
        let ex = self.example.as_deref().map(Example::parse).transpose()?;
        Ok(RunConfig::for_example(ex.unwrap_or(Example::Smooth)))
    }
}

fn execute(cli: Cli) -> podfem::Result<()> {
    match cli.command {
        Command::Run(c) => {
            let cfg = c.resolve(false)?;
            let r = run_pipeline(&cfg)?;
            println!("full dofs {}, reduced dofs {}", r.full_dofs, r.reduced_dofs);
            println!("L2 error at T: FE {:.6e}, ROM {:.6e}", r.fe_error, r.rom_error);
            println!(
                "time loops: FE {:.3e} s, ROM {:.3e} s, speedup {:.1}",
                r.full_loop_seconds,
                r.rom_loop_seconds,
                r.speedup()
            );
            println!("artifacts in {}", cfg.out_dir.display());
        }
        Command::Fem(c) => {
            let cfg = c.resolve(false)?;
            let traj = fem_only(&cfg)?;
            println!("{} steps, {} dofs -> {}", traj.n_steps(), traj.dofs(), cfg.out_dir.display());
        }
        Command::Pod(c) => {
            let cfg = c.resolve(true)?;
            let stage = pod_from_artifacts(&cfg)?;
            println!("L = {}, numerical rank {}", stage.snapshots.len(), stage.eigen.rank);
        }
        Command::Rom(c) => {
            let cfg = c.resolve(true)?;
            let r = rom_from_artifacts(&cfg)?;
            println!("d = {} (rule met: {})", r.choice.d, r.choice.criterion_met);
            println!("L2 error at T: FE {:.6e}, ROM {:.6e}", r.fe_error, r.rom_error);
            println!("max discrepancy {:.6e}, reduced loop {:.3e} s", r.max_discrepancy, r.rom_loop_seconds);
        }
        Command::Report(c) => {
            let cfg = c.resolve(true)?;
            render_reports(&cfg)?;
            println!("reports re-rendered in {}", cfg.out_dir.display());
        }
        Command::Converge { common, levels } => {
            let cfg = common.resolve(false)?;
            let table = convergence_study(&cfg, &levels)?;
            std::fs::create_dir_all(&cfg.out_dir)?;
            std::fs::write(cfg.out_dir.join("convergence.csv"), table.to_csv())?;
            for row in &table.rows {
                match row.observed_order {
                    Some(p) => println!("h = 1/{:<4} error {:.6e}  order {p:.3}", row.n_cells, row.error),
                    None => println!("h = 1/{:<4} error {:.6e}", row.n_cells, row.error),
                }
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
