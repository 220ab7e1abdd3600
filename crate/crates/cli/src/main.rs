mod commands;
mod config;
mod error;
mod presets;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use qem_core::mitigation::BremOptions;

use crate::config::{load_config, Campaign, ExperimentConfig, SweepPlan};
use crate::error::{CliError, CliResult};
use crate::presets::Preset;

/// Noisy H2 VQE simulation with readout unfolding, [[4,2,2]] post-selection
/// and duplicate-circuit estimation.
#[derive(Parser)]
#[command(name = "qem", version)]
struct Cli {
    /// Worker threads (defaults to the number of cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Source {
    /// TOML experiment configuration.
    #[arg(long, conflicts_with = "preset")]
    config: Option<PathBuf>,
    /// Named campaign; see `qem presets`.
    #[arg(long)]
    preset: Option<String>,
    /// Overrides the configured seed.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Minimum-energy scan for each family and noise scenario.
    RunVqe {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        out: PathBuf,
    },
    /// Energy error against gate error rate at one bond length.
    Sweep {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        out: PathBuf,
    },
    /// Unfold a measured histogram through a response matrix.
    Unfold {
        #[arg(long)]
        histogram: PathBuf,
        #[arg(long)]
        response: PathBuf,
        #[arg(long, default_value_t = BremOptions::default().max_iters)]
        max_iters: usize,
        #[arg(long, default_value_t = BremOptions::default().tol)]
        tol: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Exact ground energy at every tabulated bond length.
    ExactCurve {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Response matrix of one family under one noise model.
    Calibrate {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        out: PathBuf,
    },
    /// List preset names.
    Presets,
}

fn load(path: Option<&Path>) -> CliResult<ExperimentConfig> {
    path.map(load_config)
        .transpose()
        .map(Option::unwrap_or_default)
}

fn campaign(source: &Source) -> CliResult<Campaign> {
    let mut c = match &source.preset {
        Some(name) => match presets::resolve(name)? {
            Preset::Campaign(c) => c,
            Preset::Sweep(_) => {
                return Err(CliError::Config(format!(
                    "preset `{name}` is a sweep; use `qem sweep`"
                )))
            }
        },
        None => load(source.config.as_deref())?.campaign()?,
    };
    if let Some(seed) = source.seed {
        c.template.seed = seed;
    }
    Ok(c)
}

fn sweep_plan(source: &Source) -> CliResult<SweepPlan> {
    match &source.preset {
        Some(name) => match presets::resolve(name)? {
            Preset::Sweep(p) => Ok(p),
            Preset::Campaign(_) => Err(CliError::Config(format!(
                "preset `{name}` is not a sweep; use `qem run-vqe`"
            ))),
        },
        None => load(source.config.as_deref())?.sweep_plan(),
    }
}

fn run(cli: Cli) -> CliResult<()> {
    if let Some(n) = cli.jobs {
        if n == 0 {
            return Err(CliError::Config("--jobs must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Config(format!("--jobs: {e}")))?;
    }
    match cli.command {
        Command::RunVqe { source, out } => commands::run_vqe(&campaign(&source)?, &out),
        Command::Sweep { source, out } => commands::sweep(&sweep_plan(&source)?, &out),
        Command::Unfold {
            histogram,
            response,
            max_iters,
            tol,
            out,
        } => {
            if max_iters == 0 || tol.is_nan() || tol <= 0.0 {
                return Err(CliError::Config(
                    "--max-iters and --tol must be positive".into(),
                ));
            }
            commands::unfold(&histogram, &response, BremOptions { max_iters, tol }, &out)
        }
        Command::ExactCurve { config, out } => {
            commands::exact_curve(&load(config.as_deref())?.table()?, &out)
        }
        Command::Calibrate { source, out } => {
            commands::calibrate_response(&campaign(&source)?, &out)
        }
        Command::Presets => {
            for name in presets::names() {
                println!("{name}");
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("qem: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
