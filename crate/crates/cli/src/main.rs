//! `cpmsync`: command-line front end for the Monte Carlo harness.

use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use cpm_sync::harness::{self, ExperimentConfig};

#[derive(Parser)]
#[command(
    name = "cpmsync",
    version,
    about = "Burst-mode CPM synchronization experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Estimator MSE versus Es/N0 (start of signal known).
    MseSweep(Common),
    /// False-lock probability and bias of the start-of-signal estimator.
    FramesyncSweep(Common),
    /// Detector ROC curves.
    Roc(Common),
    /// Detector threshold table.
    CalibrateThreshold(Common),
    /// BER with ideal synchronization and with the full receive chain.
    Ber(Common),
    /// Approximation error of the preamble phase model versus L0.
    Fig5(Common),
}

#[derive(Args)]
struct Common {
    /// TOML configuration; defaults apply to missing keys.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output CSV (stdout if absent).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Trials per sweep point (bursts per point for `ber`).
    #[arg(long)]
    trials: Option<usize>,
    /// Worker threads (results do not depend on it).
    #[arg(long)]
    threads: Option<usize>,
}

impl Common {
    fn config(&self) -> Result<ExperimentConfig> {
        let mut cfg = match &self.config {
            Some(p) => {
                ExperimentConfig::load(p).with_context(|| format!("loading {}", p.display()))?
            }
            None => ExperimentConfig::default(),
        };
        if let Some(s) = self.seed {
            cfg.seed = s;
        }
        if let Some(t) = self.trials {
            cfg.trials = t;
        }
        if let Some(o) = &self.out {
            cfg.out = Some(o.clone());
        }
        if let Some(n) = self.threads {
            cfg.threads = Some(n);
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn emit<T: serde::Serialize>(
    name: &str,
    cfg: &ExperimentConfig,
    rows: cpm_sync::Result<Vec<T>>,
) -> Result<()> {
    let rows = rows.with_context(|| format!("running {name}"))?;
    match &cfg.out {
        Some(p) => {
            harness::write_csv(p, name, cfg, &rows)?;
            eprintln!("wrote {} rows to {}", rows.len(), p.display());
        }
        None => print!("{}", harness::to_csv(name, cfg, &rows)?),
    }
    Ok(())
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    let (name, common) = match &cli.command {
        Command::MseSweep(c) => ("mse-sweep", c),
        Command::FramesyncSweep(c) => ("framesync-sweep", c),
        Command::Roc(c) => ("roc", c),
        Command::CalibrateThreshold(c) => ("calibrate-threshold", c),
        Command::Ber(c) => ("ber", c),
        Command::Fig5(c) => ("fig5", c),
    };
    let cfg = common.config()?;
    if let Some(n) = cfg.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .context("configuring the worker pool")?;
    }
    match cli.command {
        Command::MseSweep(_) => emit(name, &cfg, harness::run_mse_sweep(&cfg)),
        Command::FramesyncSweep(_) => emit(name, &cfg, harness::run_framesync_sweep(&cfg)),
        Command::Roc(_) => emit(name, &cfg, harness::run_roc(&cfg)),
        Command::CalibrateThreshold(_) => emit(name, &cfg, harness::run_calibrate_threshold(&cfg)),
        Command::Ber(_) => emit(name, &cfg, harness::run_ber(&cfg)),
        Command::Fig5(_) => emit(name, &cfg, harness::run_fig5(&cfg)),
    }
}
