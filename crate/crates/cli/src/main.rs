//! `eaed`: capacity, transition tables, density-evolution thresholds and
//! Monte-Carlo simulation of error-and-erasure decoded product and staircase
//! codes.
//!
//! Exit status: 0 on success, 1 on runtime errors, 2 on invalid configuration,
//! 3 when a simulation budget ran out (partial results are still written).

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use eaed_core::{Decoder, Ensemble};

use commands::{Ctx, Status};
use config::{invalid, ConfigError, ExperimentConfig, Overrides};
use output::Sink;

#[derive(Parser, Debug)]
#[command(name = "eaed", version, about = "Error-and-erasure decoding of product and staircase codes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// TOML experiment configuration; flags override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// CSV output file (stdout when absent).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// JSON summary file (defaults to the CSV path with a .json extension).
    #[arg(long, global = true)]
    summary: Option<PathBuf>,
    /// Checkpoint file for scans (defaults next to the CSV output).
    #[arg(long, global = true)]
    checkpoint: Option<PathBuf>,
    /// Worker threads (all cores when absent).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Print the resolved configuration as TOML and exit.
    #[arg(long, global = true)]
    print_config: bool,
    #[command(flatten)]
    overrides: Overrides,
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq, Eq)]
enum Command {
    /// Channel probabilities and capacity at one point.
    Capacity,
    /// Capacity over a grid of E_s/N_0 and T.
    CapacityScan,
    /// Weight distribution of the component code.
    Weights,
    /// Component transition probabilities.
    TransitionTable,
    /// Density-evolution threshold at one T.
    Threshold,
    /// Density-evolution threshold over T with refinement of the optimum.
    ScanT,
    /// Bit error rate at one operating point.
    Simulate,
    /// Simulated threshold at one T by bisection.
    SimThreshold,
    /// Threshold over T of the (511,484,3) product code.
    ReproduceFig3,
    /// Gain of the (62,38,4) staircase code against product codes.
    ReproduceFig4aPoint,
    /// Simulated against predicted thresholds of the (511,484,3) product code.
    ReproduceFig5,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::Capacity => "capacity",
            Command::CapacityScan => "capacity-scan",
            Command::Weights => "weights",
            Command::TransitionTable => "transition-table",
            Command::Threshold => "threshold",
            Command::ScanT => "scan-t",
            Command::Simulate => "simulate",
            Command::SimThreshold => "sim-threshold",
            Command::ReproduceFig3 => "reproduce-fig3",
            Command::ReproduceFig4aPoint => "reproduce-fig4a-point",
            Command::ReproduceFig5 => "reproduce-fig5",
        }
    }

    /// Fixed settings of the reproduction commands; applied after the flags.
    fn preset(self, cfg: &mut ExperimentConfig, cli: &Cli) -> anyhow::Result<()> {
        match self {
            Command::ReproduceFig3 => {
                cfg.code = "nu9t3".into();
                cfg.ensemble = Ensemble::Product;
                cfg.scan.t_min = 0.0;
                cfg.scan.t_max = 0.2;
                cfg.scan.steps = 21;
            }
            Command::ReproduceFig4aPoint => {
                cfg.decoder = Decoder::Eaed;
                cfg.de.bracket_lo_db = cfg.de.bracket_lo_db.min(-10.0);
            }
            Command::ReproduceFig5 => {
                if cli.overrides.seed.is_none() {
                    return Err(invalid("reproduce-fig5 requires --seed"));
                }
                cfg.code = "nu9t3".into();
                cfg.ensemble = Ensemble::Product;
                cfg.sim.iterations = 20;
                cfg.sim.target_ber = 1e-4;
            }
            _ => {}
        }
        Ok(())
    }
}

fn resolve(cli: &Cli) -> anyhow::Result<ExperimentConfig> {
    let mut cfg = match &cli.config {
        Some(p) => ExperimentConfig::load(p)?,
        None => ExperimentConfig::default(),
    };
    cli.overrides.apply(&mut cfg)?;
    cli.command.preset(&mut cfg, cli)?;
    cfg.validate()?;
    Ok(cfg)
}

fn run(cli: &Cli) -> anyhow::Result<Status> {
    let cfg = resolve(cli)?;
    if cli.print_config {
        print!("{}", cfg.to_toml());
        return Ok(Status::Done);
    }
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| invalid(format!("--threads: {e}")))?;
    }
    let checkpoint = cli
        .checkpoint
        .clone()
        .or_else(|| cli.out.as_ref().map(|p| p.with_extension("ckpt.json")));
    let ctx = Ctx {
        cfg,
        sink: Sink::new(cli.out.clone(), cli.summary.clone()),
        checkpoint,
    };
    let name = cli.command.name();
    match cli.command {
        Command::Capacity => commands::capacity_cmd(&ctx),
        Command::CapacityScan => commands::capacity_scan(&ctx),
        Command::Weights => commands::weights(&ctx),
        Command::TransitionTable => commands::transition_table(&ctx),
        Command::Threshold => commands::threshold_cmd(&ctx),
        Command::ScanT | Command::ReproduceFig3 => commands::scan_t(&ctx, name),
        Command::Simulate => commands::simulate(&ctx),
        Command::SimThreshold => commands::sim_threshold(&ctx),
        Command::ReproduceFig4aPoint => commands::reproduce_fig4a_point(&ctx),
        Command::ReproduceFig5 => commands::reproduce_fig5(&ctx),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(Status::Done) => ExitCode::SUCCESS,
        Ok(Status::BudgetExceeded) => {
            eprintln!("simulation budget exhausted; partial results written");
            ExitCode::from(3)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<ConfigError>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::FAILURE
            }
        }
    }
}
