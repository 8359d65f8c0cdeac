use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use vsr_core::exec::ExecMode;
use vsr_core::mlp::{OptimizerKind, TrainConfig};

use vsr_fdx::commands::{
    cmd_dataset, cmd_diagnose, cmd_eval, cmd_plot, cmd_serve, cmd_simulate, cmd_train, parse_arch,
    FrameSource, TrainArgs,
};
use vsr_fdx::diagnose::DiagnoseConfig;
use vsr_fdx::error::Result;
use vsr_fdx::stream::Pacing;

#[derive(Parser)]
#[command(
    name = "vsr-fdx",
    about = "PWM-rectifier open-circuit fault simulation, training, streaming and diagnosis"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one fault scenario and write a trace file.
    Simulate {
        /// Scenario config (key=value overrides plus fault entries).
        #[arg(long)]
        config: PathBuf,
        /// Simulated time in seconds.
        #[arg(long)]
        duration: f64,
        /// Output trace file.
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Generate labeled train/val/test datasets from a campaign config.
    Dataset {
        /// Campaign TOML.
        #[arg(long)]
        config: PathBuf,
        /// Output directory.
        #[arg(long)]
        out: PathBuf,
        /// Overrides the campaign file's seed.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Train a feedforward classifier on a dataset file.
    Train {
        #[arg(long)]
        dataset: PathBuf,
        #[arg(long)]
        val: Option<PathBuf>,
        /// Output model file (history CSV lands next to it).
        #[arg(long)]
        out: PathBuf,
        /// Hidden layers: `16x10` or `16,16,8`.
        #[arg(long, default_value = "16x10")]
        arch: String,
        #[arg(long, default_value_t = TrainConfig::default().learning_rate)]
        learning_rate: f64,
        #[arg(long, default_value_t = TrainConfig::default().loss_goal)]
        loss_goal: f64,
        #[arg(long, default_value_t = TrainConfig::default().max_epochs)]
        max_epochs: usize,
        #[arg(long, default_value_t = TrainConfig::default().batch_size)]
        batch_size: usize,
        /// `momentum` or `adam`.
        #[arg(long, default_value = "momentum")]
        optimizer: String,
        #[arg(long, default_value_t = TrainConfig::default().patience)]
        patience: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Evaluate a model on a test dataset; writes the confusion CSV.
    Eval {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        dataset: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Stream a trace as 200-sample frames to one TCP client.
    Serve {
        #[arg(long)]
        trace: PathBuf,
        #[arg(long, default_value = "127.0.0.1:7700")]
        addr: String,
        /// `realtime` (20 ms per frame) or `max`.
        #[arg(long, default_value = "realtime")]
        pacing: String,
    },
    /// Run online diagnosis over a trace file or a frame socket.
    Diagnose {
        #[arg(long)]
        model: PathBuf,
        /// Replay this trace file.
        #[arg(long, conflicts_with = "connect")]
        trace: Option<PathBuf>,
        /// Connect to a frame server instead.
        #[arg(long)]
        connect: Option<String>,
        /// Window-report CSV log.
        #[arg(long)]
        log: PathBuf,
        #[arg(long, default_value_t = DiagnoseConfig::default().threshold)]
        threshold: f64,
        #[arg(long, default_value_t = DiagnoseConfig::default().debounce)]
        debounce: u8,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Render SVG plots from a trace and/or a diagnosis log.
    Plot {
        #[arg(long)]
        trace: Option<PathBuf>,
        #[arg(long)]
        log: Option<PathBuf>,
        /// Output directory.
        #[arg(long)]
        out: PathBuf,
    },
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Simulate { config, duration, out, seed } => {
            cmd_simulate(&config, duration, &out, seed)?;
        }
        Command::Dataset { config, out, seed } => {
            cmd_dataset(&config, &out, seed)?;
        }
        Command::Train {
            dataset,
            val,
            out,
            arch,
            learning_rate,
            loss_goal,
            max_epochs,
            batch_size,
            optimizer,
            patience,
            seed,
        } => {
            let optimizer = match optimizer.as_str() {
                "momentum" => OptimizerKind::Momentum,
                "adam" => OptimizerKind::Adam,
                other => {
                    return Err(vsr_fdx::FdxError::Config(format!("unknown optimizer '{other}'")))
                }
            };
            let args = TrainArgs {
                hidden: parse_arch(&arch)?,
                config: TrainConfig {
                    learning_rate,
                    loss_goal,
                    max_epochs,
                    batch_size,
                    seed,
                    optimizer,
                    patience,
                    execution: ExecMode::Parallel,
                },
            };
            cmd_train(&dataset, val.as_deref(), &out, &args)?;
        }
        Command::Eval { model, dataset, out } => {
            cmd_eval(&model, &dataset, &out)?;
        }
        Command::Serve { trace, addr, pacing } => {
            cmd_serve(&trace, &addr, pacing.parse::<Pacing>()?)?;
        }
        Command::Diagnose { model, trace, connect, log, threshold, debounce, seed } => {
            let source = match (trace, connect) {
                (Some(path), None) => FrameSource::TraceFile(path),
                (None, Some(addr)) => FrameSource::Socket(addr),
                _ => {
                    return Err(vsr_fdx::FdxError::Config(
                        "diagnose needs exactly one of --trace or --connect".into(),
                    ))
                }
            };
            cmd_diagnose(&model, source, &log, &DiagnoseConfig { threshold, debounce }, seed)?;
        }
        Command::Plot { trace, log, out } => {
            cmd_plot(trace.as_deref(), log.as_deref(), &out)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
