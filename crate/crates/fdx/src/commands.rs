//! Implementations behind the CLI subcommands, callable from tests.

use std::io::Write;
use std::net::TcpListener;
use std::path::{Path, PathBuf};

use vsr_core::diagnosis::{evaluate, write_confusion_csv, Evaluation};
use vsr_core::exec::ExecMode;
use vsr_core::features::{load_dataset, FeatureRegime};
use vsr_core::mlp::{load_model, save_model, train, MlpModel, StopReason, TrainConfig};
use vsr_core::sim::{load_scenario, simulate, Trace};

use crate::campaign::{generate, write_splits, CampaignFile};
use crate::diagnose::{run_diagnosis, DiagnoseConfig, DiagnosisSummary};
use crate::error::{FdxError, Result};
use crate::frame::{frames_from_trace, Frame};
use crate::meta::meta_line;
use crate::plot::{plot_diagnosis_log, plot_trace};
use crate::stream::{serve_frames, FrameReader, Pacing};

pub fn cmd_simulate(config: &Path, duration: f64, out: &Path, seed: u64) -> Result<Trace> {
    let config_text = std::fs::read_to_string(config)?;
    let (params, scenario) = load_scenario(config).map_err(FdxError::Core)?;
    let trace = simulate(&scenario, duration, &params, seed).map_err(FdxError::Core)?;
    if let Some(parent) = out.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)?;
        }
    }
    trace.save(out, Some(&meta_line(seed, &config_text))).map_err(FdxError::Core)?;
    println!("wrote {} records at {} Hz to {}", trace.len(), trace.sample_rate, out.display());
    Ok(trace)
}

pub fn cmd_dataset(
    config: &Path,
    out_dir: &Path,
    seed_override: Option<u64>,
) -> Result<Vec<(FeatureRegime, [PathBuf; 3])>> {
    let text = std::fs::read_to_string(config)?;
    let mut file = CampaignFile::parse(&text)?;
    if let Some(seed) = seed_override {
        file.seed = seed;
    }
    let campaign = file.resolve()?;
    let data = generate(&campaign, ExecMode::Parallel)?;
    let written = write_splits(&data, out_dir, &meta_line(campaign.seed, &text))?;
    for (regime, paths) in &written {
        let split = data.splits.iter().find(|s| s.regime == *regime).unwrap();
        println!(
            "{}: {} train / {} val / {} test -> {}",
            regime.tag(),
            split.train.len(),
            split.val.len(),
            split.test.len(),
            paths[0].parent().unwrap_or(out_dir).display()
        );
    }
    Ok(written)
}

pub struct TrainArgs {
    pub hidden: Vec<usize>,
    pub config: TrainConfig,
}

/// `16x10` or an explicit `16,16,8` list.
pub fn parse_arch(text: &str) -> Result<Vec<usize>> {
    let bad = |t: &str| FdxError::Config(format!("bad architecture '{t}'"));
    if let Some((width, depth)) = text.split_once('x') {
        let width: usize = width.trim().parse().map_err(|_| bad(text))?;
        let depth: usize = depth.trim().parse().map_err(|_| bad(text))?;
        if width == 0 || depth == 0 {
            return Err(bad(text));
        }
        return Ok(vec![width; depth]);
    }
    let layers: std::result::Result<Vec<usize>, _> =
        text.split(',').map(|s| s.trim().parse::<usize>()).collect();
    let layers = layers.map_err(|_| bad(text))?;
    if layers.is_empty() || layers.contains(&0) {
        return Err(bad(text));
    }
    Ok(layers)
}

pub fn cmd_train(
    dataset: &Path,
    val: Option<&Path>,
    out: &Path,
    args: &TrainArgs,
) -> Result<MlpModel> {
    let (regime, train_set) = load_dataset(dataset).map_err(FdxError::Core)?;
    let val_set = match val {
        Some(path) => {
            let (val_regime, set) = load_dataset(path).map_err(FdxError::Core)?;
            if val_regime != regime {
                return Err(FdxError::Config(format!(
                    "validation regime {} does not match training regime {}",
                    val_regime.tag(),
                    regime.tag()
                )));
            }
            set
        }
        None => Vec::new(),
    };

    let (model, history) =
        train(&train_set, &val_set, regime, &args.hidden, &args.config).map_err(FdxError::Core)?;

    let meta = meta_line(args.config.seed, &format!("{dataset:?}|{:?}", args.hidden));
    save_model(&model, out, Some(&meta)).map_err(FdxError::Core)?;

    let history_path = out.with_extension("history.csv");
    let mut w = std::io::BufWriter::new(std::fs::File::create(&history_path)?);
    writeln!(w, "epoch,train_mse,val_mse")?;
    writeln!(w, "# {meta}")?;
    for e in &history.epochs {
        writeln!(w, "{},{:.9e},{:.9e}", e.epoch, e.train_mse, e.val_mse)?;
    }
    let stop = match history.stop {
        StopReason::GoalReached => "goal_reached",
        StopReason::MaxEpochs => "max_epochs",
        StopReason::EarlyStop => "early_stop",
    };
    writeln!(w, "# stop={stop}")?;

    println!(
        "trained {} epochs (stop: {stop}), final training MSE {:.3e}; model -> {}",
        history.epochs.len(),
        model.meta.final_loss,
        out.display()
    );
    Ok(model)
}

pub fn cmd_eval(model_path: &Path, dataset: &Path, out: &Path) -> Result<Evaluation> {
    let model = load_model(model_path).map_err(FdxError::Core)?;
    let (regime, test_set) = load_dataset(dataset).map_err(FdxError::Core)?;
    if regime != model.regime {
        return Err(FdxError::Config(format!(
            "dataset regime {} does not match model regime {}",
            regime.tag(),
            model.regime.tag()
        )));
    }
    let eval = evaluate(&model, &test_set, ExecMode::Parallel).map_err(FdxError::Core)?;
    let mut w = std::io::BufWriter::new(std::fs::File::create(out)?);
    write_confusion_csv(&mut w, &eval).map_err(FdxError::Core)?;
    println!(
        "macro {:.4}  micro {:.4}  error-rate {:.4} over {} samples -> {}",
        eval.macro_accuracy,
        eval.micro_accuracy,
        eval.error_rate,
        test_set.len(),
        out.display()
    );
    Ok(eval)
}

pub fn cmd_serve(trace_path: &Path, addr: &str, pacing: Pacing) -> Result<u64> {
    let trace = Trace::load(trace_path).map_err(FdxError::Core)?;
    let frames = frames_from_trace(&trace)?;
    let listener = TcpListener::bind(addr)
        .map_err(|e| FdxError::Connection(format!("bind {addr} failed: {e}")))?;
    println!("serving {} frames on {}", frames.len(), listener.local_addr()?);
    let sent = serve_frames(&listener, &frames, pacing)?;
    println!("sent {sent} frames");
    Ok(sent)
}

pub enum FrameSource {
    TraceFile(PathBuf),
    Socket(String),
}

pub fn cmd_diagnose(
    model_path: &Path,
    source: FrameSource,
    log_path: &Path,
    config: &DiagnoseConfig,
    seed: u64,
) -> Result<DiagnosisSummary> {
    let model = load_model(model_path).map_err(FdxError::Core)?;
    let meta = meta_line(seed, &format!("{model_path:?}"));
    let mut log = std::io::BufWriter::new(std::fs::File::create(log_path)?);

    let summary = match source {
        FrameSource::TraceFile(path) => {
            let trace = Trace::load(&path).map_err(FdxError::Core)?;
            let frames = frames_from_trace(&trace)?;
            run_diagnosis(&model, frames.into_iter().map(Ok), config, &mut log, Some(&meta))?
        }
        FrameSource::Socket(addr) => {
            let mut reader = FrameReader::connect(&addr)?;
            let frames = std::iter::from_fn(move || reader.next_frame().transpose());
            run_diagnosis(&model, frames, config, &mut log, Some(&meta))?
        }
    };
    log.flush()?;

    for (window, set) in &summary.confirmations {
        println!("window {window}: confirmed set -> {set}");
    }
    println!(
        "{} frames, {} samples ({:.0} samples/s); final confirmed set: {}",
        summary.frames, summary.samples, summary.samples_per_second, summary.confirmed
    );
    Ok(summary)
}

pub fn cmd_plot(
    trace: Option<&Path>,
    log: Option<&Path>,
    out_dir: &Path,
) -> Result<Vec<PathBuf>> {
    let mut written = Vec::new();
    if let Some(trace_path) = trace {
        let trace = Trace::load(trace_path).map_err(FdxError::Core)?;
        let stem = trace_path.file_stem().and_then(|s| s.to_str()).unwrap_or("trace");
        written.extend(plot_trace(&trace, out_dir, stem)?);
    }
    if let Some(log_path) = log {
        let text = std::fs::read_to_string(log_path)?;
        let stem = log_path.file_stem().and_then(|s| s.to_str()).unwrap_or("diagnosis");
        written.push(plot_diagnosis_log(&text, out_dir, stem)?);
    }
    if written.is_empty() {
        return Err(FdxError::Config("plot needs --trace and/or --log".into()));
    }
    for path in &written {
        println!("wrote {}", path.display());
    }
    Ok(written)
}

/// Replays a trace file through the diagnosis pipeline in memory
/// (no files); used for transport-independence checks.
pub fn diagnose_frames_to_log(
    model: &MlpModel,
    frames: Vec<Frame>,
    config: &DiagnoseConfig,
) -> Result<(String, DiagnosisSummary)> {
    let mut log = Vec::new();
    let summary = run_diagnosis(model, frames.into_iter().map(Ok), config, &mut log, None)?;
    Ok((String::from_utf8(log).expect("log is ASCII"), summary))
}
