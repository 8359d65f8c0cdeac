//! Online diagnosis loop: per-frame classification, window aggregation
//! and debounced localization, with a replayable CSV log.

use std::io::Write;
use std::time::Instant;

use vsr_core::diagnosis::{aggregate_window, classify_sample, LocalizationState, WindowReport};
use vsr_core::mlp::MlpModel;
use vsr_core::sim::SwitchSet;
use vsr_core::CoreError;

use crate::error::{FdxError, Result};
use crate::frame::{Frame, FRAME_SAMPLES, STREAM_RATE};

#[derive(Debug, Clone, Copy)]
pub struct DiagnoseConfig {
    /// Window-share a label needs to implicate its switches.
    pub threshold: f64,
    /// Consecutive windows to confirm or retire a switch.
    pub debounce: u8,
}

impl Default for DiagnoseConfig {
    fn default() -> Self {
        DiagnoseConfig {
            threshold: vsr_core::diagnosis::DEFAULT_THRESHOLD,
            debounce: vsr_core::diagnosis::DEFAULT_DEBOUNCE,
        }
    }
}

#[derive(Debug, Clone)]
pub struct DiagnosisSummary {
    pub frames: u64,
    pub samples: u64,
    pub confirmed: SwitchSet,
    /// (window_index, confirmed set) at every change.
    pub confirmations: Vec<(u64, SwitchSet)>,
    pub samples_per_second: f64,
}

pub const LOG_HEADER: &str = "window_index,t_start,counts_F0,counts_F1,counts_F2,counts_F3,\
counts_F4,counts_F5,counts_F6,counts_F7,count_err,fault_switches";

fn log_line(report: &WindowReport) -> String {
    let counts: Vec<String> = report.counts.iter().map(|c| c.to_string()).collect();
    format!(
        "{},{:.6},{},{},{}",
        report.window_index,
        report.t_start,
        counts.join(","),
        report.error_count,
        report.fault_switches
    )
}

/// Drives the model over a frame source, writing one log row per
/// window. The model's regime must classify instantaneous samples.
pub fn run_diagnosis<I, W>(
    model: &MlpModel,
    frames: I,
    config: &DiagnoseConfig,
    log: &mut W,
    meta: Option<&str>,
) -> Result<DiagnosisSummary>
where
    I: Iterator<Item = Result<Frame>>,
    W: Write,
{
    if !model.regime.is_instantaneous() {
        return Err(FdxError::Core(CoreError::RegimeMismatch(
            "online diagnosis needs a transient or synthetic-transient model".into(),
        )));
    }

    writeln!(log, "{LOG_HEADER}")?;
    if let Some(meta) = meta {
        writeln!(log, "# {meta}")?;
    }

    let mut state = LocalizationState::new(config.debounce);
    let mut summary = DiagnosisSummary {
        frames: 0,
        samples: 0,
        confirmed: SwitchSet::EMPTY,
        confirmations: Vec::new(),
        samples_per_second: 0.0,
    };
    let started = Instant::now();
    let mut results = Vec::with_capacity(FRAME_SAMPLES);

    for frame in frames {
        let frame = frame?;
        results.clear();
        for s in &frame.samples {
            let triple = [s[0] as f64, s[1] as f64, s[2] as f64];
            results.push(classify_sample(model, triple)?);
        }
        let mut report = aggregate_window(&results, config.threshold);
        report.window_index = frame.sequence;
        report.t_start = frame.t_start();
        report.window_span = frame.samples.len() as f64 / STREAM_RATE;

        let confirmed = state.update(&report);
        writeln!(log, "{}", log_line(&report))?;
        if confirmed != summary.confirmed {
            summary.confirmed = confirmed;
            summary.confirmations.push((report.window_index, confirmed));
        }
        summary.frames += 1;
        summary.samples += frame.samples.len() as u64;
    }

    let elapsed = started.elapsed().as_secs_f64();
    summary.samples_per_second =
        if elapsed > 0.0 { summary.samples as f64 / elapsed } else { f64::INFINITY };
    Ok(summary)
}
