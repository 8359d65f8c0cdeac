use crate::diagnosis::decide::DiagnosisResult;
use crate::features::{FaultLabel, NUM_LABELS};
use crate::sim::SwitchSet;

/// Default aggregation threshold: a label must fill 10% of the window.
pub const DEFAULT_THRESHOLD: f64 = 0.10;

/// Aggregate of one frame's worth of per-sample diagnoses.
#[derive(Debug, Clone, PartialEq)]
pub struct WindowReport {
    pub window_index: u64,
    /// Window start time (s), filled by the stream driver.
    pub t_start: f64,
    /// Per-label occurrence counts.
    pub counts: [usize; NUM_LABELS],
    /// Out-of-model outputs; never localized.
    pub error_count: usize,
    /// Labels whose count reached the threshold.
    pub above_threshold: Vec<FaultLabel>,
    /// Union of the switch sets of the above-threshold non-normal labels.
    pub fault_switches: SwitchSet,
    /// Window duration (s).
    pub window_span: f64,
}

/// Counts label occurrences over one window and derives the implicated
/// switches: every non-normal label reaching `threshold · window_size`
/// contributes its switch set.
pub fn aggregate_window(results: &[DiagnosisResult], threshold: f64) -> WindowReport {
    assert!(!results.is_empty(), "window must not be empty");
    assert!(threshold > 0.0 && threshold <= 1.0, "threshold outside (0, 1]");

    let mut counts = [0usize; NUM_LABELS];
    let mut error_count = 0usize;
    for r in results {
        match r {
            DiagnosisResult::Label(label) => counts[label.index()] += 1,
            DiagnosisResult::Error => error_count += 1,
        }
    }

    let needed = (threshold * results.len() as f64).ceil() as usize;
    let mut above_threshold = Vec::new();
    let mut fault_switches = SwitchSet::EMPTY;
    for label in FaultLabel::all() {
        if counts[label.index()] >= needed.max(1) {
            above_threshold.push(label);
            if label != FaultLabel::NORMAL {
                fault_switches = fault_switches.union(label.switches());
            }
        }
    }

    WindowReport {
        window_index: 0,
        t_start: 0.0,
        counts,
        error_count,
        above_threshold,
        fault_switches,
        window_span: 0.0,
    }
}
