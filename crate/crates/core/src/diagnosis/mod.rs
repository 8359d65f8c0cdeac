//! Per-sample decision rule, frame aggregation, debounced localization
//! and confusion-matrix evaluation.

mod classify;
mod decide;
mod evaluate;
mod localize;
mod window;

pub use classify::classify_sample;
pub use decide::{decide, DiagnosisResult};
pub use evaluate::{evaluate, write_confusion_csv, Evaluation};
pub use localize::{localize, LocalizationState, DEFAULT_DEBOUNCE};
pub use window::{aggregate_window, WindowReport, DEFAULT_THRESHOLD};
