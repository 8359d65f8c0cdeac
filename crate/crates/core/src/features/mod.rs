//! Trace-to-dataset pipeline: feature extraction under three regimes,
//! min-max normalization and observability-based labeling.

mod dataset;
mod extract;
mod label;
mod normalize;
mod regime;

pub use dataset::{
    load_dataset, read_dataset, save_dataset, stratified_split, write_dataset, LabeledSample,
};
pub use extract::{extract, label_samples, synthesize};
pub use label::{FaultLabel, NUM_LABELS};
pub use normalize::{fit_normalization, normalize, ChannelRange, NormalizationSpec};
pub use regime::{FeatureRegime, DEFAULT_WINDOW_LEN};

use crate::error::Result;
use crate::sim::{FaultScenario, Trace};

/// Extracts and labels a trace in one go. For windowed regimes the
/// label comes from the window's last record.
pub fn build_labeled_samples(
    trace: &Trace,
    scenario: &FaultScenario,
    regime: FeatureRegime,
) -> Result<Vec<LabeledSample>> {
    let features = extract(trace, regime)?;
    let labels = label_samples(trace, scenario)?;
    let skip = trace.len() - features.len(); // window_len - 1 for TimeSeries
    Ok(features
        .into_iter()
        .zip(labels.into_iter().skip(skip))
        .map(|((features, source_time), label)| LabeledSample { features, label, source_time })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::{simulate, SimParams, SwitchId};

    #[test]
    fn labeled_samples_align_with_records() {
        let params = SimParams::default();
        let scenario = FaultScenario::at(0.01, &[SwitchId::SaP]);
        let trace = simulate(&scenario, 0.03, &params, 0).unwrap();

        let samples =
            build_labeled_samples(&trace, &scenario, FeatureRegime::SyntheticTransient).unwrap();
        assert_eq!(samples.len(), trace.len());
        assert!(samples.iter().all(|s| s.features.len() == 7));

        let windows = build_labeled_samples(
            &trace,
            &scenario,
            FeatureRegime::TimeSeries { window_len: 10 },
        )
        .unwrap();
        assert_eq!(windows.len(), trace.len() - 9);
        // the first window's label is the 10th record's label
        let labels = label_samples(&trace, &scenario).unwrap();
        assert_eq!(windows[0].label, labels[9]);
        assert_eq!(windows[0].source_time, trace.records[9].t);
    }
}
