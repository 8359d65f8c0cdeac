//! Feature extraction and observability-based labeling.

use crate::error::{CoreError, Result};
use crate::features::label::FaultLabel;
use crate::features::regime::FeatureRegime;
use crate::sim::{observable_switches, FaultScenario, Trace};

/// Multiplicative feature synthesis: the current triple augmented with
/// its pairwise and triple products, in exactly this order.
pub fn synthesize(i_a: f64, i_b: f64, i_c: f64) -> [f64; 7] {
    [i_a, i_b, i_c, i_a * i_b, i_a * i_c, i_b * i_c, i_a * i_b * i_c]
}

/// Raw (un-normalized) feature vectors with their source times.
///
/// Transient and SyntheticTransient yield one vector per record;
/// TimeSeries yields stride-1 sliding windows flattened channel-major,
/// stamped with the time of the window's last record.
pub fn extract(trace: &Trace, regime: FeatureRegime) -> Result<Vec<(Vec<f64>, f64)>> {
    match regime {
        FeatureRegime::Transient => Ok(trace
            .records
            .iter()
            .map(|r| (r.i_abc.to_vec(), r.t))
            .collect()),
        FeatureRegime::SyntheticTransient => Ok(trace
            .records
            .iter()
            .map(|r| (synthesize(r.i_abc[0], r.i_abc[1], r.i_abc[2]).to_vec(), r.t))
            .collect()),
        FeatureRegime::TimeSeries { window_len } => {
            if trace.len() < window_len {
                return Err(CoreError::TraceTooShort {
                    len: trace.len(),
                    needed: window_len,
                });
            }
            let n = trace.len() - window_len + 1;
            let mut out = Vec::with_capacity(n);
            for start in 0..n {
                let window = &trace.records[start..start + window_len];
                let mut features = Vec::with_capacity(3 * window_len);
                for phase in 0..3 {
                    features.extend(window.iter().map(|r| r.i_abc[phase]));
                }
                out.push((features, window[window_len - 1].t));
            }
            Ok(out)
        }
    }
}

/// Per-record labels: the code of the intersection between the faults
/// active at the record's time and the switches observable at its
/// reference angle. Records before every onset come out as F0.
///
/// The scenario's switch set must be codable (empty, any single switch,
/// or the SaP+SbP pair); every observable subset of a codable set is
/// itself codable.
pub fn label_samples(trace: &Trace, scenario: &FaultScenario) -> Result<Vec<FaultLabel>> {
    let full_set = scenario.switch_set();
    if FaultLabel::from_switch_set(full_set).is_none() {
        return Err(CoreError::UncodableFaultSet(full_set.to_string()));
    }
    trace
        .records
        .iter()
        .map(|r| {
            let visible = scenario.active_at(r.t).intersection(observable_switches(r.ref_angle));
            FaultLabel::from_switch_set(visible)
                .ok_or_else(|| CoreError::UncodableFaultSet(visible.to_string()))
        })
        .collect()
}
