//! Per-channel min-max normalization onto [−1, 1].

use crate::error::{CoreError, Result};

/// Observed range of one feature channel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelRange {
    pub min: f64,
    pub max: f64,
}

/// Per-channel ranges fitted on a training set; normalization targets
/// are fixed at −1 and +1.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalizationSpec {
    pub channels: Vec<ChannelRange>,
}

pub const TARGET_MIN: f64 = -1.0;
pub const TARGET_MAX: f64 = 1.0;

/// Maps `x` onto [−1, 1] linearly from the channel range. A degenerate
/// range (max = min) maps everything to −1. Out-of-range inputs
/// extrapolate linearly; there is no clamping.
pub fn normalize(x: f64, channel: ChannelRange) -> f64 {
    if channel.max == channel.min {
        TARGET_MIN
    } else {
        (TARGET_MAX - TARGET_MIN) * (x - channel.min) / (channel.max - channel.min) + TARGET_MIN
    }
}

impl NormalizationSpec {
    pub fn dim(&self) -> usize {
        self.channels.len()
    }

    /// Normalizes a feature vector in place.
    pub fn apply_in_place(&self, features: &mut [f64]) {
        debug_assert_eq!(features.len(), self.channels.len());
        for (x, ch) in features.iter_mut().zip(&self.channels) {
            *x = normalize(*x, *ch);
        }
    }

    pub fn apply(&self, features: &[f64]) -> Vec<f64> {
        features
            .iter()
            .zip(&self.channels)
            .map(|(x, ch)| normalize(*x, *ch))
            .collect()
    }
}

/// Records the min and max of every feature channel over the dataset
/// (the channel is the group: one spec per feature position, fitted on
/// the whole training set).
pub fn fit_normalization<S: AsRef<[f64]>>(dataset: &[S]) -> Result<NormalizationSpec> {
    let first = dataset.first().ok_or(CoreError::EmptyDataset)?;
    let dim = first.as_ref().len();
    let mut channels = vec![ChannelRange { min: f64::INFINITY, max: f64::NEG_INFINITY }; dim];
    for row in dataset {
        let row = row.as_ref();
        debug_assert_eq!(row.len(), dim);
        for (ch, &x) in channels.iter_mut().zip(row) {
            ch.min = ch.min.min(x);
            ch.max = ch.max.max(x);
        }
    }
    Ok(NormalizationSpec { channels })
}
