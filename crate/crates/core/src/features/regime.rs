use std::fmt;

use crate::error::{CoreError, Result};

/// Classifier input layout.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FeatureRegime {
    /// Sliding window of `window_len` consecutive current triples,
    /// flattened channel-major (dimension 3 × window_len).
    TimeSeries { window_len: usize },
    /// One instantaneous (i_a, i_b, i_c) triple.
    Transient,
    /// The transient triple plus pairwise and triple products
    /// (dimension 7).
    SyntheticTransient,
}

/// Default time-series window: one 20 ms frame of 200 samples.
pub const DEFAULT_WINDOW_LEN: usize = 200;

impl FeatureRegime {
    pub fn dim(self) -> usize {
        match self {
            FeatureRegime::TimeSeries { window_len } => 3 * window_len,
            FeatureRegime::Transient => 3,
            FeatureRegime::SyntheticTransient => 7,
        }
    }

    /// True for regimes that classify one instantaneous sample.
    pub fn is_instantaneous(self) -> bool {
        !matches!(self, FeatureRegime::TimeSeries { .. })
    }

    pub fn tag(self) -> &'static str {
        match self {
            FeatureRegime::TimeSeries { .. } => "time-series",
            FeatureRegime::Transient => "transient",
            FeatureRegime::SyntheticTransient => "synthetic-transient",
        }
    }

    /// Rebuilds a regime from its tag and dimensionality (as stored in
    /// dataset and model headers).
    pub fn from_tag_and_dim(tag: &str, dim: usize) -> Result<FeatureRegime> {
        let regime = match tag {
            "time-series" => {
                if dim == 0 || dim % 3 != 0 {
                    return Err(CoreError::MalformedFile(format!(
                        "time-series dim {dim} is not a positive multiple of 3"
                    )));
                }
                FeatureRegime::TimeSeries { window_len: dim / 3 }
            }
            "transient" => FeatureRegime::Transient,
            "synthetic-transient" => FeatureRegime::SyntheticTransient,
            other => {
                return Err(CoreError::MalformedFile(format!("unknown regime tag '{other}'")))
            }
        };
        if regime.dim() != dim {
            return Err(CoreError::MalformedFile(format!(
                "regime {tag} expects dim {}, header says {dim}",
                regime.dim()
            )));
        }
        Ok(regime)
    }
}

impl fmt::Display for FeatureRegime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}
