use crate::diagnosis::decide::{decide, DiagnosisResult};
use crate::error::{CoreError, Result};
use crate::features::{synthesize, FeatureRegime};
use crate::mlp::MlpModel;

/// Classifies one instantaneous current triple: builds the regime's raw
/// feature vector, applies the model's embedded normalization, runs the
/// network and applies the decision rule.
///
/// Windowed (time-series) models cannot classify single triples and
/// report a regime mismatch.
pub fn classify_sample(model: &MlpModel, i_abc: [f64; 3]) -> Result<DiagnosisResult> {
    let f_value = match model.regime {
        FeatureRegime::Transient => model.predict_raw(&i_abc)?,
        FeatureRegime::SyntheticTransient => {
            model.predict_raw(&synthesize(i_abc[0], i_abc[1], i_abc[2]))?
        }
        FeatureRegime::TimeSeries { .. } => {
            return Err(CoreError::RegimeMismatch(
                "time-series models classify windowed datasets, not single samples".into(),
            ))
        }
    };
    Ok(decide(f_value))
}
