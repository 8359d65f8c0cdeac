use crate::features::FaultLabel;

/// Outcome of one per-sample decision: a fault code, or an
/// out-of-model output.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiagnosisResult {
    Label(FaultLabel),
    Error,
}

/// Decision rule on the network output: values strictly inside
/// (−0.5, 7.5) round (half away from zero) to a label, everything else
/// is an error.
pub fn decide(f_value: f64) -> DiagnosisResult {
    if f_value > -0.5 && f_value < 7.5 {
        DiagnosisResult::Label(FaultLabel::new(f_value.round() as u8).expect("round stays in 0..7"))
    } else {
        DiagnosisResult::Error
    }
}
