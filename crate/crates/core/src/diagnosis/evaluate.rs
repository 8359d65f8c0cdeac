//! Confusion-matrix evaluation of a trained classifier.

use std::io::Write;

use crate::diagnosis::decide::{decide, DiagnosisResult};
use crate::error::{CoreError, Result};
use crate::exec::{map_slice, ExecMode};
use crate::features::{LabeledSample, NUM_LABELS};
use crate::mlp::MlpModel;

/// Row-normalized confusion matrix over the eight fault codes plus an
/// error column, with summary accuracies.
#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    /// Raw outcome counts: row = true class, columns F0..F7 then Error.
    pub counts: [[usize; NUM_LABELS + 1]; NUM_LABELS],
    /// Counts normalized per row; each row sums to 1 (incl. Error).
    pub matrix: [[f64; NUM_LABELS + 1]; NUM_LABELS],
    /// Mean of the diagonal over the classes present in the test set.
    pub macro_accuracy: f64,
    /// Overall fraction of correct decisions.
    pub micro_accuracy: f64,
    /// Fraction of out-of-model (error) outputs.
    pub error_rate: f64,
}

impl Evaluation {
    /// Per-class recall (the diagonal).
    pub fn recall(&self, class: usize) -> f64 {
        self.matrix[class][class]
    }

    pub fn from_counts(counts: [[usize; NUM_LABELS + 1]; NUM_LABELS]) -> Evaluation {
        let mut matrix = [[0.0; NUM_LABELS + 1]; NUM_LABELS];
        let mut diag_sum = 0.0;
        let mut present = 0usize;
        let mut correct = 0usize;
        let mut errors = 0usize;
        let mut total = 0usize;
        for (row, row_counts) in counts.iter().enumerate() {
            let row_total: usize = row_counts.iter().sum();
            total += row_total;
            correct += row_counts[row];
            errors += row_counts[NUM_LABELS];
            if row_total > 0 {
                for (col, &c) in row_counts.iter().enumerate() {
                    matrix[row][col] = c as f64 / row_total as f64;
                }
                diag_sum += matrix[row][row];
                present += 1;
            }
        }
        Evaluation {
            counts,
            matrix,
            macro_accuracy: if present > 0 { diag_sum / present as f64 } else { f64::NAN },
            micro_accuracy: if total > 0 { correct as f64 / total as f64 } else { f64::NAN },
            error_rate: if total > 0 { errors as f64 / total as f64 } else { f64::NAN },
        }
    }
}

/// Classifies every test sample through the model's embedded
/// normalization and the decision rule, tallying a confusion matrix.
/// Sample features must be raw (un-normalized) regime vectors.
pub fn evaluate(model: &MlpModel, test_set: &[LabeledSample], mode: ExecMode) -> Result<Evaluation> {
    if test_set.is_empty() {
        return Err(CoreError::EmptyDataset);
    }
    let outcomes = map_slice(mode, test_set, |s| {
        let out = model.predict_raw(&s.features).map(decide)?;
        let col = match out {
            DiagnosisResult::Label(l) => l.index(),
            DiagnosisResult::Error => NUM_LABELS,
        };
        Ok::<(usize, usize), CoreError>((s.label.index(), col))
    });
    let mut counts = [[0usize; NUM_LABELS + 1]; NUM_LABELS];
    for outcome in outcomes {
        let (row, col) = outcome?;
        counts[row][col] += 1;
    }
    Ok(Evaluation::from_counts(counts))
}

/// Emits the matrix as CSV: one row per true class, probability columns
/// F0..F7 plus the error column and summary lines.
pub fn write_confusion_csv<W: Write>(w: &mut W, eval: &Evaluation) -> Result<()> {
    writeln!(w, "true,F0,F1,F2,F3,F4,F5,F6,F7,error")?;
    for (row, probs) in eval.matrix.iter().enumerate() {
        write!(w, "F{row}")?;
        for p in probs {
            write!(w, ",{p:.6}")?;
        }
        writeln!(w)?;
    }
    writeln!(w, "macro_accuracy,{:.6}", eval.macro_accuracy)?;
    writeln!(w, "micro_accuracy,{:.6}", eval.micro_accuracy)?;
    writeln!(w, "error_rate,{:.6}", eval.error_rate)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use crate::features::{ChannelRange, FaultLabel, FeatureRegime, NormalizationSpec};

    fn sample(label: u8, features: Vec<f64>) -> LabeledSample {
        LabeledSample {
            features,
            label: FaultLabel::new(label).unwrap(),
            source_time: 0.0,
        }
    }

    /// Model computing x[0] through identity normalization.
    fn passthrough_model() -> MlpModel {
        let norm = NormalizationSpec {
            channels: vec![ChannelRange { min: -1.0, max: 1.0 }; 3],
        };
        let mut model = MlpModel::new(&[1], norm, FeatureRegime::Transient, 0).unwrap();
        // hidden neuron: small-signal linear regime, then invert the scale
        let eps = 1e-4;
        model.layers[0].weights.copy_from_slice(&[eps, 0.0, 0.0]);
        model.layers[0].biases[0] = 0.0;
        model.layers[1].weights[0] = 1.0 / eps;
        model.layers[1].biases[0] = 0.0;
        model
    }

    #[test]
    fn perfect_classifier_gives_identity() {
        let model = passthrough_model();
        let test: Vec<LabeledSample> = (0..8u8)
            .flat_map(|k| (0..5).map(move |_| sample(k, vec![k as f64, 0.0, 0.0])))
            .collect();
        let eval = evaluate(&model, &test, ExecMode::Sequential).unwrap();
        for row in 0..8 {
            for col in 0..9 {
                let expected = if row == col { 1.0 } else { 0.0 };
                assert_relative_eq!(eval.matrix[row][col], expected, epsilon = 1e-9);
            }
        }
        assert_relative_eq!(eval.macro_accuracy, 1.0);
        assert_relative_eq!(eval.micro_accuracy, 1.0);
        assert_eq!(eval.error_rate, 0.0);
    }

    #[test]
    fn constant_normal_classifier_on_balanced_set() {
        let model = {
            let mut m = passthrough_model();
            for layer in &mut m.layers {
                layer.weights.fill(0.0);
                layer.biases.fill(0.0);
            }
            m
        };
        let test: Vec<LabeledSample> = (0..8u8)
            .flat_map(|k| (0..10).map(move |_| sample(k, vec![k as f64, 1.0, -1.0])))
            .collect();
        let eval = evaluate(&model, &test, ExecMode::Sequential).unwrap();
        assert_relative_eq!(eval.matrix[0][0], 1.0);
        for row in 1..8 {
            assert_relative_eq!(eval.matrix[row][0], 1.0);
            assert_relative_eq!(eval.matrix[row][row], 0.0);
        }
        assert_relative_eq!(eval.macro_accuracy, 0.125);
        assert_relative_eq!(eval.micro_accuracy, 0.125);
    }

    #[test]
    fn rows_sum_to_one_including_errors() {
        // out-of-range feature drives the output far outside (−0.5, 7.5)
        let model = passthrough_model();
        let mut test: Vec<LabeledSample> = (0..8u8)
            .flat_map(|k| (0..7).map(move |_| sample(k, vec![k as f64, 0.0, 0.0])))
            .collect();
        test.push(sample(2, vec![500.0, 0.0, 0.0]));
        let eval = evaluate(&model, &test, ExecMode::Sequential).unwrap();
        for row in 0..8 {
            let sum: f64 = eval.matrix[row].iter().sum();
            assert!((sum - 1.0).abs() <= 1e-12, "row {row} sums to {sum}");
        }
        assert!(eval.error_rate > 0.0);
        assert_eq!(eval.counts[2][8], 1);
    }

    #[test]
    fn macro_accuracy_is_the_diagonal_mean() {
        let diagonal: [f64; 8] =
            [0.9842, 0.9582, 0.9695, 0.9808, 0.9987, 0.9722, 0.9978, 0.9431];
        let mut counts = [[0usize; 9]; 8];
        for (row, &p) in diagonal.iter().enumerate() {
            let correct = (p * 10_000.0).round() as usize;
            counts[row][row] = correct;
            counts[row][(row + 1) % 8] = 10_000 - correct;
        }
        let eval = Evaluation::from_counts(counts);
        assert_relative_eq!(eval.macro_accuracy, 0.975_562_5, epsilon = 1e-12);
    }

    #[test]
    fn empty_test_set_is_an_error() {
        let model = passthrough_model();
        assert!(matches!(
            evaluate(&model, &[], ExecMode::Sequential),
            Err(CoreError::EmptyDataset)
        ));
    }
}
