//! Labeled sample sets, the `vsr-dataset v1` text format and the
//! stratified split.

use std::io::{BufRead, Write};
use std::path::Path;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{CoreError, Result};
use crate::features::label::FaultLabel;
use crate::features::regime::FeatureRegime;

/// One classifier input with its ground truth and origin time.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledSample {
    pub features: Vec<f64>,
    pub label: FaultLabel,
    pub source_time: f64,
}

/// Writes the `vsr-dataset v1` format; every sample must match the
/// regime's dimensionality.
pub fn write_dataset<W: Write>(
    w: &mut W,
    regime: FeatureRegime,
    samples: &[LabeledSample],
    meta: Option<&str>,
) -> Result<()> {
    let dim = regime.dim();
    writeln!(w, "vsr-dataset v1, regime={}, dim={}", regime.tag(), dim)?;
    if let Some(meta) = meta {
        writeln!(w, "# {meta}")?;
    }
    for s in samples {
        if s.features.len() != dim {
            return Err(CoreError::DimensionMismatch { expected: dim, got: s.features.len() });
        }
        for f in &s.features {
            write!(w, "{f:.16e},")?;
        }
        writeln!(w, "{},{:.16e}", s.label.value(), s.source_time)?;
    }
    Ok(())
}

pub fn save_dataset(
    path: &Path,
    regime: FeatureRegime,
    samples: &[LabeledSample],
    meta: Option<&str>,
) -> Result<()> {
    let mut w = std::io::BufWriter::new(std::fs::File::create(path)?);
    write_dataset(&mut w, regime, samples, meta)
}

pub fn read_dataset<R: BufRead>(r: &mut R) -> Result<(FeatureRegime, Vec<LabeledSample>)> {
    let mut header = String::new();
    r.read_line(&mut header)?;
    let header = header.trim_end();
    let rest = header
        .strip_prefix("vsr-dataset ")
        .ok_or_else(|| CoreError::MalformedFile("missing vsr-dataset header".into()))?;
    let mut parts = rest.split(',').map(str::trim);
    let version = parts.next().unwrap_or("");
    if version != "v1" {
        return Err(CoreError::VersionMismatch(version.to_string()));
    }
    let tag = parts
        .next()
        .and_then(|p| p.strip_prefix("regime="))
        .ok_or_else(|| CoreError::MalformedFile("missing regime in header".into()))?;
    let dim: usize = parts
        .next()
        .and_then(|p| p.strip_prefix("dim="))
        .and_then(|v| v.parse().ok())
        .ok_or_else(|| CoreError::MalformedFile("missing dim in header".into()))?;
    let regime = FeatureRegime::from_tag_and_dim(tag, dim)?;

    let mut samples = Vec::new();
    for line in r.lines() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != dim + 2 {
            return Err(CoreError::MalformedFile(format!(
                "row has {} fields, expected {}",
                fields.len(),
                dim + 2
            )));
        }
        let mut features = Vec::with_capacity(dim);
        for s in &fields[..dim] {
            features.push(
                s.parse()
                    .map_err(|_| CoreError::MalformedFile(format!("bad feature '{s}'")))?,
            );
        }
        let label_raw: u8 = fields[dim]
            .parse()
            .map_err(|_| CoreError::MalformedFile(format!("bad label '{}'", fields[dim])))?;
        let label = FaultLabel::new(label_raw)?;
        let source_time: f64 = fields[dim + 1]
            .parse()
            .map_err(|_| CoreError::MalformedFile(format!("bad time '{}'", fields[dim + 1])))?;
        samples.push(LabeledSample { features, label, source_time });
    }
    Ok((regime, samples))
}

pub fn load_dataset(path: &Path) -> Result<(FeatureRegime, Vec<LabeledSample>)> {
    let mut r = std::io::BufReader::new(std::fs::File::open(path)?);
    read_dataset(&mut r)
}

/// Splits into train/val/test, shuffling within each label class so
/// every class lands in every split at the configured fractions.
pub fn stratified_split(
    samples: Vec<LabeledSample>,
    train_fraction: f64,
    val_fraction: f64,
    seed: u64,
) -> Result<(Vec<LabeledSample>, Vec<LabeledSample>, Vec<LabeledSample>)> {
    for (name, f) in [("train", train_fraction), ("val", val_fraction)] {
        if !(f > 0.0 && f < 1.0) {
            return Err(CoreError::InvalidConfig(format!("{name} fraction {f} outside (0,1)")));
        }
    }
    if train_fraction + val_fraction > 1.0 {
        return Err(CoreError::InvalidConfig("split fractions sum beyond 1".into()));
    }

    let mut by_label: Vec<Vec<LabeledSample>> = (0..8).map(|_| Vec::new()).collect();
    for s in samples {
        by_label[s.label.index()].push(s);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut train, mut val, mut test) = (Vec::new(), Vec::new(), Vec::new());
    for mut class in by_label {
        class.shuffle(&mut rng);
        let n = class.len();
        let n_train = (n as f64 * train_fraction).round() as usize;
        let n_val = (n as f64 * val_fraction).round() as usize;
        for (i, s) in class.into_iter().enumerate() {
            if i < n_train {
                train.push(s);
            } else if i < n_train + n_val {
                val.push(s);
            } else {
                test.push(s);
            }
        }
    }
    Ok((train, val, test))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn samples(n: usize, dim: usize) -> Vec<LabeledSample> {
        (0..n)
            .map(|k| LabeledSample {
                features: (0..dim).map(|j| (k * dim + j) as f64 * 0.127 - 3.0).collect(),
                label: FaultLabel::new((k % 8) as u8).unwrap(),
                source_time: k as f64 * 1e-3,
            })
            .collect()
    }

    #[test]
    fn round_trip_is_exact() {
        let original = samples(100, 7);
        let mut buf = Vec::new();
        write_dataset(&mut buf, FeatureRegime::SyntheticTransient, &original, Some("seed=3"))
            .unwrap();
        let (regime, back) = read_dataset(&mut buf.as_slice()).unwrap();
        assert_eq!(regime, FeatureRegime::SyntheticTransient);
        assert_eq!(back, original);
    }

    #[test]
    fn empty_dataset_round_trips() {
        let mut buf = Vec::new();
        write_dataset(&mut buf, FeatureRegime::Transient, &[], None).unwrap();
        let (regime, back) = read_dataset(&mut buf.as_slice()).unwrap();
        assert_eq!(regime, FeatureRegime::Transient);
        assert!(back.is_empty());
    }

    #[test]
    fn label_out_of_range_is_malformed() {
        let text = "vsr-dataset v1, regime=transient, dim=3\n1.0,2.0,3.0,9,0.0\n";
        assert!(matches!(
            read_dataset(&mut text.as_bytes()),
            Err(CoreError::MalformedFile(_))
        ));
    }

    #[test]
    fn ragged_row_is_malformed() {
        let text = "vsr-dataset v1, regime=transient, dim=3\n1.0,2.0,0,0.0\n";
        assert!(matches!(
            read_dataset(&mut text.as_bytes()),
            Err(CoreError::MalformedFile(_))
        ));
    }

    #[test]
    fn split_is_stratified_and_complete() {
        let all = samples(800, 3);
        let (train, val, test) = stratified_split(all.clone(), 0.05, 0.05, 9).unwrap();
        assert_eq!(train.len() + val.len() + test.len(), all.len());
        assert_eq!(train.len(), 40);
        assert_eq!(val.len(), 40);
        for split in [&train, &val, &test] {
            for label in FaultLabel::all() {
                assert!(split.iter().any(|s| s.label == label), "{label} missing");
            }
        }
    }

    #[test]
    fn split_rejects_bad_fractions() {
        assert!(stratified_split(samples(8, 3), 0.6, 0.5, 0).is_err());
        assert!(stratified_split(samples(8, 3), 0.0, 0.5, 0).is_err());
    }
}
