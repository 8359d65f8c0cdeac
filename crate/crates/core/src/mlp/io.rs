//! The `vsr-mlp v1` self-describing text model format.

use std::io::{BufRead, Write};
use std::path::Path;

use crate::error::{CoreError, Result};
use crate::features::{ChannelRange, FeatureRegime, NormalizationSpec};
use crate::mlp::model::{Activation, Layer, MlpModel, TrainMeta};

pub fn write_model<W: Write>(w: &mut W, model: &MlpModel, meta_comment: Option<&str>) -> Result<()> {
    writeln!(w, "vsr-mlp v1")?;
    if let Some(c) = meta_comment {
        writeln!(w, "# {c}")?;
    }
    writeln!(w, "[arch]")?;
    let mut dims = vec![model.input_dim()];
    dims.extend(model.layers.iter().map(|l| l.out_dim));
    let dims_str: Vec<String> = dims.iter().map(|d| d.to_string()).collect();
    writeln!(w, "dims={}", dims_str.join(","))?;
    let acts: Vec<&str> = model.layers.iter().map(|l| l.activation.tag()).collect();
    writeln!(w, "activations={}", acts.join(","))?;

    writeln!(w, "[norm]")?;
    for ch in &model.norm.channels {
        writeln!(w, "{:.16e},{:.16e}", ch.min, ch.max)?;
    }

    writeln!(w, "[regime]")?;
    writeln!(w, "{}", model.regime.tag())?;

    writeln!(w, "[meta]")?;
    writeln!(w, "seed={}", model.meta.seed)?;
    writeln!(w, "final_loss={:.16e}", model.meta.final_loss)?;

    for (k, layer) in model.layers.iter().enumerate() {
        writeln!(w, "[layer {k}]")?;
        for o in 0..layer.out_dim {
            let row: Vec<String> = layer.weights[o * layer.in_dim..(o + 1) * layer.in_dim]
                .iter()
                .map(|v| format!("{v:.16e}"))
                .collect();
            writeln!(w, "{}", row.join(","))?;
        }
        let biases: Vec<String> = layer.biases.iter().map(|v| format!("{v:.16e}")).collect();
        writeln!(w, "{}", biases.join(","))?;
    }
    Ok(())
}

pub fn save_model(model: &MlpModel, path: &Path, meta_comment: Option<&str>) -> Result<()> {
    let mut w = std::io::BufWriter::new(std::fs::File::create(path)?);
    write_model(&mut w, model, meta_comment)
}

struct Lines<'a> {
    inner: std::str::Lines<'a>,
}

impl<'a> Lines<'a> {
    /// Next content line (skips blanks and `#` comments).
    fn next(&mut self) -> Option<&'a str> {
        for line in self.inner.by_ref() {
            let line = line.trim();
            if !line.is_empty() && !line.starts_with('#') {
                return Some(line);
            }
        }
        None
    }

    fn expect(&mut self, what: &str) -> Result<&'a str> {
        self.next()
            .ok_or_else(|| CoreError::MalformedFile(format!("unexpected end of file, wanted {what}")))
    }
}

fn parse_floats(line: &str, expected: usize, what: &str) -> Result<Vec<f64>> {
    let vals: Result<Vec<f64>> = line
        .split(',')
        .map(|s| {
            s.trim()
                .parse()
                .map_err(|_| CoreError::MalformedFile(format!("bad number '{s}' in {what}")))
        })
        .collect();
    let vals = vals?;
    if vals.len() != expected {
        return Err(CoreError::MalformedFile(format!(
            "{what}: expected {expected} values, got {}",
            vals.len()
        )));
    }
    Ok(vals)
}

pub fn read_model<R: BufRead>(r: &mut R) -> Result<MlpModel> {
    let mut text = String::new();
    r.read_to_string(&mut text)?;
    let mut lines = Lines { inner: text.lines() };

    let header = lines.expect("header")?;
    match header.strip_prefix("vsr-mlp ") {
        Some("v1") => {}
        Some(other) => return Err(CoreError::VersionMismatch(other.to_string())),
        None => return Err(CoreError::MalformedFile("missing vsr-mlp header".into())),
    }

    let section = |line: &str, name: &str| -> Result<()> {
        if line == format!("[{name}]") {
            Ok(())
        } else {
            Err(CoreError::MalformedFile(format!("expected [{name}], got '{line}'")))
        }
    };

    section(lines.expect("[arch]")?, "arch")?;
    let dims_line = lines
        .expect("dims")?
        .strip_prefix("dims=")
        .ok_or_else(|| CoreError::MalformedFile("missing dims".into()))?
        .to_string();
    let dims: Result<Vec<usize>> = dims_line
        .split(',')
        .map(|s| {
            s.trim()
                .parse()
                .map_err(|_| CoreError::MalformedFile(format!("bad dim '{s}'")))
        })
        .collect();
    let dims = dims?;
    if dims.len() < 2 || *dims.last().unwrap() != 1 {
        return Err(CoreError::MalformedFile("dims must chain to a scalar output".into()));
    }
    let acts_line = lines
        .expect("activations")?
        .strip_prefix("activations=")
        .ok_or_else(|| CoreError::MalformedFile("missing activations".into()))?
        .to_string();
    let activations: Result<Vec<Activation>> =
        acts_line.split(',').map(|s| Activation::from_tag(s.trim())).collect();
    let activations = activations?;
    if activations.len() != dims.len() - 1 {
        return Err(CoreError::MalformedFile(format!(
            "{} activations for {} layers",
            activations.len(),
            dims.len() - 1
        )));
    }
    let (hidden, out_act) = activations.split_at(activations.len() - 1);
    if out_act[0] != Activation::Linear || hidden.iter().any(|a| *a != Activation::TanhSigmoid) {
        return Err(CoreError::MalformedFile(
            "hidden layers must be tanh-sigmoid and the output linear".into(),
        ));
    }

    section(lines.expect("[norm]")?, "norm")?;
    let mut channels = Vec::with_capacity(dims[0]);
    for k in 0..dims[0] {
        let row = parse_floats(lines.expect("norm row")?, 2, &format!("norm channel {k}"))?;
        if row[0] > row[1] {
            return Err(CoreError::MalformedFile(format!(
                "norm channel {k} has min {} > max {}",
                row[0], row[1]
            )));
        }
        channels.push(ChannelRange { min: row[0], max: row[1] });
    }

    section(lines.expect("[regime]")?, "regime")?;
    let regime = FeatureRegime::from_tag_and_dim(lines.expect("regime tag")?, dims[0])?;

    section(lines.expect("[meta]")?, "meta")?;
    let seed: u64 = lines
        .expect("seed")?
        .strip_prefix("seed=")
        .and_then(|v| v.parse().ok())
        .ok_or_else(|| CoreError::MalformedFile("bad seed line".into()))?;
    let final_loss: f64 = lines
        .expect("final_loss")?
        .strip_prefix("final_loss=")
        .and_then(|v| v.parse().ok())
        .ok_or_else(|| CoreError::MalformedFile("bad final_loss line".into()))?;

    let mut layers = Vec::with_capacity(dims.len() - 1);
    for k in 0..dims.len() - 1 {
        let head = lines.expect("layer header")?;
        if head != format!("[layer {k}]") {
            return Err(CoreError::MalformedFile(format!("expected [layer {k}], got '{head}'")));
        }
        let (in_dim, out_dim) = (dims[k], dims[k + 1]);
        let mut weights = Vec::with_capacity(in_dim * out_dim);
        for o in 0..out_dim {
            weights.extend(parse_floats(
                lines.expect("weight row")?,
                in_dim,
                &format!("layer {k} row {o}"),
            )?);
        }
        let biases = parse_floats(lines.expect("bias row")?, out_dim, &format!("layer {k} biases"))?;
        layers.push(Layer { in_dim, out_dim, weights, biases, activation: activations[k] });
    }

    Ok(MlpModel {
        layers,
        norm: NormalizationSpec { channels },
        regime,
        meta: TrainMeta { seed, final_loss },
    })
}

pub fn load_model(path: &Path) -> Result<MlpModel> {
    let mut r = std::io::BufReader::new(std::fs::File::open(path)?);
    read_model(&mut r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mlp::model::DEFAULT_HIDDEN;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn model() -> MlpModel {
        let norm = NormalizationSpec {
            channels: (0..7)
                .map(|k| ChannelRange { min: -(k as f64) - 1.0, max: k as f64 + 2.0 })
                .collect(),
        };
        let mut m =
            MlpModel::new(&DEFAULT_HIDDEN, norm, FeatureRegime::SyntheticTransient, 42).unwrap();
        m.meta.final_loss = 3.25e-4;
        m
    }

    #[test]
    fn save_load_round_trip_is_bit_identical() {
        let original = model();
        let mut buf = Vec::new();
        write_model(&mut buf, &original, Some("seed=42")).unwrap();
        let restored = read_model(&mut buf.as_slice()).unwrap();
        assert_eq!(restored, original);

        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..100 {
            let x: Vec<f64> = (0..7).map(|_| rng.gen_range(-20.0..20.0)).collect();
            let a = original.predict_raw(&x).unwrap();
            let b = restored.predict_raw(&x).unwrap();
            assert!(a.to_bits() == b.to_bits(), "outputs differ: {a} vs {b}");
        }
    }

    #[test]
    fn truncated_file_is_malformed() {
        let mut buf = Vec::new();
        write_model(&mut buf, &model(), None).unwrap();
        let cut = buf.len() / 2;
        assert!(matches!(
            read_model(&mut &buf[..cut]),
            Err(CoreError::MalformedFile(_))
        ));
    }

    #[test]
    fn mismatched_dims_are_malformed() {
        let mut buf = Vec::new();
        write_model(&mut buf, &model(), None).unwrap();
        let text = String::from_utf8(buf).unwrap();
        // drop one weight row entirely
        let mangled: Vec<&str> = text.lines().collect();
        let row_idx = mangled.iter().position(|l| l.starts_with("[layer 0]")).unwrap() + 1;
        let mut cut = mangled.clone();
        cut.remove(row_idx);
        let rejoined = cut.join("\n");
        assert!(matches!(
            read_model(&mut rejoined.as_bytes()),
            Err(CoreError::MalformedFile(_))
        ));
    }

    #[test]
    fn future_version_is_rejected() {
        let text = "vsr-mlp v2\n[arch]\ndims=3,1\nactivations=linear\n";
        assert!(matches!(
            read_model(&mut text.as_bytes()),
            Err(CoreError::VersionMismatch(_))
        ));
    }
}
