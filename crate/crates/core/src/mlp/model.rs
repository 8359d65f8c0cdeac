use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{CoreError, Result};
use crate::features::{FeatureRegime, NormalizationSpec};

/// Layer activation. `TanhSigmoid` is the symmetric sigmoid tanh(x),
/// `Linear` is identity (used for the output layer).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Activation {
    TanhSigmoid,
    Linear,
}

impl Activation {
    #[inline]
    pub fn apply(self, x: f64) -> f64 {
        match self {
            Activation::TanhSigmoid => x.tanh(),
            Activation::Linear => x,
        }
    }

    /// Derivative expressed through the activation output.
    #[inline]
    pub fn derivative_from_output(self, y: f64) -> f64 {
        match self {
            Activation::TanhSigmoid => 1.0 - y * y,
            Activation::Linear => 1.0,
        }
    }

    pub fn tag(self) -> &'static str {
        match self {
            Activation::TanhSigmoid => "tanh-sigmoid",
            Activation::Linear => "linear",
        }
    }

    pub fn from_tag(tag: &str) -> Result<Activation> {
        match tag {
            "tanh-sigmoid" => Ok(Activation::TanhSigmoid),
            "linear" => Ok(Activation::Linear),
            other => Err(CoreError::MalformedFile(format!("unknown activation '{other}'"))),
        }
    }
}

/// Dense layer, weights row-major `out_dim × in_dim`.
#[derive(Debug, Clone, PartialEq)]
pub struct Layer {
    pub in_dim: usize,
    pub out_dim: usize,
    pub weights: Vec<f64>,
    pub biases: Vec<f64>,
    pub activation: Activation,
}

impl Layer {
    fn zeros(in_dim: usize, out_dim: usize, activation: Activation) -> Layer {
        Layer {
            in_dim,
            out_dim,
            weights: vec![0.0; in_dim * out_dim],
            biases: vec![0.0; out_dim],
            activation,
        }
    }

    /// Writes `activation(W x + b)` into `out`.
    #[inline]
    pub fn forward_into(&self, x: &[f64], out: &mut [f64]) {
        debug_assert_eq!(x.len(), self.in_dim);
        debug_assert_eq!(out.len(), self.out_dim);
        for o in 0..self.out_dim {
            let row = &self.weights[o * self.in_dim..(o + 1) * self.in_dim];
            let mut acc = self.biases[o];
            for (w, xi) in row.iter().zip(x) {
                acc += w * xi;
            }
            out[o] = self.activation.apply(acc);
        }
    }
}

/// Training provenance kept with the model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrainMeta {
    pub seed: u64,
    pub final_loss: f64,
}

/// Feedforward network with an embedded normalization spec and feature
/// regime; scalar linear output.
#[derive(Debug, Clone, PartialEq)]
pub struct MlpModel {
    pub layers: Vec<Layer>,
    pub norm: NormalizationSpec,
    pub regime: FeatureRegime,
    pub meta: TrainMeta,
}

/// The default stack: ten hidden layers of sixteen neurons.
pub const DEFAULT_HIDDEN: [usize; 10] = [16; 10];

impl MlpModel {
    /// Builds a network with seeded uniform ±sqrt(6/(fan_in+fan_out))
    /// weights and zero biases. Hidden layers are tanh, the scalar
    /// output is linear.
    pub fn new(
        hidden: &[usize],
        norm: NormalizationSpec,
        regime: FeatureRegime,
        seed: u64,
    ) -> Result<MlpModel> {
        let input_dim = regime.dim();
        if norm.dim() != input_dim {
            return Err(CoreError::DimensionMismatch { expected: input_dim, got: norm.dim() });
        }
        if hidden.iter().any(|h| *h == 0) {
            return Err(CoreError::InvalidConfig("zero-width hidden layer".into()));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut layers = Vec::with_capacity(hidden.len() + 1);
        let mut in_dim = input_dim;
        for &h in hidden {
            layers.push(Layer::glorot(&mut rng, in_dim, h, Activation::TanhSigmoid));
            in_dim = h;
        }
        layers.push(Layer::glorot(&mut rng, in_dim, 1, Activation::Linear));
        Ok(MlpModel {
            layers,
            norm,
            regime,
            meta: TrainMeta { seed, final_loss: f64::NAN },
        })
    }

    pub fn input_dim(&self) -> usize {
        self.layers.first().map_or(0, |l| l.in_dim)
    }

    pub fn param_count(&self) -> usize {
        self.layers.iter().map(|l| l.out_dim * l.in_dim + l.out_dim).sum()
    }

    /// Scalar output for an already-normalized input.
    pub fn forward(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.input_dim() {
            return Err(CoreError::DimensionMismatch { expected: self.input_dim(), got: x.len() });
        }
        let mut cur = x.to_vec();
        let mut next = Vec::new();
        for layer in &self.layers {
            next.resize(layer.out_dim, 0.0);
            layer.forward_into(&cur, &mut next);
            std::mem::swap(&mut cur, &mut next);
        }
        Ok(cur[0])
    }

    /// Normalizes a raw feature vector through the embedded spec, then
    /// evaluates the network.
    pub fn predict_raw(&self, raw: &[f64]) -> Result<f64> {
        if raw.len() != self.input_dim() {
            return Err(CoreError::DimensionMismatch { expected: self.input_dim(), got: raw.len() });
        }
        let x = self.norm.apply(raw);
        self.forward(&x)
    }
}

impl Layer {
    fn glorot(rng: &mut ChaCha8Rng, in_dim: usize, out_dim: usize, activation: Activation) -> Layer {
        let mut layer = Layer::zeros(in_dim, out_dim, activation);
        let bound = (6.0 / (in_dim + out_dim) as f64).sqrt();
        for w in &mut layer.weights {
            *w = rng.gen_range(-bound..bound);
        }
        layer
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::features::ChannelRange;

    fn unit_norm(dim: usize) -> NormalizationSpec {
        NormalizationSpec {
            channels: vec![ChannelRange { min: -1.0, max: 1.0 }; dim],
        }
    }

    #[test]
    fn zero_network_outputs_zero() {
        let mut model =
            MlpModel::new(&[4, 4], unit_norm(3), FeatureRegime::Transient, 0).unwrap();
        for layer in &mut model.layers {
            layer.weights.fill(0.0);
            layer.biases.fill(0.0);
        }
        assert_eq!(model.forward(&[0.3, -0.7, 0.1]).unwrap(), 0.0);
    }

    #[test]
    fn single_hidden_neuron_closed_form() {
        let mut model = MlpModel::new(&[1], unit_norm(3), FeatureRegime::Transient, 0).unwrap();
        let (b, w, c) = (0.4, 1.7, -0.3);
        model.layers[0].weights.fill(0.0);
        model.layers[0].biases[0] = b;
        model.layers[1].weights[0] = w;
        model.layers[1].biases[0] = c;
        let expected = w * b.tanh() + c;
        for x in [[0.0, 0.0, 0.0], [1.0, -1.0, 0.5]] {
            assert!((model.forward(&x).unwrap() - expected).abs() < 1e-15);
        }
    }

    #[test]
    fn forward_is_deterministic() {
        let model = MlpModel::new(&DEFAULT_HIDDEN, unit_norm(7), FeatureRegime::SyntheticTransient, 5)
            .unwrap();
        let x = [0.1, -0.2, 0.3, 0.4, -0.5, 0.6, -0.7];
        assert_eq!(model.forward(&x).unwrap(), model.forward(&x).unwrap());
    }

    #[test]
    fn default_architecture_conformance() {
        let model = MlpModel::new(&DEFAULT_HIDDEN, unit_norm(7), FeatureRegime::SyntheticTransient, 0)
            .unwrap();
        assert_eq!(model.layers.len(), 11);
        assert!(model.layers[..10]
            .iter()
            .all(|l| l.out_dim == 16 && l.activation == Activation::TanhSigmoid));
        assert_eq!(model.layers[10].out_dim, 1);
        assert_eq!(model.layers[10].activation, Activation::Linear);
        // closed-form parameter count for input dim 7
        let expected = (7 * 16 + 16) + 9 * (16 * 16 + 16) + (16 + 1);
        assert_eq!(model.param_count(), expected);
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let model = MlpModel::new(&[4], unit_norm(3), FeatureRegime::Transient, 0).unwrap();
        assert!(matches!(
            model.forward(&[1.0, 2.0]),
            Err(CoreError::DimensionMismatch { expected: 3, got: 2 })
        ));
    }
}
