//! Mini-batch gradient-descent training with squared-error loss on the
//! scalar label.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{CoreError, Result};
use crate::exec::{map_slice, ExecMode};
use crate::features::{fit_normalization, FeatureRegime, LabeledSample};
use crate::mlp::model::MlpModel;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OptimizerKind {
    /// Gradient descent with momentum 0.9.
    #[default]
    Momentum,
    /// Adaptive-moment estimation.
    Adam,
}

#[derive(Debug, Clone)]
pub struct TrainConfig {
    pub learning_rate: f64,
    /// Training stops once the epoch-mean MSE reaches this.
    pub loss_goal: f64,
    pub max_epochs: usize,
    pub batch_size: usize,
    pub seed: u64,
    pub optimizer: OptimizerKind,
    /// Early-stop patience on validation MSE, in epochs.
    pub patience: usize,
    pub execution: ExecMode,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            learning_rate: 0.01,
            loss_goal: 1e-4,
            max_epochs: 500,
            batch_size: 256,
            seed: 0,
            optimizer: OptimizerKind::Momentum,
            patience: 50,
            execution: ExecMode::Parallel,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.learning_rate > 0.0) {
            return Err(CoreError::InvalidConfig("learning_rate must be > 0".into()));
        }
        if !(self.loss_goal > 0.0) {
            return Err(CoreError::InvalidConfig("loss_goal must be > 0".into()));
        }
        if self.batch_size == 0 {
            return Err(CoreError::InvalidConfig("batch_size must be >= 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopReason {
    GoalReached,
    MaxEpochs,
    EarlyStop,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EpochStats {
    pub epoch: usize,
    pub train_mse: f64,
    pub val_mse: f64,
}

#[derive(Debug, Clone)]
pub struct TrainHistory {
    pub epochs: Vec<EpochStats>,
    pub stop: StopReason,
}

/// Per-parameter gradient buffers, mirroring the layer shapes.
#[derive(Debug, Clone)]
pub struct Gradients {
    pub weights: Vec<Vec<f64>>,
    pub biases: Vec<Vec<f64>>,
}

impl Gradients {
    pub fn zeros_like(model: &MlpModel) -> Gradients {
        Gradients {
            weights: model.layers.iter().map(|l| vec![0.0; l.weights.len()]).collect(),
            biases: model.layers.iter().map(|l| vec![0.0; l.biases.len()]).collect(),
        }
    }

    fn add(&mut self, other: &Gradients) {
        for (a, b) in self.weights.iter_mut().zip(&other.weights) {
            for (x, y) in a.iter_mut().zip(b) {
                *x += y;
            }
        }
        for (a, b) in self.biases.iter_mut().zip(&other.biases) {
            for (x, y) in a.iter_mut().zip(b) {
                *x += y;
            }
        }
    }

    fn scale(&mut self, s: f64) {
        for a in self.weights.iter_mut().chain(self.biases.iter_mut()) {
            for x in a.iter_mut() {
                *x *= s;
            }
        }
    }
}

/// Reusable per-worker forward/backward buffers.
pub struct Workspace {
    /// Post-activation outputs per layer.
    activations: Vec<Vec<f64>>,
    /// dL/d(pre-activation) per layer, reused back to front.
    deltas: Vec<Vec<f64>>,
}

impl Workspace {
    pub fn for_model(model: &MlpModel) -> Workspace {
        Workspace {
            activations: model.layers.iter().map(|l| vec![0.0; l.out_dim]).collect(),
            deltas: model.layers.iter().map(|l| vec![0.0; l.out_dim]).collect(),
        }
    }
}

/// Forward pass caching activations; returns the scalar output.
fn forward_cached(model: &MlpModel, x: &[f64], ws: &mut Workspace) -> f64 {
    for (idx, layer) in model.layers.iter().enumerate() {
        let (head, tail) = ws.activations.split_at_mut(idx);
        let input: &[f64] = if idx == 0 { x } else { &head[idx - 1] };
        layer.forward_into(input, &mut tail[0]);
    }
    ws.activations.last().unwrap()[0]
}

/// Accumulates d((f(x)−y)²)/dθ into `grads`; returns the squared error.
fn backward_accumulate(
    model: &MlpModel,
    x: &[f64],
    y: f64,
    ws: &mut Workspace,
    grads: &mut Gradients,
) -> f64 {
    let out = forward_cached(model, x, ws);
    let err = out - y;

    let last = model.layers.len() - 1;
    ws.deltas[last][0] =
        2.0 * err * model.layers[last].activation.derivative_from_output(out);

    for idx in (0..model.layers.len()).rev() {
        let layer = &model.layers[idx];
        // split so the current delta is readable while writing the previous
        let (head, tail) = ws.deltas.split_at_mut(idx);
        let delta = &tail[0];

        let input: &[f64] = if idx == 0 { x } else { &ws.activations[idx - 1] };
        let gw = &mut grads.weights[idx];
        let gb = &mut grads.biases[idx];
        for o in 0..layer.out_dim {
            let d = delta[o];
            gb[o] += d;
            let row = &mut gw[o * layer.in_dim..(o + 1) * layer.in_dim];
            for (g, xi) in row.iter_mut().zip(input) {
                *g += d * xi;
            }
        }

        if idx > 0 {
            let prev_out = &ws.activations[idx - 1];
            let prev_act = model.layers[idx - 1].activation;
            let prev_delta = &mut head[idx - 1];
            for i in 0..layer.in_dim {
                let mut acc = 0.0;
                for o in 0..layer.out_dim {
                    acc += delta[o] * layer.weights[o * layer.in_dim + i];
                }
                prev_delta[i] = acc * prev_act.derivative_from_output(prev_out[i]);
            }
        }
    }
    err * err
}

/// Gradients and squared-error sum over one sample subset, accumulated
/// in index order.
fn chunk_gradient(
    model: &MlpModel,
    inputs: &[Vec<f64>],
    targets: &[f64],
    idx: &[usize],
) -> (Gradients, f64) {
    let mut grads = Gradients::zeros_like(model);
    let mut ws = Workspace::for_model(model);
    let mut loss_sum = 0.0;
    for &i in idx {
        loss_sum += backward_accumulate(model, &inputs[i], targets[i], &mut ws, &mut grads);
    }
    (grads, loss_sum)
}

const GRAD_CHUNK: usize = 64;

/// Mean gradient over the batch. Work is split into fixed chunks whose
/// partial sums are reduced in chunk order, so sequential and parallel
/// execution produce bit-identical results.
pub fn batch_gradient(
    model: &MlpModel,
    inputs: &[Vec<f64>],
    targets: &[f64],
    batch: &[usize],
    mode: ExecMode,
) -> (Gradients, f64) {
    let chunks: Vec<&[usize]> = batch.chunks(GRAD_CHUNK).collect();
    let partials = map_slice(mode, &chunks, |chunk| {
        chunk_gradient(model, inputs, targets, chunk)
    });
    let mut total = Gradients::zeros_like(model);
    let mut loss_sum = 0.0;
    for (g, l) in &partials {
        total.add(g);
        loss_sum += l;
    }
    let inv = 1.0 / batch.len() as f64;
    total.scale(inv);
    (total, loss_sum * inv)
}

enum OptimizerState {
    Momentum { velocity: Gradients },
    Adam { m: Gradients, v: Gradients, t: u64 },
}

impl OptimizerState {
    fn new(kind: OptimizerKind, model: &MlpModel) -> OptimizerState {
        match kind {
            OptimizerKind::Momentum => {
                OptimizerState::Momentum { velocity: Gradients::zeros_like(model) }
            }
            OptimizerKind::Adam => OptimizerState::Adam {
                m: Gradients::zeros_like(model),
                v: Gradients::zeros_like(model),
                t: 0,
            },
        }
    }

    fn apply(&mut self, model: &mut MlpModel, grads: &Gradients, lr: f64) {
        match self {
            OptimizerState::Momentum { velocity } => {
                const MU: f64 = 0.9;
                for (idx, layer) in model.layers.iter_mut().enumerate() {
                    step_momentum(&mut velocity.weights[idx], &mut layer.weights, &grads.weights[idx], lr, MU);
                    step_momentum(&mut velocity.biases[idx], &mut layer.biases, &grads.biases[idx], lr, MU);
                }
            }
            OptimizerState::Adam { m, v, t } => {
                const B1: f64 = 0.9;
                const B2: f64 = 0.999;
                const EPS: f64 = 1e-8;
                *t += 1;
                let bc1 = 1.0 - B1.powi(*t as i32);
                let bc2 = 1.0 - B2.powi(*t as i32);
                for (idx, layer) in model.layers.iter_mut().enumerate() {
                    step_adam(&mut m.weights[idx], &mut v.weights[idx], &mut layer.weights, &grads.weights[idx], lr, bc1, bc2, B1, B2, EPS);
                    step_adam(&mut m.biases[idx], &mut v.biases[idx], &mut layer.biases, &grads.biases[idx], lr, bc1, bc2, B1, B2, EPS);
                }
            }
        }
    }
}

fn step_momentum(vel: &mut [f64], params: &mut [f64], grads: &[f64], lr: f64, mu: f64) {
    for ((v, p), g) in vel.iter_mut().zip(params).zip(grads) {
        *v = mu * *v - lr * g;
        *p += *v;
    }
}

#[allow(clippy::too_many_arguments)]
fn step_adam(
    m: &mut [f64],
    v: &mut [f64],
    params: &mut [f64],
    grads: &[f64],
    lr: f64,
    bc1: f64,
    bc2: f64,
    b1: f64,
    b2: f64,
    eps: f64,
) {
    for (((m, v), p), g) in m.iter_mut().zip(v.iter_mut()).zip(params).zip(grads) {
        *m = b1 * *m + (1.0 - b1) * g;
        *v = b2 * *v + (1.0 - b2) * g * g;
        let m_hat = *m / bc1;
        let v_hat = *v / bc2;
        *p -= lr * m_hat / (v_hat.sqrt() + eps);
    }
}

/// Trains a fresh network on the samples. Normalization is fitted on
/// the training split, frozen into the model and applied to both
/// splits. Labels are used directly as scalar regression targets.
pub fn train(
    train_set: &[LabeledSample],
    val_set: &[LabeledSample],
    regime: FeatureRegime,
    hidden: &[usize],
    config: &TrainConfig,
) -> Result<(MlpModel, TrainHistory)> {
    config.validate()?;
    if train_set.is_empty() {
        return Err(CoreError::EmptyDataset);
    }
    let feature_rows: Vec<&[f64]> = train_set.iter().map(|s| s.features.as_slice()).collect();
    let norm = fit_normalization(&feature_rows)?;

    let mut model = MlpModel::new(hidden, norm, regime, config.seed)?;
    let normalize = |set: &[LabeledSample]| -> (Vec<Vec<f64>>, Vec<f64>) {
        let xs = set.iter().map(|s| model.norm.apply(&s.features)).collect();
        let ys = set.iter().map(|s| s.label.value() as f64).collect();
        (xs, ys)
    };
    let (train_x, train_y) = normalize(train_set);
    let (val_x, val_y) = normalize(val_set);

    let mut optimizer = OptimizerState::new(config.optimizer, &model);
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed ^ 0x5EED_BA7C_4E55_0001);
    let mut order: Vec<usize> = (0..train_x.len()).collect();

    let mut history = Vec::new();
    let mut best_val = f64::INFINITY;
    let mut since_best = 0usize;
    let mut stop = StopReason::MaxEpochs;

    for epoch in 1..=config.max_epochs {
        order.shuffle(&mut rng);
        let mut loss_accum = 0.0;
        let mut batches = 0usize;
        for batch in order.chunks(config.batch_size) {
            let (grads, batch_loss) =
                batch_gradient(&model, &train_x, &train_y, batch, config.execution);
            if !batch_loss.is_finite() {
                return Err(CoreError::Diverged { epoch });
            }
            optimizer.apply(&mut model, &grads, config.learning_rate);
            loss_accum += batch_loss;
            batches += 1;
        }
        let train_mse = loss_accum / batches as f64;
        let val_mse = mse(&model, &val_x, &val_y, config.execution);
        history.push(EpochStats { epoch, train_mse, val_mse });

        if train_mse <= config.loss_goal {
            stop = StopReason::GoalReached;
            break;
        }
        if !val_x.is_empty() {
            if val_mse < best_val {
                best_val = val_mse;
                since_best = 0;
            } else {
                since_best += 1;
                if since_best >= config.patience {
                    stop = StopReason::EarlyStop;
                    break;
                }
            }
        }
    }

    model.meta.seed = config.seed;
    model.meta.final_loss = history.last().map_or(f64::NAN, |e| e.train_mse);
    Ok((model, TrainHistory { epochs: history, stop }))
}

/// Mean squared error over already-normalized inputs.
pub fn mse(model: &MlpModel, xs: &[Vec<f64>], ys: &[f64], mode: ExecMode) -> f64 {
    if xs.is_empty() {
        return f64::NAN;
    }
    let idx: Vec<usize> = (0..xs.len()).collect();
    let chunks: Vec<&[usize]> = idx.chunks(1024).collect();
    let partial = map_slice(mode, &chunks, |chunk| {
        let mut ws = Workspace::for_model(model);
        let mut sum = 0.0;
        for &i in *chunk {
            let e = forward_cached(model, &xs[i], &mut ws) - ys[i];
            sum += e * e;
        }
        sum
    });
    partial.iter().sum::<f64>() / xs.len() as f64
}
