//! Finite-difference verification of the backpropagated gradients.

use crate::mlp::model::MlpModel;
use crate::mlp::train::{batch_gradient, Gradients};

fn loss_of(model: &MlpModel, x: &[f64], y: f64) -> f64 {
    let e = model.forward(x).expect("dims checked by caller") - y;
    e * e
}

/// Compares analytic ∂loss/∂θ against central differences over every
/// parameter and returns the worst relative error
/// |g_bp − g_fd| / max(|g_bp|, |g_fd|, 1e-12).
pub fn gradient_check(model: &MlpModel, x: &[f64], y: f64, epsilon: f64) -> f64 {
    let inputs = vec![x.to_vec()];
    let targets = vec![y];
    let (analytic, _) =
        batch_gradient(model, &inputs, &targets, &[0], crate::exec::ExecMode::Sequential);

    let mut worst = 0.0f64;
    let mut probe = model.clone();
    let mut check = |get: &dyn Fn(&Gradients) -> f64,
                     set: &mut dyn FnMut(&mut MlpModel, f64),
                     base: f64| {
        set(&mut probe, base + epsilon);
        let plus = loss_of(&probe, x, y);
        set(&mut probe, base - epsilon);
        let minus = loss_of(&probe, x, y);
        set(&mut probe, base);
        let fd = (plus - minus) / (2.0 * epsilon);
        let bp = get(&analytic);
        let rel = (bp - fd).abs() / bp.abs().max(fd.abs()).max(1e-12);
        worst = worst.max(rel);
    };

    for l in 0..model.layers.len() {
        for wi in 0..model.layers[l].weights.len() {
            let base = model.layers[l].weights[wi];
            check(
                &|g: &Gradients| g.weights[l][wi],
                &mut |m: &mut MlpModel, v: f64| m.layers[l].weights[wi] = v,
                base,
            );
        }
        for bi in 0..model.layers[l].biases.len() {
            let base = model.layers[l].biases[bi];
            check(
                &|g: &Gradients| g.biases[l][bi],
                &mut |m: &mut MlpModel, v: f64| m.layers[l].biases[bi] = v,
                base,
            );
        }
    }
    worst
}
