//! From-scratch deep feedforward network: forward pass, backpropagation
//! training, finite-difference verification and text persistence.

mod gradcheck;
mod io;
mod model;
mod train;

pub use gradcheck::gradient_check;
pub use io::{load_model, read_model, save_model, write_model};
pub use model::{Activation, Layer, MlpModel, TrainMeta, DEFAULT_HIDDEN};
pub use train::{
    batch_gradient, mse, train, EpochStats, Gradients, OptimizerKind, StopReason, TrainConfig,
    TrainHistory, Workspace,
};
