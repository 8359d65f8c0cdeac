//! Simulation and diagnosis toolkit for IGBT open-circuit faults in a
//! three-phase PWM voltage-source rectifier.
//!
//! The crate is organized around the offline-to-online pipeline:
//!
//! - [`sim`] — fixed-step switched-circuit simulator with per-switch
//!   open-circuit fault injection and a PR-controlled DC link.
//! - [`features`] — turns traces into labeled classifier datasets
//!   (min-max normalization, transient and synthetic-transient features,
//!   observability-based labeling).
//! - [`mlp`] — a from-scratch deep feedforward network: forward pass,
//!   backpropagation, mini-batch training, finite-difference checks and
//!   a text model format.
//! - [`diagnosis`] — per-sample decision rule, 200-result window
//!   aggregation, debounced fault localization and confusion-matrix
//!   evaluation.
//!
//! Heavy loops (campaign simulation, batch gradients, bulk evaluation)
//! run through [`exec::ExecMode`]; the `parallel` feature (on by
//! default) backs them with rayon, and without it everything falls back
//! to sequential execution with identical results.

pub mod diagnosis;
pub mod error;
pub mod exec;
pub mod features;
pub mod mlp;
pub mod sim;

pub use error::CoreError;
pub use exec::ExecMode;
