//! Command-line and streaming front end over the simulation, feature,
//! network and diagnosis core: scripted campaigns, framed telemetry
//! over TCP with real-time pacing, online windowed localization and
//! SVG reports.

pub mod campaign;
pub mod commands;
pub mod diagnose;
pub mod error;
pub mod frame;
pub mod meta;
pub mod plot;
pub mod stream;

pub use error::{FdxError, Result};
