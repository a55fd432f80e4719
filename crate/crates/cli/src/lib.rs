//! Experiment front end: declarative configs, figure presets, and
//! CSV/SVG emission for the `supernyquist` binary.

pub mod config;
mod error;
pub mod experiments;
pub mod output;
pub mod svg;

pub use config::{ExperimentConfig, Preset};
pub use error::{CliError, Result};
pub use experiments::{run_experiment, run_preset};
