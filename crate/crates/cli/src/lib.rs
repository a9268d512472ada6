//! Configuration, file formats, reports and the experiment runner behind the
//! `qtoeplitz` command.

pub mod config;
pub mod experiment;
pub mod formats;
pub mod report;

pub use config::{ExperimentConfig, ExperimentKind, Expectation};
pub use experiment::{run_batch, run_experiment, RunError};
pub use report::{emit_report, Batch, Format, Report, Status};

/// An invalid configuration or command line (exit code 2).
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("{0}")]
pub struct ConfigError(pub String);

impl ConfigError {
    pub fn new(msg: impl Into<String>) -> Self {
        ConfigError(msg.into())
    }
}
