//! Experiment plumbing: configuration files, multi-seed sweeps, canned figure
//! setups and CSV output.

use std::path::PathBuf;

use thiserror::Error;

use crate::controller::ControllerError;

pub mod config;
pub mod csv;
pub mod repro;
pub mod sweep;

pub use config::{parse_config, ExperimentConfig, SweepParameter, SweepSpec};
pub use csv::{emit_sweep_csv, emit_trace_csv, format_sweep_csv, format_trace_csv};
pub use repro::{repro_config, run_repro, Figure};
pub use sweep::{baseline_feasibility_fraction, run_seeds, run_sweep, EpisodeSummary, SweepRow, SweepTable};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("config key `{key}`: {message}")]
    Config { key: String, message: String },
    #[error("config: {0}")]
    Syntax(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("episode failed: {0}")]
    Episode(#[from] ControllerError),
    #[error("{failed} of {total} episodes failed")]
    Incomplete { failed: usize, total: usize },
}

impl HarnessError {
    pub(crate) fn config(key: impl Into<String>, message: impl Into<String>) -> Self {
        Self::Config {
            key: key.into(),
            message: message.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Self::Io {
            path: path.into(),
            source,
        }
    }

    /// Whether the error comes from the configuration rather than the run.
    pub fn is_config_error(&self) -> bool {
        matches!(self, Self::Config { .. } | Self::Syntax(_))
    }
}
