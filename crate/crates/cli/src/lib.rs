//! Batch runner: reads a JSON analysis config, analyses every distribution
//! in it and writes one deterministic JSON report plus optional trace CSVs.

pub mod config;
pub mod export;
pub mod run;

use std::io;
use std::path::PathBuf;

use thiserror::Error;

pub use config::{AnalysisConfig, DistributionSpec, NamedDistribution};
pub use export::{export_trace, format_g17};
pub use run::{run_analysis, RunSummary};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid configuration at `{field}`: {message}")]
    ConfigInvalid { field: String, message: String },
    #[error("cannot {action} {}: {source}", path.display())]
    Io {
        action: &'static str,
        path: PathBuf,
        #[source]
        source: io::Error,
    },
}

impl CliError {
    pub(crate) fn config(field: impl Into<String>, message: impl Into<String>) -> Self {
        CliError::ConfigInvalid {
            field: field.into(),
            message: message.into(),
        }
    }

    /// Process exit status: 2 for configuration errors, 3 for I/O errors.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::ConfigInvalid { .. } => 2,
            CliError::Io { .. } => 3,
        }
    }
}
