use thiserror::Error;
use vpcal_core::{GeometryError, LabelError, MetricsError, SynthError};

/// Process-level failure. Each variant maps to a stable exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("data error: {0}")]
    Data(String),
    #[error("geometry error: {0}")]
    Geometry(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Data(_) => 3,
            CliError::Geometry(_) => 4,
        }
    }

    pub(crate) fn io(path: &std::path::Path, e: impl std::fmt::Display) -> Self {
        CliError::Data(format!("{}: {e}", path.display()))
    }
}

impl From<GeometryError> for CliError {
    fn from(e: GeometryError) -> Self {
        CliError::Geometry(e.to_string())
    }
}

impl From<SynthError> for CliError {
    fn from(e: SynthError) -> Self {
        match e {
            SynthError::Geometry(g) => g.into(),
            SynthError::InvalidRange(_) => CliError::Config(e.to_string()),
            other => CliError::Data(other.to_string()),
        }
    }
}

impl From<LabelError> for CliError {
    fn from(e: LabelError) -> Self {
        match e {
            LabelError::Geometry(g) => g.into(),
            LabelError::NoCandidates | LabelError::InsufficientStructure { .. } => {
                CliError::Geometry(e.to_string())
            }
            LabelError::InvalidThresholds(_) => CliError::Config(e.to_string()),
            other => CliError::Data(other.to_string()),
        }
    }
}

impl From<MetricsError> for CliError {
    fn from(e: MetricsError) -> Self {
        match e {
            MetricsError::Geometry(g) => g.into(),
            MetricsError::InvalidArgument(_) => CliError::Config(e.to_string()),
            other => CliError::Data(other.to_string()),
        }
    }
}
