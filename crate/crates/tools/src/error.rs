use thiserror::Error;

/// Failures of a CLI run. Each maps to one exit status.
#[derive(Debug, Error)]
pub enum ToolError {
    #[error("ConfigError: {path}: {message}")]
    Config { path: String, message: String },
    #[error("IoFailure: {0}")]
    Io(String),
    /// The run completed and wrote its report, but a hypothesis failed.
    #[error("HypothesisViolated: {0}")]
    Hypothesis(String),
    #[error("{0}")]
    Core(#[from] ndde_core::Error),
}

impl ToolError {
    /// 0 success, 1 IO, 2 hypothesis violation, 3 solver failure, 4 config.
    pub fn exit_code(&self) -> i32 {
        match self {
            ToolError::Io(_) => 1,
            ToolError::Hypothesis(_) => 2,
            ToolError::Config { .. } => 4,
            ToolError::Core(e) => match e.kind() {
                "HypothesisViolated" | "DivisorBelowFloor" | "OutOfRange" => 2,
                "BlowUp" | "NewtonDivergence" | "ContractionFailed" | "ShootingDivergence" | "NotBracketed"
                | "VerificationMismatch" | "ContourThroughRoot" => 3,
                _ => 4,
            },
        }
    }

    /// Error variant name, as printed first in every message.
    pub fn kind(&self) -> &'static str {
        match self {
            ToolError::Config { .. } => "ConfigError",
            ToolError::Io(_) => "IoFailure",
            ToolError::Hypothesis(_) => "HypothesisViolated",
            ToolError::Core(e) => e.kind(),
        }
    }
}

impl From<std::io::Error> for ToolError {
    fn from(e: std::io::Error) -> Self {
        ToolError::Io(e.to_string())
    }
}

impl From<csv::Error> for ToolError {
    fn from(e: csv::Error) -> Self {
        ToolError::Io(e.to_string())
    }
}
