//! Pipeline error taxonomy, mapped onto process exit codes.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("stage `{stage}` has not produced its artifacts yet: {hint}")]
    MissingStage { stage: &'static str, hint: String },
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("provider failure for every document: {0}")]
    AllFailed(String),
    #[error("{} of {} documents failed: {}", failed.len(), total, failed.join(", "))]
    Partial { failed: Vec<String>, total: usize },
}

impl PipelineError {
    /// 0 success, 2 config error, 3 provider error, 4 partial failure.
    pub fn exit_code(&self) -> u8 {
        match self {
            PipelineError::Config(_)
            | PipelineError::MissingStage { .. }
            | PipelineError::Io(_) => 2,
            PipelineError::AllFailed(_) => 3,
            PipelineError::Partial { .. } => 4,
        }
    }
}
