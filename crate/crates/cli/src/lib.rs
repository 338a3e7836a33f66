//! Staged summarization pipeline: clean, extract, summarize, evaluate,
//! report, over a resumable run directory.

pub mod config;
pub mod corpus;
pub mod error;
pub mod manifest;
pub mod providers;
pub mod report;
pub mod stages;

pub use config::{PipelineConfig, Recipe};
pub use error::PipelineError;
pub use manifest::RunManifest;
pub use stages::RunContext;
