//! Hybrid long-document summarization.
//!
//! The pipeline cleans raw extracted text into continuous prose, selects the
//! most central sentences coarse-to-fine over sentence embeddings, rewrites
//! or condenses the selection through a chat-completion provider in
//! word-bounded chunks, and scores the results with reference-based and
//! reference-free metrics. Deterministic mock providers make every stage
//! runnable and testable offline.

pub mod abstractor;
pub mod embed;
pub mod extract;
pub mod ingest;
pub mod metrics;
pub mod segment;

pub use abstractor::{ChatClient, Exchange, FinalSummary, PromptTemplate, Style, Task};
pub use embed::{cosine, mean_vector, EmbeddingVector};
pub use extract::{ExtractionConfig, ExtractiveSummary, SemanticBlock};
pub use ingest::{Category, CleanConfig, CleanDocument, RawText};
pub use metrics::{AggregateRow, MetricReport, RougeScore, SystemKind};
pub use segment::{Segmenter, SentenceRecord};
