//! Embedding providers and vector helpers.
//!
//! Three provider contracts back the pipeline: sentence embeddings for
//! extraction, per-token contextual embeddings for BERTScore/ESTIME, and
//! masked-token prediction for BLANC. Deterministic offline mocks implement
//! all three; a remote adapter implements the sentence contract over an
//! embeddings HTTP API.

mod mock;
mod remote;

pub use mock::{MockMaskedPredictor, MockSentenceEmbedder, MockTokenEmbedder, UNKNOWN_TOKEN};
pub use remote::{RemoteSentenceEmbedder, API_BASE_ENV, API_KEY_ENV};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// A fixed-length vector of finite reals produced by an embedding provider.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmbeddingVector(Vec<f64>);

impl EmbeddingVector {
    /// Panics if any component is not finite.
    pub fn new(values: Vec<f64>) -> Self {
        assert!(
            values.iter().all(|v| v.is_finite()),
            "embedding components must be finite"
        );
        Self(values)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    /// Component-wise scaling, used to check scale invariance of selection.
    pub fn scaled(&self, factor: f64) -> Self {
        Self::new(self.0.iter().map(|v| v * factor).collect())
    }
}

#[derive(Debug, Error)]
pub enum EmbedError {
    /// Retryable provider failure; `index` is the offset of the first text in
    /// the failed batch.
    #[error("embedding batch starting at input {index} failed: {message}")]
    Batch { index: usize, message: String },
    #[error("provider returned {got} vectors for {expected} inputs")]
    Arity { expected: usize, got: usize },
    #[error("malformed provider response: {0}")]
    Malformed(String),
    #[error("provider configuration: {0}")]
    Config(String),
}

/// Sentence-level embedding provider. Same text must map to the same vector
/// within one session, and every vector must share one dimension.
pub trait SentenceEmbedder: Sync {
    fn name(&self) -> &str;
    fn embed_batch(&self, texts: &[String]) -> Result<Vec<EmbeddingVector>, EmbedError>;
}

/// Per-token contextual embedding provider: exactly one vector per input
/// token, in order.
pub trait TokenEmbedder: Sync {
    fn name(&self) -> &str;
    fn embed_tokens(&self, tokens: &[String]) -> Result<Vec<EmbeddingVector>, EmbedError>;
}

/// Masked-token prediction provider. The passage is handed over unmasked
/// together with the position to treat as hidden; adapters for real models
/// must mask that position before querying, while the offline mock uses the
/// hidden token to emulate a model that answers correctly exactly when the
/// token also occurs in `context`.
pub trait MaskedPredictor: Sync {
    fn name(&self) -> &str;
    fn predict_masked(
        &self,
        context: &str,
        passage: &[String],
        masked_pos: usize,
    ) -> Result<String, EmbedError>;
}

/// Cosine similarity. Zero vectors are degenerate input; their similarity is
/// defined as 0 and logged.
pub fn cosine(a: &EmbeddingVector, b: &EmbeddingVector) -> f64 {
    assert_eq!(a.dim(), b.dim(), "cosine requires equal dimensions");
    let mut dot = 0.0;
    let mut na = 0.0;
    let mut nb = 0.0;
    for (x, y) in a.0.iter().zip(&b.0) {
        dot += x * y;
        na += x * x;
        nb += y * y;
    }
    if na == 0.0 || nb == 0.0 {
        log::warn!("cosine of a zero vector; returning 0");
        return 0.0;
    }
    dot / (na.sqrt() * nb.sqrt())
}

/// Component-wise arithmetic mean. Panics on an empty slice.
pub fn mean_vector(vectors: &[EmbeddingVector]) -> EmbeddingVector {
    assert!(!vectors.is_empty(), "mean_vector of an empty set");
    let dim = vectors[0].dim();
    let mut sum = vec![0.0; dim];
    for v in vectors {
        assert_eq!(v.dim(), dim, "mean_vector requires equal dimensions");
        for (s, x) in sum.iter_mut().zip(v.values()) {
            *s += x;
        }
    }
    let n = vectors.len() as f64;
    EmbeddingVector::new(sum.into_iter().map(|s| s / n).collect())
}

/// FNV-1a, used by the mock providers so bucket assignment is stable across
/// runs and platforms.
pub(crate) fn fnv1a(bytes: &[u8]) -> u64 {
    let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        hash ^= u64::from(b);
        hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
    }
    hash
}
