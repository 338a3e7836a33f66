//! Deterministic offline providers.
//!
//! These make the extractor and every metric testable without a model or
//! network: the outputs are cheap functions of the input text, stable across
//! runs and platforms.

use super::{fnv1a, EmbedError, EmbeddingVector, MaskedPredictor, SentenceEmbedder, TokenEmbedder};
use crate::segment::tokenize;

/// Sentinel returned by [`MockMaskedPredictor`] when the hidden token does
/// not occur in the context.
pub const UNKNOWN_TOKEN: &str = "[UNK]";

/// Sentence embeddings as L2-normalized character-3-gram hash-bucket counts.
///
/// Texts shorter than three characters hash as a single gram. The vector
/// depends only on the text, so embeddings are invariant under reordering of
/// documents or batches.
#[derive(Debug, Default)]
pub struct MockSentenceEmbedder;

impl MockSentenceEmbedder {
    pub const DIM: usize = 16;

    fn embed_one(text: &str) -> EmbeddingVector {
        let chars: Vec<char> = text.chars().collect();
        let mut counts = vec![0.0_f64; Self::DIM];
        if chars.len() < 3 {
            let bucket = (fnv1a(text.as_bytes()) % Self::DIM as u64) as usize;
            counts[bucket] += 1.0;
        } else {
            for window in chars.windows(3) {
                let gram: String = window.iter().collect();
                let bucket = (fnv1a(gram.as_bytes()) % Self::DIM as u64) as usize;
                counts[bucket] += 1.0;
            }
        }
        let norm = counts.iter().map(|c| c * c).sum::<f64>().sqrt();
        if norm > 0.0 {
            for c in &mut counts {
                *c /= norm;
            }
        }
        EmbeddingVector::new(counts)
    }
}

impl SentenceEmbedder for MockSentenceEmbedder {
    fn name(&self) -> &str {
        "mock-sentence"
    }

    fn embed_batch(&self, texts: &[String]) -> Result<Vec<EmbeddingVector>, EmbedError> {
        Ok(texts.iter().map(|t| Self::embed_one(t)).collect())
    }
}

/// Token embeddings as a hash-bucket one-hot of the token string blended
/// 50/50 with the mean of the neighboring tokens' one-hots. The blend makes
/// the vectors contextual: the same token embeds differently next to
/// different neighbors. A token with no neighbors keeps its plain one-hot.
#[derive(Debug)]
pub struct MockTokenEmbedder {
    dim: usize,
}

impl MockTokenEmbedder {
    pub fn new() -> Self {
        Self { dim: 64 }
    }

    pub fn with_dim(dim: usize) -> Self {
        assert!(dim > 0);
        Self { dim }
    }

    fn one_hot(&self, token: &str) -> Vec<f64> {
        let mut v = vec![0.0; self.dim];
        v[(fnv1a(token.as_bytes()) % self.dim as u64) as usize] = 1.0;
        v
    }
}

impl Default for MockTokenEmbedder {
    fn default() -> Self {
        Self::new()
    }
}

impl TokenEmbedder for MockTokenEmbedder {
    fn name(&self) -> &str {
        "mock-token"
    }

    fn embed_tokens(&self, tokens: &[String]) -> Result<Vec<EmbeddingVector>, EmbedError> {
        let one_hots: Vec<Vec<f64>> = tokens.iter().map(|t| self.one_hot(t)).collect();
        let mut out = Vec::with_capacity(tokens.len());
        for i in 0..tokens.len() {
            let mut neighbors = Vec::new();
            if i > 0 {
                neighbors.push(&one_hots[i - 1]);
            }
            if i + 1 < tokens.len() {
                neighbors.push(&one_hots[i + 1]);
            }
            let mut v = vec![0.0; self.dim];
            if neighbors.is_empty() {
                v.clone_from(&one_hots[i]);
            } else {
                let n = neighbors.len() as f64;
                for (k, slot) in v.iter_mut().enumerate() {
                    let ctx: f64 = neighbors.iter().map(|h| h[k]).sum::<f64>() / n;
                    *slot = 0.5 * one_hots[i][k] + 0.5 * ctx;
                }
            }
            out.push(EmbeddingVector::new(v));
        }
        Ok(out)
    }
}

/// Predicts the hidden token correctly exactly when its string occurs among
/// the context's word tokens; otherwise answers [`UNKNOWN_TOKEN`].
#[derive(Debug, Default)]
pub struct MockMaskedPredictor;

impl MaskedPredictor for MockMaskedPredictor {
    fn name(&self) -> &str {
        "mock-masked"
    }

    fn predict_masked(
        &self,
        context: &str,
        passage: &[String],
        masked_pos: usize,
    ) -> Result<String, EmbedError> {
        let truth = passage.get(masked_pos).ok_or_else(|| {
            EmbedError::Malformed(format!(
                "masked position {masked_pos} out of range for passage of {} tokens",
                passage.len()
            ))
        })?;
        let truth_lower = truth.to_lowercase();
        let known = tokenize(context).into_iter().any(|t| t == truth_lower);
        Ok(if known {
            truth.clone()
        } else {
            UNKNOWN_TOKEN.to_string()
        })
    }
}
