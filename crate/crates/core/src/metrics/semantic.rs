//! Greedy token-matching F1 over contextual embeddings.

use crate::embed::{cosine, EmbeddingVector, TokenEmbedder};

use super::MetricError;

/// Recall is the mean over reference tokens of the best cosine against any
/// candidate token; precision is the symmetric quantity; the score is their
/// harmonic mean. No idf weighting.
pub fn bertscore_f1(
    candidate: &[String],
    reference: &[String],
    provider: &dyn TokenEmbedder,
) -> Result<f64, MetricError> {
    if candidate.is_empty() || reference.is_empty() {
        return Err(MetricError::EmptyInput(
            "bertscore needs non-empty candidate and reference",
        ));
    }
    let cand = provider.embed_tokens(candidate)?;
    let refs = provider.embed_tokens(reference)?;

    let best = |from: &[EmbeddingVector], to: &[EmbeddingVector]| -> f64 {
        from.iter()
            .map(|v| {
                to.iter()
                    .map(|w| cosine(v, w))
                    .fold(f64::NEG_INFINITY, f64::max)
            })
            .sum::<f64>()
            / from.len() as f64
    };

    let recall = best(&refs, &cand);
    let precision = best(&cand, &refs);
    if precision + recall == 0.0 {
        return Ok(0.0);
    }
    Ok(2.0 * precision * recall / (precision + recall))
}
