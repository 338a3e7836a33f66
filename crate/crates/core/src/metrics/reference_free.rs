//! Reference-free consistency metrics: masked-prediction gain and nearest
//! token matching.

use crate::embed::{cosine, MaskedPredictor, TokenEmbedder};
use crate::ingest::CleanDocument;
use crate::segment::{tokenize, Segmenter};

use super::MetricError;

/// Default masking interval: every sixth maskable token per sentence.
pub const DEFAULT_MASK_EVERY: usize = 6;

fn is_maskable(token: &str) -> bool {
    token.chars().count() >= 4 && token.chars().all(char::is_alphabetic)
}

/// How much the summary helps a masked-token predictor reconstruct the
/// document, against a same-length filler of "." tokens.
///
/// Maskable tokens are alphabetic with at least four characters; within each
/// document sentence, positions 0, `mask_every`, 2×`mask_every`, … of the
/// maskable list are hidden one at a time. With S correct predictions given
/// the summary, B correct given the filler, and N masks, the score is
/// (S - B) / N.
pub fn blanc_help(
    document: &CleanDocument,
    summary: &str,
    provider: &dyn MaskedPredictor,
    mask_every: usize,
) -> Result<f64, MetricError> {
    assert!(mask_every >= 1, "mask interval must be at least 1");
    let filler = vec!["."; tokenize(summary).len()].join(" ");

    let mut with_summary = 0usize;
    let mut with_filler = 0usize;
    let mut total = 0usize;
    for sentence in Segmenter::default().split_sentences(&document.text) {
        let tokens = tokenize(&sentence.text);
        let maskable: Vec<usize> = (0..tokens.len())
            .filter(|&p| is_maskable(&tokens[p]))
            .collect();
        for pos in maskable.iter().step_by(mask_every) {
            total += 1;
            if provider.predict_masked(summary, &tokens, *pos)? == tokens[*pos] {
                with_summary += 1;
            }
            if provider.predict_masked(&filler, &tokens, *pos)? == tokens[*pos] {
                with_filler += 1;
            }
        }
    }
    if total == 0 {
        return Err(MetricError::NoMaskableTokens);
    }
    Ok((with_summary as f64 - with_filler as f64) / total as f64)
}

/// Nearest-neighbor token consistency.
///
/// Every summary token is matched to the document position with the highest
/// contextual-embedding cosine (ties to the earliest position); an alarm
/// fires when the matched strings differ. The soft score is the mean, over
/// summary tokens, of the softmax mass (temperature 1, over all document
/// positions) that lands on positions holding the identical token string.
pub fn estime(
    document: &str,
    summary: &str,
    provider: &dyn TokenEmbedder,
) -> Result<(usize, f64), MetricError> {
    let doc_tokens = tokenize(document);
    let sum_tokens = tokenize(summary);
    if doc_tokens.is_empty() || sum_tokens.is_empty() {
        return Err(MetricError::EmptyInput(
            "estime needs non-empty document and summary",
        ));
    }
    let doc_vecs = provider.embed_tokens(&doc_tokens)?;
    let sum_vecs = provider.embed_tokens(&sum_tokens)?;

    let mut alarms = 0usize;
    let mut soft_sum = 0.0;
    for (token, vec) in sum_tokens.iter().zip(&sum_vecs) {
        let sims: Vec<f64> = doc_vecs.iter().map(|d| cosine(vec, d)).collect();
        let mut best = 0usize;
        for (i, sim) in sims.iter().enumerate() {
            if *sim > sims[best] {
                best = i;
            }
        }
        if doc_tokens[best] != *token {
            alarms += 1;
        }

        let total: f64 = sims.iter().map(|s| s.exp()).sum();
        let matching: f64 = sims
            .iter()
            .zip(&doc_tokens)
            .filter(|(_, d)| *d == token)
            .map(|(s, _)| s.exp())
            .sum();
        soft_sum += matching / total;
    }
    Ok((alarms, soft_sum / sum_tokens.len() as f64))
}
