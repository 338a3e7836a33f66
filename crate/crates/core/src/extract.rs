//! Coarse-to-fine extractive sentence selection.
//!
//! Sentences are embedded, partitioned into semantic blocks wherever the
//! similarity of adjacent sentences dips below `mean - alpha * std`, blocks
//! are filtered by centrality, sentences are scored against their block
//! centroid, and the surviving candidates pass through a final centrality
//! selection. Every stage breaks ties toward the earlier index, so the whole
//! chain is deterministic given the provider's vectors.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::embed::{cosine, mean_vector, EmbedError, EmbeddingVector, SentenceEmbedder};
use crate::ingest::CleanDocument;
use crate::segment::Segmenter;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ExtractionConfig {
    /// Multiplier on the standard deviation in the block boundary test.
    pub boundary_alpha: f64,
    /// Fraction of blocks kept by the coarse centrality filter, in (0, 1].
    pub block_keep_ratio: f64,
    /// Fraction of sentences kept per block, in (0, 1].
    pub sentence_keep_ratio: f64,
    /// Maximum number of sentences in the summary.
    pub target_sentences: usize,
}

impl Default for ExtractionConfig {
    fn default() -> Self {
        Self {
            boundary_alpha: 0.5,
            block_keep_ratio: 0.6,
            sentence_keep_ratio: 0.6,
            target_sentences: 25,
        }
    }
}

/// A contiguous run of sentences on one topic. `range` is inclusive on both
/// ends; the ranges of all blocks partition the sentence indices in order.
#[derive(Debug, Clone)]
pub struct SemanticBlock {
    pub range: (usize, usize),
    pub centroid: EmbeddingVector,
    pub centrality: f64,
}

/// Selected sentences in document order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtractiveSummary {
    pub source_id: String,
    pub selected: Vec<usize>,
    pub scores: Vec<f64>,
    pub text: String,
}

#[derive(Debug, Error)]
pub enum ExtractError {
    #[error("document `{0}` has no sentences to extract from")]
    EmptyDocument(String),
    #[error(transparent)]
    Embed(#[from] EmbedError),
}

fn population_std(values: &[f64], mean: f64) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / values.len() as f64;
    var.sqrt()
}

/// Keep at least one item: ceil of ratio * count, floored at 1.
fn keep_count(ratio: f64, count: usize) -> usize {
    ((ratio * count as f64).ceil() as usize).clamp(1, count)
}

/// Split the sentence sequence into semantic blocks. A boundary goes between
/// positions `i` and `i + 1` exactly when their similarity falls below
/// `mean - alpha * std` of all adjacent similarities.
pub fn partition_blocks(
    embeddings: &[EmbeddingVector],
    cfg: &ExtractionConfig,
) -> Vec<SemanticBlock> {
    assert!(
        !embeddings.is_empty(),
        "partition_blocks requires sentences"
    );
    let n = embeddings.len();
    if n == 1 {
        return vec![SemanticBlock {
            range: (0, 0),
            centroid: embeddings[0].clone(),
            centrality: 0.0,
        }];
    }

    let sims: Vec<f64> = (0..n - 1)
        .map(|i| cosine(&embeddings[i], &embeddings[i + 1]))
        .collect();
    let mean = sims.iter().sum::<f64>() / sims.len() as f64;
    let threshold = mean - cfg.boundary_alpha * population_std(&sims, mean);

    let mut blocks = Vec::new();
    let mut start = 0;
    for (i, sim) in sims.iter().enumerate() {
        if *sim < threshold {
            blocks.push((start, i));
            start = i + 1;
        }
    }
    blocks.push((start, n - 1));

    blocks
        .into_iter()
        .map(|(first, last)| SemanticBlock {
            range: (first, last),
            centroid: mean_vector(&embeddings[first..=last]),
            centrality: 0.0,
        })
        .collect()
}

/// Coarse filter: each block's centrality is the mean cosine of its centroid
/// to every other block centroid (0 for a single block). The highest-scoring
/// `ceil(ratio * count)` blocks survive, ties to the earlier range, and the
/// survivors are returned in document order.
pub fn filter_blocks(blocks: Vec<SemanticBlock>, cfg: &ExtractionConfig) -> Vec<SemanticBlock> {
    assert!(!blocks.is_empty(), "filter_blocks requires blocks");
    let n = blocks.len();
    let mut scored: Vec<SemanticBlock> = blocks;
    for i in 0..n {
        let centrality = if n == 1 {
            0.0
        } else {
            (0..n)
                .filter(|&j| j != i)
                .map(|j| cosine(&scored[i].centroid, &scored[j].centroid))
                .sum::<f64>()
                / (n - 1) as f64
        };
        scored[i].centrality = centrality;
    }

    let keep = keep_count(cfg.block_keep_ratio, n);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        scored[b]
            .centrality
            .total_cmp(&scored[a].centrality)
            .then(scored[a].range.0.cmp(&scored[b].range.0))
    });
    let mut kept: Vec<usize> = order.into_iter().take(keep).collect();
    kept.sort_unstable();

    let mut survivors = Vec::with_capacity(keep);
    let mut scored: Vec<Option<SemanticBlock>> = scored.into_iter().map(Some).collect();
    for i in kept {
        survivors.push(scored[i].take().expect("block taken once"));
    }
    survivors
}

/// Fine stage: score each sentence of the block against the block centroid
/// and keep the top `ceil(ratio * len)`, ties to the earlier index. Results
/// are in document order.
pub fn score_sentences(
    block: &SemanticBlock,
    embeddings: &[EmbeddingVector],
    cfg: &ExtractionConfig,
) -> Vec<(usize, f64)> {
    let (first, last) = block.range;
    let mut scored: Vec<(usize, f64)> = (first..=last)
        .map(|i| (i, cosine(&embeddings[i], &block.centroid)))
        .collect();
    let keep = keep_count(cfg.sentence_keep_ratio, scored.len());
    scored.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
    scored.truncate(keep);
    scored.sort_by_key(|(i, _)| *i);
    scored
}

/// Final stage: centrality of each candidate is its mean cosine to all other
/// candidates; the top `k` survive (ties to the earlier index) and come back
/// in ascending index order with their centrality scores.
pub fn final_select(candidates: &[(usize, EmbeddingVector)], k: usize) -> Vec<(usize, f64)> {
    assert!(!candidates.is_empty(), "final_select requires candidates");
    assert!(k >= 1, "target sentence count must be at least 1");
    let n = candidates.len();
    let mut scored: Vec<(usize, f64)> = (0..n)
        .map(|i| {
            let centrality = if n == 1 {
                0.0
            } else {
                (0..n)
                    .filter(|&j| j != i)
                    .map(|j| cosine(&candidates[i].1, &candidates[j].1))
                    .sum::<f64>()
                    / (n - 1) as f64
            };
            (candidates[i].0, centrality)
        })
        .collect();
    scored.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
    scored.truncate(k);
    scored.sort_by_key(|(i, _)| *i);
    scored
}

/// Run the whole selection chain over pre-computed sentence embeddings and
/// return `(index, final centrality)` pairs in ascending index order.
pub fn select_indices(embeddings: &[EmbeddingVector], cfg: &ExtractionConfig) -> Vec<(usize, f64)> {
    let blocks = partition_blocks(embeddings, cfg);
    let blocks = filter_blocks(blocks, cfg);
    let mut candidates: Vec<(usize, EmbeddingVector)> = Vec::new();
    for block in &blocks {
        for (i, _) in score_sentences(block, embeddings, cfg) {
            candidates.push((i, embeddings[i].clone()));
        }
    }
    final_select(&candidates, cfg.target_sentences)
}

/// Extract a summary from a clean document: segment, embed, select. The
/// summary text is the selected sentences joined in document order.
pub fn extract(
    doc: &CleanDocument,
    provider: &dyn SentenceEmbedder,
    cfg: &ExtractionConfig,
) -> Result<ExtractiveSummary, ExtractError> {
    let sentences = Segmenter::default().split_sentences(&doc.text);
    if sentences.is_empty() {
        return Err(ExtractError::EmptyDocument(doc.source_id.clone()));
    }
    let texts: Vec<String> = sentences.iter().map(|s| s.text.clone()).collect();
    let embeddings = provider.embed_batch(&texts)?;
    if embeddings.len() != texts.len() {
        return Err(ExtractError::Embed(EmbedError::Arity {
            expected: texts.len(),
            got: embeddings.len(),
        }));
    }

    let picked = select_indices(&embeddings, cfg);
    let (selected, scores): (Vec<usize>, Vec<f64>) = picked.into_iter().unzip();
    let text = selected
        .iter()
        .map(|&i| sentences[i].text.as_str())
        .collect::<Vec<_>>()
        .join(" ");

    Ok(ExtractiveSummary {
        source_id: doc.source_id.clone(),
        selected,
        scores,
        text,
    })
}
