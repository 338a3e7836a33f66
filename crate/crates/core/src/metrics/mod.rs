//! Summary quality metrics and their aggregation into report rows.

mod reference_free;
mod rouge;
mod semantic;

pub use reference_free::{blanc_help, estime, DEFAULT_MASK_EVERY};
pub use rouge::{rouge_l, rouge_n, RougeScore};
pub use semantic::bertscore_f1;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::embed::{EmbedError, MaskedPredictor, TokenEmbedder};
use crate::ingest::{Category, CleanDocument};
use crate::segment::tokenize;

#[derive(Debug, Error)]
pub enum MetricError {
    #[error("empty input: {0}")]
    EmptyInput(&'static str),
    #[error("document has no maskable tokens")]
    NoMaskableTokens,
    #[error(transparent)]
    Embed(#[from] EmbedError),
}

/// Which pipeline produced the summary being scored.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SystemKind {
    Human,
    C2fFar,
    Chatgpt,
}

impl std::fmt::Display for SystemKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            SystemKind::Human => "human",
            SystemKind::C2fFar => "c2f_far",
            SystemKind::Chatgpt => "chatgpt",
        })
    }
}

/// Per-document scores. Reference-based fields are `None` when no reference
/// summary exists; `blanc_tune` is never computed here and stays `None`
/// unless an externally obtained value is injected.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MetricReport {
    pub source_id: String,
    pub category: Category,
    pub system: SystemKind,
    pub rouge1: Option<RougeScore>,
    pub rouge2: Option<RougeScore>,
    pub rouge_l: Option<RougeScore>,
    pub bertscore_f1: Option<f64>,
    pub blanc_help: f64,
    pub blanc_tune: Option<f64>,
    pub estime_alarms: usize,
    pub estime_soft: f64,
    pub words_summary: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub flags: Vec<String>,
}

/// Providers needed by the reference-free metrics.
pub struct MetricProviders<'a> {
    pub token: &'a dyn TokenEmbedder,
    pub masked: &'a dyn MaskedPredictor,
    pub mask_every: usize,
}

/// Score one summary: ROUGE and BERTScore against the reference when one is
/// given, BLANC and ESTIME against the document. An empty summary produces a
/// zeroed report carrying an `empty_summary` flag instead of an error.
pub fn score_pair(
    document: &CleanDocument,
    reference_summary: Option<&str>,
    system_summary: &str,
    system: SystemKind,
    providers: &MetricProviders,
) -> Result<MetricReport, MetricError> {
    let words_summary = system_summary.split_whitespace().count();
    let summary_tokens = tokenize(system_summary);
    let has_reference = reference_summary.is_some_and(|r| !tokenize(r).is_empty());

    if summary_tokens.is_empty() {
        let zero = has_reference.then(RougeScore::default);
        return Ok(MetricReport {
            source_id: document.source_id.clone(),
            category: document.category,
            system,
            rouge1: zero,
            rouge2: zero,
            rouge_l: zero,
            bertscore_f1: has_reference.then_some(0.0),
            blanc_help: 0.0,
            blanc_tune: None,
            estime_alarms: 0,
            estime_soft: 0.0,
            words_summary,
            flags: vec!["empty_summary".to_string()],
        });
    }

    let (rouge1, rouge2, rouge_l_score, bertscore) = if has_reference {
        let reference_tokens = tokenize(reference_summary.unwrap());
        (
            Some(rouge_n(&summary_tokens, &reference_tokens, 1)),
            Some(rouge_n(&summary_tokens, &reference_tokens, 2)),
            Some(rouge_l(&summary_tokens, &reference_tokens)),
            Some(bertscore_f1(
                &summary_tokens,
                &reference_tokens,
                providers.token,
            )?),
        )
    } else {
        (None, None, None, None)
    };

    let blanc = blanc_help(
        document,
        system_summary,
        providers.masked,
        providers.mask_every,
    )?;
    let (estime_alarms, estime_soft) = estime(&document.text, system_summary, providers.token)?;

    Ok(MetricReport {
        source_id: document.source_id.clone(),
        category: document.category,
        system,
        rouge1,
        rouge2,
        rouge_l: rouge_l_score,
        bertscore_f1: bertscore,
        blanc_help: blanc,
        blanc_tune: None,
        estime_alarms,
        estime_soft,
        words_summary,
        flags: Vec::new(),
    })
}

/// Mean and population standard deviation of one metric column.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Stat {
    pub mean: f64,
    pub std: f64,
}

impl Stat {
    fn of(values: &[f64]) -> Option<Self> {
        if values.is_empty() {
            return None;
        }
        let mean = values.iter().sum::<f64>() / values.len() as f64;
        let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / values.len() as f64;
        Some(Self {
            mean,
            std: var.sqrt(),
        })
    }
}

/// Aggregate statistics for one (category, system) group. ROUGE columns
/// aggregate the F1 component.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AggregateRow {
    pub label: String,
    pub category: Category,
    pub system: SystemKind,
    pub n: usize,
    pub rouge1: Option<Stat>,
    pub rouge2: Option<Stat>,
    pub rouge_l: Option<Stat>,
    pub bertscore_f1: Option<Stat>,
    pub blanc_help: Option<Stat>,
    pub blanc_tune: Option<Stat>,
    pub estime_alarms: Option<Stat>,
    pub estime_soft: Option<Stat>,
    pub words_summary: Option<Stat>,
}

/// Group reports by (category, system) and compute per-metric means and
/// population standard deviations. Groups with no reports are omitted;
/// optional columns aggregate over the reports where they are present.
pub fn aggregate(reports: &[MetricReport]) -> Vec<AggregateRow> {
    let mut groups: BTreeMap<(Category, SystemKind), Vec<&MetricReport>> = BTreeMap::new();
    for report in reports {
        groups
            .entry((report.category, report.system))
            .or_default()
            .push(report);
    }

    groups
        .into_iter()
        .map(|((category, system), members)| {
            let collect = |f: &dyn Fn(&MetricReport) -> Option<f64>| -> Vec<f64> {
                members.iter().filter_map(|r| f(r)).collect()
            };
            AggregateRow {
                label: format!("{}, {}", category.short_code(), system),
                category,
                system,
                n: members.len(),
                rouge1: Stat::of(&collect(&|r| r.rouge1.map(|s| s.f1))),
                rouge2: Stat::of(&collect(&|r| r.rouge2.map(|s| s.f1))),
                rouge_l: Stat::of(&collect(&|r| r.rouge_l.map(|s| s.f1))),
                bertscore_f1: Stat::of(&collect(&|r| r.bertscore_f1)),
                blanc_help: Stat::of(&collect(&|r| Some(r.blanc_help))),
                blanc_tune: Stat::of(&collect(&|r| r.blanc_tune)),
                estime_alarms: Stat::of(&collect(&|r| Some(r.estime_alarms as f64))),
                estime_soft: Stat::of(&collect(&|r| Some(r.estime_soft))),
                words_summary: Stat::of(&collect(&|r| Some(r.words_summary as f64))),
            }
        })
        .collect()
}
