//! Pipeline stages over a persisted run directory.
//!
//! Layout: `run_dir/{manifest.json, 01_clean/, 02_extract/, 03_summarize/,
//! 04_metrics/, 05_report/}`, one JSON file per document per stage, plus a
//! JSONL transcript per summarized document. Each stage requires its
//! predecessor's artifacts, rewrites identical bytes for identical inputs,
//! and can skip already-produced documents with `--resume`. A document that
//! fails is marked in the manifest while the others proceed.

use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use sumpipe_core::abstractor::{paraphrase, summarize_document, Exchange, FinalSummary};
use sumpipe_core::extract::{extract, ExtractiveSummary};
use sumpipe_core::ingest::{ingest, strip_patterns, CleanDocument, RawText};
use sumpipe_core::metrics::{aggregate, score_pair, MetricProviders, MetricReport, SystemKind};

use crate::config::PipelineConfig;
use crate::corpus::{discover, filter_docs, DocEntry};
use crate::error::PipelineError;
use crate::manifest::RunManifest;
use crate::providers::{self, ProviderSet};
use crate::report::{emit_csv, emit_markdown};

pub const CLEAN_DIR: &str = "01_clean";
pub const EXTRACT_DIR: &str = "02_extract";
pub const SUMMARIZE_DIR: &str = "03_summarize";
pub const METRICS_DIR: &str = "04_metrics";
pub const REPORT_DIR: &str = "05_report";

pub type StageFn = fn(&RunContext) -> Result<(), PipelineError>;

pub struct RunContext {
    pub config: PipelineConfig,
    pub docs: Vec<DocEntry>,
    pub resume: bool,
    pub force_mock: bool,
}

impl RunContext {
    pub fn new(
        config: PipelineConfig,
        doc_filter: &[String],
        resume: bool,
        force_mock: bool,
    ) -> Result<Self, PipelineError> {
        let docs = filter_docs(discover(&config.corpus_dir)?, doc_filter)?;
        Ok(Self {
            config,
            docs,
            resume,
            force_mock,
        })
    }

    fn providers(&self) -> Result<ProviderSet, PipelineError> {
        providers::build(&self.config, self.force_mock)
    }

    fn manifest(&self, providers: Option<&ProviderSet>) -> RunManifest {
        let names = providers.map(|p| p.names()).unwrap_or_default();
        let mut manifest =
            RunManifest::load_or_new(&self.config.run_dir, &self.config, names.clone(), true);
        manifest.config = self.config.clone();
        if !names.is_empty() {
            manifest.providers = names;
        }
        manifest
    }

    fn require_stage_dir(&self, dir: &str, stage: &'static str) -> Result<PathBuf, PipelineError> {
        let path = self.config.run_dir.join(dir);
        if !path.is_dir() {
            return Err(PipelineError::MissingStage {
                stage,
                hint: format!("run `sumpipe {stage}` first ({} not found)", path.display()),
            });
        }
        Ok(path)
    }
}

fn write_artifact(run_dir: &Path, relative: &str, content: &str) -> Result<String, String> {
    let path = run_dir.join(relative);
    if let Some(parent) = path.parent() {
        std::fs::create_dir_all(parent).map_err(|e| format!("mkdir {}: {e}", parent.display()))?;
    }
    std::fs::write(&path, content).map_err(|e| format!("write {}: {e}", path.display()))?;
    Ok(relative.to_string())
}

fn write_json<T: serde::Serialize>(
    run_dir: &Path,
    relative: &str,
    value: &T,
) -> Result<String, String> {
    let mut json = serde_json::to_string_pretty(value).map_err(|e| e.to_string())?;
    json.push('\n');
    write_artifact(run_dir, relative, &json)
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, String> {
    let content =
        std::fs::read_to_string(path).map_err(|e| format!("read {}: {e}", path.display()))?;
    serde_json::from_str(&content).map_err(|e| format!("parse {}: {e}", path.display()))
}

/// Run `work` over the documents with a bounded worker pool; results come
/// back ordered by document id.
fn parallel_map<T: Send>(
    docs: &[DocEntry],
    workers: usize,
    work: impl Fn(&DocEntry) -> T + Sync,
) -> Vec<(String, T)> {
    let results = Mutex::new(Vec::with_capacity(docs.len()));
    let cursor = AtomicUsize::new(0);
    let threads = workers.clamp(1, docs.len().max(1));
    std::thread::scope(|scope| {
        for _ in 0..threads {
            scope.spawn(|| loop {
                let i = cursor.fetch_add(1, Ordering::SeqCst);
                if i >= docs.len() {
                    break;
                }
                let outcome = work(&docs[i]);
                results
                    .lock()
                    .expect("results lock")
                    .push((docs[i].id.clone(), outcome));
            });
        }
    });
    let mut collected = results.into_inner().expect("results lock");
    collected.sort_by(|a, b| a.0.cmp(&b.0));
    collected
}

type DocOutcome = Result<Vec<String>, String>;

/// Record outcomes in the manifest and convert them to the stage result:
/// every document failed is a provider-level failure, some failed is a
/// partial failure, none failed is success.
fn settle(
    ctx: &RunContext,
    manifest: &mut RunManifest,
    stage: &str,
    outcomes: Vec<(String, DocOutcome)>,
) -> Result<(), PipelineError> {
    let total = outcomes.len();
    let mut failed = Vec::new();
    for (id, outcome) in outcomes {
        match outcome {
            Ok(artifacts) => {
                for artifact in &artifacts {
                    manifest.record_artifact(artifact);
                }
                manifest.record_status(stage, &id, "ok".to_string());
            }
            Err(message) => {
                manifest.record_status(stage, &id, format!("failed: {message}"));
                failed.push(id);
            }
        }
    }
    manifest.save(&ctx.config.run_dir)?;
    if failed.is_empty() {
        Ok(())
    } else if failed.len() == total {
        Err(PipelineError::AllFailed(format!(
            "stage `{stage}` failed for all {total} documents"
        )))
    } else {
        Err(PipelineError::Partial { failed, total })
    }
}

pub fn cmd_clean(ctx: &RunContext) -> Result<(), PipelineError> {
    // Pattern validity is a configuration concern; surface it before any work.
    strip_patterns(&RawText::new("probe", Vec::new()), &ctx.config.clean)
        .map_err(|e| PipelineError::Config(e.to_string()))?;
    std::fs::create_dir_all(ctx.config.run_dir.join(CLEAN_DIR))?;

    let mut manifest = ctx.manifest(None);
    let run_dir = ctx.config.run_dir.clone();
    let clean_cfg = ctx.config.clean.clone();
    let resume = ctx.resume;

    let outcomes = parallel_map(&ctx.docs, ctx.config.workers, |doc| -> DocOutcome {
        let relative = format!("{CLEAN_DIR}/{}.json", doc.id);
        if resume && run_dir.join(&relative).is_file() {
            return Ok(vec![relative]);
        }
        let raw_text = std::fs::read_to_string(&doc.path)
            .map_err(|e| format!("read {}: {e}", doc.path.display()))?;
        let raw = RawText::from_str(&doc.id, &raw_text);
        let mut clean = ingest(&raw, &clean_cfg).map_err(|e| e.to_string())?;
        clean.category = doc.category;
        Ok(vec![write_json(&run_dir, &relative, &clean)?])
    });
    settle(ctx, &mut manifest, "clean", outcomes)
}

pub fn cmd_extract(ctx: &RunContext) -> Result<(), PipelineError> {
    let clean_dir = ctx.require_stage_dir(CLEAN_DIR, "clean")?;
    std::fs::create_dir_all(ctx.config.run_dir.join(EXTRACT_DIR))?;

    let providers = ctx.providers()?;
    let mut manifest = ctx.manifest(Some(&providers));
    let run_dir = ctx.config.run_dir.clone();
    let extraction = ctx.config.extraction.clone();
    let resume = ctx.resume;

    let outcomes = parallel_map(&ctx.docs, ctx.config.workers, |doc| -> DocOutcome {
        let relative = format!("{EXTRACT_DIR}/{}.json", doc.id);
        if resume && run_dir.join(&relative).is_file() {
            return Ok(vec![relative]);
        }
        let clean: CleanDocument = read_json(&clean_dir.join(format!("{}.json", doc.id)))?;
        let summary =
            extract(&clean, providers.sentence.as_ref(), &extraction).map_err(|e| e.to_string())?;
        Ok(vec![write_json(&run_dir, &relative, &summary)?])
    });
    settle(ctx, &mut manifest, "extract", outcomes)
}

fn transcript_jsonl(transcript: &[Exchange]) -> String {
    let mut out = String::new();
    for exchange in transcript {
        out.push_str(&serde_json::to_string(exchange).expect("exchange serializes"));
        out.push('\n');
    }
    out
}

pub fn cmd_summarize(ctx: &RunContext) -> Result<(), PipelineError> {
    let extract_dir = ctx.require_stage_dir(EXTRACT_DIR, "extract")?;
    std::fs::create_dir_all(ctx.config.run_dir.join(SUMMARIZE_DIR))?;

    let providers = ctx.providers()?;
    let mut manifest = ctx.manifest(Some(&providers));
    let run_dir = ctx.config.run_dir.clone();
    let abstraction = ctx.config.abstraction.clone();
    let rewrite_after = ctx.config.rewrite_after_merge();
    let resume = ctx.resume;

    let outcomes = parallel_map(&ctx.docs, ctx.config.workers, |doc| -> DocOutcome {
        let summary_rel = format!("{SUMMARIZE_DIR}/{}.json", doc.id);
        let transcript_rel = format!("{SUMMARIZE_DIR}/{}.transcript.jsonl", doc.id);
        if resume && run_dir.join(&summary_rel).is_file() && run_dir.join(&transcript_rel).is_file()
        {
            return Ok(vec![summary_rel, transcript_rel]);
        }
        let extracted: ExtractiveSummary =
            read_json(&extract_dir.join(format!("{}.json", doc.id)))?;

        let chat = providers.chat.as_ref();
        let result = summarize_document(
            chat,
            &extracted,
            &abstraction.template,
            abstraction.max_words,
            abstraction.token_budget,
        );
        let mut final_summary: FinalSummary = match result {
            Ok(summary) => summary,
            Err(failure) => {
                // Keep what the conversation produced before the failure.
                let _ = write_artifact(
                    &run_dir,
                    &transcript_rel,
                    &transcript_jsonl(&failure.partial_transcript),
                );
                return Err(failure.to_string());
            }
        };
        if rewrite_after {
            match paraphrase(
                chat,
                &final_summary.text.clone(),
                &mut final_summary.transcript,
            ) {
                Ok(rewritten) => final_summary.text = rewritten,
                Err(e) => {
                    let _ = write_artifact(
                        &run_dir,
                        &transcript_rel,
                        &transcript_jsonl(&final_summary.transcript),
                    );
                    return Err(format!("final rewrite failed: {e}"));
                }
            }
        }

        let transcript = write_artifact(
            &run_dir,
            &transcript_rel,
            &transcript_jsonl(&final_summary.transcript),
        )?;
        let summary = write_json(&run_dir, &summary_rel, &final_summary)?;
        Ok(vec![summary, transcript])
    });
    settle(ctx, &mut manifest, "summarize", outcomes)
}

pub fn cmd_evaluate(ctx: &RunContext) -> Result<(), PipelineError> {
    let clean_dir = ctx.require_stage_dir(CLEAN_DIR, "clean")?;
    let extract_dir = ctx.require_stage_dir(EXTRACT_DIR, "extract")?;
    let summarize_dir = ctx.require_stage_dir(SUMMARIZE_DIR, "summarize")?;
    std::fs::create_dir_all(ctx.config.run_dir.join(METRICS_DIR))?;

    let providers = ctx.providers()?;
    let mut manifest = ctx.manifest(Some(&providers));
    let run_dir = ctx.config.run_dir.clone();
    let mask_every = ctx.config.providers.mask_every;
    let resume = ctx.resume;

    let outcomes = parallel_map(&ctx.docs, ctx.config.workers, |doc| -> DocOutcome {
        let clean: CleanDocument = read_json(&clean_dir.join(format!("{}.json", doc.id)))?;
        let extracted: ExtractiveSummary =
            read_json(&extract_dir.join(format!("{}.json", doc.id)))?;
        let final_summary: FinalSummary =
            read_json(&summarize_dir.join(format!("{}.json", doc.id)))?;
        let reference = match &doc.reference_path {
            Some(path) => Some(
                std::fs::read_to_string(path)
                    .map_err(|e| format!("read {}: {e}", path.display()))?,
            ),
            None => None,
        };

        let metric_providers = MetricProviders {
            token: providers.token.as_ref(),
            masked: providers.masked.as_ref(),
            mask_every,
        };
        let mut systems: Vec<(SystemKind, &str)> = Vec::new();
        if let Some(reference_text) = reference.as_deref() {
            systems.push((SystemKind::Human, reference_text));
        }
        systems.push((SystemKind::C2fFar, &extracted.text));
        systems.push((SystemKind::Chatgpt, &final_summary.text));

        let mut artifacts = Vec::new();
        for (system, summary_text) in systems {
            let relative = format!("{METRICS_DIR}/{}.{system}.json", doc.id);
            if resume && run_dir.join(&relative).is_file() {
                artifacts.push(relative);
                continue;
            }
            // The human summary is the reference itself; it gets only the
            // reference-free columns.
            let reference_for_system = match system {
                SystemKind::Human => None,
                _ => reference.as_deref(),
            };
            let report = score_pair(
                &clean,
                reference_for_system,
                summary_text,
                system,
                &metric_providers,
            )
            .map_err(|e| format!("{system}: {e}"))?;
            artifacts.push(write_json(&run_dir, &relative, &report)?);
        }
        Ok(artifacts)
    });
    settle(ctx, &mut manifest, "evaluate", outcomes)
}

pub fn cmd_report(ctx: &RunContext) -> Result<(), PipelineError> {
    let metrics_dir = ctx.require_stage_dir(METRICS_DIR, "evaluate")?;
    std::fs::create_dir_all(ctx.config.run_dir.join(REPORT_DIR))?;
    let mut manifest = ctx.manifest(None);

    let mut paths: Vec<PathBuf> = std::fs::read_dir(&metrics_dir)?
        .map(|e| e.map(|e| e.path()))
        .collect::<Result<_, _>>()?;
    paths.sort();

    let mut reports: Vec<MetricReport> = Vec::new();
    for path in paths {
        if path.extension().is_none_or(|e| e != "json") {
            continue;
        }
        reports.push(read_json(&path).map_err(PipelineError::Config)?);
    }

    let rows = aggregate(&reports);
    let artifacts = [
        write_artifact(
            &ctx.config.run_dir,
            &format!("{REPORT_DIR}/report.csv"),
            &emit_csv(&rows),
        ),
        write_artifact(
            &ctx.config.run_dir,
            &format!("{REPORT_DIR}/report.md"),
            &emit_markdown(&rows),
        ),
    ];
    for artifact in artifacts {
        let artifact = artifact.map_err(PipelineError::Config)?;
        manifest.record_artifact(&artifact);
    }
    manifest.record_status("report", "-", format!("ok ({} reports)", reports.len()));
    manifest.save(&ctx.config.run_dir)?;
    Ok(())
}

/// All five stages in order. Partial failures are carried through so later
/// stages still process the documents that succeeded; the combined partial
/// failure is reported at the end.
pub fn cmd_run(ctx: &RunContext) -> Result<(), PipelineError> {
    let mut failed: Vec<String> = Vec::new();
    let stages: [(&str, StageFn); 4] = [
        ("clean", cmd_clean),
        ("extract", cmd_extract),
        ("summarize", cmd_summarize),
        ("evaluate", cmd_evaluate),
    ];
    let mut survivors = ctx.docs.clone();
    for (_, stage) in stages {
        let stage_ctx = RunContext {
            config: ctx.config.clone(),
            docs: survivors.clone(),
            resume: ctx.resume,
            force_mock: ctx.force_mock,
        };
        match stage(&stage_ctx) {
            Ok(()) => {}
            Err(PipelineError::Partial { failed: ids, .. }) => {
                survivors.retain(|d| !ids.contains(&d.id));
                failed.extend(ids);
            }
            Err(e) => return Err(e),
        }
    }
    cmd_report(ctx)?;
    if failed.is_empty() {
        Ok(())
    } else {
        failed.sort();
        Err(PipelineError::Partial {
            failed,
            total: ctx.docs.len(),
        })
    }
}
