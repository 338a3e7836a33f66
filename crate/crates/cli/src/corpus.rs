//! Corpus discovery.
//!
//! A corpus directory holds one UTF-8 plain-text file per document, an
//! optional `refs/` subdirectory with same-named reference summaries, and an
//! optional `categories.json` mapping document ids to categories.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use sumpipe_core::ingest::Category;

use crate::error::PipelineError;

#[derive(Debug, Clone)]
pub struct DocEntry {
    pub id: String,
    pub path: PathBuf,
    pub category: Category,
    pub reference_path: Option<PathBuf>,
}

pub fn discover(corpus_dir: &Path) -> Result<Vec<DocEntry>, PipelineError> {
    if !corpus_dir.is_dir() {
        return Err(PipelineError::Config(format!(
            "corpus directory {} does not exist",
            corpus_dir.display()
        )));
    }

    let categories: BTreeMap<String, Category> = {
        let path = corpus_dir.join("categories.json");
        if path.is_file() {
            let content = std::fs::read_to_string(&path)?;
            serde_json::from_str(&content)
                .map_err(|e| PipelineError::Config(format!("invalid {}: {e}", path.display())))?
        } else {
            BTreeMap::new()
        }
    };

    let refs_dir = corpus_dir.join("refs");
    let mut entries = Vec::new();
    for entry in std::fs::read_dir(corpus_dir)? {
        let path = entry?.path();
        if !path.is_file() || path.extension().is_none_or(|e| e != "txt") {
            continue;
        }
        let id = path
            .file_stem()
            .and_then(|s| s.to_str())
            .unwrap_or_default()
            .to_string();
        if id.is_empty() {
            continue;
        }
        let reference = refs_dir.join(format!("{id}.txt"));
        entries.push(DocEntry {
            category: categories.get(&id).copied().unwrap_or(Category::Other),
            reference_path: reference.is_file().then_some(reference),
            path,
            id,
        });
    }
    entries.sort_by(|a, b| a.id.cmp(&b.id));
    if entries.is_empty() {
        return Err(PipelineError::Config(format!(
            "no .txt documents found in {}",
            corpus_dir.display()
        )));
    }
    Ok(entries)
}

/// Restrict to the requested ids, erroring on ids the corpus does not have.
pub fn filter_docs(
    entries: Vec<DocEntry>,
    wanted: &[String],
) -> Result<Vec<DocEntry>, PipelineError> {
    if wanted.is_empty() {
        return Ok(entries);
    }
    for id in wanted {
        if !entries.iter().any(|e| &e.id == id) {
            return Err(PipelineError::Config(format!(
                "document `{id}` is not in the corpus"
            )));
        }
    }
    Ok(entries
        .into_iter()
        .filter(|e| wanted.contains(&e.id))
        .collect())
}
