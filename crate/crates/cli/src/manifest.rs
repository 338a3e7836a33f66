//! Run manifest: config snapshot, per-document stage status, and the full
//! artifact listing for one run directory.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

use crate::config::PipelineConfig;
use crate::error::PipelineError;

pub const MANIFEST_FILE: &str = "manifest.json";

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunManifest {
    pub run_id: String,
    pub created_at_epoch_s: u64,
    pub updated_at_epoch_s: u64,
    pub providers: BTreeMap<String, String>,
    pub config: PipelineConfig,
    /// stage name -> document id -> "ok" or "failed: reason"
    pub stages: BTreeMap<String, BTreeMap<String, String>>,
    /// Every persisted artifact, as a path relative to the run directory.
    pub artifacts: BTreeSet<String>,
}

fn now() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

impl RunManifest {
    pub fn new(config: &PipelineConfig, providers: BTreeMap<String, String>) -> Self {
        let run_id = config
            .run_dir
            .file_name()
            .and_then(|n| n.to_str())
            .unwrap_or("run")
            .to_string();
        let created = now();
        Self {
            run_id,
            created_at_epoch_s: created,
            updated_at_epoch_s: created,
            providers,
            config: config.clone(),
            stages: BTreeMap::new(),
            artifacts: BTreeSet::new(),
        }
    }

    /// Load the existing manifest when resuming, otherwise start fresh.
    pub fn load_or_new(
        run_dir: &Path,
        config: &PipelineConfig,
        providers: BTreeMap<String, String>,
        resume: bool,
    ) -> Self {
        let path = run_dir.join(MANIFEST_FILE);
        if resume && path.is_file() {
            if let Ok(content) = std::fs::read_to_string(&path) {
                if let Ok(manifest) = serde_json::from_str::<RunManifest>(&content) {
                    return manifest;
                }
            }
        }
        Self::new(config, providers)
    }

    pub fn record_status(&mut self, stage: &str, doc_id: &str, status: String) {
        self.stages
            .entry(stage.to_string())
            .or_default()
            .insert(doc_id.to_string(), status);
    }

    pub fn record_artifact(&mut self, relative_path: &str) {
        self.artifacts.insert(relative_path.to_string());
    }

    pub fn save(&mut self, run_dir: &Path) -> Result<(), PipelineError> {
        self.updated_at_epoch_s = now();
        let path = run_dir.join(MANIFEST_FILE);
        let json = serde_json::to_string_pretty(self).expect("manifest serializes");
        std::fs::write(path, json + "\n")?;
        Ok(())
    }
}
