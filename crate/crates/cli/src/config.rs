//! Pipeline configuration: one JSON file, unknown keys rejected.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sumpipe_core::abstractor::PromptTemplate;
use sumpipe_core::extract::ExtractionConfig;
use sumpipe_core::ingest::CleanConfig;

use crate::error::PipelineError;

/// Named end-to-end plans. The recipe fixes the extraction size K and the
/// prompt task: A25 rewrites 25 extracted sentences, S100_25 condenses 100
/// extracted sentences to about 25, R100_25 additionally rewrites that
/// result in a separate exchange, and SR100_25 uses the combined
/// summarize-and-rewrite task with its final rewrite pass.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Recipe {
    A25,
    S100_25,
    R100_25,
    SR100_25,
}

impl Recipe {
    pub fn target_extracted(self) -> usize {
        match self {
            Recipe::A25 => 25,
            _ => 100,
        }
    }

    /// The chunk-level task plus whether a separate rewrite exchange follows
    /// the merged result.
    pub fn abstraction_plan(self, target_sentences: usize) -> (PromptTemplate, bool) {
        match self {
            Recipe::A25 => (PromptTemplate::rewrite(), false),
            Recipe::S100_25 => (PromptTemplate::summarize(target_sentences), false),
            Recipe::R100_25 => (PromptTemplate::summarize(target_sentences), true),
            Recipe::SR100_25 => (PromptTemplate::summarize_rewrite(target_sentences), false),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct AbstractionConfig {
    pub template: PromptTemplate,
    pub max_words: usize,
    pub token_budget: usize,
    pub model: String,
    pub temperature: f64,
    pub max_retries: u32,
    pub timeout_secs: u64,
}

impl Default for AbstractionConfig {
    fn default() -> Self {
        Self {
            template: PromptTemplate::default(),
            max_words: sumpipe_core::abstractor::DEFAULT_MAX_WORDS,
            token_budget: sumpipe_core::abstractor::DEFAULT_TOKEN_BUDGET,
            model: "gpt-3.5-turbo".to_string(),
            temperature: 0.0,
            max_retries: 3,
            timeout_secs: 120,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ProvidersConfig {
    /// Model name for the embeddings endpoint, or "mock".
    pub sentence_embedder: String,
    /// Only "mock" ships; no token-level wire API is defined.
    pub token_embedder: String,
    /// Only "mock" ships; no masked-prediction wire API is defined.
    pub masked_predictor: String,
    /// Chat model name, or "mock".
    pub chat: String,
    /// Endpoint base URL; the SUMPIPE_API_BASE environment variable wins.
    pub api_base: Option<String>,
    pub mask_every: usize,
    pub embed_batch_size: usize,
}

impl Default for ProvidersConfig {
    fn default() -> Self {
        Self {
            sentence_embedder: "mock".to_string(),
            token_embedder: "mock".to_string(),
            masked_predictor: "mock".to_string(),
            chat: "mock".to_string(),
            api_base: None,
            mask_every: sumpipe_core::metrics::DEFAULT_MASK_EVERY,
            embed_batch_size: 64,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PipelineConfig {
    pub corpus_dir: PathBuf,
    pub run_dir: PathBuf,
    pub recipe: Recipe,
    #[serde(default = "default_workers")]
    pub workers: usize,
    #[serde(default)]
    pub clean: CleanConfig,
    #[serde(default)]
    pub extraction: ExtractionConfig,
    #[serde(default)]
    pub abstraction: AbstractionConfig,
    #[serde(default)]
    pub providers: ProvidersConfig,
}

fn default_workers() -> usize {
    2
}

impl PipelineConfig {
    /// Parse a config file, resolve its relative paths against the file's
    /// directory, and apply the recipe's K and task overrides.
    pub fn load(path: &Path) -> Result<Self, PipelineError> {
        let content = std::fs::read_to_string(path).map_err(|e| {
            PipelineError::Config(format!("cannot read config {}: {e}", path.display()))
        })?;
        let mut config: PipelineConfig = serde_json::from_str(&content).map_err(|e| {
            PipelineError::Config(format!("invalid config {}: {e}", path.display()))
        })?;
        let base = path.parent().unwrap_or(Path::new("."));
        config.corpus_dir = resolve(base, &config.corpus_dir);
        config.run_dir = resolve(base, &config.run_dir);
        config.apply_recipe();
        config.validate()?;
        Ok(config)
    }

    /// The recipe determines K and the prompt task; explicit template/task
    /// settings in the file are overridden.
    pub fn apply_recipe(&mut self) {
        let target = self.abstraction.template.target_sentences;
        self.extraction.target_sentences = self.recipe.target_extracted();
        let (template, _) = self.recipe.abstraction_plan(target);
        self.abstraction.template = template;
    }

    /// Whether a separate rewrite exchange follows the merged summary.
    pub fn rewrite_after_merge(&self) -> bool {
        self.recipe
            .abstraction_plan(self.abstraction.template.target_sentences)
            .1
    }

    fn validate(&self) -> Result<(), PipelineError> {
        self.abstraction
            .template
            .validate()
            .map_err(PipelineError::Config)?;
        if self.workers == 0 {
            return Err(PipelineError::Config("workers must be at least 1".into()));
        }
        if self.abstraction.max_words == 0 {
            return Err(PipelineError::Config("max_words must be at least 1".into()));
        }
        let ratios = [
            ("block_keep_ratio", self.extraction.block_keep_ratio),
            ("sentence_keep_ratio", self.extraction.sentence_keep_ratio),
        ];
        for (name, value) in ratios {
            if !(value > 0.0 && value <= 1.0) {
                return Err(PipelineError::Config(format!(
                    "{name} must be in (0, 1], got {value}"
                )));
            }
        }
        Ok(())
    }
}

fn resolve(base: &Path, path: &Path) -> PathBuf {
    if path.is_absolute() {
        path.to_path_buf()
    } else {
        base.join(path)
    }
}
