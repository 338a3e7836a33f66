//! Sentence embeddings over an OpenAI-style embeddings endpoint.

use std::time::Duration;

use serde::Deserialize;
use serde_json::json;

use super::{EmbedError, EmbeddingVector, SentenceEmbedder};

/// Environment variable holding the bearer credential.
pub const API_KEY_ENV: &str = "SUMPIPE_API_KEY";
/// Environment variable overriding the endpoint base URL.
pub const API_BASE_ENV: &str = "SUMPIPE_API_BASE";

/// Adapter for `POST {base}/v1/embeddings` with body
/// `{"model": name, "input": [texts...]}` and response
/// `{"data": [{"index": i, "embedding": [...]}, ...]}`.
///
/// Inputs are sent in batches of at most `batch_size`; each batch is retried
/// with exponential backoff before the whole call fails.
pub struct RemoteSentenceEmbedder {
    model: String,
    base: String,
    api_key: String,
    batch_size: usize,
    max_retries: u32,
    backoff: Duration,
    client: reqwest::blocking::Client,
}

impl RemoteSentenceEmbedder {
    pub fn new(base: &str, api_key: &str, model: &str) -> Self {
        Self {
            model: model.to_string(),
            base: base.trim_end_matches('/').to_string(),
            api_key: api_key.to_string(),
            batch_size: 64,
            max_retries: 3,
            backoff: Duration::from_millis(500),
            client: reqwest::blocking::Client::builder()
                .timeout(Duration::from_secs(60))
                .build()
                .expect("http client"),
        }
    }

    pub fn with_batch_size(mut self, batch_size: usize) -> Self {
        assert!(batch_size >= 1);
        self.batch_size = batch_size;
        self
    }

    pub fn with_retries(mut self, max_retries: u32, backoff: Duration) -> Self {
        self.max_retries = max_retries;
        self.backoff = backoff;
        self
    }

    fn post_batch(&self, texts: &[String]) -> Result<Vec<EmbeddingVector>, String> {
        let url = format!("{}/v1/embeddings", self.base);
        let body = json!({ "model": self.model, "input": texts });
        let response = self
            .client
            .post(&url)
            .bearer_auth(&self.api_key)
            .json(&body)
            .send()
            .map_err(|e| e.to_string())?;
        let status = response.status();
        if !status.is_success() {
            let text = response.text().unwrap_or_default();
            return Err(format!("HTTP {status}: {text}"));
        }
        let parsed: EmbeddingsResponse = response.json().map_err(|e| e.to_string())?;
        let mut rows = parsed.data;
        rows.sort_by_key(|r| r.index);
        if rows.len() != texts.len() {
            return Err(format!(
                "expected {} embeddings, got {}",
                texts.len(),
                rows.len()
            ));
        }
        Ok(rows
            .into_iter()
            .map(|r| EmbeddingVector::new(r.embedding))
            .collect())
    }
}

impl SentenceEmbedder for RemoteSentenceEmbedder {
    fn name(&self) -> &str {
        &self.model
    }

    fn embed_batch(&self, texts: &[String]) -> Result<Vec<EmbeddingVector>, EmbedError> {
        let mut out = Vec::with_capacity(texts.len());
        for (batch_no, batch) in texts.chunks(self.batch_size).enumerate() {
            let start = batch_no * self.batch_size;
            let mut last_err = String::new();
            let mut done = false;
            for attempt in 0..=self.max_retries {
                if attempt > 0 {
                    std::thread::sleep(self.backoff * 2u32.pow(attempt - 1));
                }
                match self.post_batch(batch) {
                    Ok(vectors) => {
                        out.extend(vectors);
                        done = true;
                        break;
                    }
                    Err(e) => last_err = e,
                }
            }
            if !done {
                return Err(EmbedError::Batch {
                    index: start,
                    message: last_err,
                });
            }
        }
        Ok(out)
    }
}

#[derive(Deserialize)]
struct EmbeddingsResponse {
    data: Vec<EmbeddingRow>,
}

#[derive(Deserialize)]
struct EmbeddingRow {
    index: usize,
    embedding: Vec<f64>,
}
