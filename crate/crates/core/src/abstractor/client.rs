//! Chat-completion clients: a remote adapter for an OpenAI-style endpoint,
//! a deterministic offline mock, and a transcript replayer.

use std::collections::VecDeque;
use std::sync::Mutex;
use std::time::Duration;

use serde::{Deserialize, Serialize};
use serde_json::json;
use thiserror::Error;

use crate::segment::Segmenter;

use super::Exchange;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    System,
    User,
    Assistant,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ChatMessage {
    pub role: Role,
    pub content: String,
}

impl ChatMessage {
    pub fn user(content: impl Into<String>) -> Self {
        Self {
            role: Role::User,
            content: content.into(),
        }
    }

    pub fn assistant(content: impl Into<String>) -> Self {
        Self {
            role: Role::Assistant,
            content: content.into(),
        }
    }
}

#[derive(Debug, Error)]
pub enum ChatError {
    #[error("provider returned an empty response")]
    EmptyResponse,
    #[error("empty input text")]
    EmptyInput,
    #[error("chat request failed: {0}")]
    Provider(String),
    #[error(
        "prompt of about {estimated} tokens exceeds the {budget}-token budget; \
         reduce the chunk word limit"
    )]
    TokenBudget { estimated: usize, budget: usize },
    #[error("task not supported here: {0}")]
    Unsupported(&'static str),
    #[error("replay mismatch: recorded prompt {expected:?}, requested {got:?}")]
    ReplayMismatch { expected: String, got: String },
    #[error("replay transcript exhausted")]
    ReplayExhausted,
}

/// One conversation turn. Implementations must answer deterministically per
/// session where the backend allows it; callers serialize the requests that
/// belong to one conversation.
pub trait ChatClient: Sync {
    fn model(&self) -> &str;
    fn complete(&self, messages: &[ChatMessage]) -> Result<String, ChatError>;
}

/// Adapter for `POST {base}/v1/chat/completions` with body
/// `{"model", "messages": [{"role", "content"}], "temperature"}`; the answer
/// is read from `choices[0].message.content`.
pub struct RemoteChatClient {
    model: String,
    base: String,
    api_key: String,
    temperature: f64,
    max_retries: u32,
    backoff: Duration,
    client: reqwest::blocking::Client,
}

impl RemoteChatClient {
    pub fn new(base: &str, api_key: &str, model: &str) -> Self {
        Self {
            model: model.to_string(),
            base: base.trim_end_matches('/').to_string(),
            api_key: api_key.to_string(),
            temperature: 0.0,
            max_retries: 3,
            backoff: Duration::from_millis(500),
            client: reqwest::blocking::Client::builder()
                .timeout(Duration::from_secs(120))
                .build()
                .expect("http client"),
        }
    }

    pub fn with_temperature(mut self, temperature: f64) -> Self {
        self.temperature = temperature;
        self
    }

    pub fn with_timeout(mut self, timeout: Duration) -> Self {
        self.client = reqwest::blocking::Client::builder()
            .timeout(timeout)
            .build()
            .expect("http client");
        self
    }

    pub fn with_retries(mut self, max_retries: u32, backoff: Duration) -> Self {
        self.max_retries = max_retries;
        self.backoff = backoff;
        self
    }

    fn post(&self, messages: &[ChatMessage]) -> Result<String, String> {
        let url = format!("{}/v1/chat/completions", self.base);
        let body = json!({
            "model": self.model,
            "messages": messages,
            "temperature": self.temperature,
        });
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
        let parsed: ChatResponse = response.json().map_err(|e| e.to_string())?;
        parsed
            .choices
            .into_iter()
            .next()
            .map(|c| c.message.content)
            .ok_or_else(|| "response had no choices".to_string())
    }
}

impl ChatClient for RemoteChatClient {
    fn model(&self) -> &str {
        &self.model
    }

    fn complete(&self, messages: &[ChatMessage]) -> Result<String, ChatError> {
        let mut last_err = String::new();
        for attempt in 0..=self.max_retries {
            if attempt > 0 {
                std::thread::sleep(self.backoff * 2u32.pow(attempt - 1));
            }
            match self.post(messages) {
                Ok(content) if content.trim().is_empty() => return Err(ChatError::EmptyResponse),
                Ok(content) => return Ok(content),
                Err(e) => last_err = e,
            }
        }
        Err(ChatError::Provider(last_err))
    }
}

#[derive(Deserialize)]
struct ChatResponse {
    choices: Vec<ChatChoice>,
}

#[derive(Deserialize)]
struct ChatChoice {
    message: ChatChoiceMessage,
}

#[derive(Deserialize)]
struct ChatChoiceMessage {
    content: String,
}

fn first_sentences(text: &str, n: usize) -> String {
    Segmenter::default()
        .split_sentences(text)
        .iter()
        .take(n)
        .map(|s| s.text.as_str())
        .collect::<Vec<_>>()
        .join(" ")
}

fn payload(prompt: &str) -> &str {
    prompt
        .split_once("\n\n")
        .map(|(_, text)| text)
        .unwrap_or("")
}

fn leading_number(text: &str) -> usize {
    let digits: String = text.chars().take_while(char::is_ascii_digit).collect();
    digits.parse().unwrap_or(25)
}

/// Offline stand-in for a chat model. Summarize prompts answer with the
/// first N sentences of the embedded text, rewrite prompts echo the text,
/// and expansion follow-ups re-answer from the conversation's first prompt.
#[derive(Debug, Default)]
pub struct MockChatClient;

impl ChatClient for MockChatClient {
    fn model(&self) -> &str {
        "mock-chat"
    }

    fn complete(&self, messages: &[ChatMessage]) -> Result<String, ChatError> {
        let prompt = messages
            .iter()
            .rev()
            .find(|m| m.role == Role::User)
            .map(|m| m.content.as_str())
            .ok_or(ChatError::EmptyInput)?;

        if let Some(rest) =
            prompt.strip_prefix("Please summarize the following text in your own words in about ")
        {
            return Ok(first_sentences(payload(prompt), leading_number(rest)));
        }
        if prompt.starts_with("Please rewrite the text in your own words.") {
            return Ok(payload(prompt).to_string());
        }
        if let Some(rest) = prompt.strip_prefix("Please expand the summary to about ") {
            let first = messages
                .iter()
                .find(|m| m.role == Role::User)
                .map(|m| m.content.as_str())
                .unwrap_or(prompt);
            return Ok(first_sentences(payload(first), leading_number(rest)));
        }
        if let Some(rest) = prompt.strip_prefix("Please summarize the article ") {
            let name = rest.split(" in approximately ").next().unwrap_or(rest);
            return Ok(format!("A short account of {name}."));
        }
        Ok(prompt.to_string())
    }
}

/// Replays a recorded transcript: each call must ask the next recorded
/// prompt and receives the recorded response.
pub struct ReplayClient {
    exchanges: Mutex<VecDeque<Exchange>>,
}

impl ReplayClient {
    pub fn new(exchanges: Vec<Exchange>) -> Self {
        Self {
            exchanges: Mutex::new(exchanges.into()),
        }
    }

    /// Parse a transcript persisted as JSON lines, one exchange per line.
    pub fn from_jsonl(content: &str) -> Result<Self, serde_json::Error> {
        let exchanges = content
            .lines()
            .filter(|l| !l.trim().is_empty())
            .map(serde_json::from_str)
            .collect::<Result<Vec<Exchange>, _>>()?;
        Ok(Self::new(exchanges))
    }
}

impl ChatClient for ReplayClient {
    fn model(&self) -> &str {
        "replay"
    }

    fn complete(&self, messages: &[ChatMessage]) -> Result<String, ChatError> {
        let asked = messages
            .iter()
            .rev()
            .find(|m| m.role == Role::User)
            .map(|m| m.content.clone())
            .unwrap_or_default();
        let mut exchanges = self.exchanges.lock().expect("replay lock");
        let next = exchanges.pop_front().ok_or(ChatError::ReplayExhausted)?;
        if next.prompt != asked {
            return Err(ChatError::ReplayMismatch {
                expected: next.prompt,
                got: asked,
            });
        }
        Ok(next.response)
    }
}
