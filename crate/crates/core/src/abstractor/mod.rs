//! Abstractive summarization over a chat-completion provider.
//!
//! The extractive summary is cut into word-bounded chunks, each chunk is
//! summarized with the pinned prompt wording, drafts that come back too
//! short get exactly one expansion follow-up, and the chunk outputs merge in
//! order. Every prompt and response lands in an ordered transcript, detailed
//! enough to replay a run offline.

mod client;

pub use client::{
    ChatClient, ChatError, ChatMessage, MockChatClient, RemoteChatClient, ReplayClient, Role,
};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::extract::ExtractiveSummary;
use crate::segment::Segmenter;

/// Token budget estimate: one token per 0.75 words.
pub const DEFAULT_TOKEN_BUDGET: usize = 4096;
/// Chunk size: about three pages of text.
pub const DEFAULT_MAX_WORDS: usize = 1500;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Task {
    Summarize,
    Rewrite,
    SummarizeRewrite,
    StyleSummarize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Style {
    Professional,
    EasyToUnderstand,
    FactOriented,
    EmotionOriented,
    None,
}

impl Style {
    fn phrase(self) -> &'static str {
        match self {
            Style::Professional => "professional",
            Style::EasyToUnderstand => "easy to understand",
            Style::FactOriented => "fact-oriented",
            Style::EmotionOriented => "emotion-oriented",
            Style::None => "none",
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PromptTemplate {
    pub task: Task,
    pub target_sentences: usize,
    pub target_words: usize,
    pub style: Style,
}

impl Default for PromptTemplate {
    fn default() -> Self {
        Self {
            task: Task::Summarize,
            target_sentences: 25,
            target_words: 500,
            style: Style::None,
        }
    }
}

impl PromptTemplate {
    pub fn summarize(target_sentences: usize) -> Self {
        Self {
            target_sentences,
            ..Self::default()
        }
    }

    pub fn rewrite() -> Self {
        Self {
            task: Task::Rewrite,
            ..Self::default()
        }
    }

    pub fn summarize_rewrite(target_sentences: usize) -> Self {
        Self {
            task: Task::SummarizeRewrite,
            target_sentences,
            ..Self::default()
        }
    }

    pub fn styled(style: Style, target_words: usize) -> Self {
        Self {
            task: Task::StyleSummarize,
            target_words,
            style,
            ..Self::default()
        }
    }

    /// A style is set exactly when the task asks for one.
    pub fn validate(&self) -> Result<(), String> {
        match (self.task, self.style) {
            (Task::StyleSummarize, Style::None) => {
                Err("style_summarize requires a style".to_string())
            }
            (Task::StyleSummarize, _) => Ok(()),
            (_, Style::None) => Ok(()),
            (task, style) => Err(format!(
                "style {style:?} is only valid for style_summarize, not {task:?}"
            )),
        }
    }
}

/// One prompt/response pair, persisted as a JSON line.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Exchange {
    pub prompt: String,
    pub response: String,
}

/// Word-bounded chunking of the selected sentences. Ranges index into the
/// sentence list passed to [`plan_chunks`].
#[derive(Debug, Clone, PartialEq)]
pub struct ChunkPlan {
    pub chunks: Vec<std::ops::Range<usize>>,
    pub max_words: usize,
}

/// Merged abstractive summary plus the full prompt transcript.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FinalSummary {
    pub source_id: String,
    pub chunks: Vec<String>,
    pub text: String,
    #[serde(skip)]
    pub transcript: Vec<Exchange>,
}

/// A chunk failure with everything that completed before it.
#[derive(Debug, Error)]
#[error("chunk {chunk_index} failed: {source}")]
pub struct SummarizeFailure {
    pub chunk_index: usize,
    #[source]
    pub source: ChatError,
    pub partial_transcript: Vec<Exchange>,
}

/// Greedy fill in order: the next sentence joins the current chunk unless
/// the chunk is non-empty and would exceed `max_words`. A single sentence
/// longer than the limit still gets its own chunk.
pub fn plan_chunks(sentences: &[String], max_words: usize) -> ChunkPlan {
    assert!(max_words >= 1, "chunk word limit must be at least 1");
    let mut chunks = Vec::new();
    let mut start = 0;
    let mut words = 0;
    for (i, sentence) in sentences.iter().enumerate() {
        let n = sentence.split_whitespace().count();
        if i > start && words + n > max_words {
            chunks.push(start..i);
            start = i;
            words = 0;
        }
        words += n;
    }
    if start < sentences.len() {
        chunks.push(start..sentences.len());
    }
    ChunkPlan { chunks, max_words }
}

/// Instantiate the prompt for a task. The summarize wording also serves the
/// chunk phase of summarize-and-rewrite; the style prompt takes the article
/// name as its text argument.
pub fn render_prompt(template: &PromptTemplate, text: &str) -> String {
    match template.task {
        Task::Summarize | Task::SummarizeRewrite => format!(
            "Please summarize the following text in your own words in about {} sentences.\n\n{text}",
            template.target_sentences
        ),
        Task::Rewrite => format!("Please rewrite the text in your own words.\n\n{text}"),
        Task::StyleSummarize => format!(
            "Please summarize the article {text} in approximately {} words using a {} style.",
            template.target_words,
            template.style.phrase()
        ),
    }
}

fn estimate_tokens(text: &str) -> usize {
    let words = text.split_whitespace().count();
    (words as f64 / 0.75).ceil() as usize
}

fn complete_non_empty(
    client: &dyn ChatClient,
    messages: &[ChatMessage],
) -> Result<String, ChatError> {
    let response = client.complete(messages)?;
    if response.trim().is_empty() {
        return Err(ChatError::EmptyResponse);
    }
    Ok(response)
}

/// Summarize one chunk in a fresh conversation. The conversation is returned
/// so a refinement turn can continue it.
pub fn summarize_chunk(
    client: &dyn ChatClient,
    chunk_text: &str,
    template: &PromptTemplate,
    token_budget: usize,
    transcript: &mut Vec<Exchange>,
) -> Result<(String, Vec<ChatMessage>), ChatError> {
    let prompt = render_prompt(template, chunk_text);
    let estimated = estimate_tokens(&prompt);
    if estimated > token_budget {
        return Err(ChatError::TokenBudget {
            estimated,
            budget: token_budget,
        });
    }
    let messages = vec![ChatMessage::user(prompt.clone())];
    let response = complete_non_empty(client, &messages)?;
    transcript.push(Exchange {
        prompt,
        response: response.clone(),
    });
    Ok((response, messages))
}

fn sentence_count(text: &str) -> usize {
    Segmenter::default().split_sentences(text).len()
}

/// One expansion round at most: a draft shorter than 0.8 of the sentence
/// target gets a single follow-up in the same conversation; anything longer
/// is returned unchanged. Repeated expansion requests drift off-document, so
/// one round is the ceiling.
pub fn refine_length(
    client: &dyn ChatClient,
    draft: String,
    template: &PromptTemplate,
    conversation: &mut Vec<ChatMessage>,
    transcript: &mut Vec<Exchange>,
) -> Result<String, ChatError> {
    let count = sentence_count(&draft) as f64;
    if count >= 0.8 * template.target_sentences as f64 {
        return Ok(draft);
    }
    let follow_up = format!(
        "Please expand the summary to about {} sentences by adding more details.",
        template.target_sentences
    );
    conversation.push(ChatMessage::assistant(draft));
    conversation.push(ChatMessage::user(follow_up.clone()));
    let revised = complete_non_empty(client, conversation)?;
    conversation.push(ChatMessage::assistant(revised.clone()));
    transcript.push(Exchange {
        prompt: follow_up,
        response: revised.clone(),
    });
    Ok(revised)
}

/// Single rewrite exchange.
pub fn paraphrase(
    client: &dyn ChatClient,
    text: &str,
    transcript: &mut Vec<Exchange>,
) -> Result<String, ChatError> {
    if text.trim().is_empty() {
        return Err(ChatError::EmptyInput);
    }
    let prompt = render_prompt(&PromptTemplate::rewrite(), text);
    let response = complete_non_empty(client, &[ChatMessage::user(prompt.clone())])?;
    transcript.push(Exchange {
        prompt,
        response: response.clone(),
    });
    Ok(response)
}

/// Chunk the extractive summary and drive the provider chunk by chunk, in
/// order. Summarize-style drafts may get one refinement each; the
/// summarize-and-rewrite task adds a final rewrite exchange over the merged
/// text. Chunk outputs merge with paragraph breaks. Any failure aborts and
/// hands back the transcript collected so far.
pub fn summarize_document(
    client: &dyn ChatClient,
    summary: &ExtractiveSummary,
    template: &PromptTemplate,
    max_words: usize,
    token_budget: usize,
) -> Result<FinalSummary, SummarizeFailure> {
    let segmenter = Segmenter::default();
    let sentences: Vec<String> = segmenter
        .split_sentences(&summary.text)
        .into_iter()
        .map(|s| s.text)
        .collect();
    let plan = plan_chunks(&sentences, max_words);

    let mut transcript = Vec::new();
    let mut chunk_texts = Vec::with_capacity(plan.chunks.len());
    for (chunk_index, range) in plan.chunks.iter().enumerate() {
        let chunk_text = sentences[range.clone()].join(" ");
        let result = (|| {
            let (draft, mut conversation) =
                summarize_chunk(client, &chunk_text, template, token_budget, &mut transcript)?;
            match template.task {
                Task::Summarize | Task::SummarizeRewrite => {
                    refine_length(client, draft, template, &mut conversation, &mut transcript)
                }
                Task::Rewrite => Ok(draft),
                Task::StyleSummarize => Err(ChatError::Unsupported(
                    "style summaries are a single exchange over the article name",
                )),
            }
        })();
        match result {
            Ok(text) => chunk_texts.push(text),
            Err(source) => {
                return Err(SummarizeFailure {
                    chunk_index,
                    source,
                    partial_transcript: transcript,
                })
            }
        }
    }

    let merged = chunk_texts.join("\n\n");
    let text = if template.task == Task::SummarizeRewrite && !merged.is_empty() {
        match paraphrase(client, &merged, &mut transcript) {
            Ok(rewritten) => rewritten,
            Err(source) => {
                return Err(SummarizeFailure {
                    chunk_index: plan.chunks.len(),
                    source,
                    partial_transcript: transcript,
                })
            }
        }
    } else {
        merged
    };

    Ok(FinalSummary {
        source_id: summary.source_id.clone(),
        chunks: chunk_texts,
        text,
        transcript,
    })
}
