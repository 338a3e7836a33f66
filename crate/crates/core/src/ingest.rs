//! Raw text cleaning.
//!
//! Input is extracted document text, one physical line per record, polluted
//! with headers, page numbers and captions. Cleaning runs in three steps:
//! configured patterns are blanked out, physical lines are woven into
//! logical lines, and the result is normalized into a single ASCII string
//! with short sentences removed.

use regex::Regex;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::segment::Segmenter;

/// Extracted document text, line order preserved from the source.
#[derive(Debug, Clone, PartialEq)]
pub struct RawText {
    pub source_id: String,
    pub lines: Vec<String>,
}

impl RawText {
    pub fn new(source_id: &str, lines: Vec<String>) -> Self {
        Self {
            source_id: source_id.to_string(),
            lines,
        }
    }

    pub fn from_str(source_id: &str, text: &str) -> Self {
        Self::new(source_id, text.lines().map(String::from).collect())
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CleanConfig {
    /// Regular expressions whose matches are replaced by a single space.
    pub strip_patterns: Vec<String>,
    /// How many preceding lines the weaver examines.
    pub window: usize,
    /// Sentences with fewer word tokens than this are dropped.
    pub min_sentence_words: usize,
    /// Drop lines containing no alphabetic character before weaving.
    pub drop_nonalpha_lines: bool,
}

impl Default for CleanConfig {
    fn default() -> Self {
        Self {
            strip_patterns: Vec::new(),
            window: 5,
            min_sentence_words: 4,
            drop_nonalpha_lines: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Category {
    BusinessArticle,
    EconomicReport,
    Book,
    Other,
}

impl Category {
    /// Short code used in report row labels.
    pub fn short_code(self) -> &'static str {
        match self {
            Category::BusinessArticle => "B",
            Category::EconomicReport => "E",
            Category::Book => "Bk",
            Category::Other => "O",
        }
    }
}

/// Normalized document: pure 7-bit text with single spaces.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CleanDocument {
    pub source_id: String,
    pub category: Category,
    pub text: String,
    pub word_count: usize,
}

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("invalid strip pattern `{pattern}`: {source}")]
    InvalidPattern {
        pattern: String,
        #[source]
        source: Box<regex::Error>,
    },
}

/// Replace every match of every configured pattern with one space. The line
/// count is unchanged; replacement with a space rather than nothing keeps
/// adjacent words from gluing together.
pub fn strip_patterns(raw: &RawText, cfg: &CleanConfig) -> Result<RawText, IngestError> {
    let mut compiled = Vec::with_capacity(cfg.strip_patterns.len());
    for pattern in &cfg.strip_patterns {
        let re = Regex::new(pattern).map_err(|e| IngestError::InvalidPattern {
            pattern: pattern.clone(),
            source: Box::new(e),
        })?;
        compiled.push(re);
    }
    let lines = raw
        .lines
        .iter()
        .map(|line| {
            let mut out = line.clone();
            for re in &compiled {
                out = re.replace_all(&out, " ").into_owned();
            }
            out
        })
        .collect();
    Ok(RawText {
        source_id: raw.source_id.clone(),
        lines,
    })
}

fn ends_sentence(line: &str) -> bool {
    const CLOSERS: &[char] = &['"', '\'', ')', ']', '}', '\u{201d}', '\u{2019}', '\u{bb}'];
    let trimmed = line.trim_end();
    let mut chars = trimmed.chars().rev();
    match chars.next() {
        Some('.' | '!' | '?') => true,
        Some(c) if CLOSERS.contains(&c) => {
            matches!(chars.next(), Some('.' | '!' | '?'))
        }
        _ => false,
    }
}

fn starts_uppercase(line: &str) -> bool {
    line.trim_start()
        .chars()
        .next()
        .is_some_and(char::is_uppercase)
}

/// Weave physical lines into logical lines, bottom-up.
///
/// A pre-pass drops lines with no alphabetic character (page numbers,
/// rules). Scanning starts with the last line as the open unit and examines
/// up to `window` preceding lines, nearest first:
///
/// 1. the nearest line that ends a sentence closes the unit — intervening
///    lines are prepended, the unit is emitted, and that line opens the next
///    unit;
/// 2. otherwise the nearest line starting with an uppercase letter begins
///    the unit — it and the intervening lines are prepended, the unit is
///    emitted, and the line above it opens the next unit;
/// 3. otherwise the window is discarded as noise and the unit stays open.
pub fn weave_lines(raw: &RawText, cfg: &CleanConfig) -> RawText {
    let lines: Vec<&str> = raw
        .lines
        .iter()
        .map(String::as_str)
        .filter(|l| !cfg.drop_nonalpha_lines || l.chars().any(char::is_alphabetic))
        .collect();

    let mut emitted: Vec<String> = Vec::new();
    if !lines.is_empty() {
        let window = cfg.window.max(1) as isize;
        let join = |indices: &[usize]| -> String {
            indices
                .iter()
                .map(|&i| lines[i].trim())
                .collect::<Vec<_>>()
                .join(" ")
        };

        let mut unit: Vec<usize> = vec![lines.len() - 1];
        let mut above: isize = lines.len() as isize - 2;
        loop {
            if above < 0 {
                emitted.push(join(&unit));
                break;
            }
            let lo = (above - window + 1).max(0) as usize;
            let hi = above as usize;
            if let Some(j) = (lo..=hi).rev().find(|&j| ends_sentence(lines[j])) {
                let mut closed: Vec<usize> = ((j + 1)..=hi).collect();
                closed.extend_from_slice(&unit);
                emitted.push(join(&closed));
                unit = vec![j];
                above = j as isize - 1;
            } else if let Some(j) = (lo..=hi).rev().find(|&j| starts_uppercase(lines[j])) {
                let mut closed: Vec<usize> = (j..=hi).collect();
                closed.extend_from_slice(&unit);
                emitted.push(join(&closed));
                if j == 0 {
                    break;
                }
                unit = vec![j - 1];
                above = j as isize - 2;
            } else {
                above = lo as isize - 1;
            }
        }
        emitted.reverse();
    }

    RawText {
        source_id: raw.source_id.clone(),
        lines: emitted,
    }
}

/// Normalize woven text: drop non-ASCII characters, collapse whitespace
/// runs, and remove sentences shorter than the configured word minimum.
pub fn normalize(raw: &RawText, cfg: &CleanConfig) -> CleanDocument {
    let joined = raw.lines.join(" ");
    let ascii: String = joined.chars().filter(char::is_ascii).collect();
    let collapsed = ascii.split_whitespace().collect::<Vec<_>>().join(" ");

    let segmenter = Segmenter::default();
    let kept: Vec<&str> = segmenter
        .split_sentences(&collapsed)
        .iter()
        .filter(|s| s.word_count >= cfg.min_sentence_words)
        .map(|s| &collapsed[s.span.0..s.span.1])
        .collect::<Vec<_>>();
    let text = kept.join(" ");
    let word_count = text.split_whitespace().count();

    CleanDocument {
        source_id: raw.source_id.clone(),
        category: Category::Other,
        text,
        word_count,
    }
}

/// Full cleaning chain: strip, weave, normalize.
pub fn ingest(raw: &RawText, cfg: &CleanConfig) -> Result<CleanDocument, IngestError> {
    let stripped = strip_patterns(raw, cfg)?;
    let woven = weave_lines(&stripped, cfg);
    Ok(normalize(&woven, cfg))
}
