//! Sentence segmentation and word tokenization.
//!
//! The splitter is rule-based and deterministic: a sentence ends at `.`, `!`
//! or `?` followed by whitespace and an uppercase letter, or at the end of
//! the text, unless the terminating word is a known abbreviation. The
//! abbreviation list ships as a data file (one entry per line) and can be
//! replaced at construction time.

use std::collections::HashMap;
use std::collections::HashSet;
use std::io;
use std::path::Path;

use serde::{Deserialize, Serialize};

const DEFAULT_ABBREVIATIONS: &str = include_str!("../data/abbreviations.txt");

/// One segmented sentence. `span` is the `[start, end)` byte range into the
/// source text; for clean (ASCII-only) documents byte and character offsets
/// coincide. `text` always equals the source slice at `span`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SentenceRecord {
    pub index: usize,
    pub text: String,
    pub span: (usize, usize),
    pub word_count: usize,
}

pub struct Segmenter {
    abbreviations: HashSet<String>,
}

impl Default for Segmenter {
    fn default() -> Self {
        Self::new(
            DEFAULT_ABBREVIATIONS
                .lines()
                .map(str::trim)
                .filter(|l| !l.is_empty())
                .map(String::from),
        )
    }
}

impl Segmenter {
    pub fn new(abbreviations: impl IntoIterator<Item = String>) -> Self {
        Self {
            abbreviations: abbreviations.into_iter().collect(),
        }
    }

    /// Load an abbreviation list from a plain-text file, one entry per line.
    pub fn from_file(path: &Path) -> io::Result<Self> {
        let content = std::fs::read_to_string(path)?;
        Ok(Self::new(
            content
                .lines()
                .map(str::trim)
                .filter(|l| !l.is_empty())
                .map(String::from),
        ))
    }

    pub fn split_sentences(&self, text: &str) -> Vec<SentenceRecord> {
        let chars: Vec<(usize, char)> = text.char_indices().collect();
        let mut records = Vec::new();
        let mut start: Option<usize> = None;

        let mut i = 0;
        while i < chars.len() {
            let (pos, ch) = chars[i];
            if start.is_none() && !ch.is_whitespace() {
                start = Some(pos);
            }
            if matches!(ch, '.' | '!' | '?') {
                if let Some(s) = start {
                    let end = pos + ch.len_utf8();
                    if self.is_boundary(text, &chars, i) {
                        records.push(make_record(text, records.len(), s, end));
                        start = None;
                    }
                }
            }
            i += 1;
        }
        // Trailing text without terminal punctuation still forms a sentence.
        if let Some(s) = start {
            let end = s + text[s..].trim_end().len();
            if end > s {
                records.push(make_record(text, records.len(), s, end));
            }
        }
        records
    }

    /// A terminal character at `chars[i]` closes a sentence when followed by
    /// whitespace and an uppercase letter or by the end of the text, and the
    /// word it terminates is not a listed abbreviation.
    fn is_boundary(&self, text: &str, chars: &[(usize, char)], i: usize) -> bool {
        let (pos, ch) = chars[i];
        if ch == '.' && self.is_abbreviation(text, pos) {
            return false;
        }
        let mut j = i + 1;
        while j < chars.len() && chars[j].1.is_whitespace() {
            j += 1;
        }
        if j == chars.len() {
            return true;
        }
        j > i + 1 && chars[j].1.is_uppercase()
    }

    /// The word is the maximal non-whitespace run ending at the period,
    /// period included, with leading punctuation stripped so that e.g. a
    /// parenthesized "(Fig." still matches its list entry.
    fn is_abbreviation(&self, text: &str, dot_pos: usize) -> bool {
        let end = dot_pos + 1;
        let token_start = text[..dot_pos]
            .rfind(char::is_whitespace)
            .map(|p| p + text[p..].chars().next().map_or(1, char::len_utf8))
            .unwrap_or(0);
        let token = text[token_start..end].trim_start_matches(|c: char| !c.is_alphanumeric());
        !token.is_empty() && self.abbreviations.contains(token)
    }
}

fn make_record(text: &str, index: usize, start: usize, end: usize) -> SentenceRecord {
    let slice = &text[start..end];
    SentenceRecord {
        index,
        text: slice.to_string(),
        span: (start, end),
        word_count: slice.split_whitespace().count(),
    }
}

/// Lowercase word tokens: the text is lowercased and split on every
/// non-alphanumeric character. Digit runs survive as tokens.
pub fn tokenize(text: &str) -> Vec<String> {
    text.to_lowercase()
        .split(|c: char| !c.is_alphanumeric())
        .filter(|s| !s.is_empty())
        .map(String::from)
        .collect()
}

/// Multiset of n-grams keyed by the space-joined gram.
pub fn ngrams(tokens: &[String], n: usize) -> HashMap<String, usize> {
    assert!(n >= 1, "n-gram order must be at least 1");
    let mut grams = HashMap::new();
    if tokens.len() < n {
        return grams;
    }
    for window in tokens.windows(n) {
        *grams.entry(window.join(" ")).or_insert(0) += 1;
    }
    grams
}
