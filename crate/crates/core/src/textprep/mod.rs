//! Text normalization and shingling.
//!
//! `normalize` turns raw text into a stream of folded, stop-word-filtered,
//! lightly stemmed tokens; `shingles` fingerprints every run of `k`
//! consecutive tokens. Both are pure and deterministic.

pub mod fold;
mod stem;

use std::collections::{BTreeSet, HashSet};
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use unicode_normalization::UnicodeNormalization;

use crate::error::{AuditError, Result};
use crate::hashing::{fingerprint, SHINGLE_SEED, SHINGLE_SEPARATOR};
use crate::ingest::ZoneLabel;

pub use fold::{fold, FoldedText};
pub use stem::stem;

const BUNDLED_ES: &str = include_str!("stopwords_es.txt");
const BUNDLED_EN: &str = include_str!("stopwords_en.txt");

pub const DEFAULT_SHINGLE_K: usize = 3;
const MIN_TOKEN_CHARS: usize = 2;

/// Stop-word set, stored in the same folded form tokens are compared in.
#[derive(Debug, Clone, Default)]
pub struct StopWords {
    words: HashSet<String>,
}

impl StopWords {
    pub fn from_words<'a>(words: impl IntoIterator<Item = &'a str>, fold_diacritics: bool) -> Self {
        let words = words
            .into_iter()
            .map(str::trim)
            .filter(|w| !w.is_empty() && !w.starts_with('#'))
            .map(|w| fold_word(w, fold_diacritics))
            .collect();
        StopWords { words }
    }

    /// Bundled Spanish and English lists.
    pub fn bundled(fold_diacritics: bool) -> Self {
        Self::from_words(
            BUNDLED_ES.lines().chain(BUNDLED_EN.lines()),
            fold_diacritics,
        )
    }

    /// One token per line, UTF-8.
    pub fn from_file(path: &Path, fold_diacritics: bool) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| AuditError::io(path, e))?;
        Ok(Self::from_words(text.lines(), fold_diacritics))
    }

    pub fn contains(&self, token: &str) -> bool {
        self.words.contains(token)
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }
}

fn fold_word(w: &str, fold_diacritics: bool) -> String {
    let mut out = String::with_capacity(w.len());
    for c in w.nfc() {
        fold::fold_char(c, fold_diacritics, &mut out);
    }
    out
}

#[derive(Debug, Clone)]
pub struct TextPrepConfig {
    pub fold_diacritics: bool,
    pub stem: bool,
    pub stopwords: Arc<StopWords>,
}

impl Default for TextPrepConfig {
    fn default() -> Self {
        TextPrepConfig {
            fold_diacritics: true,
            stem: true,
            stopwords: Arc::new(StopWords::bundled(true)),
        }
    }
}

impl TextPrepConfig {
    pub fn without_stemming(mut self) -> Self {
        self.stem = false;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TokenStream {
    pub tokens: Vec<String>,
    /// Identifier of the document the tokens came from.
    pub source: String,
    pub zone: Option<ZoneLabel>,
}

impl TokenStream {
    pub fn new(tokens: Vec<String>) -> Self {
        TokenStream {
            tokens,
            source: String::new(),
            zone: None,
        }
    }

    pub fn with_source(mut self, source: impl Into<String>, zone: Option<ZoneLabel>) -> Self {
        self.source = source.into();
        self.zone = zone;
        self
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }
}

pub fn normalize(text: &str, config: &TextPrepConfig) -> TokenStream {
    let mut folded = String::with_capacity(text.len());
    for c in text.nfc() {
        fold::fold_char(c, config.fold_diacritics, &mut folded);
    }

    let tokens = folded
        .split(|c: char| !c.is_alphanumeric())
        .filter(|t| !t.is_empty() && !config.stopwords.contains(t))
        .filter_map(|t| {
            let t = if config.stem { stem(t) } else { t };
            // stemming can land on a stop-word ("paras" -> "para")
            if t.chars().count() < MIN_TOKEN_CHARS || config.stopwords.contains(t) {
                None
            } else {
                Some(t.to_owned())
            }
        })
        .collect();
    TokenStream::new(tokens)
}

/// Fingerprints of the contiguous `k`-token windows of a stream.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShingleSet {
    pub k: usize,
    pub hashes: BTreeSet<u64>,
}

impl ShingleSet {
    pub fn len(&self) -> usize {
        self.hashes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.hashes.is_empty()
    }

    /// Exact Jaccard similarity `|A ∩ B| / |A ∪ B|`; two empty sets give 0.
    pub fn jaccard(&self, other: &ShingleSet) -> f64 {
        let inter = self.hashes.intersection(&other.hashes).count();
        let union = self.hashes.len() + other.hashes.len() - inter;
        if union == 0 {
            0.0
        } else {
            inter as f64 / union as f64
        }
    }
}

/// The token windows joined with U+0001, i.e. the exact strings that get
/// fingerprinted.
pub fn shingle_strings(stream: &TokenStream, k: usize) -> impl Iterator<Item = String> + '_ {
    let k = k.max(1);
    stream
        .tokens
        .windows(k)
        .map(|w| w.join(&SHINGLE_SEPARATOR.to_string()))
}

pub fn shingle_fingerprint(shingle: &str) -> u64 {
    fingerprint(shingle.as_bytes(), SHINGLE_SEED)
}

pub fn shingles(stream: &TokenStream, k: usize) -> Result<ShingleSet> {
    if k < 1 {
        return Err(AuditError::invalid("shingle width k must be at least 1"));
    }
    let hashes = shingle_strings(stream, k)
        .map(|s| shingle_fingerprint(&s))
        .collect();
    Ok(ShingleSet { k, hashes })
}
