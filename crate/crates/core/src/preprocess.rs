//! Raw text → [`Document`]: sentence segmentation, Unicode word
//! tokenization, stop-word removal, embedding attachment.

use std::collections::HashSet;
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use unicode_segmentation::UnicodeSegmentation;

use crate::embeddings::EmbeddingTable;
use crate::error::{Error, Result};

/// Sentence-boundary rules per language family.
///
/// `bn` uses the danda plus `?`/`!`; every other tag maps to the generic
/// profile which additionally treats `.` as a terminator. The stop-word list
/// is always an external file, so `hi`/`mr`/`tr` differ from `generic` only
/// by which list the caller supplies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LanguageProfile {
    Bengali,
    Generic,
}

impl LanguageProfile {
    pub fn from_tag(tag: &str) -> Result<Self> {
        match tag {
            "bn" => Ok(LanguageProfile::Bengali),
            "hi" | "mr" | "tr" | "generic" => Ok(LanguageProfile::Generic),
            other => Err(Error::UnknownLanguage(other.to_string())),
        }
    }

    pub fn sentence_delimiters(self) -> &'static [char] {
        match self {
            LanguageProfile::Bengali => &['\u{0964}', '?', '!'],
            LanguageProfile::Generic => &['\u{0964}', '?', '!', '.'],
        }
    }
}

/// Exact-form stop-word membership set.
#[derive(Debug, Clone, Default)]
pub struct StopwordList {
    words: HashSet<String>,
}

impl StopwordList {
    pub fn new(words: impl IntoIterator<Item = String>) -> Self {
        Self {
            words: words.into_iter().collect(),
        }
    }

    /// An empty list; nothing is filtered.
    pub fn empty() -> Self {
        Self::default()
    }

    /// Loads a UTF-8 stop-word file: one word per line, `#`-prefixed comment
    /// lines ignored. A supplied file that yields no words is an error.
    pub fn from_file(path: &Path) -> Result<Self> {
        let file = File::open(path).map_err(|e| Error::io(path, e))?;
        let mut words = HashSet::new();
        for line in BufReader::new(file).lines() {
            let line = line.map_err(|e| Error::io(path, e))?;
            let word = line.trim();
            if word.is_empty() || word.starts_with('#') {
                continue;
            }
            words.insert(word.to_string());
        }
        if words.is_empty() {
            return Err(Error::EmptyStopwords { path: path.into() });
        }
        Ok(Self { words })
    }

    pub fn contains(&self, word: &str) -> bool {
        self.words.contains(word)
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }
}

/// One input sentence with its position, surface text, filtered tokens and
/// the word vectors found for them (widened to f64 for the distance math).
#[derive(Debug, Clone)]
pub struct Sentence {
    /// Zero-based position in the document.
    pub index: usize,
    /// Original sentence text, delimiter included.
    pub raw_text: String,
    /// Tokens after stop-word removal, in order, duplicates preserved.
    pub tokens: Vec<String>,
    /// One vector per token found in the embedding table (a multiset:
    /// repeated tokens contribute repeated vectors).
    pub vectors: Vec<Vec<f64>>,
    /// Tokens without a vector.
    pub oov_count: usize,
}

impl Sentence {
    /// Eligible sentences have at least one embedded token; only they enter
    /// similarity and clustering.
    pub fn is_eligible(&self) -> bool {
        !self.vectors.is_empty()
    }
}

/// Ordered sentences of one input text.
#[derive(Debug, Clone)]
pub struct Document {
    pub sentences: Vec<Sentence>,
    pub language_tag: String,
}

impl Document {
    pub fn eligible_sentences(&self) -> impl Iterator<Item = &Sentence> {
        self.sentences.iter().filter(|s| s.is_eligible())
    }

    pub fn eligible_count(&self) -> usize {
        self.eligible_sentences().count()
    }
}

/// Splits text into raw sentence strings on the profile's delimiters.
/// A delimiter run stays attached to its sentence; trailing text without a
/// terminator is flushed as a final sentence.
pub fn split_sentences(text: &str, profile: LanguageProfile) -> Result<Vec<String>> {
    if text.trim().is_empty() {
        return Err(Error::EmptyDocument);
    }
    let delimiters = profile.sentence_delimiters();
    let mut sentences = Vec::new();
    let mut current = String::new();
    let mut in_delimiter_run = false;

    for ch in text.chars() {
        let is_delimiter = delimiters.contains(&ch);
        if in_delimiter_run && !is_delimiter {
            flush_sentence(&mut current, &mut sentences);
            in_delimiter_run = false;
        }
        current.push(ch);
        if is_delimiter {
            in_delimiter_run = true;
        }
    }
    flush_sentence(&mut current, &mut sentences);
    Ok(sentences)
}

fn flush_sentence(current: &mut String, out: &mut Vec<String>) {
    let trimmed = current.trim();
    if !trimmed.is_empty() {
        out.push(trimmed.to_string());
    }
    current.clear();
}

/// Unicode-aware word tokenization (UAX #29 word boundaries). Punctuation
/// is discarded; combining marks, viramas and joiners stay inside their
/// word, which plain alphanumeric-run splitting would break for Indic
/// scripts.
pub fn tokenize(text: &str) -> Vec<String> {
    text.unicode_words().map(str::to_string).collect()
}

/// Tokenizes and drops stop words, preserving order and duplicates.
pub fn tokenize_and_filter(text: &str, stopwords: &StopwordList) -> Vec<String> {
    text.unicode_words()
        .filter(|w| !stopwords.contains(w))
        .map(str::to_string)
        .collect()
}

/// Builds the full [`Document`]: split, tokenize, filter, attach vectors.
///
/// Out-of-vocabulary tokens are counted and excluded from `vectors` but kept
/// in `tokens` (TF-IDF scoring operates on surface forms). Errors if every
/// sentence ends up without an embedded token.
pub fn build_document(
    text: &str,
    language_tag: &str,
    stopwords: &StopwordList,
    table: &EmbeddingTable,
) -> Result<Document> {
    let profile = LanguageProfile::from_tag(language_tag)?;
    let raw_sentences = split_sentences(text, profile)?;

    let sentences: Vec<Sentence> = raw_sentences
        .into_iter()
        .enumerate()
        .map(|(index, raw_text)| {
            let tokens = tokenize_and_filter(&raw_text, stopwords);
            let mut vectors = Vec::new();
            let mut oov_count = 0;
            for token in &tokens {
                match table.lookup(token) {
                    Some(v) => vectors.push(v.iter().map(|&c| c as f64).collect()),
                    None => oov_count += 1,
                }
            }
            Sentence {
                index,
                raw_text,
                tokens,
                vectors,
                oov_count,
            }
        })
        .collect();

    if sentences.iter().all(|s| !s.is_eligible()) {
        return Err(Error::NoEligibleSentences);
    }

    Ok(Document {
        sentences,
        language_tag: language_tag.to_string(),
    })
}
