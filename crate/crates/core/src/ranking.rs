//! Sentence scoring and summary assembly: TF-IDF over a background corpus,
//! one representative per cluster, appearance-order concatenation.
//!
//! TF is the occurrence count of a word across the whole input document,
//! not within the sentence; IDF comes from document frequencies over a
//! separate corpus, smoothed so it is strictly positive.

use std::collections::{HashMap, HashSet};
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::clustering::ClusterAssignment;
use crate::error::{Error, Result};
use crate::preprocess::{tokenize_and_filter, Document, Sentence, StopwordList};

/// Document-frequency statistics over a background corpus.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdfTable {
    document_count: usize,
    doc_frequency: HashMap<String, usize>,
}

impl IdfTable {
    pub fn new(document_count: usize, doc_frequency: HashMap<String, usize>) -> Result<Self> {
        if document_count == 0 {
            return Err(Error::EmptyCorpus);
        }
        if let Some((w, &df)) = doc_frequency.iter().find(|(_, &df)| df > document_count) {
            return Err(Error::InvalidParam {
                name: "doc_frequency",
                msg: format!("{w:?} appears in {df} of {document_count} documents"),
            });
        }
        Ok(Self {
            document_count,
            doc_frequency,
        })
    }

    pub fn document_count(&self) -> usize {
        self.document_count
    }

    pub fn doc_frequency(&self, word: &str) -> usize {
        self.doc_frequency.get(word).copied().unwrap_or(0)
    }

    /// Smoothed inverse document frequency:
    /// `ln((1 + |C|) / (1 + df(w))) + 1`. Strictly positive; unseen words
    /// get the maximum value `ln(1 + |C|) + 1`.
    pub fn idf(&self, word: &str) -> f64 {
        let df = self.doc_frequency(word);
        ((1.0 + self.document_count as f64) / (1.0 + df as f64)).ln() + 1.0
    }

    /// Writes the table: line 1 `#docs <count>`, then `<word>\t<df>` lines
    /// sorted by word.
    pub fn write(&self, path: &Path) -> Result<()> {
        let file = File::create(path).map_err(|e| Error::io(path, e))?;
        let mut w = BufWriter::new(file);
        let io_err = |e| Error::io(path, e);
        writeln!(w, "#docs {}", self.document_count).map_err(io_err)?;
        let mut words: Vec<&String> = self.doc_frequency.keys().collect();
        words.sort();
        for word in words {
            writeln!(w, "{word}\t{}", self.doc_frequency[word]).map_err(io_err)?;
        }
        w.flush().map_err(io_err)
    }

    /// Reads the format produced by [`IdfTable::write`].
    pub fn read(path: &Path) -> Result<Self> {
        let file = File::open(path).map_err(|e| Error::io(path, e))?;
        let mut lines = BufReader::new(file).lines().enumerate();
        let bad = |line: usize, msg: String| Error::IdfFormat {
            path: path.into(),
            line: line + 1,
            msg,
        };

        let (_, header) = lines.next().ok_or_else(|| bad(0, "empty file".into()))?;
        let header = header.map_err(|e| Error::io(path, e))?;
        let document_count = header
            .strip_prefix("#docs ")
            .and_then(|c| c.trim().parse::<usize>().ok())
            .filter(|&c| c > 0)
            .ok_or_else(|| bad(0, format!("expected `#docs <count>`, got {header:?}")))?;

        let mut doc_frequency = HashMap::new();
        for (idx, line) in lines {
            let line = line.map_err(|e| Error::io(path, e))?;
            if line.trim().is_empty() {
                continue;
            }
            let (word, df) = line
                .split_once('\t')
                .ok_or_else(|| bad(idx, format!("expected `<word>\\t<df>`, got {line:?}")))?;
            let df: usize = df
                .trim()
                .parse()
                .map_err(|_| bad(idx, format!("bad frequency {df:?}")))?;
            if df > document_count {
                return Err(bad(idx, format!("frequency {df} exceeds #docs")));
            }
            doc_frequency.insert(word.to_string(), df);
        }
        IdfTable::new(document_count, doc_frequency)
    }
}

/// How the representative of each cluster is picked.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SummaryStrategy {
    /// Highest document-level TF-IDF score, ties to the earliest sentence.
    Tfidf,
    /// Earliest-appearing sentence of the cluster.
    Lead,
}

impl std::str::FromStr for SummaryStrategy {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "tfidf" => Ok(SummaryStrategy::Tfidf),
            "lead" => Ok(SummaryStrategy::Lead),
            other => Err(format!("unknown strategy {other:?} (expected tfidf|lead)")),
        }
    }
}

impl std::fmt::Display for SummaryStrategy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            SummaryStrategy::Tfidf => "tfidf",
            SummaryStrategy::Lead => "lead",
        })
    }
}

/// The chosen sentences, sorted by original index, one per cluster.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SummarySelection {
    pub chosen_indexes: Vec<usize>,
    pub strategy: SummaryStrategy,
}

/// Counts documents containing each word (document frequencies, not
/// occurrences) over the given corpus files, tokenized with the same rules
/// as the summarizer input.
pub fn build_idf(
    corpus_paths: &[impl AsRef<Path>],
    stopwords: &StopwordList,
) -> Result<IdfTable> {
    let mut doc_frequency: HashMap<String, usize> = HashMap::new();
    let mut document_count = 0usize;

    for path in corpus_paths {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        ingest_idf_document(&text, stopwords, &mut doc_frequency, &mut document_count);
    }
    IdfTable::new(document_count, doc_frequency)
}

/// Folds one corpus document into running document-frequency counts.
pub fn ingest_idf_document(
    text: &str,
    stopwords: &StopwordList,
    doc_frequency: &mut HashMap<String, usize>,
    document_count: &mut usize,
) {
    *document_count += 1;
    let mut seen = HashSet::new();
    for token in tokenize_and_filter(text, stopwords) {
        if seen.insert(token.clone()) {
            *doc_frequency.entry(token).or_insert(0) += 1;
        }
    }
}

/// Occurrence count of every token across the whole document (the TF side
/// of the score; stop words are already gone from `tokens`).
pub fn document_term_frequency(doc: &Document) -> HashMap<&str, usize> {
    let mut tf = HashMap::new();
    for sentence in &doc.sentences {
        for token in &sentence.tokens {
            *tf.entry(token.as_str()).or_insert(0) += 1;
        }
    }
    tf
}

/// Σ over the sentence's tokens of TF(w)·IDF(w). Out-of-vocabulary tokens
/// still contribute; an empty token list scores 0.
pub fn tfidf_sentence_score(sentence: &Sentence, doc: &Document, table: &IdfTable) -> f64 {
    let tf = document_term_frequency(doc);
    score_with_tf(sentence, &tf, table)
}

fn score_with_tf(sentence: &Sentence, tf: &HashMap<&str, usize>, table: &IdfTable) -> f64 {
    sentence
        .tokens
        .iter()
        .map(|t| tf.get(t.as_str()).copied().unwrap_or(0) as f64 * table.idf(t))
        .sum()
}

/// Picks one representative per cluster and returns them sorted by original
/// index. `tfidf`: maximum score, ties to the smaller index. `lead`: the
/// smallest index.
pub fn select_representatives(
    clusters: &ClusterAssignment,
    doc: &Document,
    table: &IdfTable,
    strategy: SummaryStrategy,
) -> SummarySelection {
    let tf = document_term_frequency(doc);
    let mut chosen = Vec::with_capacity(clusters.k);

    for members in clusters.clusters() {
        debug_assert!(!members.is_empty(), "clusters are non-empty by contract");
        let representative = match strategy {
            SummaryStrategy::Lead => members.iter().copied().min().unwrap(),
            SummaryStrategy::Tfidf => {
                let mut sorted = members.clone();
                sorted.sort_unstable();
                let mut best = sorted[0];
                let mut best_score = score_with_tf(&doc.sentences[best], &tf, table);
                for &idx in &sorted[1..] {
                    let score = score_with_tf(&doc.sentences[idx], &tf, table);
                    if score > best_score {
                        best = idx;
                        best_score = score;
                    }
                }
                best
            }
        };
        chosen.push(representative);
    }

    chosen.sort_unstable();
    SummarySelection {
        chosen_indexes: chosen,
        strategy,
    }
}

/// Concatenates the chosen sentences' surface text in appearance order,
/// joined by a single space.
pub fn assemble_summary(chosen_indexes: &[usize], doc: &Document) -> String {
    let mut sorted = chosen_indexes.to_vec();
    sorted.sort_unstable();
    sorted
        .iter()
        .map(|&i| doc.sentences[i].raw_text.as_str())
        .collect::<Vec<_>>()
        .join(" ")
}
