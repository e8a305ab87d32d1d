//! ROUGE-1/2/LCS scoring and the dataset-level evaluation harness.
//!
//! Candidates and references are tokenized with the same Unicode word
//! tokenizer as the summarizer input but without stop-word removal.
//! With several references per document, each metric keeps the reference
//! with the best F1; document scores are then averaged over the dataset.

use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pipeline::{self, PipelineConfig, Resources};
use crate::preprocess::tokenize;

/// Precision / recall / F1 triple, each in the unit interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RougeScore {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

impl RougeScore {
    pub const ZERO: RougeScore = RougeScore {
        precision: 0.0,
        recall: 0.0,
        f1: 0.0,
    };

    fn from_counts(overlap: usize, candidate_total: usize, reference_total: usize) -> Self {
        let precision = if candidate_total > 0 {
            overlap as f64 / candidate_total as f64
        } else {
            0.0
        };
        let recall = if reference_total > 0 {
            overlap as f64 / reference_total as f64
        } else {
            0.0
        };
        let f1 = if precision + recall > 0.0 {
            2.0 * precision * recall / (precision + recall)
        } else {
            0.0
        };
        RougeScore {
            precision,
            recall,
            f1,
        }
    }
}

fn ngram_counts(tokens: &[String], n: usize) -> HashMap<&[String], usize> {
    let mut counts = HashMap::new();
    if tokens.len() >= n {
        for gram in tokens.windows(n) {
            *counts.entry(gram).or_insert(0) += 1;
        }
    }
    counts
}

/// Clipped n-gram overlap (n = 1 or 2): each reference n-gram matches at
/// most as many times as it occurs in the reference.
pub fn rouge_n(candidate: &[String], reference: &[String], n: usize) -> RougeScore {
    assert!(n == 1 || n == 2, "only unigrams and bigrams are supported");
    let cand = ngram_counts(candidate, n);
    let refr = ngram_counts(reference, n);
    let overlap: usize = cand
        .iter()
        .map(|(gram, &c)| c.min(refr.get(gram).copied().unwrap_or(0)))
        .sum();
    let cand_total = candidate.len().saturating_sub(n - 1);
    let ref_total = reference.len().saturating_sub(n - 1);
    RougeScore::from_counts(overlap, cand_total, ref_total)
}

/// Longest-common-subsequence overlap: recall L/|reference|, precision
/// L/|candidate|.
pub fn rouge_lcs(candidate: &[String], reference: &[String]) -> RougeScore {
    let l = lcs_length(candidate, reference);
    RougeScore::from_counts(l, candidate.len(), reference.len())
}

fn lcs_length(a: &[String], b: &[String]) -> usize {
    if a.is_empty() || b.is_empty() {
        return 0;
    }
    let mut prev = vec![0usize; b.len() + 1];
    let mut curr = vec![0usize; b.len() + 1];
    for x in a {
        for (j, y) in b.iter().enumerate() {
            curr[j + 1] = if x == y {
                prev[j] + 1
            } else {
                prev[j + 1].max(curr[j])
            };
        }
        std::mem::swap(&mut prev, &mut curr);
    }
    prev[b.len()]
}

/// One dataset record: an input text and its reference summaries.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DatasetDoc {
    pub id: String,
    pub text: String,
    pub summaries: Vec<String>,
}

/// Reads a JSON-lines dataset, skipping (and counting) malformed lines.
/// Blank lines are ignored. A file with no usable records is fatal.
pub fn read_jsonl_dataset(path: &Path) -> Result<(Vec<DatasetDoc>, usize)> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut docs = Vec::new();
    let mut malformed = 0usize;
    for line in BufReader::new(file).lines() {
        let line = line.map_err(|e| Error::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        match serde_json::from_str::<DatasetDoc>(&line) {
            Ok(doc) => docs.push(doc),
            Err(_) => malformed += 1,
        }
    }
    if docs.is_empty() {
        return Err(Error::EmptyDataset { path: path.into() });
    }
    Ok((docs, malformed))
}

/// Per-document ROUGE triple after max-over-references aggregation.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct DocScores {
    pub rouge1: RougeScore,
    pub rouge2: RougeScore,
    #[serde(rename = "rougeL")]
    pub rouge_l: RougeScore,
}

/// Row of the evaluation report; `scores` is absent when the document was
/// skipped, with the reason in `error`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EvalRow {
    pub id: String,
    pub scores: Option<DocScores>,
    pub error: Option<String>,
}

/// Dataset-level evaluation report: per-document rows plus the mean
/// P/R/F per metric over the scored documents.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EvalReport {
    pub rows: Vec<EvalRow>,
    pub aggregate: DocScores,
    pub documents: usize,
    pub evaluated: usize,
    pub skipped: usize,
    pub malformed_lines: usize,
}

/// Scores one candidate against every reference and keeps, per metric, the
/// reference with the best F1 (earlier reference wins ties).
pub fn score_against_references(candidate: &str, references: &[String]) -> Option<DocScores> {
    let cand_tokens = tokenize(candidate);
    let mut best: Option<DocScores> = None;
    for reference in references {
        let ref_tokens = tokenize(reference);
        let scores = DocScores {
            rouge1: rouge_n(&cand_tokens, &ref_tokens, 1),
            rouge2: rouge_n(&cand_tokens, &ref_tokens, 2),
            rouge_l: rouge_lcs(&cand_tokens, &ref_tokens),
        };
        best = Some(match best {
            None => scores,
            Some(b) => DocScores {
                rouge1: if scores.rouge1.f1 > b.rouge1.f1 { scores.rouge1 } else { b.rouge1 },
                rouge2: if scores.rouge2.f1 > b.rouge2.f1 { scores.rouge2 } else { b.rouge2 },
                rouge_l: if scores.rouge_l.f1 > b.rouge_l.f1 { scores.rouge_l } else { b.rouge_l },
            },
        });
    }
    best
}

/// Runs the summarization pipeline over every document and scores the
/// output. Documents are processed in parallel; rows keep input order and
/// the aggregate is accumulated sequentially from them, so the report does
/// not depend on the worker count. A per-document pipeline failure becomes
/// a skipped row, not an error.
pub fn evaluate_dataset(
    docs: &[DatasetDoc],
    resources: &Resources,
    config: &PipelineConfig,
) -> Result<EvalReport> {
    if docs.is_empty() {
        return Err(Error::InvalidParam {
            name: "dataset",
            msg: "no documents to evaluate".into(),
        });
    }

    let rows: Vec<EvalRow> = docs
        .par_iter()
        .map(|doc| {
            if doc.summaries.is_empty() {
                return EvalRow {
                    id: doc.id.clone(),
                    scores: None,
                    error: Some("no reference summaries".into()),
                };
            }
            match pipeline::summarize(&doc.text, resources, config) {
                Ok(output) => EvalRow {
                    id: doc.id.clone(),
                    scores: score_against_references(&output.summary, &doc.summaries),
                    error: None,
                },
                Err(e) => EvalRow {
                    id: doc.id.clone(),
                    scores: None,
                    error: Some(e.to_string()),
                },
            }
        })
        .collect();

    let scored: Vec<&DocScores> = rows.iter().filter_map(|r| r.scores.as_ref()).collect();
    let aggregate = mean_scores(&scored);

    Ok(EvalReport {
        documents: docs.len(),
        evaluated: scored.len(),
        skipped: rows.len() - scored.len(),
        malformed_lines: 0,
        rows,
        aggregate,
    })
}

fn mean_scores(scored: &[&DocScores]) -> DocScores {
    let n = scored.len() as f64;
    if scored.is_empty() {
        return DocScores {
            rouge1: RougeScore::ZERO,
            rouge2: RougeScore::ZERO,
            rouge_l: RougeScore::ZERO,
        };
    }
    let mut sum = [[0.0f64; 3]; 3];
    for s in scored {
        for (i, m) in [s.rouge1, s.rouge2, s.rouge_l].into_iter().enumerate() {
            sum[i][0] += m.precision;
            sum[i][1] += m.recall;
            sum[i][2] += m.f1;
        }
    }
    let mean = |i: usize| RougeScore {
        precision: sum[i][0] / n,
        recall: sum[i][1] / n,
        f1: sum[i][2] / n,
    };
    DocScores {
        rouge1: mean(0),
        rouge2: mean(1),
        rouge_l: mean(2),
    }
}
