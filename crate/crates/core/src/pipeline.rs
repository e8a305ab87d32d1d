//! End-to-end summarizer: preprocess → affinity → spectral clustering →
//! representative selection → assembly, with first-class diagnostics.

use serde::{Deserialize, Serialize};

use crate::clustering::{choose_k, spectral_cluster, ClusteringParams};
use crate::embeddings::EmbeddingTable;
use crate::error::Result;
use crate::preprocess::{build_document, StopwordList};
use crate::ranking::{assemble_summary, select_representatives, IdfTable, SummaryStrategy};
use crate::similarity::{auto_sigma, build_affinity, Kernel, SimilarityParams, DEFAULT_SIGMA};

/// Loaded resources, shared read-only across documents in batch runs.
#[derive(Debug, Clone)]
pub struct Resources {
    pub embeddings: EmbeddingTable,
    pub stopwords: StopwordList,
    pub idf: IdfTable,
}

/// Bandwidth selection: a fixed σ or the per-document median-distance
/// heuristic.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SigmaMode {
    Fixed(f64),
    Auto,
}

impl std::str::FromStr for SigmaMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        if s == "auto" {
            return Ok(SigmaMode::Auto);
        }
        match s.parse::<f64>() {
            Ok(v) if v > 0.0 && v.is_finite() => Ok(SigmaMode::Fixed(v)),
            _ => Err(format!(
                "sigma must be `auto` or a positive real, got {s:?}"
            )),
        }
    }
}

/// Every knob of one summarization run. Resource paths live with the
/// frontend; this carries only the algorithm parameters.
#[derive(Debug, Clone)]
pub struct PipelineConfig {
    pub language_tag: String,
    pub sigma: SigmaMode,
    /// Summary proportion p in (0,1); k = ⌈N·p⌉.
    pub proportion: f64,
    pub kernel: Kernel,
    pub strategy: SummaryStrategy,
    pub seed: u64,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            language_tag: "bn".to_string(),
            sigma: SigmaMode::Fixed(DEFAULT_SIGMA),
            proportion: 0.2,
            kernel: Kernel::Wgss,
            strategy: SummaryStrategy::Tfidf,
            seed: 0,
        }
    }
}

/// What happened during one run, returned alongside the summary.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Diagnostics {
    /// Total sentences in the input.
    pub sentence_count: usize,
    /// Sentences with at least one embedded token.
    pub eligible_count: usize,
    /// Requested cluster count ⌈eligible·p⌉.
    pub k: usize,
    /// Members per cluster; empty when the fallback was taken.
    pub cluster_sizes: Vec<usize>,
    /// σ actually used; absent when the fallback skipped the kernel under
    /// auto mode.
    pub sigma: Option<f64>,
    /// Fraction of off-diagonal affinities that underflowed to zero.
    pub underflow_fraction: Option<f64>,
    /// True when the summary is all eligible sentences (tiny or degenerate
    /// input) and clustering was skipped.
    pub fallback: bool,
}

#[derive(Debug, Clone)]
pub struct SummaryOutput {
    pub summary: String,
    pub diagnostics: Diagnostics,
}

/// Summarizes one text. Degenerate documents (fewer than two eligible
/// sentences, or no more eligible sentences than clusters) fall back to all
/// eligible sentences in order, flagged in the diagnostics.
pub fn summarize(
    text: &str,
    resources: &Resources,
    config: &PipelineConfig,
) -> Result<SummaryOutput> {
    let clustering = ClusteringParams {
        proportion: config.proportion,
        seed: config.seed,
        ..Default::default()
    };
    clustering.validate()?;
    if let SigmaMode::Fixed(sigma) = config.sigma {
        SimilarityParams::new(sigma, config.kernel)?;
    }

    let doc = build_document(
        text,
        &config.language_tag,
        &resources.stopwords,
        &resources.embeddings,
    )?;
    let eligible: Vec<usize> = doc.eligible_sentences().map(|s| s.index).collect();
    let eligible_count = eligible.len();
    let k = choose_k(eligible_count, config.proportion);

    if eligible_count < 2 || eligible_count <= k {
        let sigma = match config.sigma {
            SigmaMode::Fixed(s) => Some(s),
            SigmaMode::Auto => None,
        };
        return Ok(SummaryOutput {
            summary: assemble_summary(&eligible, &doc),
            diagnostics: Diagnostics {
                sentence_count: doc.sentences.len(),
                eligible_count,
                k,
                cluster_sizes: Vec::new(),
                sigma,
                underflow_fraction: None,
                fallback: true,
            },
        });
    }

    let sigma = match config.sigma {
        SigmaMode::Fixed(s) => s,
        SigmaMode::Auto => auto_sigma(&doc).expect("two or more eligible sentences"),
    };
    let params = SimilarityParams::new(sigma, config.kernel)?;
    let affinity = build_affinity(&doc, params)?;
    let assignment = spectral_cluster(&affinity, k, &clustering)?;

    let mut cluster_sizes = vec![0usize; k];
    for &label in &assignment.labels {
        cluster_sizes[label] += 1;
    }

    let selection = select_representatives(&assignment, &doc, &resources.idf, config.strategy);
    let summary = assemble_summary(&selection.chosen_indexes, &doc);

    Ok(SummaryOutput {
        summary,
        diagnostics: Diagnostics {
            sentence_count: doc.sentences.len(),
            eligible_count,
            k,
            cluster_sizes,
            sigma: Some(sigma),
            underflow_fraction: Some(affinity.underflow_fraction()),
            fallback: false,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ranking;
    use std::collections::HashMap;

    /// Two well-separated word groups in 2-D plus a filler vocabulary.
    fn two_topic_resources() -> Resources {
        let entries: Vec<(String, Vec<f32>)> = vec![
            ("apple".into(), vec![0.0, 0.0]),
            ("pear".into(), vec![1.0, 0.0]),
            ("plum".into(), vec![0.0, 1.0]),
            ("engine".into(), vec![100.0, 100.0]),
            ("piston".into(), vec![101.0, 100.0]),
            ("wheel".into(), vec![100.0, 101.0]),
        ];
        let words: Vec<String> = entries.iter().map(|(w, _)| w.clone()).collect();
        let embeddings = EmbeddingTable::from_entries(2, entries, "fixture").unwrap();
        let idf = IdfTable::new(
            2,
            words.into_iter().map(|w| (w, 1usize)).collect::<HashMap<_, _>>(),
        )
        .unwrap();
        Resources {
            embeddings,
            stopwords: StopwordList::new(["the".to_string()]),
            idf,
        }
    }

    fn config(proportion: f64) -> PipelineConfig {
        PipelineConfig {
            language_tag: "generic".into(),
            sigma: SigmaMode::Fixed(2.0),
            proportion,
            ..Default::default()
        }
    }

    #[test]
    fn ten_sentences_yield_two_in_order() {
        let resources = two_topic_resources();
        let text = "apple pear. plum apple. pear plum. apple plum. pear apple. \
                    engine piston. wheel engine. piston wheel. engine wheel. piston engine.";
        let out = summarize(text, &resources, &config(0.2)).unwrap();
        assert!(!out.diagnostics.fallback);
        assert_eq!(out.diagnostics.k, 2);
        assert_eq!(out.diagnostics.sentence_count, 10);
        let summary_sentences: Vec<&str> = out.summary.split_inclusive(". ").collect();
        assert_eq!(summary_sentences.len(), 2);
        // Extractive, order-preserving: the summary is a subsequence.
        let pos_a = text.find(summary_sentences[0].trim()).unwrap();
        let pos_b = text.find(summary_sentences[1].trim()).unwrap();
        assert!(pos_a < pos_b);
    }

    #[test]
    fn one_sentence_falls_back() {
        let resources = two_topic_resources();
        let out = summarize("apple pear.", &resources, &config(0.2)).unwrap();
        assert!(out.diagnostics.fallback);
        assert_eq!(out.summary, "apple pear.");
        assert_eq!(out.diagnostics.k, 1);
    }

    #[test]
    fn two_topics_get_one_representative_each() {
        let resources = two_topic_resources();
        // Twelve sentences, p = 0.2 -> k = 3; use 10 fruit-ish + ... keep two
        // topics and p so k = 2: ten sentences, alternating topics.
        let text = "apple pear. engine piston. plum apple. wheel engine. pear plum. \
                    piston wheel. apple plum. engine wheel. pear apple. piston engine.";
        let out = summarize(text, &resources, &config(0.2)).unwrap();
        assert_eq!(out.diagnostics.k, 2);
        let fruit = ["apple", "pear", "plum"];
        let machine = ["engine", "piston", "wheel"];
        let parts: Vec<&str> = out.summary.split(". ").collect();
        assert_eq!(parts.len(), 2);
        let is_topic = |s: &str, words: &[&str]| words.iter().any(|w| s.contains(w));
        let fruit_count = parts.iter().filter(|s| is_topic(s, &fruit)).count();
        let machine_count = parts.iter().filter(|s| is_topic(s, &machine)).count();
        assert_eq!((fruit_count, machine_count), (1, 1), "summary: {}", out.summary);
    }

    #[test]
    fn rerun_is_byte_identical() {
        let resources = two_topic_resources();
        let text = "apple pear. engine piston. plum apple. wheel engine. pear plum. \
                    piston wheel. apple plum. engine wheel.";
        let a = summarize(text, &resources, &config(0.25)).unwrap();
        let b = summarize(text, &resources, &config(0.25)).unwrap();
        assert_eq!(a.summary.as_bytes(), b.summary.as_bytes());
    }

    #[test]
    fn summary_is_subsequence_of_sentences() {
        let resources = two_topic_resources();
        let text = "apple pear. engine piston. plum apple. wheel engine. pear plum. \
                    piston wheel. apple plum. engine wheel. pear apple. piston engine.";
        let out = summarize(text, &resources, &config(0.3)).unwrap();
        let sentences: Vec<String> = crate::preprocess::split_sentences(
            text,
            crate::preprocess::LanguageProfile::Generic,
        )
        .unwrap();
        let mut cursor = 0usize;
        for part in out.summary.split(". ") {
            let part = part.trim_end_matches('.');
            let found = sentences[cursor..]
                .iter()
                .position(|s| s.trim_end_matches('.').contains(part));
            assert!(found.is_some(), "summary part {part:?} out of order");
            cursor += found.unwrap() + 1;
        }
    }

    #[test]
    fn summary_length_is_min_of_k_and_eligible() {
        let resources = two_topic_resources();
        let text = "apple pear. engine piston. plum apple. wheel engine.";
        for p in [0.2, 0.4, 0.7] {
            let out = summarize(text, &resources, &config(p)).unwrap();
            let expected = out
                .diagnostics
                .k
                .min(out.diagnostics.eligible_count);
            let count = out.summary.matches('.').count();
            assert_eq!(count, expected, "p={p}");
        }
    }

    #[test]
    fn auto_sigma_is_reported_in_diagnostics() {
        let resources = two_topic_resources();
        let text = "apple pear. engine piston. plum apple. wheel engine. pear plum. \
                    piston wheel. apple plum. engine wheel. pear apple. piston engine.";
        let cfg = PipelineConfig {
            language_tag: "generic".into(),
            sigma: SigmaMode::Auto,
            proportion: 0.2,
            ..Default::default()
        };
        let out = summarize(text, &resources, &cfg).unwrap();
        let sigma = out.diagnostics.sigma.unwrap();
        assert!(sigma > 0.0);
        assert!(!out.diagnostics.fallback);
    }

    #[test]
    fn builtin_default_sigma_underflows_but_completes() {
        let resources = two_topic_resources();
        let text = "apple pear. engine piston. plum apple. wheel engine. pear plum. \
                    piston wheel. apple plum. engine wheel. pear apple. piston engine.";
        let cfg = PipelineConfig {
            language_tag: "generic".into(),
            sigma: SigmaMode::Fixed(DEFAULT_SIGMA),
            proportion: 0.2,
            ..Default::default()
        };
        let out = summarize(text, &resources, &cfg).unwrap();
        // Everything underflows except the two permuted-duplicate pairs,
        // whose distance sets are exactly zero.
        let fraction = out.diagnostics.underflow_fraction.unwrap();
        assert!(fraction > 0.9, "underflow fraction {fraction}");
        assert_eq!(out.summary.matches('.').count(), 2);
    }

    #[test]
    fn lead_strategy_picks_cluster_heads() {
        let resources = two_topic_resources();
        let text = "apple pear. plum apple. pear plum. engine piston. wheel engine. \
                    piston wheel. apple plum. engine wheel. pear apple. piston engine.";
        let cfg = PipelineConfig {
            language_tag: "generic".into(),
            sigma: SigmaMode::Fixed(2.0),
            strategy: ranking::SummaryStrategy::Lead,
            proportion: 0.2,
            ..Default::default()
        };
        let out = summarize(text, &resources, &cfg).unwrap();
        // Lead must contain the very first sentence (cluster of sentence 0).
        assert!(out.summary.starts_with("apple pear."), "{}", out.summary);
    }
}
