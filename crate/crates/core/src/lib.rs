//! Extractive text summarization via word-pair Gaussian sentence similarity.
//!
//! The engine groups semantically similar sentences by spectral clustering
//! over a Gaussian word-pair affinity matrix and extracts the TF-IDF-best
//! sentence of each cluster, preserving appearance order. A ROUGE-1/2/LCS
//! harness evaluates generated summaries against reference datasets.
//!
//! Modules follow the processing stages:
//!
//! - [`embeddings`]: word-vector file parsing and lookup
//! - [`preprocess`]: sentence splitting, tokenization, stop-word removal
//! - [`similarity`]: the word-pair kernel, the averaging baseline, the
//!   affinity matrix
//! - [`clustering`]: normalized spectral clustering with seeded k-means
//! - [`ranking`]: TF-IDF scoring and summary assembly
//! - [`rouge`]: ROUGE metrics and the dataset evaluation harness
//! - [`pipeline`]: the end-to-end summarizer

pub mod clustering;
pub mod embeddings;
pub mod error;
mod kmeans;
pub mod pipeline;
pub mod preprocess;
pub mod ranking;
pub mod rouge;
pub mod similarity;

pub use clustering::{choose_k, spectral_cluster, ClusterAssignment, ClusteringParams};
pub use embeddings::{load_vectors, EmbeddingTable, LoadStats};
pub use error::{Error, Result};
pub use pipeline::{summarize, Diagnostics, PipelineConfig, Resources, SigmaMode, SummaryOutput};
pub use preprocess::{
    build_document, split_sentences, tokenize, tokenize_and_filter, Document, LanguageProfile,
    Sentence, StopwordList,
};
pub use ranking::{
    assemble_summary, build_idf, ingest_idf_document, select_representatives,
    tfidf_sentence_score, IdfTable, SummarySelection, SummaryStrategy,
};
pub use rouge::{
    evaluate_dataset, read_jsonl_dataset, rouge_lcs, rouge_n, DatasetDoc, DocScores, EvalReport,
    EvalRow, RougeScore,
};
pub use similarity::{
    auto_sigma, average_similarity, build_affinity, collect_distances,
    most_similar_word_distance, wgss_similarity, AffinityMatrix, DistanceSet, Kernel,
    SimilarityParams, DEFAULT_SIGMA,
};
