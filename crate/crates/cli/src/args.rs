use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use wgss_core::{Kernel, SigmaMode, SummaryStrategy};

#[derive(Parser)]
#[command(name = "wgss", version, about = "Extractive summarizer: word-pair Gaussian sentence similarity with spectral clustering")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand)]
pub enum Command {
    /// Summarize a document from a file or standard input
    Summarize(SummarizeArgs),
    /// Run the pipeline over a JSONL dataset and report ROUGE scores
    Evaluate(EvaluateArgs),
    /// Build an IDF table from corpus documents
    BuildIdf(BuildIdfArgs),
    /// Convert a text word-vector file into the binary cache format
    EmbedCache(EmbedCacheArgs),
    /// Evaluate a log-spaced grid of sigma values and print TSV rows
    SweepSigma(SweepSigmaArgs),
}

fn parse_ratio(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|_| format!("not a number: {s:?}"))?;
    if v > 0.0 && v < 1.0 {
        Ok(v)
    } else {
        Err(format!("ratio must lie strictly between 0 and 1, got {v}"))
    }
}

fn parse_jobs(s: &str) -> Result<usize, String> {
    let v: usize = s.parse().map_err(|_| format!("not a number: {s:?}"))?;
    if v >= 1 {
        Ok(v)
    } else {
        Err("jobs must be at least 1".to_string())
    }
}

/// Knobs shared by every pipeline-running command except the sigma sweep.
#[derive(Args, Clone)]
pub struct KernelFlags {
    /// Gaussian standard deviation, or `auto` for the per-document
    /// median-distance heuristic
    #[arg(long, default_value = "5e-11")]
    pub sigma: SigmaMode,

    #[command(flatten)]
    pub common: CommonFlags,
}

#[derive(Args, Clone)]
pub struct CommonFlags {
    /// Summary proportion p in (0,1); k = ceil(N*p) clusters
    #[arg(long, default_value = "0.2", value_parser = parse_ratio)]
    pub ratio: f64,

    /// Sentence-similarity kernel
    #[arg(long, default_value = "wgss")]
    pub kernel: Kernel,

    /// Per-cluster representative selection
    #[arg(long, default_value = "tfidf")]
    pub strategy: SummaryStrategy,

    /// Language profile (sentence-boundary rules)
    #[arg(long, default_value = "bn", value_parser = ["bn", "hi", "mr", "tr", "generic"])]
    pub lang: String,

    /// Seed for the clustering initialization
    #[arg(long, default_value = "0")]
    pub seed: u64,
}

#[derive(Args)]
pub struct ResourceFlags {
    /// Word-vector file (FastText text format or wgss binary cache)
    #[arg(long)]
    pub embeddings: PathBuf,

    /// Stop-word list, one word per line
    #[arg(long)]
    pub stopwords: PathBuf,

    /// IDF table produced by `wgss build-idf`
    #[arg(long)]
    pub idf: PathBuf,
}

#[derive(Args)]
pub struct SummarizeArgs {
    /// Input document; standard input when omitted
    pub input: Option<PathBuf>,

    #[command(flatten)]
    pub resources: ResourceFlags,

    /// Write the summary here instead of standard output
    #[arg(long)]
    pub out: Option<PathBuf>,

    /// Write run diagnostics as JSON
    #[arg(long)]
    pub diag: Option<PathBuf>,

    #[command(flatten)]
    pub kernel_flags: KernelFlags,
}

#[derive(Args)]
pub struct EvaluateArgs {
    /// JSONL dataset: {"id", "text", "summaries": [...]} per line
    #[arg(long)]
    pub dataset: PathBuf,

    #[command(flatten)]
    pub resources: ResourceFlags,

    /// Write the JSON report here instead of standard output
    #[arg(long)]
    pub report: Option<PathBuf>,

    /// Worker threads for document evaluation
    #[arg(long, default_value = "1", value_parser = parse_jobs)]
    pub jobs: usize,

    #[command(flatten)]
    pub kernel_flags: KernelFlags,
}

#[derive(Args)]
pub struct BuildIdfArgs {
    /// Corpus files, one document per file
    pub files: Vec<PathBuf>,

    /// Additionally ingest every `text` of a JSONL dataset as one document
    #[arg(long)]
    pub dataset: Option<PathBuf>,

    /// Stop-word list, one word per line
    #[arg(long)]
    pub stopwords: PathBuf,

    /// Language tag recorded for tokenizer rules
    #[arg(long, default_value = "bn", value_parser = ["bn", "hi", "mr", "tr", "generic"])]
    pub lang: String,

    /// Output IDF table path
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args)]
pub struct EmbedCacheArgs {
    /// Source word-vector file (text format)
    #[arg(long)]
    pub embeddings: PathBuf,

    /// Output cache path
    #[arg(long)]
    pub out: PathBuf,

    /// Optional vocabulary file (one word per line) restricting the cache
    #[arg(long)]
    pub vocab: Option<PathBuf>,
}

#[derive(Args)]
pub struct SweepSigmaArgs {
    /// JSONL dataset to evaluate at each sigma
    #[arg(long)]
    pub dataset: PathBuf,

    #[command(flatten)]
    pub resources: ResourceFlags,

    /// Number of grid points
    #[arg(long, default_value = "63", value_parser = parse_jobs)]
    pub points: usize,

    /// Smallest sigma of the grid
    #[arg(long, default_value = "1e-12")]
    pub sigma_min: f64,

    /// Largest sigma of the grid
    #[arg(long, default_value = "10")]
    pub sigma_max: f64,

    /// Worker threads for document evaluation
    #[arg(long, default_value = "1", value_parser = parse_jobs)]
    pub jobs: usize,

    #[command(flatten)]
    pub common: CommonFlags,
}
