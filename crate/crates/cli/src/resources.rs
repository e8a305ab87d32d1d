//! Resource-loading helpers shared by the subcommands. Everything here maps
//! failures to the resource exit class; the pipeline itself reports its own
//! class.

use std::collections::HashSet;
use std::io::Read;
use std::path::Path;

use wgss_core::{
    load_vectors, read_jsonl_dataset, tokenize_and_filter, DatasetDoc, EmbeddingTable, IdfTable,
    StopwordList,
};

use crate::CliError;

pub fn read_input(path: Option<&Path>) -> Result<String, CliError> {
    match path {
        Some(path) => std::fs::read_to_string(path)
            .map_err(|e| CliError::Resource(format!("failed to read {}: {e}", path.display()))),
        None => {
            let mut text = String::new();
            std::io::stdin()
                .read_to_string(&mut text)
                .map_err(|e| CliError::Resource(format!("failed to read standard input: {e}")))?;
            Ok(text)
        }
    }
}

pub fn load_stopwords(path: &Path) -> Result<StopwordList, CliError> {
    StopwordList::from_file(path).map_err(CliError::resource)
}

pub fn load_idf(path: &Path) -> Result<IdfTable, CliError> {
    IdfTable::read(path).map_err(CliError::resource)
}

pub fn load_dataset(path: &Path) -> Result<(Vec<DatasetDoc>, usize), CliError> {
    read_jsonl_dataset(path).map_err(CliError::resource)
}

/// Words that will need vectors: the stop-word-filtered tokens of the texts.
pub fn collect_vocabulary<'a>(
    texts: impl IntoIterator<Item = &'a str>,
    stopwords: &StopwordList,
) -> HashSet<String> {
    let mut vocabulary = HashSet::new();
    for text in texts {
        vocabulary.extend(tokenize_and_filter(text, stopwords));
    }
    vocabulary
}

/// Loads the vector table restricted to the input vocabulary, reporting
/// skipped malformed lines on standard error. An input whose tokens all
/// miss the table is a document problem (pipeline class), not a resource
/// one; so is an input with no tokens at all.
pub fn load_embeddings_for_input(
    path: &Path,
    vocabulary: &HashSet<String>,
) -> Result<EmbeddingTable, CliError> {
    if vocabulary.is_empty() {
        return Err(CliError::Pipeline(
            wgss_core::Error::NoEligibleSentences.to_string(),
        ));
    }
    match load_vectors(path, Some(vocabulary)) {
        Ok((table, stats)) => {
            if stats.skipped_lines > 0 {
                eprintln!(
                    "wgss: {}: skipped {} malformed or duplicate vector line(s)",
                    path.display(),
                    stats.skipped_lines
                );
            }
            Ok(table)
        }
        Err(wgss_core::Error::EmptyTable { .. }) => Err(CliError::Pipeline(format!(
            "no input token has a vector in {}",
            path.display()
        ))),
        Err(e) => Err(CliError::resource(e)),
    }
}
