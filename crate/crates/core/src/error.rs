use std::path::PathBuf;

/// Errors produced by the summarization engine and its resource loaders.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("failed to read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}:{line}: {msg}")]
    VectorFormat {
        path: PathBuf,
        line: usize,
        msg: String,
    },

    #[error("no usable vectors in {path}")]
    EmptyTable { path: PathBuf },

    #[error("stop-word list {path} contains no words")]
    EmptyStopwords { path: PathBuf },

    #[error("unknown language tag {0:?}")]
    UnknownLanguage(String),

    #[error("input document is empty")]
    EmptyDocument,

    #[error("no sentence has an embedded token")]
    NoEligibleSentences,

    #[error("sentence has no embedded tokens")]
    IneligibleSentence,

    #[error("fewer than two eligible sentences")]
    DegenerateDocument,

    #[error("{path}:{line}: {msg}")]
    IdfFormat {
        path: PathBuf,
        line: usize,
        msg: String,
    },

    #[error("IDF corpus contains no readable documents")]
    EmptyCorpus,

    #[error("dataset {path} contains no usable records")]
    EmptyDataset { path: PathBuf },

    #[error("eigendecomposition did not converge ({0})")]
    Eigen(String),

    #[error("invalid {name}: {msg}")]
    InvalidParam { name: &'static str, msg: String },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
