use std::io;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, TomError>;

#[derive(Debug, Error)]
pub enum TomError {
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("no parseable records in {source_name} ({skipped} skipped)")]
    EmptyCorpus { source_name: String, skipped: usize },

    #[error("no terms survived normalization")]
    EmptyVocabulary,

    #[error("vocabulary too small: {0} term(s) survived selection, need at least 2")]
    VocabularyTooSmall(usize),

    #[error("similarity undefined: {0}")]
    UndefinedSimilarity(String),

    #[error("graph has no edges; no community structure to detect")]
    NoStructure,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("basemap needs at least 2 topics, got {0}")]
    DegenerateBasemap(usize),

    #[error("dimension mismatch: expected {expected}, got {found}")]
    Shape { expected: usize, found: usize },

    #[error("degenerate proximity matrix: self-similarity {0} is not positive")]
    DegenerateProximity(f64),

    #[error("clustering needs at least 2 items, got {0}")]
    TrivialDendrogram(usize),

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("no dated documents; cannot build a timeline")]
    NoTimeline,

    #[error("the two clusterings share no assigned documents")]
    EmptyCrossTab,

    #[error("render error: {0}")]
    Render(String),

    #[error("malformed artifact: {0}")]
    Format(String),

    #[error("stage `{stage}` failed: {source}")]
    Stage {
        stage: String,
        #[source]
        source: Box<TomError>,
    },
}

impl From<serde_json::Error> for TomError {
    fn from(err: serde_json::Error) -> Self {
        TomError::Format(err.to_string())
    }
}

impl From<csv::Error> for TomError {
    fn from(err: csv::Error) -> Self {
        TomError::Format(err.to_string())
    }
}
