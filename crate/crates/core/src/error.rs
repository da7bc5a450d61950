use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot read {path}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("I/O error")]
    Stream(#[from] std::io::Error),
    #[error("invalid config: {0}")]
    Config(String),
    #[error("invalid lexicon: {0}")]
    Lexicon(String),
    #[error("persistence parameter p must satisfy 0 < p < 1, got {0}")]
    InvalidPersistence(f64),
    #[error("brand similarity requires a lexicon for campaign {0:?}")]
    MissingLexicon(String),
    #[error("no records")]
    NoRecords,
    #[error("qualification threshold must satisfy 0 < t <= 1, got {0}")]
    InvalidThreshold(f64),
    #[error("undefined Gini: citation counts sum to zero")]
    UndefinedGini,
    #[error("subsample size {n} out of range for a series of length {len}")]
    SubsampleSize { n: usize, len: usize },
    #[error("window length {d} out of range for a series of length {len}")]
    WindowLength { d: usize, len: usize },
    #[error("resample count must be at least 1")]
    NoResamples,
    #[error("no qualifying groups for convergence analysis")]
    NoQualifyingGroups,
    #[error("unknown report format {0:?}")]
    UnknownFormat(String),
    #[error("nothing to render: {0}")]
    EmptyReport(&'static str),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("no adapter registered for engine {0}")]
    MissingAdapter(String),
    #[error("sink write failed: {0}")]
    Sink(std::io::Error),
    #[error("adapter error: {0}")]
    Adapter(String),
    #[error("invalid simulator config: {0}")]
    Simulator(String),
}
