use std::path::PathBuf;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
#[non_exhaustive]
pub enum Error {
    #[error("dataset file not found: {}", .0.display())]
    MissingFile(PathBuf),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{}: {source}", path.display())]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
    #[error("{}: line {line}, column `{column}`: `{value}` is not a number", path.display())]
    NonNumeric {
        path: PathBuf,
        line: usize,
        column: String,
        value: String,
    },
    #[error("{}: label column has more than two classes", .0.display())]
    TooManyClasses(PathBuf),
    #[error("{}: no label column `{label}`", path.display())]
    UnknownLabel { path: PathBuf, label: String },
    #[error("{}: header row required", .0.display())]
    MissingHeader(PathBuf),
    #[error("empty dataset after preprocessing")]
    EmptyAfterPreprocessing,
    #[error("breast cancer table: expected {expected} complete rows, got {got}")]
    UnexpectedRowCount { expected: usize, got: usize },
    #[error("invalid config {}: {source}", path.display())]
    Config {
        path: PathBuf,
        #[source]
        source: toml::de::Error,
    },
    #[error("invalid option: {0}")]
    Usage(String),
    #[error("{0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Core(#[from] fuzzrank_core::Error),
}

impl Error {
    /// True for problems with how the program was invoked, as opposed to
    /// problems with the data or the file system.
    pub fn is_usage(&self) -> bool {
        matches!(self, Error::Usage(_) | Error::Config { .. })
    }
}
