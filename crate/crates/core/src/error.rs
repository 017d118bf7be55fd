use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[non_exhaustive]
pub enum Error {
    #[error("dataset needs at least 2 samples, got {0}")]
    TooFewSamples(usize),
    #[error("dataset has no features")]
    NoFeatures,
    #[error("expected {expected} values, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("non-finite value at row {row}, column {column}")]
    NonFinite { row: usize, column: usize },
    #[error("label {0} is not a binary class id")]
    InvalidLabel(u8),
    #[error("labels must contain samples of both classes")]
    SingleClass,
    #[error("duplicate feature name `{0}`")]
    DuplicateFeatureName(String),
    #[error("sample has {got} columns, the model expects {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("index {index} out of range for {len} items")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("cannot split {samples} samples into {k} folds")]
    InvalidFoldCount { k: usize, samples: usize },
    #[error("proportion {0} is outside (0, 1]")]
    InvalidProportion(f64),
    #[error("a subsample of {0} rows is too small")]
    SubsampleTooSmall(usize),
    #[error("could not draw a two-class sample after {0} attempts")]
    ClassCollapse(usize),
    #[error("value {0} is outside [0, 1]")]
    OutOfUnitRange(f64),
    #[error("fuzzy set has zero total membership")]
    EmptyFuzzySet,
    #[error("at least two score vectors are required, got {0}")]
    TooFewFolds(usize),
    #[error("no selection methods were given")]
    NoMethods,
    #[error("invalid parameter: {0}")]
    InvalidParameter(&'static str),
    #[error("unknown {kind} `{value}`")]
    UnknownId { kind: &'static str, value: String },
}
