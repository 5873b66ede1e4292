use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by the transform library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("non-finite value at grid point ({x1}, {x2})")]
    NonFiniteSample { x1: f64, x2: f64 },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("translation ({y1}, {y2}) is not grid aligned; nearest aligned value is ({near1}, {near2})")]
    UnalignedTranslation { y1: f64, y2: f64, near1: f64, near2: f64 },

    #[error("invalid window: {0}")]
    InvalidWindow(String),

    #[error("det({name}) != 1 (got {det})")]
    NotUnimodular { name: String, det: f64 },

    #[error("b = 0: this path requires a nonzero b; use the scale-chirp branch")]
    DegenerateB,

    #[error("b != 0: the scale-chirp branch only handles b = 0")]
    NonDegenerateB,

    #[error("sampling is not matched: output spacing must be {required_dw} (got {got_dw})")]
    UnmatchedSampling { required_dw: f64, got_dw: f64 },

    #[error("scaled sample d*u = {value} is off the input grid; admissible output spacing: {admissible}")]
    OffGridScale { value: f64, admissible: String },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("stride-1 analysis of a {n1}x{n2} signal exceeds the in-memory budget; use a stride > 1")]
    MemoryBudget { n1: usize, n2: usize },

    #[error("index out of range: {0}")]
    OutOfRange(String),

    #[error("bad magic in {0}")]
    BadMagic(PathBuf),

    #[error("unsupported QSIG version {0}")]
    UnsupportedVersion(u32),

    #[error("truncated payload: expected {expected} bytes, found {found}")]
    Truncated { expected: usize, found: usize },

    #[error("dimension overflow: {n1} x {n2}")]
    DimensionOverflow { n1: u64, n2: u64 },

    #[error("non-finite value in record {0}")]
    NonFiniteRecord(usize),

    #[error("csv parse error at row {row}: {msg}")]
    Csv { row: usize, msg: String },

    #[error("hypothesis not met: {0}")]
    Hypothesis(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
