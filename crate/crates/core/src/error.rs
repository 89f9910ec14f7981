use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{context}: expected dimension {expected}, found {found}")]
    DimensionMismatch { context: &'static str, expected: usize, found: usize },

    #[error("subsystem index {index} out of range for {count} subsystems")]
    SubsystemOutOfRange { index: usize, count: usize },

    #[error("{0}: non-finite entry")]
    NonFinite(&'static str),

    #[error("matrix is not Hermitian (max |A - A^dag| = {defect:e})")]
    NotHermitian { defect: f64 },

    #[error("trace {trace} deviates from 1 beyond tolerance")]
    TraceViolation { trace: f64 },

    #[error("negative eigenvalue {min_eigenvalue:e} below positivity tolerance")]
    NotPositive { min_eigenvalue: f64 },

    #[error("state norm^2 {norm_sq} is not 1")]
    Unnormalized { norm_sq: f64 },

    #[error("norm^2 increased from {before} to {after}")]
    NormIncrease { before: f64, after: f64 },

    #[error("state norm vanished ({norm_sq:e})")]
    VanishingNorm { norm_sq: f64 },

    #[error("{what} = {value} lies outside [0, 1]")]
    ProbabilityOutOfRange { what: &'static str, value: f64 },

    #[error("tangle {0} outside [0, 1]")]
    TangleOutOfRange(f64),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("unknown {kind} `{token}`")]
    UnknownName { kind: &'static str, token: String },

    #[error("config: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
