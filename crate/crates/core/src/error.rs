use thiserror::Error;

/// Errors produced by the models, solvers and file readers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NonSquare { rows: usize, cols: usize },

    #[error("matrix is not unitary: ||U^dag U - I||_F = {deviation:e}")]
    NonUnitary { deviation: f64 },

    #[error("dimension mismatch in {what}: expected {expected}, found {found}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("negative count {0}")]
    NegativeCount(f64),

    #[error("invalid parameter `{field}`: {reason}")]
    InvalidParams { field: &'static str, reason: String },

    #[error("radius must be strictly positive")]
    ZeroRadius,

    #[error("no convergence after {iterations} iterations (residual {residual:e})")]
    NonConvergence { iterations: usize, residual: f64 },

    #[error("matrix of size {n} exceeds the supported maximum {max}")]
    TooLarge { n: usize, max: usize },

    #[error("{photons} photons exceed the supported maximum {max}")]
    PhotonOverflow { photons: usize, max: usize },

    #[error("degenerate curve: {0}")]
    DegenerateCurve(String),

    #[error("resistance must be strictly positive")]
    NonPositiveResistance,

    #[error("scan does not resolve a fringe: {0}")]
    InsufficientSpan(String),

    #[error("design matrix is rank deficient")]
    RankDeficient,

    #[error("ambiguous phase branch at sample {index}: jump of exactly pi")]
    AmbiguousBranch { index: usize },

    #[error("too few samples: need {needed}, got {found}")]
    TooFewSamples { needed: usize, found: usize },

    #[error("incomplete dataset: {0}")]
    IncompleteDataset(String),

    #[error("phase left unconstrained by the data: {0}")]
    GaugeDegenerate(String),

    #[error("format error at line {line}: {message}")]
    Format { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// True for failures of an iterative numerical method, as opposed to bad
    /// input.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::NonConvergence { .. })
    }

    pub(crate) fn invalid(field: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParams {
            field,
            reason: reason.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
