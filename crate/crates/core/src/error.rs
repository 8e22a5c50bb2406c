use thiserror::Error;

/// Errors produced by the algebra, solver and lift routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid signature ({p},{q}): need 1 <= p+q <= {max}")]
    InvalidSignature { p: usize, q: usize, max: usize },

    #[error("signature mismatch: ({0}) vs ({1})")]
    SignatureMismatch(String, String),

    #[error("complex coefficient in a real algebra")]
    FieldMismatch,

    #[error("generator index {index} out of range 1..={n}")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("repeated or unsorted multi-index {0:?}")]
    BadMultiIndex(Vec<usize>),

    #[error("grade {k} out of range 0..={n}")]
    GradeOutOfRange { k: usize, n: usize },

    #[error("element is not invertible (singular value ratio {ratio:e})")]
    NonInvertible { ratio: f64 },

    #[error("expected {expected} items, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("generators violate the anticommutation relations (residual {residual:e})")]
    InvalidGenerators { residual: f64 },

    #[error("no candidate produced an invertible intertwiner")]
    NoIntertwiner,

    #[error("volume factor {0} is not one of the admissible values")]
    FactorUnrecognized(String),

    #[error("generator {index} has an even-grade component")]
    NotOddGraded { index: usize },

    #[error("certificate residual {residual:e} exceeds tolerance")]
    CertificateFailed { residual: f64 },

    #[error("matrix is not pseudo-orthogonal: |P^T eta P - eta| = {residual:e}")]
    NotOrthogonal { residual: f64 },

    #[error("twisted conjugate of e^{index} leaves grade 1 (residual {residual:e})")]
    NotLipschitz { index: usize, residual: f64 },

    #[error("normalization failed: {0}")]
    NormalizationFailed(String),

    #[error("element is not in Pin: {0}")]
    NotInPin(String),

    #[error("could not sample a non-null vector")]
    DegenerateSampling,

    #[error("volume elements do not differ by +-1 (residual {residual:e})")]
    VolumeMismatch { residual: f64 },

    #[error("representation is out of scope: {0}")]
    Unsupported(String),

    #[error("invalid json: {0}")]
    Json(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}
