use thiserror::Error;

/// Errors produced by the toolkit.
#[derive(Debug, Error)]
pub enum QipError {
    #[error("dimension list {dims:?} (product {product}) does not match matrix side {side}")]
    DimsMismatch {
        dims: Vec<usize>,
        product: usize,
        side: usize,
    },

    #[error("subsystem index {index} out of range for {count} subsystems")]
    PartyOutOfRange { index: usize, count: usize },

    #[error("matrix is not Hermitian: residual {residual:.3e} exceeds tolerance")]
    NonHermitian { residual: f64 },

    #[error("not a valid density operator: {reason}")]
    InvalidState { reason: String },

    #[error("invalid POVM: {reason}")]
    InvalidPovm { reason: String },

    #[error("Kraus family is not trace preserving: residual {residual:.3e}")]
    KrausIncomplete { residual: f64 },

    #[error("dimension mismatch: {context}")]
    DimensionMismatch { context: String },

    #[error("subsystem index sets overlap or repeat an index")]
    OverlappingParts,

    #[error("argument {value} outside domain {domain}")]
    OutOfDomain { value: f64, domain: &'static str },

    #[error("ket is not normalized: |psi|^2 = {norm_sq}")]
    NotNormalized { norm_sq: f64 },
}

pub type Result<T> = std::result::Result<T, QipError>;
