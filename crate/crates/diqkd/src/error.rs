use thiserror::Error;

#[derive(Debug, Error)]
pub enum DiqkdError {
    #[error(transparent)]
    Qip(#[from] qip_core::QipError),

    #[error("parameter {name} = {value} outside {domain}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        domain: &'static str,
    },

    #[error("CHSH functionals need binary alphabets on inputs {{0,1}}: {0}")]
    AlphabetMismatch(String),

    #[error("correlation table invalid: {0}")]
    InvalidCorrelation(String),

    #[error("key inputs ({x}, {y}) outside input alphabets ({nx}, {ny})")]
    KeyInputOutOfRange {
        x: usize,
        y: usize,
        nx: usize,
        ny: usize,
    },

    #[error("input index {index} outside alphabet of size {size}")]
    InputOutOfRange { index: usize, size: usize },

    #[error("grid needs at least {min} points per axis, got {got}")]
    BadGrid { min: usize, got: usize },

    #[error("channel dimensions infeasible: e_out * env = {product} < Eve dimension {in_dim}")]
    InfeasibleDims { product: usize, in_dim: usize },

    #[error("unexpected parameter vector length {got}, need {need}")]
    BadParameterVector { got: usize, need: usize },

    #[error("search budget exhausted without a single valid channel evaluation")]
    NoValidEvaluation,

    #[error("state must carry exactly {need} subsystems, found {got}")]
    WrongPartyCount { need: usize, got: usize },

    #[error("CHSH evaluation requires qubit parties, found dims {dims:?}")]
    NonQubitParty { dims: Vec<usize> },
}

pub type Result<T> = std::result::Result<T, DiqkdError>;
