//! Dense complex-matrix quantum information toolkit.
//!
//! Everything is built around [`Operator`]: a square complex matrix carrying
//! an explicit list of subsystem dimensions. Subsystem ordering is positional
//! in every operation — nothing is ever reordered implicitly. All values are
//! immutable after construction and safe to share across threads.
//!
//! Entropies are evaluated through a single Hermitian eigendecomposition
//! backend (no matrix-logarithm path) and are reported in bits.

pub mod channel;
pub mod entropy;
pub mod error;
pub mod ket;
pub mod measure;
pub mod operator;
pub mod povm;
pub mod random;

pub use channel::Channel;
pub use entropy::{binary_entropy, conditional_mutual_information, shannon_entropy, von_neumann_entropy};
pub use error::{QipError, Result};
pub use ket::Ket;
pub use measure::measure_subsystems;
pub use operator::Operator;
pub use povm::Povm;

/// Complex dense matrix used throughout.
pub type CMatrix = nalgebra::DMatrix<num_complex::Complex64>;
/// Complex dense vector used throughout.
pub type CVector = nalgebra::DVector<num_complex::Complex64>;

/// Hermiticity / positivity / trace / normalization tolerance, relative to
/// unit trace. Double-precision eigensolvers at the dimensions handled here
/// (d <= ~100) deliver residuals around 1e-13, so 1e-9 leaves ample slack.
pub const TOL: f64 = 1e-9;

/// Eigenvalues inside `[-EIG_CLIP, EIG_CLIP]` are treated as exact zeros
/// before taking logarithms (the 0 log 0 = 0 convention).
pub const EIG_CLIP: f64 = 1e-12;
