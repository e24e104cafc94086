//! Key-rate bounds for CHSH-based device-independent QKD, evidence that the
//! Vertesi-Brunner bound-entangled state yields no one-way DI key, and a
//! Monte Carlo simulator of the standard protocol.
//!
//! - [`attack`]: the collective attack reproducing a given violation and
//!   error rate, with closed-form and numerically verified bounds.
//! - [`squash`]: derivative-free search over channels on Eve's register,
//!   upper-bounding the intrinsic information.
//! - [`peres`]: the bound-entangled counterexample evidence.
//! - [`correlation`] / [`sim`] / [`devices`]: correlation tables, the
//!   protocol simulator and ready-made device models.

pub mod attack;
pub mod correlation;
pub mod devices;
pub mod error;
pub mod optim;
pub mod peres;
pub mod sim;
pub mod squash;

pub use error::{DiqkdError, Result};
