//! Upper-bounding the intrinsic information `inf_Lambda I(A;B|E')` by a
//! derivative-free search over parametrized channels on Eve's register.
//!
//! Channels `E -> E'` are parametrized through their Stinespring dilation: a
//! Hermitian generator `H` built from the parameter vector is exponentiated
//! to a unitary on `C^{e_out * env}`, its first `in_dim` columns form an
//! isometry, and slicing over the environment index yields the Kraus family.
//! The identity channel is always part of the candidate set, so the search
//! result can only improve on (never exceed) the plain conditional mutual
//! information; the true infimum is merely upper-bounded and never claimed
//! to be attained.

use num_complex::Complex64;
use qip_core::{conditional_mutual_information, CMatrix, Channel, Operator};
use rand::Rng;
use rand_chacha::ChaCha12Rng;

use crate::error::{DiqkdError, Result};
use crate::optim::NelderMead;

/// Completeness residual above which an evaluated channel is rejected.
const KRAUS_TOL: f64 = 1e-10;

/// Search configuration. `e_out_dim * env_dim` must reach Eve's input
/// dimension for the isometry to exist.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SquashSearchConfig {
    pub e_out_dim: usize,
    pub env_dim: usize,
    pub restarts: usize,
    pub max_evals: usize,
    pub seed: u64,
    pub tol: f64,
}

impl Default for SquashSearchConfig {
    fn default() -> Self {
        Self {
            e_out_dim: 2,
            env_dim: 2,
            restarts: 16,
            max_evals: 2000,
            seed: 0,
            tol: 1e-9,
        }
    }
}

/// Search outcome. `improvement = identity_value - best_value >= 0` holds by
/// candidate-set inclusion of the identity channel.
#[derive(Debug, Clone)]
pub struct SquashResult {
    pub best_value: f64,
    pub best_channel: Channel,
    pub identity_value: f64,
    pub improvement: f64,
}

/// Number of real parameters of the unitary generator on
/// `C^{e_out * env}`.
pub fn parameter_count(e_out_dim: usize, env_dim: usize) -> usize {
    let n = e_out_dim * env_dim;
    n * n
}

/// Builds the channel of a parameter vector: Kraus operators are the
/// environment slices of the first `in_dim` columns of `exp(iH(theta))`.
/// `theta = 0` with `e_out = in_dim`, `env = 1` yields the identity channel.
pub fn channel_from_params(
    theta: &[f64],
    in_dim: usize,
    e_out_dim: usize,
    env_dim: usize,
) -> Result<Channel> {
    let n = e_out_dim * env_dim;
    if n < in_dim {
        return Err(DiqkdError::InfeasibleDims {
            product: n,
            in_dim,
        });
    }
    if theta.len() != n * n {
        return Err(DiqkdError::BadParameterVector {
            got: theta.len(),
            need: n * n,
        });
    }

    // Hermitian generator: n real diagonal entries, then (re, im) pairs for
    // the upper triangle.
    let mut h = CMatrix::zeros(n, n);
    let mut k = 0;
    for i in 0..n {
        h[(i, i)] = Complex64::new(theta[k], 0.0);
        k += 1;
    }
    for i in 0..n {
        for j in i + 1..n {
            let z = Complex64::new(theta[k], theta[k + 1]);
            h[(i, j)] = z;
            h[(j, i)] = z.conj();
            k += 2;
        }
    }

    // U = exp(iH) through the spectral decomposition of H.
    let eig = nalgebra::SymmetricEigen::new(h);
    let mut u = CMatrix::zeros(n, n);
    for (idx, lambda) in eig.eigenvalues.iter().enumerate() {
        let phase = Complex64::new(0.0, *lambda).exp();
        let col = eig.eigenvectors.column(idx);
        for r in 0..n {
            for c in 0..n {
                u[(r, c)] += phase * col[r] * col[c].conj();
            }
        }
    }

    let kraus: Vec<CMatrix> = (0..env_dim)
        .map(|k| CMatrix::from_fn(e_out_dim, in_dim, |o, m| u[(o * env_dim + k, m)]))
        .collect();
    let channel = Channel::new(kraus)?;
    let residual = channel.completeness_residual();
    if residual > KRAUS_TOL {
        return Err(DiqkdError::Qip(qip_core::QipError::KrausIncomplete {
            residual,
        }));
    }
    Ok(channel)
}

fn cmi_abe(rho: &Operator) -> Result<f64> {
    Ok(conditional_mutual_information(rho, &[0], &[1], &[2])?)
}

/// Best upper bound on `inf_Lambda I(A;B|E')` found within the budget, for a
/// tripartite state with Eve as the final subsystem. The identity channel is
/// evaluated first and kept in the candidate set; restarts use independent
/// deterministic RNG streams derived from `(seed, restart index)`, so the
/// result is a pure function of `(rho, cfg)`.
pub fn intrinsic_upper(rho: &Operator, cfg: &SquashSearchConfig) -> Result<SquashResult> {
    if rho.parties() != 3 {
        return Err(DiqkdError::WrongPartyCount {
            need: 3,
            got: rho.parties(),
        });
    }
    let in_dim = rho.dims()[2];
    let n = cfg.e_out_dim * cfg.env_dim;
    if n < in_dim {
        return Err(DiqkdError::InfeasibleDims {
            product: n,
            in_dim,
        });
    }

    let identity_value = cmi_abe(rho)?;
    let mut best_value = identity_value;
    let mut best_channel = Channel::identity(in_dim);

    let nparams = parameter_count(cfg.e_out_dim, cfg.env_dim);
    let mut objective = |theta: &[f64]| -> f64 {
        let value = channel_from_params(theta, in_dim, cfg.e_out_dim, cfg.env_dim)
            .and_then(|ch| Ok(ch.apply(rho, 2)?))
            .and_then(|out| cmi_abe(&out));
        value.unwrap_or(f64::INFINITY)
    };

    let mut finite_total = 0usize;
    let nm = NelderMead {
        max_evals: cfg.max_evals,
        ftol: cfg.tol,
        ..Default::default()
    };
    for restart in 0..cfg.restarts {
        let mut seed_bytes = [0u8; 32];
        seed_bytes[..8].copy_from_slice(&cfg.seed.to_le_bytes());
        seed_bytes[8..16].copy_from_slice(&(restart as u64).to_le_bytes());
        let mut rng = ChaCha12Rng::from_seed(seed_bytes);
        let theta0: Vec<f64> = (0..nparams).map(|_| rng.gen_range(-0.8..0.8)).collect();

        let outcome = nm.minimize(&mut objective, &theta0);
        finite_total += outcome.finite_evals;
        if outcome.value < best_value {
            best_value = outcome.value;
            best_channel = channel_from_params(&outcome.x, in_dim, cfg.e_out_dim, cfg.env_dim)?;
        }
    }
    if cfg.restarts > 0 && cfg.max_evals > 0 && finite_total == 0 {
        return Err(DiqkdError::NoValidEvaluation);
    }

    Ok(SquashResult {
        best_value,
        best_channel,
        identity_value,
        improvement: identity_value - best_value,
    })
}
