//! Monte Carlo simulation of the standard protocol's data-generation stage
//! and parameter-estimation step, with asymptotic key-length accounting in
//! place of explicit error correction and privacy amplification.
//!
//! Rounds are IID samples from a fixed correlation. Every round first draws
//! the test/key coin, then (for test rounds) the uniform inputs, then the
//! outcome pair via inverse-CDF sampling — always in that order, from a
//! ChaCha12 stream seeded by the config, so a report is a pure function of
//! `(correlation, config)`. The generator choice is part of the fixture
//! contract; do not change it without regenerating frozen expectations.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::attack::{lower_bound_dw, AttackParams, S_CLASSICAL, S_QUANTUM};
use crate::correlation::Correlation;
use crate::error::{DiqkdError, Result};

/// Protocol parameters for one simulated execution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProtocolConfig {
    /// Number of rounds.
    pub n: u64,
    /// Probability that a round is a test round.
    pub test_prob: f64,
    /// Expected winning probability; the run aborts when the observed test
    /// average falls below it.
    pub omega_exp: f64,
    /// Inputs used in key-generation rounds.
    pub key_inputs: (usize, usize),
    /// RNG seed.
    pub seed: u64,
}

/// Per-run statistics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimReport {
    pub n: u64,
    pub test_rounds: u64,
    pub key_rounds: u64,
    pub wins: u64,
    /// `wins / test_rounds`; undefined when no round was a test round.
    pub observed_omega: Option<f64>,
    /// Key-round disagreement frequency; undefined without key rounds.
    pub observed_qber: Option<f64>,
    /// True iff the observed winning average fell below `omega_exp`.
    pub abort: bool,
}

/// Inverse-CDF outcome sample for inputs `(x, y)` at uniform variate `u`,
/// scanning outcome pairs in row-major `(a, b)` order.
pub fn sample_pair(p: &Correlation, x: usize, y: usize, u: f64) -> (usize, usize) {
    let (_, _, na, nb) = p.alphabet();
    let mut acc = 0.0;
    for a in 0..na {
        for b in 0..nb {
            acc += p.get(x, y, a, b);
            if u < acc {
                return (a, b);
            }
        }
    }
    (na - 1, nb - 1)
}

/// Runs the data-generation stage and the parameter-estimation decision.
pub fn run_protocol(p: &Correlation, cfg: &ProtocolConfig) -> Result<SimReport> {
    if cfg.n == 0 {
        return Err(DiqkdError::InvalidParameter {
            name: "n",
            value: 0.0,
            domain: "n >= 1",
        });
    }
    if !(0.0..=1.0).contains(&cfg.test_prob) {
        return Err(DiqkdError::InvalidParameter {
            name: "test_prob",
            value: cfg.test_prob,
            domain: "[0, 1]",
        });
    }
    if !(0.0..=1.0).contains(&cfg.omega_exp) {
        return Err(DiqkdError::InvalidParameter {
            name: "omega_exp",
            value: cfg.omega_exp,
            domain: "[0, 1]",
        });
    }
    let (nx, ny, _, _) = p.alphabet();
    if nx < 2 || ny < 2 {
        return Err(DiqkdError::AlphabetMismatch(format!(
            "test rounds need two inputs per party, got ({nx}, {ny})"
        )));
    }
    let (kx, ky) = cfg.key_inputs;
    if kx >= nx || ky >= ny {
        return Err(DiqkdError::KeyInputOutOfRange {
            x: kx,
            y: ky,
            nx,
            ny,
        });
    }

    let mut rng = ChaCha12Rng::seed_from_u64(cfg.seed);
    let mut test_rounds = 0u64;
    let mut key_rounds = 0u64;
    let mut wins = 0u64;
    let mut disagreements = 0u64;
    for _ in 0..cfg.n {
        if rng.gen::<f64>() < cfg.test_prob {
            let x = rng.gen_range(0..2usize);
            let y = rng.gen_range(0..2usize);
            let (a, b) = sample_pair(p, x, y, rng.gen::<f64>());
            test_rounds += 1;
            if a < 2 && b < 2 && (a ^ b) == (x & y) {
                wins += 1;
            }
        } else {
            let (a, b) = sample_pair(p, kx, ky, rng.gen::<f64>());
            key_rounds += 1;
            if a != b {
                disagreements += 1;
            }
        }
    }

    let observed_omega = (test_rounds > 0).then(|| wins as f64 / test_rounds as f64);
    let observed_qber = (key_rounds > 0).then(|| disagreements as f64 / key_rounds as f64);
    let abort = observed_omega.is_some_and(|w| w < cfg.omega_exp);
    Ok(SimReport {
        n: cfg.n,
        test_rounds,
        key_rounds,
        wins,
        observed_omega,
        observed_qber,
        abort,
    })
}

/// Asymptotic key length `key_rounds * max(0, rate(S_obs, Q_obs))`, where
/// the observed violation `S = 8 omega - 4` and error rate are clamped to
/// the valid parameter domain before the rate function sees them. Aborted
/// runs (and runs without both estimates) yield zero.
pub fn asymptotic_key_bits(report: &SimReport, rate: impl Fn(f64, f64) -> f64) -> f64 {
    if report.abort || report.key_rounds == 0 {
        return 0.0;
    }
    let (Some(omega), Some(qber)) = (report.observed_omega, report.observed_qber) else {
        return 0.0;
    };
    let s = (8.0 * omega - 4.0).clamp(S_CLASSICAL, S_QUANTUM);
    let q = qber.clamp(0.0, 0.5);
    report.key_rounds as f64 * rate(s, q).max(0.0)
}

/// [`asymptotic_key_bits`] with the one-way Devetak-Winter rate of the
/// collective attack as the default rate function.
pub fn asymptotic_key_bits_dw(report: &SimReport) -> f64 {
    asymptotic_key_bits(report, |s, q| {
        lower_bound_dw(&AttackParams::new(s, q).expect("clamped into domain"))
    })
}
