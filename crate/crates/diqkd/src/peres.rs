//! One-way key-rate evidence for the Vertesi-Brunner bound-entangled state.
//!
//! The 3x3 state is a rational mixture of four orthonormal vectors. It has a
//! positive partial transpose (so its entanglement cannot be distilled) yet
//! violates a Bell inequality with the measurement families below, which
//! certifies device-independent randomness. The point of this module is the
//! key-rate side: for every choice of key input, the one-way Devetak-Winter
//! rate `H(A|E) - H(A|B)` (and its Bob-to-Alice mirror) evaluated on the
//! purified state is nonpositive, so these measurements produce no key in a
//! one-way protocol even though they produce randomness.
//!
//! Each rate is computed along two independent entropy paths (joint-entropy
//! differences on the full measured state vs. direct conditional entropies
//! over the classical outcome blocks) and the two must agree to 1e-10.

use num_complex::Complex64;
use qip_core::{shannon_entropy, von_neumann_entropy, CMatrix, Ket, Operator, Povm};

use crate::error::{DiqkdError, Result};

/// Mixture weights as exact rationals over the common denominator:
/// 3257/6884, 1800/6884, 1800/6884, 27/6884.
pub const LAMBDA_NUMERATORS: [u64; 4] = [3257, 1800, 1800, 27];
pub const LAMBDA_DENOMINATOR: u64 = 6884;

/// Alice's default measurement-vector parameter.
pub const ALICE_Q: f64 = 0.2;

fn c64(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn ket3x3(entries: &[(usize, f64)]) -> Ket {
    let mut amps = [Complex64::new(0.0, 0.0); 9];
    for &(idx, value) in entries {
        amps[idx] = c64(value);
    }
    Ket::from_components(&amps, vec![3, 3]).expect("normalized eigenvector")
}

/// The bound-entangled state: rank-4 rational mixture of four orthonormal
/// two-qutrit vectors.
#[derive(Debug, Clone)]
pub struct VbState {
    pub rho: Operator,
    pub lambdas: [f64; 4],
    pub psis: [Ket; 4],
}

pub fn build_vb_state() -> VbState {
    // Exact rational bookkeeping: the numerators must tile the denominator.
    let total: u64 = LAMBDA_NUMERATORS.iter().sum();
    assert_eq!(total, LAMBDA_DENOMINATOR);
    let lambdas = LAMBDA_NUMERATORS.map(|n| n as f64 / LAMBDA_DENOMINATOR as f64);

    let a = (131.0f64 / 2.0).sqrt();
    let s2 = std::f64::consts::FRAC_1_SQRT_2;
    let s3 = 1.0 / 3.0f64.sqrt();
    // Basis |ij> at flat index 3i + j.
    let psis = [
        ket3x3(&[(0, s2), (4, s2)]),
        ket3x3(&[(1, a / 12.0), (3, a / 12.0), (2, 1.0 / 60.0), (7, -0.3)]),
        ket3x3(&[(0, a / 12.0), (4, -a / 12.0), (5, 1.0 / 60.0), (6, 0.3)]),
        ket3x3(&[(1, -s3), (3, s3), (8, s3)]),
    ];

    let mut m = CMatrix::zeros(9, 9);
    for (l, psi) in lambdas.iter().zip(&psis) {
        m += psi.density().matrix().scale(*l);
    }
    let rho = Operator::density(m, vec![3, 3]).expect("valid mixture");
    VbState { rho, lambdas, psis }
}

/// Measurement families: three binary POVMs for Alice built from the
/// vectors `|A_x>`, and two POVMs for Bob (three outcomes for `y = 0`, two
/// for `y = 1`).
#[derive(Debug, Clone)]
pub struct VbMeasurements {
    pub alice: [Povm; 3],
    pub bob: [Povm; 2],
}

pub fn build_vb_measurements() -> VbMeasurements {
    build_vb_measurements_with_q(ALICE_Q).expect("default parameter is valid")
}

/// Measurements with an overridden Alice parameter `q in [0, 1/2]`
/// (`|A_x>` stays normalized for the whole range).
pub fn build_vb_measurements_with_q(q: f64) -> Result<VbMeasurements> {
    if !(0.0..=0.5).contains(&q) {
        return Err(DiqkdError::InvalidParameter {
            name: "q",
            value: q,
            domain: "[0, 1/2]",
        });
    }
    let r3 = 3.0f64.sqrt();
    let tail = (1.0 - 4.0 * q * q).max(0.0).sqrt();
    let alice_vec = |signs: (f64, f64)| -> Ket {
        let mut amps = [Complex64::new(0.0, 0.0); 3];
        amps[0] = c64(signs.0 * q);
        amps[1] = c64(signs.1 * r3 * q);
        amps[2] = c64(tail);
        Ket::from_components(&amps, vec![3]).expect("normalized for q in [0, 1/2]")
    };
    let a0 = alice_vec((-1.0, 1.0));
    let a1 = {
        let mut amps = [Complex64::new(0.0, 0.0); 3];
        amps[0] = c64(2.0 * q);
        amps[2] = c64(tail);
        Ket::from_components(&amps, vec![3]).expect("normalized")
    };
    let a2 = alice_vec((-1.0, -1.0));
    let alice = [a0, a1, a2].map(|v| {
        Povm::with_completion(vec![v.density()]).expect("projector plus complement")
    });

    // Bob y = 0: two projectors plus the completion as the third outcome.
    let s2 = std::f64::consts::FRAC_1_SQRT_2;
    let s3 = 1.0 / 3.0f64.sqrt();
    let s6 = 1.0 / 6.0f64.sqrt();
    let b00 = Ket::from_components(
        &[c64(0.0), c64((2.0f64 / 3.0).sqrt()), c64(s3)],
        vec![3],
    )
    .expect("normalized");
    let b01 = Ket::from_components(&[c64(-s2), c64(-s6), c64(s3)], vec![3]).expect("normalized");
    let bob0 = Povm::with_completion(vec![b00.density(), b01.density()])
        .expect("completion is PSD");
    // Bob y = 1: project onto |2>.
    let p2 = Ket::basis_state(&[3], 2).expect("in range").density();
    let bob1 = Povm::with_completion(vec![p2]).expect("projector plus complement");

    Ok(VbMeasurements {
        alice,
        bob: [bob0, bob1],
    })
}

/// Minimum eigenvalue of the partial transpose of a bipartite state.
/// A value `>= -1e-10` certifies a positive partial transpose.
pub fn ppt_check(rho: &Operator) -> Result<f64> {
    if rho.parties() != 2 {
        return Err(DiqkdError::WrongPartyCount {
            need: 2,
            got: rho.parties(),
        });
    }
    let pt = rho.partial_transpose(1)?;
    let evs = pt.eigenvalues_hermitian()?;
    Ok(*evs.last().expect("nonempty spectrum"))
}

/// Spectral purification `sum_i sqrt(lambda_i) |psi_i>|i>_E`: since the four
/// vectors are orthonormal, the environment dimension equals the rank (4),
/// and any other purification is isometrically related and entropy-neutral.
pub fn vb_purification(state: &VbState) -> Ket {
    let mut amps = vec![Complex64::new(0.0, 0.0); 9 * 4];
    for (e, (l, psi)) in state.lambdas.iter().zip(&state.psis).enumerate() {
        let w = c64(l.sqrt());
        for ij in 0..9 {
            amps[ij * 4 + e] += w * psi.amplitudes()[ij];
        }
    }
    Ket::from_components(&amps, vec![3, 3, 4]).expect("normalized purification")
}

/// The two entropy-evaluation routes of a one-way rate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatePaths {
    /// Joint-entropy differences on the full measured state.
    pub joint: f64,
    /// Direct conditional entropies over the classical outcome blocks.
    pub blockwise: f64,
}

/// One-way rate `H(M|E) - H(M|partner)` after measuring `measured_party`
/// (0 or 1) of a tripartite state with the given POVM, computed along both
/// entropy paths.
pub fn one_way_rate_paths(
    state: &Operator,
    povm: &Povm,
    measured_party: usize,
) -> Result<RatePaths> {
    if state.parties() != 3 {
        return Err(DiqkdError::WrongPartyCount {
            need: 3,
            got: state.parties(),
        });
    }
    if measured_party > 1 {
        return Err(DiqkdError::InputOutOfRange {
            index: measured_party,
            size: 2,
        });
    }
    let partner = 1 - measured_party;

    // Path one: measure, then take joint-entropy differences.
    let measured = qip_core::measure_subsystems(state, &[(measured_party, povm)])?;
    let vn = |keep: &[usize]| -> Result<f64> {
        Ok(von_neumann_entropy(&measured.partial_trace(keep)?)?)
    };
    let joint = vn(&[measured_party, 2])? - vn(&[2])? - vn(&[0, 1])? + vn(&[partner])?;

    // Path two: conditional entropies over outcome blocks of the unmeasured
    // registers. The kept order is [partner, Eve], so Eve sits at slot 1.
    let keep: Vec<usize> = vec![partner, 2];
    let mut probs = Vec::with_capacity(povm.outcomes());
    let mut cond_partner = 0.0;
    let mut cond_eve = 0.0;
    let mut sum_partner: Option<CMatrix> = None;
    let mut sum_eve: Option<CMatrix> = None;
    for o in 0..povm.outcomes() {
        let mut element = [
            Operator::identity(&[state.dims()[0]]),
            Operator::identity(&[state.dims()[1]]),
        ];
        element[measured_party] = povm.element(o).clone();
        let full = element[0]
            .tensor(&element[1])
            .tensor(&Operator::identity(&[state.dims()[2]]));
        let product = Operator::new(full.matrix() * state.matrix(), state.dims().to_vec())?;
        let p = product.trace().re;
        probs.push(p.max(0.0));
        let block = product.partial_trace(&keep)?;
        let partner_block = block.partial_trace(&[0])?;
        let eve_block = block.partial_trace(&[1])?;
        match (&mut sum_partner, &mut sum_eve) {
            (Some(sp), Some(se)) => {
                *sp += partner_block.matrix();
                *se += eve_block.matrix();
            }
            _ => {
                sum_partner = Some(partner_block.matrix().clone());
                sum_eve = Some(eve_block.matrix().clone());
            }
        }
        if p > 1e-14 {
            let norm = |op: &Operator| -> Result<f64> {
                Ok(von_neumann_entropy(&Operator::new(
                    op.matrix().scale(1.0 / p),
                    op.dims().to_vec(),
                )?)?)
            };
            cond_partner += p * norm(&partner_block)?;
            cond_eve += p * norm(&eve_block)?;
        }
    }
    let h_out = shannon_entropy(&probs);
    let dims_p = vec![state.dims()[partner]];
    let dims_e = vec![state.dims()[2]];
    let h_partner = von_neumann_entropy(&Operator::new(
        sum_partner.expect("at least one outcome"),
        dims_p,
    )?)?;
    let h_eve = von_neumann_entropy(&Operator::new(sum_eve.expect("at least one outcome"), dims_e)?)?;
    // H(M|E) = H(p) + sum_o p H(E|o) - H(E); same shape for the partner.
    let blockwise = (h_out + cond_eve - h_eve) - (h_out + cond_partner - h_partner);

    Ok(RatePaths { joint, blockwise })
}

/// Bound-entangled tuple: state, measurements and the spectral purification.
#[derive(Debug, Clone)]
pub struct VbTuple {
    pub state: VbState,
    pub measurements: VbMeasurements,
    psi: Ket,
}

impl VbTuple {
    pub fn standard() -> Self {
        let state = build_vb_state();
        let psi = vb_purification(&state);
        Self {
            state,
            measurements: build_vb_measurements(),
            psi,
        }
    }

    pub fn with_alice_q(q: f64) -> Result<Self> {
        let state = build_vb_state();
        let psi = vb_purification(&state);
        Ok(Self {
            state,
            measurements: build_vb_measurements_with_q(q)?,
            psi,
        })
    }

    pub fn purification(&self) -> &Ket {
        &self.psi
    }

    /// `H(A|E) - H(A|B)` for Alice's key input `x`, Bob quantum.
    pub fn alice_rate(&self, x: usize) -> Result<f64> {
        Ok(self.alice_rate_paths(x)?.joint)
    }

    pub fn alice_rate_paths(&self, x: usize) -> Result<RatePaths> {
        if x >= 3 {
            return Err(DiqkdError::InputOutOfRange { index: x, size: 3 });
        }
        one_way_rate_paths(&self.psi.density(), &self.measurements.alice[x], 0)
    }

    /// `H(B|E) - H(B|A)` for Bob's key input `y`, Alice quantum.
    pub fn bob_rate(&self, y: usize) -> Result<f64> {
        Ok(self.bob_rate_paths(y)?.joint)
    }

    pub fn bob_rate_paths(&self, y: usize) -> Result<RatePaths> {
        if y >= 2 {
            return Err(DiqkdError::InputOutOfRange { index: y, size: 2 });
        }
        one_way_rate_paths(&self.psi.density(), &self.measurements.bob[y], 1)
    }

    pub fn evidence_report(&self) -> Result<EvidenceReport> {
        let ppt_min_eig = ppt_check(&self.state.rho)?;
        let alice_rates = [
            self.alice_rate(0)?,
            self.alice_rate(1)?,
            self.alice_rate(2)?,
        ];
        let bob_rates = [self.bob_rate(0)?, self.bob_rate(1)?];
        let fold_max = |v: &[f64]| v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Ok(EvidenceReport {
            ppt_min_eig,
            max_alice: fold_max(&alice_rates),
            max_bob: fold_max(&bob_rates),
            alice_rates,
            bob_rates,
        })
    }
}

/// Aggregated evidence: PPT margin plus all five one-way rates.
#[derive(Debug, Clone, PartialEq)]
pub struct EvidenceReport {
    pub ppt_min_eig: f64,
    pub alice_rates: [f64; 3],
    pub bob_rates: [f64; 2],
    pub max_alice: f64,
    pub max_bob: f64,
}

impl EvidenceReport {
    /// True when the partial transpose is positive within `tol` and every
    /// one-way rate is nonpositive within `tol`.
    pub fn passes(&self, tol: f64) -> bool {
        self.ppt_min_eig >= -tol && self.max_alice <= tol && self.max_bob <= tol
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn weights_tile_the_denominator_exactly() {
        assert_eq!(LAMBDA_NUMERATORS.iter().sum::<u64>(), LAMBDA_DENOMINATOR);
        let s = build_vb_state();
        assert!((s.lambdas.iter().sum::<f64>() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn vectors_are_orthonormal() {
        let s = build_vb_state();
        for i in 0..4 {
            for j in 0..4 {
                let ip: Complex64 = s.psis[i]
                    .amplitudes()
                    .iter()
                    .zip(s.psis[j].amplitudes().iter())
                    .map(|(a, b)| a.conj() * b)
                    .sum();
                let expected = if i == j { 1.0 } else { 0.0 };
                assert!(
                    (ip.norm() - expected).abs() < 1e-12,
                    "<psi{i}|psi{j}> = {ip}"
                );
            }
        }
    }

    #[test]
    fn state_has_rank_four() {
        let s = build_vb_state();
        let evs = s.rho.eigenvalues_hermitian().unwrap();
        assert!(evs[3] > 1e-4);
        assert!(evs[4].abs() < 1e-12);
        // The spectrum is exactly the rational weight list.
        let mut weights = s.lambdas.to_vec();
        weights.sort_by(|a, b| b.total_cmp(a));
        for (ev, w) in evs.iter().take(4).zip(&weights) {
            assert_abs_diff_eq!(ev, w, epsilon = 1e-12);
        }
    }

    #[test]
    fn partial_transpose_is_positive() {
        let s = build_vb_state();
        assert!(ppt_check(&s.rho).unwrap() >= -1e-10);
    }

    #[test]
    fn ppt_check_reference_cases() {
        // Maximally entangled qubit pair: minimum eigenvalue -1/2.
        let phi = crate::attack::bell_phi_plus().density();
        assert_abs_diff_eq!(ppt_check(&phi).unwrap(), -0.5, epsilon = 1e-12);
        // Maximally mixed two-qutrit state: flat spectrum 1/9.
        let mixed = Operator::new(CMatrix::identity(9, 9).scale(1.0 / 9.0), vec![3, 3]).unwrap();
        assert_abs_diff_eq!(ppt_check(&mixed).unwrap(), 1.0 / 9.0, epsilon = 1e-12);
    }

    #[test]
    fn alice_povm_vectors_are_normalized() {
        // q^2 + 3q^2 + (1 - 4q^2) = 1; at q = 1/5: 1/25 + 3/25 + 21/25.
        let m = build_vb_measurements();
        for povm in &m.alice {
            assert_abs_diff_eq!(povm.element(0).trace().re, 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn bob_completion_element_is_positive() {
        let m = build_vb_measurements();
        let evs = m.bob[0].element(2).eigenvalues_hermitian().unwrap();
        assert!(*evs.last().unwrap() >= -1e-12);
    }

    #[test]
    fn purification_marginal_recovers_state() {
        let s = build_vb_state();
        let psi = vb_purification(&s);
        assert_eq!(psi.dims(), &[3, 3, 4]);
        let back = psi.density().partial_trace(&[0, 1]).unwrap();
        assert!(back.max_abs_diff(&s.rho) < 1e-12);
    }

    #[test]
    fn alice_rates_match_frozen_fixtures_and_are_nonpositive() {
        // Fixtures frozen from an independent implementation of the
        // measurement and entropy pipeline.
        let t = VbTuple::standard();
        for x in 0..3 {
            let r = t.alice_rate(x).unwrap();
            assert!(r <= 1e-9, "alice rate {r} at x = {x}");
            assert_abs_diff_eq!(r, -0.089077686104, epsilon = 1e-9);
        }
    }

    #[test]
    fn bob_rates_match_frozen_fixtures_and_are_nonpositive() {
        let t = VbTuple::standard();
        let expected = [-0.323160404188, -0.005194958060];
        for y in 0..2 {
            let r = t.bob_rate(y).unwrap();
            assert!(r <= 1e-9, "bob rate {r} at y = {y}");
            assert_abs_diff_eq!(r, expected[y], epsilon = 1e-9);
        }
    }

    #[test]
    fn both_entropy_paths_agree() {
        let t = VbTuple::standard();
        for x in 0..3 {
            let p = t.alice_rate_paths(x).unwrap();
            assert!(
                (p.joint - p.blockwise).abs() <= 1e-10,
                "paths disagree at x = {x}: {} vs {}",
                p.joint,
                p.blockwise
            );
        }
        for y in 0..2 {
            let p = t.bob_rate_paths(y).unwrap();
            assert!((p.joint - p.blockwise).abs() <= 1e-10);
        }
    }

    #[test]
    fn bob_second_input_outcome_follows_born_rule() {
        let t = VbTuple::standard();
        let rho_b = t.state.rho.partial_trace(&[1]).unwrap();
        let expected = rho_b.matrix()[(2, 2)].re;
        let measured = qip_core::measure_subsystems(
            &t.state.rho,
            &[(1, &t.measurements.bob[1])],
        )
        .unwrap();
        // Pr[b = 0 | y = 1] summed over Alice.
        let dist = measured.partial_trace(&[1]).unwrap();
        assert_abs_diff_eq!(dist.matrix()[(0, 0)].re, expected, epsilon = 1e-12);
    }

    #[test]
    fn distillable_state_gives_positive_rate() {
        // Pipeline sanity: a maximally entangled two-qutrit pure state with
        // computational measurements has rate log2(3) > 0.
        let s3 = 1.0 / 3.0f64.sqrt();
        let psi = ket3x3(&[(0, s3), (4, s3), (8, s3)]);
        let pure = psi.density().purify().unwrap();
        let rate = one_way_rate_paths(&pure.density(), &Povm::computational(3), 0).unwrap();
        assert_abs_diff_eq!(rate.joint, 3.0f64.log2(), epsilon = 1e-10);
        assert_abs_diff_eq!(rate.blockwise, 3.0f64.log2(), epsilon = 1e-10);
    }

    #[test]
    fn evidence_report_is_deterministic_and_consistent() {
        let t = VbTuple::standard();
        let r1 = t.evidence_report().unwrap();
        let r2 = t.evidence_report().unwrap();
        assert_eq!(r1, r2);
        assert_eq!(
            r1.max_alice,
            r1.alice_rates.iter().copied().fold(f64::NEG_INFINITY, f64::max)
        );
        assert_eq!(
            r1.max_bob,
            r1.bob_rates.iter().copied().fold(f64::NEG_INFINITY, f64::max)
        );
        assert!(r1.passes(1e-9));
    }

    #[test]
    fn tampered_parameter_still_produces_a_report() {
        let t = VbTuple::with_alice_q(0.3).unwrap();
        let report = t.evidence_report().unwrap();
        // No sign assertion for non-standard parameters; the PPT margin is a
        // property of the state alone and must survive.
        assert!(report.ppt_min_eig >= -1e-10);
    }

    #[test]
    fn invalid_q_is_rejected() {
        assert!(build_vb_measurements_with_q(0.6).is_err());
        assert!(build_vb_measurements_with_q(-0.1).is_err());
    }
}
