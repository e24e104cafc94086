//! Pironio-style collective attack for CHSH-based DIQKD at a given violation
//! `S` and key error rate `Q`, with closed-form and numerically verified
//! key-rate bounds.
//!
//! The attack prepares the dephased Bell mixture
//! `rho = (1+C)/2 |Phi+><Phi+| + (1-C)/2 |Phi-><Phi-|` with
//! `C = sqrt((S/2)^2 - 1)`, measures `A0 = sigma_z`, `A1 = sigma_x` on
//! Alice's side and tilted `sigma_z/sigma_x` combinations on Bob's, and
//! realizes the key input `y = 2` as a noisy readout that flips to a uniform
//! bit with probability `2Q`. This tuple reproduces exactly the requested
//! `(S, Q)` statistics, so every bound evaluated on it constrains any
//! protocol that aborts on the observed violation and error rate alone.

use num_complex::Complex64;
use qip_core::{
    binary_entropy, conditional_mutual_information, measure_subsystems, von_neumann_entropy,
    CMatrix, Ket, Operator, Povm,
};

use crate::error::{DiqkdError, Result};

/// Local (classical) bound of the CHSH correlator.
pub const S_CLASSICAL: f64 = 2.0;
/// Quantum (Tsirelson) bound of the CHSH correlator, `2 sqrt(2)`.
pub const S_QUANTUM: f64 = 2.0 * std::f64::consts::SQRT_2;
/// Key-generation inputs: Alice's `x = 0`, Bob's extra input `y = 2`.
pub const KEY_INPUTS: (usize, usize) = (0, 2);

const RANGE_TOL: f64 = 1e-9;

fn c64(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

pub fn sigma_z() -> Operator {
    Operator::from_matrix(CMatrix::from_row_slice(
        2,
        2,
        &[c64(1.0), c64(0.0), c64(0.0), c64(-1.0)],
    ))
    .expect("2x2")
}

pub fn sigma_x() -> Operator {
    Operator::from_matrix(CMatrix::from_row_slice(
        2,
        2,
        &[c64(0.0), c64(1.0), c64(1.0), c64(0.0)],
    ))
    .expect("2x2")
}

pub fn bell_phi_plus() -> Ket {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    Ket::from_components(&[c64(s), c64(0.0), c64(0.0), c64(s)], vec![2, 2]).expect("normalized")
}

pub fn bell_phi_minus() -> Ket {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    Ket::from_components(&[c64(s), c64(0.0), c64(0.0), c64(-s)], vec![2, 2]).expect("normalized")
}

/// Error rate of the honest depolarized implementation at violation `s`:
/// `Q = (1 - s / (2 sqrt 2)) / 2`, the relation `S = 2 sqrt(2) (1 - 2Q)`.
pub fn depolarizing_qber(s: f64) -> f64 {
    0.5 * (1.0 - s / S_QUANTUM)
}

/// Attack parameters: CHSH violation `S in [2, 2 sqrt 2]`, key error rate
/// `Q in [0, 1/2]`, and the derived dephasing coefficient
/// `C = sqrt((S/2)^2 - 1) in [0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AttackParams {
    s: f64,
    q: f64,
    c: f64,
}

impl AttackParams {
    pub fn new(s: f64, q: f64) -> Result<Self> {
        if !(S_CLASSICAL - RANGE_TOL..=S_QUANTUM + RANGE_TOL).contains(&s) {
            return Err(DiqkdError::InvalidParameter {
                name: "S",
                value: s,
                domain: "[2, 2*sqrt(2)]",
            });
        }
        if !(-RANGE_TOL..=0.5 + RANGE_TOL).contains(&q) {
            return Err(DiqkdError::InvalidParameter {
                name: "Q",
                value: q,
                domain: "[0, 1/2]",
            });
        }
        let s = s.clamp(S_CLASSICAL, S_QUANTUM);
        let q = q.clamp(0.0, 0.5);
        let c = ((s / 2.0).powi(2) - 1.0).clamp(0.0, 1.0).sqrt();
        Ok(Self { s, q, c })
    }

    /// Parameters along the depolarizing relation `Q = (1 - S/(2 sqrt 2))/2`.
    pub fn depolarizing(s: f64) -> Result<Self> {
        Self::new(s, depolarizing_qber(s))
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn c(&self) -> f64 {
        self.c
    }
}

/// Measurement families of the attack: two binary POVMs for Alice, three for
/// Bob (`y = 2` is the noisy key readout).
#[derive(Debug, Clone)]
pub struct AttackMeasurements {
    pub alice: Vec<Povm>,
    pub bob: Vec<Povm>,
}

/// Alice and Bob's dephased Bell mixture (4x4, dims `[2, 2]`).
pub fn build_attack_state(p: &AttackParams) -> Operator {
    let plus = bell_phi_plus().density();
    let minus = bell_phi_minus().density();
    let m = plus.matrix().scale(0.5 * (1.0 + p.c)) + minus.matrix().scale(0.5 * (1.0 - p.c));
    Operator::new(m, vec![2, 2]).expect("4x4")
}

/// Purification of the attack state with Eve holding the dephasing register:
/// `sqrt((1+C)/2) |Phi+>|0> + sqrt((1-C)/2) |Phi->|1>` on dims `[2, 2, 2]`.
pub fn purified_state(p: &AttackParams) -> Ket {
    let wp = (0.5 * (1.0 + p.c)).sqrt();
    let wm = (0.5 * (1.0 - p.c)).sqrt();
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut amps = [Complex64::new(0.0, 0.0); 8];
    // Index layout (a, b, e) -> a*4 + b*2 + e.
    amps[0] = c64(wp * s); // |00>|0>
    amps[6] = c64(wp * s); // |11>|0>
    amps[1] = c64(wm * s); // |00>|1>
    amps[7] = c64(-wm * s); // |11>|1>
    Ket::from_components(&amps, vec![2, 2, 2]).expect("normalized")
}

/// Test observables `A0 = sigma_z`, `A1 = sigma_x`,
/// `B0/B1 = (sigma_z ± C sigma_x)/sqrt(1+C^2)`, plus the noisy key POVM
/// `B2 = {(1-2Q)|b><b| + Q I}`, which realizes a `sigma_z` readout with
/// probability `1-2Q` and a uniformly random bit with probability `2Q`.
pub fn build_measurements(p: &AttackParams) -> AttackMeasurements {
    let sz = sigma_z();
    let sx = sigma_x();
    let norm = (1.0 + p.c * p.c).sqrt();
    let b0 = Operator::new(
        (sz.matrix() + sx.matrix().scale(p.c)).scale(1.0 / norm),
        vec![2],
    )
    .expect("2x2");
    let b1 = Operator::new(
        (sz.matrix() - sx.matrix().scale(p.c)).scale(1.0 / norm),
        vec![2],
    )
    .expect("2x2");

    let id = CMatrix::identity(2, 2);
    let noisy = |b: usize| {
        let mut m = id.scale(p.q);
        m[(b, b)] += c64(1.0 - 2.0 * p.q);
        Operator::new(m, vec![2]).expect("2x2")
    };
    let b2 = Povm::new(vec![noisy(0), noisy(1)]).expect("valid for Q in [0, 1/2]");

    AttackMeasurements {
        alice: vec![
            Povm::from_observable(&sz).expect("Pauli"),
            Povm::from_observable(&sx).expect("Pauli"),
        ],
        bob: vec![
            Povm::from_observable(&b0).expect("unit observable"),
            Povm::from_observable(&b1).expect("unit observable"),
            b2,
        ],
    }
}

/// Complete attack tuple: purified state plus both measurement families.
#[derive(Debug, Clone)]
pub struct AttackTuple {
    pub params: AttackParams,
    pub state: Ket,
    pub measurements: AttackMeasurements,
}

impl AttackTuple {
    pub fn new(params: AttackParams) -> Self {
        Self {
            params,
            state: purified_state(&params),
            measurements: build_measurements(&params),
        }
    }

    /// Alice-Bob marginal of the purified state.
    pub fn state_ab(&self) -> Operator {
        self.state
            .density()
            .partial_trace(&[0, 1])
            .expect("valid parties")
    }

    /// CHSH correlator reproduced by the tuple.
    pub fn chsh(&self) -> Result<f64> {
        chsh_value(
            &self.state_ab(),
            &self.measurements.alice,
            &self.measurements.bob,
        )
    }

    /// Key-round error probability `Pr[a != b | x=0, y=2]`.
    pub fn qber(&self) -> f64 {
        let rho = self.state_ab();
        let ma = &self.measurements.alice[KEY_INPUTS.0];
        let mb = &self.measurements.bob[KEY_INPUTS.1];
        let mut err = 0.0;
        for a in 0..2 {
            for b in 0..2 {
                if a != b {
                    let op = ma.element(a).tensor(mb.element(b));
                    err += (op.matrix() * rho.matrix()).trace().re;
                }
            }
        }
        err
    }
}

/// CHSH correlator `<A0 B0> + <A0 B1> + <A1 B0> - <A1 B1>` of a two-qubit
/// state, with observables `E = M_plus - M_minus` derived from the first two
/// binary POVMs of each family.
pub fn chsh_value(rho_ab: &Operator, alice: &[Povm], bob: &[Povm]) -> Result<f64> {
    if rho_ab.dims() != [2, 2] {
        return Err(DiqkdError::NonQubitParty {
            dims: rho_ab.dims().to_vec(),
        });
    }
    if alice.len() < 2 || bob.len() < 2 {
        return Err(DiqkdError::AlphabetMismatch(
            "need two measurement settings per party".into(),
        ));
    }
    let observable = |povm: &Povm| -> Result<Operator> {
        if povm.outcomes() != 2 || povm.dim() != 2 {
            return Err(DiqkdError::NonQubitParty {
                dims: vec![povm.dim()],
            });
        }
        Ok(Operator::new(
            povm.element(0).matrix() - povm.element(1).matrix(),
            vec![2],
        )?)
    };
    let a = [observable(&alice[0])?, observable(&alice[1])?];
    let b = [observable(&bob[0])?, observable(&bob[1])?];
    let corr = |x: &Operator, y: &Operator| (x.tensor(y).matrix() * rho_ab.matrix()).trace().re;
    Ok(corr(&a[0], &b[0]) + corr(&a[0], &b[1]) + corr(&a[1], &b[0]) - corr(&a[1], &b[1]))
}

/// Closed-form key-round state after Alice measures `A0` and Bob the noisy
/// key POVM on the purification: a ccq operator on dims `[2, 2, 2]` with
/// weights `(1-Q)/2` on agreeing and `Q/2` on disagreeing outcomes, and Eve
/// left in `rho_E^± = 1/2 [[1+C, ±sqrt(1-C^2)], [±sqrt(1-C^2), 1-C]]`
/// depending on Alice's bit.
pub fn key_ccq_state(p: &AttackParams) -> Operator {
    let sc = (1.0 - p.c * p.c).max(0.0).sqrt();
    let eve = |sign: f64| {
        [
            0.5 * (1.0 + p.c),
            0.5 * sign * sc,
            0.5 * sign * sc,
            0.5 * (1.0 - p.c),
        ]
    };
    let mut m = CMatrix::zeros(8, 8);
    for a in 0..2usize {
        let block = eve(if a == 0 { 1.0 } else { -1.0 });
        for b in 0..2usize {
            let w = if a == b { 0.5 * (1.0 - p.q) } else { 0.5 * p.q };
            let base = a * 4 + b * 2;
            for r in 0..2 {
                for c in 0..2 {
                    m[(base + r, base + c)] = c64(w * block[r * 2 + c]);
                }
            }
        }
    }
    Operator::new(m, vec![2, 2, 2]).expect("8x8")
}

fn h(x: f64) -> f64 {
    binary_entropy(x).expect("argument in [0, 1] by construction")
}

/// Closed-form upper bound on the DI key rate at `(S, Q)`:
/// `1 + h(a) - h(Q) - h((1+C)/2)` with
/// `a = (1 + sqrt(1 + Q(1-Q)(S^2-8)))/2`. Equals the conditional mutual
/// information `I(A;B|E)` of [`key_ccq_state`].
pub fn theorem1_bound(p: &AttackParams) -> f64 {
    let radicand = 1.0 + p.q * (1.0 - p.q) * (p.s * p.s - 8.0);
    assert!(
        radicand >= -RANGE_TOL,
        "radicand {radicand} negative for valid parameters"
    );
    let a = 0.5 * (1.0 + radicand.max(0.0).sqrt());
    1.0 + h(a) - h(p.q) - h(0.5 * (1.0 + p.c))
}

/// [`theorem1_bound`] specialized to the depolarizing relation
/// `Q = (1 - S/(2 sqrt 2))/2`.
pub fn corollary1_bound(s: f64) -> Result<f64> {
    Ok(theorem1_bound(&AttackParams::depolarizing(s)?))
}

fn vn(rho: &Operator, keep: &[usize]) -> f64 {
    von_neumann_entropy(&rho.partial_trace(keep).expect("valid parties"))
        .expect("valid marginal state")
}

/// One-way (Devetak-Winter) lower bound `H(A|E) - H(A|B)` evaluated
/// numerically on the key-round ccq state. Reported unclamped: it is
/// negative wherever one-way key distillation fails.
pub fn lower_bound_dw(p: &AttackParams) -> f64 {
    let rho = key_ccq_state(p);
    let h_a_e = vn(&rho, &[0, 2]) - vn(&rho, &[2]);
    let h_a_b = vn(&rho, &[0, 1]) - vn(&rho, &[1]);
    h_a_e - h_a_b
}

/// Entropy rate `H(A|E)` on the key-round ccq state.
pub fn entropy_rate(p: &AttackParams) -> f64 {
    let rho = key_ccq_state(p);
    vn(&rho, &[0, 2]) - vn(&rho, &[2])
}

/// Conditional mutual information `I(A;B|E)` of the state obtained by
/// measuring the purification with inputs `(x, y)`,
/// `x in {0,1}`, `y in {0,1,2}`.
pub fn measured_cmi(p: &AttackParams, x: usize, y: usize) -> Result<f64> {
    let meas = build_measurements(p);
    if x >= meas.alice.len() {
        return Err(DiqkdError::InputOutOfRange {
            index: x,
            size: meas.alice.len(),
        });
    }
    if y >= meas.bob.len() {
        return Err(DiqkdError::InputOutOfRange {
            index: y,
            size: meas.bob.len(),
        });
    }
    let rho = purified_state(p).density();
    let ccq = measure_subsystems(&rho, &[(0, &meas.alice[x]), (1, &meas.bob[y])])?;
    Ok(conditional_mutual_information(&ccq, &[0], &[1], &[2])?)
}

/// Piecewise upper bound on the quantum intrinsic non-locality along the
/// depolarizing relation: the maximum of `I(A;B|E)` over all input pairs of
/// the measured purification. The maximum is attained by the key inputs
/// `(0, 2)` above the crossover violation and by the test pair `(1, 1)`
/// below it.
pub fn appendix_b_bound(s: f64) -> Result<f64> {
    let p = AttackParams::depolarizing(s)?;
    let mut best = f64::NEG_INFINITY;
    for x in 0..2 {
        for y in 0..3 {
            best = best.max(measured_cmi(&p, x, y)?);
        }
    }
    Ok(best)
}

/// Violation at which the `(1, 1)` and key-input branches of
/// [`appendix_b_bound`] intersect, located by bisection to `1e-6` in `S`.
pub fn appendix_b_crossover() -> Result<f64> {
    let branch_gap = |s: f64| -> Result<f64> {
        let p = AttackParams::depolarizing(s)?;
        Ok(measured_cmi(&p, 1, 1)? - measured_cmi(&p, KEY_INPUTS.0, KEY_INPUTS.1)?)
    };
    // Bracket the sign change on a coarse scan, then bisect.
    let scan = 64;
    let lo0 = S_CLASSICAL + 0.02;
    let hi0 = S_QUANTUM - 0.02;
    let mut bracket = None;
    let mut prev = (lo0, branch_gap(lo0)?);
    for i in 1..=scan {
        let s = lo0 + (hi0 - lo0) * i as f64 / scan as f64;
        let g = branch_gap(s)?;
        if prev.1 > 0.0 && g <= 0.0 {
            bracket = Some((prev.0, s));
            break;
        }
        prev = (s, g);
    }
    let (mut lo, mut hi) = bracket.ok_or(DiqkdError::NoValidEvaluation)?;
    while hi - lo > 1e-6 {
        let mid = 0.5 * (lo + hi);
        if branch_gap(mid)? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Bound collection at one parameter point, in bits per round.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KeyRatePoint {
    pub s: f64,
    pub q: f64,
    /// One-way Devetak-Winter rate `H(A|E) - H(A|B)` (unclamped).
    pub lower: f64,
    /// `H(A|E)`.
    pub entropy_rate: f64,
    /// Closed-form conditional-mutual-information bound.
    pub upper_thm1: f64,
    /// Piecewise maximum over measured input pairs.
    pub upper_app_b: f64,
}

/// Inclusive linear grid with exactly pinned endpoints.
fn linspace(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> {
    let step = (hi - lo) / (n - 1) as f64;
    (0..n).map(move |i| {
        if i + 1 == n {
            hi
        } else {
            lo + step * i as f64
        }
    })
}

/// Key-rate curves along the depolarizing relation on an `S` grid of
/// `points >= 2` entries covering `[2, 2 sqrt 2]` inclusively.
pub fn sweep_curves(points: usize) -> Result<Vec<KeyRatePoint>> {
    if points < 2 {
        return Err(DiqkdError::BadGrid {
            min: 2,
            got: points,
        });
    }
    linspace(S_CLASSICAL, S_QUANTUM, points)
        .map(|s| {
            let p = AttackParams::depolarizing(s)?;
            let point = KeyRatePoint {
                s,
                q: p.q(),
                lower: lower_bound_dw(&p),
                entropy_rate: entropy_rate(&p),
                upper_thm1: theorem1_bound(&p),
                upper_app_b: appendix_b_bound(s)?,
            };
            debug_assert!(point.lower <= point.upper_thm1 + 1e-9);
            debug_assert!(point.upper_thm1 >= -1e-12 && point.upper_app_b >= -1e-12);
            Ok(point)
        })
        .collect()
}

/// One point of the `(S, Q)` bound surface.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurfacePoint {
    pub s: f64,
    pub q: f64,
    pub upper: f64,
}

/// Uncorrelated `(S, Q)` surface of the closed-form bound, traversed
/// row-major (`S` outer, `Q` inner) with `>= 2` points per axis.
pub fn sweep_surface(s_points: usize, q_points: usize) -> Result<Vec<SurfacePoint>> {
    if s_points < 2 || q_points < 2 {
        return Err(DiqkdError::BadGrid {
            min: 2,
            got: s_points.min(q_points),
        });
    }
    let mut out = Vec::with_capacity(s_points * q_points);
    for s in linspace(S_CLASSICAL, S_QUANTUM, s_points) {
        for q in linspace(0.0, 0.5, q_points) {
            let p = AttackParams::new(s, q)?;
            out.push(SurfacePoint {
                s,
                q,
                upper: theorem1_bound(&p),
            });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::Rng as _;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    #[test]
    fn attack_state_at_maximal_violation_is_bell_state() {
        let p = AttackParams::new(S_QUANTUM, 0.0).unwrap();
        let rho = build_attack_state(&p);
        assert!(rho.max_abs_diff(&bell_phi_plus().density()) < 1e-12);
    }

    #[test]
    fn attack_state_at_classical_bound_has_one_bit_of_entropy() {
        let p = AttackParams::new(2.0, 0.0).unwrap();
        let rho = build_attack_state(&p);
        assert_abs_diff_eq!(von_neumann_entropy(&rho).unwrap(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn attack_state_spectrum_is_binary() {
        let p = AttackParams::new(2.5, 0.1).unwrap();
        let evs = build_attack_state(&p).eigenvalues_hermitian().unwrap();
        assert_abs_diff_eq!(evs[0], 0.5 * (1.0 + p.c()), epsilon = 1e-12);
        assert_abs_diff_eq!(evs[1], 0.5 * (1.0 - p.c()), epsilon = 1e-12);
        assert!(evs[2].abs() < 1e-12 && evs[3].abs() < 1e-12);
    }

    #[test]
    fn bob_test_observable_at_maximal_violation() {
        // C = 1: B0 = (sigma_z + sigma_x)/sqrt(2).
        let p = AttackParams::new(S_QUANTUM, 0.0).unwrap();
        let meas = build_measurements(&p);
        let b0 = Operator::new(
            meas.bob[0].element(0).matrix() - meas.bob[0].element(1).matrix(),
            vec![2],
        )
        .unwrap();
        let expected = Operator::new(
            (sigma_z().matrix() + sigma_x().matrix()).scale(std::f64::consts::FRAC_1_SQRT_2),
            vec![2],
        )
        .unwrap();
        assert!(b0.max_abs_diff(&expected) < 1e-12);
    }

    #[test]
    fn key_povm_is_projective_at_zero_noise_and_flat_at_half() {
        let p0 = AttackParams::new(2.4, 0.0).unwrap();
        let b2 = &build_measurements(&p0).bob[2];
        assert!(b2.element(0).max_abs_diff(&Povm::computational(2).element(0)) < 1e-15);

        let ph = AttackParams::new(2.4, 0.5).unwrap();
        let b2 = &build_measurements(&ph).bob[2];
        let flat = Operator::new(CMatrix::identity(2, 2).scale(0.5), vec![2]).unwrap();
        assert!(b2.element(0).max_abs_diff(&flat) < 1e-15);
        assert!(b2.element(1).max_abs_diff(&flat) < 1e-15);
    }

    #[test]
    fn tuple_reproduces_requested_statistics() {
        let mut rng = ChaCha12Rng::seed_from_u64(42);
        for _ in 0..20 {
            let s = rng.gen_range(S_CLASSICAL..S_QUANTUM);
            let q = rng.gen_range(0.0..0.5);
            let t = AttackTuple::new(AttackParams::new(s, q).unwrap());
            assert_abs_diff_eq!(t.chsh().unwrap(), s, epsilon = 1e-10);
            assert_abs_diff_eq!(t.qber(), q, epsilon = 1e-10);
        }
    }

    #[test]
    fn qber_matches_parameter_at_reference_points() {
        for q in [0.0, 0.05, 0.1, 0.25, 0.5] {
            let t = AttackTuple::new(AttackParams::new(2.6, q).unwrap());
            assert_abs_diff_eq!(t.qber(), q, epsilon = 1e-12);
        }
    }

    #[test]
    fn classical_strategy_reaches_local_bound() {
        // A0 = A1 = B0 = B1 = sigma_z on a product state gives S = 2.
        let z = Povm::from_observable(&sigma_z()).unwrap();
        let rho = Ket::basis_state(&[2, 2], 0).unwrap().density();
        let s = chsh_value(&rho, &[z.clone(), z.clone()], &[z.clone(), z]).unwrap();
        assert_abs_diff_eq!(s, 2.0, epsilon = 1e-12);
    }

    #[test]
    fn bell_state_with_optimal_angles_reaches_quantum_bound() {
        let p = AttackParams::new(S_QUANTUM, 0.0).unwrap();
        let t = AttackTuple::new(p);
        assert_abs_diff_eq!(t.chsh().unwrap(), S_QUANTUM, epsilon = 1e-12);
    }

    #[test]
    fn chsh_rejects_non_qubit_parties() {
        let rho = Ket::basis_state(&[3, 3], 0).unwrap().density();
        let z = Povm::from_observable(&sigma_z()).unwrap();
        assert!(matches!(
            chsh_value(&rho, &[z.clone(), z.clone()], &[z.clone(), z]),
            Err(DiqkdError::NonQubitParty { .. })
        ));
    }

    #[test]
    fn closed_form_ccq_state_matches_measured_purification() {
        let mut rng = ChaCha12Rng::seed_from_u64(7);
        for _ in 0..10 {
            let s = rng.gen_range(2.01..S_QUANTUM);
            let q = rng.gen_range(0.0..0.5);
            let p = AttackParams::new(s, q).unwrap();
            let meas = build_measurements(&p);
            let measured = measure_subsystems(
                &purified_state(&p).density(),
                &[(0, &meas.alice[0]), (1, &meas.bob[2])],
            )
            .unwrap();
            let closed = key_ccq_state(&p);
            assert!(
                measured.max_abs_diff(&closed) < 1e-12,
                "mismatch at S={s} Q={q}: {}",
                measured.max_abs_diff(&closed)
            );
        }
    }

    #[test]
    fn eve_blocks_are_normalized_and_pure_at_zero_noise() {
        let p = AttackParams::new(S_QUANTUM, 0.0).unwrap();
        let rho = key_ccq_state(&p);
        // Eve block for outcome (0,0): entries [0..2) x [0..2) with weight 1/2.
        let block = Operator::new(
            CMatrix::from_fn(2, 2, |r, c| rho.matrix()[(r, c)] * 2.0),
            vec![2],
        )
        .unwrap();
        assert_abs_diff_eq!(block.trace().re, 1.0, epsilon = 1e-12);
        // C = 1 leaves Eve in the fixed pure state |0>.
        assert_abs_diff_eq!(block.matrix()[(0, 0)].re, 1.0, epsilon = 1e-12);
        // Q = 0: no weight on disagreeing outcomes.
        assert_abs_diff_eq!(rho.matrix()[(2, 2)].re, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn theorem1_endpoints() {
        assert_abs_diff_eq!(
            theorem1_bound(&AttackParams::new(S_QUANTUM, 0.0).unwrap()),
            1.0,
            epsilon = 1e-12
        );
        for i in 0..10 {
            let q = i as f64 / 18.0;
            assert_abs_diff_eq!(
                theorem1_bound(&AttackParams::new(2.0, q).unwrap()),
                0.0,
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn theorem1_matches_cmi_oracle_at_reference_point() {
        // Frozen from an independent high-precision evaluation of both the
        // closed form and the entropic route.
        let p = AttackParams::new(2.4, 0.05).unwrap();
        let bound = theorem1_bound(&p);
        assert_abs_diff_eq!(bound, 0.240627662920160, epsilon = 1e-12);
        let rho = key_ccq_state(&p);
        let cmi = conditional_mutual_information(&rho, &[0], &[1], &[2]).unwrap();
        assert_abs_diff_eq!(bound, cmi, epsilon = 1e-9);
    }

    #[test]
    fn corollary_equals_theorem_under_depolarizing_substitution() {
        for i in 0..50 {
            let s = S_CLASSICAL + (S_QUANTUM - S_CLASSICAL) * i as f64 / 49.0;
            let direct = corollary1_bound(s).unwrap();
            let substituted = theorem1_bound(&AttackParams::depolarizing(s).unwrap());
            assert_abs_diff_eq!(direct, substituted, epsilon = 1e-12);
        }
        assert_abs_diff_eq!(corollary1_bound(S_QUANTUM).unwrap(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(corollary1_bound(2.0).unwrap(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn lower_bound_reference_values() {
        let p = AttackParams::new(S_QUANTUM, 0.0).unwrap();
        assert_abs_diff_eq!(lower_bound_dw(&p), 1.0, epsilon = 1e-10);
        // At the classical bound the raw value is nonpositive and reported
        // unclamped.
        let p = AttackParams::new(2.0, 0.0).unwrap();
        assert!(lower_bound_dw(&p) <= 1e-10);
        // Frozen regression value on the depolarizing line.
        let p = AttackParams::depolarizing(2.4).unwrap();
        assert_abs_diff_eq!(lower_bound_dw(&p), -0.040860870009202, epsilon = 1e-9);
    }

    #[test]
    fn entropy_rate_endpoints_and_monotonicity() {
        assert_abs_diff_eq!(
            entropy_rate(&AttackParams::new(S_QUANTUM, 0.1).unwrap()),
            1.0,
            epsilon = 1e-10
        );
        assert_abs_diff_eq!(
            entropy_rate(&AttackParams::new(2.0, 0.1).unwrap()),
            0.0,
            epsilon = 1e-10
        );
        let mut prev = f64::NEG_INFINITY;
        for i in 0..100 {
            let s = S_CLASSICAL + (S_QUANTUM - S_CLASSICAL) * i as f64 / 99.0;
            let v = entropy_rate(&AttackParams::new(s, 0.0).unwrap());
            assert!(v >= prev - 1e-9, "entropy rate decreased at S = {s}");
            prev = v;
        }
    }

    #[test]
    fn appendix_b_endpoint_and_branch_domination() {
        assert_abs_diff_eq!(appendix_b_bound(S_QUANTUM).unwrap(), 1.0, epsilon = 1e-10);
        for s in [2.2, 2.5, 2.7] {
            let p = AttackParams::depolarizing(s).unwrap();
            let bound = appendix_b_bound(s).unwrap();
            for x in 0..2 {
                for y in 0..3 {
                    assert!(bound >= measured_cmi(&p, x, y).unwrap());
                }
            }
        }
    }

    #[test]
    fn appendix_b_crossover_location() {
        let s_star = appendix_b_crossover().unwrap();
        assert!(
            (2.57..=2.61).contains(&s_star),
            "crossover {s_star} outside expected window"
        );
        // Frozen from the independent oracle run.
        assert_abs_diff_eq!(s_star, 2.591946, epsilon = 2e-5);
    }

    #[test]
    fn sweep_corner_values() {
        let surface = sweep_surface(2, 2).unwrap();
        let by_corner: Vec<f64> = surface.iter().map(|p| p.upper).collect();
        // Corners (S, Q) = (2,0), (2,1/2), (2*sqrt2,0), (2*sqrt2,1/2).
        assert_abs_diff_eq!(by_corner[0], 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(by_corner[1], 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(by_corner[2], 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(by_corner[3], 0.0, epsilon = 1e-12);
    }

    #[test]
    fn sweep_orders_lower_below_upper() {
        for p in sweep_curves(50).unwrap() {
            assert!(p.lower <= p.upper_thm1 + 1e-9);
            assert!(p.lower <= p.entropy_rate + 1e-9);
            assert!(p.entropy_rate <= 1.0 + 1e-12);
        }
    }

    #[test]
    fn params_reject_out_of_range() {
        assert!(AttackParams::new(1.9, 0.0).is_err());
        assert!(AttackParams::new(2.9, 0.0).is_err());
        assert!(AttackParams::new(2.4, 0.51).is_err());
        assert!(AttackParams::new(S_QUANTUM + 5e-10, 0.0).is_ok());
    }
}
