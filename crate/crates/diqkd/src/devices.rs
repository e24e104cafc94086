//! Ready-made device models for the simulator.

use qip_core::{Operator, Povm};

use crate::attack::{
    bell_phi_plus, sigma_x, sigma_z, AttackParams, AttackTuple, S_QUANTUM,
};
use crate::correlation::{classical_deterministic, correlation_from_tuple, Correlation, StateTuple};
use crate::error::{DiqkdError, Result};

/// Collective-attack device at violation `s` and key error rate `q`.
pub fn attack_device(s: f64, q: f64) -> Result<StateTuple> {
    let t = AttackTuple::new(AttackParams::new(s, q)?);
    Ok(StateTuple {
        state: t.state_ab(),
        alice: t.measurements.alice,
        bob: t.measurements.bob,
    })
}

/// Honest implementation: a maximally entangled pair sent through a
/// depolarizing channel with parameter `nu`, measured with the standard
/// optimal CHSH angles and a plain `sigma_z` key readout. Gives
/// `S = 2 sqrt(2) (1 - nu)` and `Q = nu / 2`.
pub fn depolarizing_device(nu: f64) -> Result<StateTuple> {
    if !(0.0..=4.0 / 3.0).contains(&nu) {
        return Err(DiqkdError::InvalidParameter {
            name: "nu",
            value: nu,
            domain: "[0, 4/3]",
        });
    }
    let phi = bell_phi_plus().density();
    let mixed = qip_core::CMatrix::identity(4, 4).scale(nu / 4.0);
    let state = Operator::new(phi.matrix().scale(1.0 - nu) + mixed, vec![2, 2])?;

    let sz = sigma_z();
    let sx = sigma_x();
    let tilt = |sign: f64| {
        Operator::new(
            (sz.matrix() + sx.matrix().scale(sign)).scale(std::f64::consts::FRAC_1_SQRT_2),
            vec![2],
        )
        .expect("2x2")
    };
    Ok(StateTuple {
        state,
        alice: vec![
            Povm::from_observable(&sz)?,
            Povm::from_observable(&sx)?,
        ],
        bob: vec![
            Povm::from_observable(&tilt(1.0))?,
            Povm::from_observable(&tilt(-1.0))?,
            Povm::computational(2),
        ],
    })
}

/// Correlation of the classical deterministic device (`omega = 3/4`).
pub fn classical_device() -> Correlation {
    classical_deterministic()
}

/// Correlation generated by a device tuple.
pub fn device_correlation(tuple: &StateTuple) -> Result<Correlation> {
    correlation_from_tuple(tuple)
}
