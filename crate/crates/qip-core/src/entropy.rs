use crate::error::{QipError, Result};
use crate::operator::Operator;
use crate::{EIG_CLIP, TOL};

/// Binary entropy `h(x) = -x log2 x - (1-x) log2 (1-x)` with `h(0) = h(1) = 0`.
/// Arguments within [`TOL`] of the domain are clamped; beyond that they are
/// rejected.
pub fn binary_entropy(x: f64) -> Result<f64> {
    if !(-TOL..=1.0 + TOL).contains(&x) {
        return Err(QipError::OutOfDomain {
            value: x,
            domain: "[0, 1]",
        });
    }
    let x = x.clamp(0.0, 1.0);
    if x <= 0.0 || x >= 1.0 {
        return Ok(0.0);
    }
    Ok(-x * x.log2() - (1.0 - x) * (1.0 - x).log2())
}

/// Shannon entropy in bits of a probability vector (assumed normalized;
/// entries inside the clipping window contribute zero).
pub fn shannon_entropy(probs: &[f64]) -> f64 {
    probs
        .iter()
        .filter(|&&p| p > EIG_CLIP)
        .map(|&p| -p * p.log2())
        .sum()
}

/// Von Neumann entropy in bits: `-sum_i lambda_i log2 lambda_i` over the
/// spectrum, with eigenvalues inside `[-EIG_CLIP, EIG_CLIP]` clipped to zero.
/// Eigenvalues below `-TOL` signal an invalid state and are rejected.
pub fn von_neumann_entropy(rho: &Operator) -> Result<f64> {
    let tr = rho.trace();
    if (tr.re - 1.0).abs() > TOL || tr.im.abs() > TOL {
        return Err(QipError::InvalidState {
            reason: format!("trace {} is not 1", tr),
        });
    }
    let evs = rho.eigenvalues_hermitian()?;
    let mut h = 0.0;
    for &l in &evs {
        if l < -TOL {
            return Err(QipError::InvalidState {
                reason: format!("negative eigenvalue {l:.3e}"),
            });
        }
        if l > EIG_CLIP {
            h -= l * l.log2();
        }
    }
    Ok(h)
}

/// Conditional mutual information `I(A;B|E) = H(AE) + H(BE) - H(E) - H(ABE)`
/// in bits. The three index sets must be disjoint; subsystems listed in none
/// of them are traced out first. Strong subadditivity guarantees a
/// nonnegative result; values within [`TOL`] below zero are clamped to zero.
pub fn conditional_mutual_information(
    rho: &Operator,
    parts_a: &[usize],
    parts_b: &[usize],
    parts_e: &[usize],
) -> Result<f64> {
    let n = rho.parties();
    let mut seen = vec![false; n];
    for &i in parts_a.iter().chain(parts_b).chain(parts_e) {
        if i >= n {
            return Err(QipError::PartyOutOfRange { index: i, count: n });
        }
        if seen[i] {
            return Err(QipError::OverlappingParts);
        }
        seen[i] = true;
    }

    let entropy_of = |parts: &[Vec<usize>]| -> Result<f64> {
        let keep: Vec<usize> = parts.iter().flatten().copied().collect();
        if keep.is_empty() {
            return Ok(0.0);
        }
        von_neumann_entropy(&rho.partial_trace(&keep)?)
    };

    let a = parts_a.to_vec();
    let b = parts_b.to_vec();
    let e = parts_e.to_vec();
    let h_ae = entropy_of(&[a.clone(), e.clone()])?;
    let h_be = entropy_of(&[b.clone(), e.clone()])?;
    let h_e = entropy_of(&[e.clone()])?;
    let h_abe = entropy_of(&[a, b, e])?;

    let value = h_ae + h_be - h_e - h_abe;
    Ok(if value < 0.0 && value >= -TOL { 0.0 } else { value })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ket::Ket;
    use crate::CMatrix;
    use approx::assert_abs_diff_eq;

    #[test]
    fn binary_entropy_reference_points() {
        assert_abs_diff_eq!(binary_entropy(0.5).unwrap(), 1.0, epsilon = 1e-15);
        assert_eq!(binary_entropy(0.0).unwrap(), 0.0);
        assert_eq!(binary_entropy(1.0).unwrap(), 0.0);
        // Direct evaluation, cross-checked against an independent
        // high-precision computation of -x log2 x - (1-x) log2 (1-x).
        assert_abs_diff_eq!(binary_entropy(0.11).unwrap(), 0.499915958164528, epsilon = 1e-12);
    }

    #[test]
    fn binary_entropy_rejects_out_of_domain() {
        assert!(matches!(
            binary_entropy(1.5),
            Err(QipError::OutOfDomain { .. })
        ));
        assert!(binary_entropy(-2e-10).is_ok());
    }

    #[test]
    fn entropy_of_pure_state_is_zero() {
        let rho = Ket::basis_state(&[4], 2).unwrap().density();
        assert_abs_diff_eq!(von_neumann_entropy(&rho).unwrap(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn entropy_of_maximally_mixed_state_is_log_dim() {
        for d in [2usize, 3, 4, 5] {
            let rho = crate::Operator::new(
                CMatrix::identity(d, d).scale(1.0 / d as f64),
                vec![d],
            )
            .unwrap();
            assert_abs_diff_eq!(
                von_neumann_entropy(&rho).unwrap(),
                (d as f64).log2(),
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn entropy_of_binary_spectrum_is_binary_entropy() {
        // Convex mixture of two orthogonal projectors.
        let p = 0.73;
        let k0 = Ket::basis_state(&[2, 2], 0).unwrap().density();
        let k3 = Ket::basis_state(&[2, 2], 3).unwrap().density();
        let m = k0.matrix().scale(p) + k3.matrix().scale(1.0 - p);
        let rho = crate::Operator::new(m, vec![2, 2]).unwrap();
        assert_abs_diff_eq!(
            von_neumann_entropy(&rho).unwrap(),
            binary_entropy(p).unwrap(),
            epsilon = 1e-12
        );
    }

    #[test]
    fn cmi_of_product_state_is_zero() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(17);
        let a = crate::random::random_density(2, &mut rng);
        let b = crate::random::random_density(2, &mut rng);
        let e = crate::random::random_density(3, &mut rng);
        let rho = a.tensor(&b).tensor(&e);
        let v = conditional_mutual_information(&rho, &[0], &[1], &[2]).unwrap();
        assert_abs_diff_eq!(v, 0.0, epsilon = 1e-10);
    }

    #[test]
    fn cmi_rejects_overlapping_parts() {
        let rho = Ket::basis_state(&[2, 2, 2], 0).unwrap().density();
        assert!(matches!(
            conditional_mutual_information(&rho, &[0], &[0], &[2]),
            Err(QipError::OverlappingParts)
        ));
    }

    #[test]
    fn cmi_with_empty_conditioning_system_is_mutual_information() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let phi = Ket::from_components(
            &[
                num_complex::Complex64::new(s, 0.0),
                num_complex::Complex64::new(0.0, 0.0),
                num_complex::Complex64::new(0.0, 0.0),
                num_complex::Complex64::new(s, 0.0),
            ],
            vec![2, 2],
        )
        .unwrap();
        let v = conditional_mutual_information(&phi.density(), &[0], &[1], &[]).unwrap();
        assert_abs_diff_eq!(v, 2.0, epsilon = 1e-12);
    }
}
