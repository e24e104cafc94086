use crate::error::{QipError, Result};
use crate::operator::{multi_index, strides, Operator};
use crate::povm::Povm;
use crate::CMatrix;

/// Measures the assigned subsystems with their POVMs and keeps the outcome
/// distribution as classical registers: in the returned operator each
/// measured subsystem is replaced by a register of dimension equal to the
/// POVM's outcome count, diagonal in the outcome basis, while unmeasured
/// subsystems stay quantum. Subsystem order is preserved and the trace
/// equals the input trace.
///
/// For a pure input use `ket.density()` first.
pub fn measure_subsystems(state: &Operator, assignments: &[(usize, &Povm)]) -> Result<Operator> {
    let n = state.parties();
    let mut measured = vec![false; n];
    for &(party, povm) in assignments {
        if party >= n {
            return Err(QipError::PartyOutOfRange {
                index: party,
                count: n,
            });
        }
        if measured[party] {
            return Err(QipError::OverlappingParts);
        }
        if povm.dim() != state.dims()[party] {
            return Err(QipError::DimensionMismatch {
                context: format!(
                    "POVM dimension {} does not match subsystem {party} dimension {}",
                    povm.dim(),
                    state.dims()[party]
                ),
            });
        }
        measured[party] = true;
    }

    // Assignments in subsystem order for deterministic assembly.
    let mut assigned: Vec<(usize, &Povm)> = assignments.to_vec();
    assigned.sort_by_key(|&(party, _)| party);

    let mut out_dims = state.dims().to_vec();
    for &(party, povm) in &assigned {
        out_dims[party] = povm.outcomes();
    }
    let unmeasured: Vec<usize> = (0..n).filter(|&i| !measured[i]).collect();
    let unmeasured_dims: Vec<usize> = unmeasured.iter().map(|&i| state.dims()[i]).collect();
    let block_dim: usize = unmeasured_dims.iter().product();

    let out_strides = strides(&out_dims);
    let d_out: usize = out_dims.iter().product();
    let mut out = CMatrix::zeros(d_out, d_out);

    let outcome_dims: Vec<usize> = assigned.iter().map(|&(_, p)| p.outcomes()).collect();
    let combos: usize = outcome_dims.iter().product();
    for combo in 0..combos {
        let outcome = multi_index(combo, &outcome_dims);
        // Full-space operator with POVM elements at measured slots.
        let mut op = CMatrix::identity(1, 1);
        let mut next_assigned = 0;
        for party in 0..n {
            if measured[party] {
                let povm = assigned[next_assigned].1;
                op = op.kronecker(povm.element(outcome[next_assigned]).matrix());
                next_assigned += 1;
            } else {
                let d = state.dims()[party];
                op = op.kronecker(&CMatrix::identity(d, d));
            }
        }
        let product = Operator::new(op * state.matrix(), state.dims().to_vec())?;
        let block = if unmeasured.is_empty() {
            CMatrix::from_element(1, 1, product.trace())
        } else {
            product.partial_trace(&unmeasured)?.into_matrix()
        };

        // Classical offset of this outcome combination in the output layout.
        let base: usize = outcome
            .iter()
            .zip(&assigned)
            .map(|(&o, &(party, _))| o * out_strides[party])
            .sum();
        for r in 0..block_dim.max(1) {
            let ro: usize = if unmeasured.is_empty() {
                0
            } else {
                multi_index(r, &unmeasured_dims)
                    .iter()
                    .zip(&unmeasured)
                    .map(|(&c, &p)| c * out_strides[p])
                    .sum()
            };
            for c in 0..block_dim.max(1) {
                let co: usize = if unmeasured.is_empty() {
                    0
                } else {
                    multi_index(c, &unmeasured_dims)
                        .iter()
                        .zip(&unmeasured)
                        .map(|(&cc, &p)| cc * out_strides[p])
                        .sum()
                };
                out[(base + ro, base + co)] = block[(r, c)];
            }
        }
    }
    Operator::new(out, out_dims)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entropy::von_neumann_entropy;
    use crate::ket::Ket;
    use approx::assert_abs_diff_eq;
    use num_complex::Complex64;

    fn maximally_mixed(d: usize) -> Operator {
        Operator::new(CMatrix::identity(d, d).scale(1.0 / d as f64), vec![d]).unwrap()
    }

    fn phi_plus() -> Ket {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        Ket::from_components(
            &[
                Complex64::new(s, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(s, 0.0),
            ],
            vec![2, 2],
        )
        .unwrap()
    }

    #[test]
    fn measuring_maximally_mixed_qubit_gives_uniform_diagonal() {
        let povm = Povm::computational(2);
        let out = measure_subsystems(&maximally_mixed(2), &[(0, &povm)]).unwrap();
        assert_eq!(out.dims(), &[2]);
        assert_abs_diff_eq!(out.matrix()[(0, 0)].re, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(out.matrix()[(1, 1)].re, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(out.matrix()[(0, 1)].norm(), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn measuring_both_halves_of_bell_state_gives_correlated_bits() {
        let povm = Povm::computational(2);
        let rho = phi_plus().density();
        let out = measure_subsystems(&rho, &[(0, &povm), (1, &povm)]).unwrap();
        assert_eq!(out.dims(), &[2, 2]);
        // Perfectly correlated uniform two-bit distribution.
        for (i, expected) in [(0usize, 0.5), (1, 0.0), (2, 0.0), (3, 0.5)] {
            assert_abs_diff_eq!(out.matrix()[(i, i)].re, expected, epsilon = 1e-14);
        }
        assert_abs_diff_eq!(out.trace().re, 1.0, epsilon = 1e-14);
        // Off-diagonal coherences are gone.
        assert_abs_diff_eq!(out.matrix()[(0, 3)].norm(), 0.0, epsilon = 1e-14);
    }

    #[test]
    fn trivial_povm_leaves_unmeasured_entropies_unchanged() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(23);
        let rho = crate::random::random_density_with_dims(&[2, 3], &mut rng);
        let trivial = Povm::trivial(2);
        let out = measure_subsystems(&rho, &[(0, &trivial)]).unwrap();
        assert_eq!(out.dims(), &[1, 3]);
        let h_before = von_neumann_entropy(&rho.partial_trace(&[1]).unwrap()).unwrap();
        let h_after = von_neumann_entropy(&out.partial_trace(&[1]).unwrap()).unwrap();
        assert_abs_diff_eq!(h_before, h_after, epsilon = 1e-12);
    }

    #[test]
    fn povm_dimension_mismatch_is_rejected() {
        let povm = Povm::computational(3);
        let rho = maximally_mixed(2);
        assert!(matches!(
            measure_subsystems(&rho, &[(0, &povm)]),
            Err(QipError::DimensionMismatch { .. })
        ));
    }
}
