use num_complex::Complex64;

use crate::error::{QipError, Result};
use crate::operator::Operator;
use crate::{CMatrix, TOL};

/// Quantum channel in Kraus form. Kraus operators may be rectangular
/// (`out_dim x in_dim`); completeness `sum_k K_k† K_k = I` is enforced on
/// construction.
#[derive(Debug, Clone)]
pub struct Channel {
    kraus: Vec<CMatrix>,
    in_dim: usize,
    out_dim: usize,
}

impl Channel {
    pub fn new(kraus: Vec<CMatrix>) -> Result<Self> {
        if kraus.is_empty() {
            return Err(QipError::DimensionMismatch {
                context: "channel needs at least one Kraus operator".into(),
            });
        }
        let out_dim = kraus[0].nrows();
        let in_dim = kraus[0].ncols();
        for k in &kraus {
            if k.nrows() != out_dim || k.ncols() != in_dim {
                return Err(QipError::DimensionMismatch {
                    context: "Kraus operators must share a common shape".into(),
                });
            }
        }
        let ch = Self {
            kraus,
            in_dim,
            out_dim,
        };
        let residual = ch.completeness_residual();
        if residual > TOL {
            return Err(QipError::KrausIncomplete { residual });
        }
        Ok(ch)
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            kraus: vec![CMatrix::identity(dim, dim)],
            in_dim: dim,
            out_dim: dim,
        }
    }

    /// Channel mapping everything to a one-dimensional system (full trace),
    /// realized by the row vectors `<k|`.
    pub fn trace_out(dim: usize) -> Self {
        let kraus = (0..dim)
            .map(|k| {
                let mut m = CMatrix::zeros(1, dim);
                m[(0, k)] = Complex64::new(1.0, 0.0);
                m
            })
            .collect();
        Self {
            kraus,
            in_dim: dim,
            out_dim: 1,
        }
    }

    pub fn kraus(&self) -> &[CMatrix] {
        &self.kraus
    }

    pub fn in_dim(&self) -> usize {
        self.in_dim
    }

    pub fn out_dim(&self) -> usize {
        self.out_dim
    }

    /// Largest absolute entry of `sum_k K_k† K_k - I`.
    pub fn completeness_residual(&self) -> f64 {
        let mut sum = CMatrix::zeros(self.in_dim, self.in_dim);
        for k in &self.kraus {
            sum += k.adjoint() * k;
        }
        sum -= CMatrix::identity(self.in_dim, self.in_dim);
        sum.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Kraus action on the chosen tensor factor. The output carries the same
    /// number of subsystems, with `party`'s dimension replaced by the
    /// channel's output dimension; the trace is preserved.
    pub fn apply(&self, rho: &Operator, party: usize) -> Result<Operator> {
        let n = rho.parties();
        if party >= n {
            return Err(QipError::PartyOutOfRange {
                index: party,
                count: n,
            });
        }
        if rho.dims()[party] != self.in_dim {
            return Err(QipError::DimensionMismatch {
                context: format!(
                    "channel input dimension {} does not match subsystem dimension {}",
                    self.in_dim,
                    rho.dims()[party]
                ),
            });
        }
        let before: usize = rho.dims()[..party].iter().product();
        let after: usize = rho.dims()[party + 1..].iter().product();
        let ib = CMatrix::identity(before, before);
        let ia = CMatrix::identity(after, after);

        let mut out_dims = rho.dims().to_vec();
        out_dims[party] = self.out_dim;
        let d_out: usize = out_dims.iter().product();
        let mut out = CMatrix::zeros(d_out, d_out);
        for k in &self.kraus {
            let full = ib.kronecker(k).kronecker(&ia);
            out += &full * rho.matrix() * full.adjoint();
        }
        Operator::new(out, out_dims)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ket::Ket;
    use approx::assert_abs_diff_eq;

    #[test]
    fn identity_channel_leaves_state_unchanged() {
        let rho = Ket::basis_state(&[2, 2], 1).unwrap().density();
        let out = Channel::identity(2).apply(&rho, 1).unwrap();
        assert!(out.max_abs_diff(&rho) == 0.0);
    }

    #[test]
    fn trace_out_channel_matches_partial_trace() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(3);
        let rho = crate::random::random_density_with_dims(&[2, 3], &mut rng);
        let out = Channel::trace_out(3).apply(&rho, 1).unwrap();
        assert_eq!(out.dims(), &[2, 1]);
        let reduced = rho.partial_trace(&[0]).unwrap();
        // Same matrix; the trivial factor stays in the dimension list.
        let diff = (out.matrix() - reduced.matrix()).norm();
        assert!(diff < 1e-12);
    }

    #[test]
    fn random_channel_preserves_trace() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(5);
        for _ in 0..20 {
            let ch = crate::random::random_channel(2, 3, 2, &mut rng).unwrap();
            let rho = crate::random::random_density_with_dims(&[2, 2], &mut rng);
            let out = ch.apply(&rho, 1).unwrap();
            assert_abs_diff_eq!(out.trace().re, 1.0, epsilon = 1e-10);
            assert_abs_diff_eq!(out.trace().im, 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn incomplete_kraus_family_is_rejected() {
        let half = CMatrix::identity(2, 2).scale(0.5);
        assert!(matches!(
            Channel::new(vec![half]),
            Err(QipError::KrausIncomplete { .. })
        ));
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let ch = Channel::identity(3);
        let rho = Ket::basis_state(&[2, 2], 0).unwrap().density();
        assert!(matches!(
            ch.apply(&rho, 0),
            Err(QipError::DimensionMismatch { .. })
        ));
    }
}
