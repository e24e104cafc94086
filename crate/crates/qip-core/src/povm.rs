use num_complex::Complex64;

use crate::error::{QipError, Result};
use crate::operator::Operator;
use crate::{CMatrix, TOL};

/// Positive operator-valued measure on a single subsystem: an ordered list
/// of PSD elements summing to the identity.
#[derive(Debug, Clone)]
pub struct Povm {
    elements: Vec<Operator>,
    dim: usize,
}

impl Povm {
    pub fn new(elements: Vec<Operator>) -> Result<Self> {
        if elements.is_empty() {
            return Err(QipError::InvalidPovm {
                reason: "no elements".into(),
            });
        }
        let dim = elements[0].dim();
        let mut sum = CMatrix::zeros(dim, dim);
        for (i, e) in elements.iter().enumerate() {
            if e.dim() != dim {
                return Err(QipError::InvalidPovm {
                    reason: format!("element {i} has dimension {} != {dim}", e.dim()),
                });
            }
            let evs = e.eigenvalues_hermitian()?;
            if evs.last().copied().unwrap_or(0.0) < -TOL {
                return Err(QipError::InvalidPovm {
                    reason: format!("element {i} has negative eigenvalue {:.3e}", evs.last().unwrap()),
                });
            }
            sum += e.matrix();
        }
        let completeness = Operator::new(sum, vec![dim])?
            .max_abs_diff(&Operator::identity(&[dim]));
        if completeness > TOL {
            return Err(QipError::InvalidPovm {
                reason: format!("elements sum to identity only within {completeness:.3e}"),
            });
        }
        Ok(Self { elements, dim })
    }

    /// Builds a POVM from the given elements plus the completion
    /// `I - sum(elements)` appended as the final outcome.
    pub fn with_completion(mut elements: Vec<Operator>) -> Result<Self> {
        if elements.is_empty() {
            return Err(QipError::InvalidPovm {
                reason: "no elements".into(),
            });
        }
        let dim = elements[0].dim();
        let mut rest = CMatrix::identity(dim, dim);
        for e in &elements {
            rest -= e.matrix();
        }
        elements.push(Operator::new(rest, vec![dim])?);
        Self::new(elements)
    }

    /// Two-outcome POVM `{(I+A)/2, (I-A)/2}` of a Hermitian observable with
    /// spectrum inside `[-1, 1]`.
    pub fn from_observable(observable: &Operator) -> Result<Self> {
        let evs = observable.eigenvalues_hermitian()?;
        if evs.iter().any(|l| l.abs() > 1.0 + TOL) {
            return Err(QipError::InvalidPovm {
                reason: format!("observable spectrum exceeds [-1, 1]: {evs:?}"),
            });
        }
        let d = observable.dim();
        let id = CMatrix::identity(d, d);
        let plus = (&id + observable.matrix()).scale(0.5);
        let minus = (&id - observable.matrix()).scale(0.5);
        Self::new(vec![
            Operator::new(plus, vec![d])?,
            Operator::new(minus, vec![d])?,
        ])
    }

    /// Projective measurement in the computational basis.
    pub fn computational(dim: usize) -> Self {
        let elements = (0..dim)
            .map(|k| {
                let mut m = CMatrix::zeros(dim, dim);
                m[(k, k)] = Complex64::new(1.0, 0.0);
                Operator::new(m, vec![dim]).expect("projector dims")
            })
            .collect();
        Self::new(elements).expect("computational basis is a valid POVM")
    }

    /// Single-element trivial POVM `{I}`.
    pub fn trivial(dim: usize) -> Self {
        Self::new(vec![Operator::identity(&[dim])]).expect("identity is a valid POVM")
    }

    pub fn outcomes(&self) -> usize {
        self.elements.len()
    }

    pub fn element(&self, i: usize) -> &Operator {
        &self.elements[i]
    }

    pub fn elements(&self) -> &[Operator] {
        &self.elements
    }

    pub fn dim(&self) -> usize {
        self.dim
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn computational_basis_is_complete() {
        let p = Povm::computational(3);
        assert_eq!(p.outcomes(), 3);
        let mut sum = CMatrix::zeros(3, 3);
        for e in p.elements() {
            sum += e.matrix();
        }
        assert!((sum - CMatrix::identity(3, 3)).norm() < 1e-15);
    }

    #[test]
    fn incomplete_family_is_rejected() {
        let half = Operator::new(CMatrix::identity(2, 2).scale(0.25), vec![2]).unwrap();
        assert!(matches!(
            Povm::new(vec![half.clone(), half]),
            Err(QipError::InvalidPovm { .. })
        ));
    }

    #[test]
    fn completion_fills_missing_outcome() {
        let p0 = crate::ket::Ket::basis_state(&[3], 0).unwrap().density();
        let povm = Povm::with_completion(vec![p0]).unwrap();
        assert_eq!(povm.outcomes(), 2);
        let evs = povm.element(1).eigenvalues_hermitian().unwrap();
        assert!(evs.last().unwrap() >= &-1e-15);
    }

    #[test]
    fn observable_with_large_spectrum_is_rejected() {
        let two = Operator::new(CMatrix::identity(2, 2).scale(2.0), vec![2]).unwrap();
        assert!(Povm::from_observable(&two).is_err());
    }
}
