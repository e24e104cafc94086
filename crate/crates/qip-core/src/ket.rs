use num_complex::Complex64;

use crate::error::{QipError, Result};
use crate::operator::Operator;
use crate::{CVector, TOL};

/// Normalized pure state on a tensor product of subsystems.
#[derive(Debug, Clone, PartialEq)]
pub struct Ket {
    vec: CVector,
    dims: Vec<usize>,
}

impl Ket {
    pub fn new(vec: CVector, dims: Vec<usize>) -> Result<Self> {
        let product: usize = dims.iter().product();
        if dims.iter().any(|&d| d == 0) || product != vec.len() {
            return Err(QipError::DimsMismatch {
                product,
                side: vec.len(),
                dims,
            });
        }
        let norm_sq = vec.iter().map(|a| a.norm_sqr()).sum::<f64>();
        if (norm_sq - 1.0).abs() > TOL {
            return Err(QipError::NotNormalized { norm_sq });
        }
        Ok(Self { vec, dims })
    }

    pub fn from_components(components: &[Complex64], dims: Vec<usize>) -> Result<Self> {
        Self::new(CVector::from_row_slice(components), dims)
    }

    /// Computational basis state `|index>`.
    pub fn basis_state(dims: &[usize], index: usize) -> Result<Self> {
        let d: usize = dims.iter().product();
        if index >= d {
            return Err(QipError::PartyOutOfRange {
                index,
                count: d,
            });
        }
        let mut v = CVector::from_element(d, Complex64::new(0.0, 0.0));
        v[index] = Complex64::new(1.0, 0.0);
        Ok(Self {
            vec: v,
            dims: dims.to_vec(),
        })
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.vec
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.vec.len()
    }

    /// Rank-one projector `|psi><psi|` carrying the same dimension list.
    pub fn density(&self) -> Operator {
        let mat = &self.vec * self.vec.adjoint();
        Operator::new(mat, self.dims.clone()).expect("projector dims are consistent")
    }

    pub fn tensor(&self, other: &Ket) -> Ket {
        let vec = self.vec.kronecker(&other.vec);
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        Ket { vec, dims }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_unnormalized_amplitudes() {
        let v = CVector::from_row_slice(&[Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)]);
        assert!(matches!(
            Ket::new(v, vec![2]),
            Err(QipError::NotNormalized { .. })
        ));
    }

    #[test]
    fn basis_state_projector_is_diagonal() {
        let k = Ket::basis_state(&[2, 2], 3).unwrap();
        let p = k.density();
        assert_eq!(p.dims(), &[2, 2]);
        assert_eq!(p.matrix()[(3, 3)], Complex64::new(1.0, 0.0));
        assert_eq!(p.trace().re, 1.0);
    }

    #[test]
    fn tensor_concatenates_dims() {
        let a = Ket::basis_state(&[2], 1).unwrap();
        let b = Ket::basis_state(&[3], 2).unwrap();
        let ab = a.tensor(&b);
        assert_eq!(ab.dims(), &[2, 3]);
        assert_eq!(ab.amplitudes()[5], Complex64::new(1.0, 0.0));
    }
}
