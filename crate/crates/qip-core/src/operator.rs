use nalgebra::linalg::SymmetricEigen;
use num_complex::Complex64;

use crate::error::{QipError, Result};
use crate::ket::Ket;
use crate::{CMatrix, EIG_CLIP, TOL};

/// Dense complex operator on a tensor product of finite-dimensional
/// subsystems. `dims` lists the subsystem dimensions in positional order;
/// their product equals the matrix side length.
#[derive(Debug, Clone, PartialEq)]
pub struct Operator {
    mat: CMatrix,
    dims: Vec<usize>,
}

/// Row-major strides of a dimension list: `index = sum_i comp_i * stride_i`.
pub(crate) fn strides(dims: &[usize]) -> Vec<usize> {
    let mut s = vec![1usize; dims.len()];
    for i in (0..dims.len().saturating_sub(1)).rev() {
        s[i] = s[i + 1] * dims[i + 1];
    }
    s
}

/// Decompose `flat` into a multi-index over `dims` (row-major).
pub(crate) fn multi_index(flat: usize, dims: &[usize]) -> Vec<usize> {
    let mut out = vec![0usize; dims.len()];
    let mut rest = flat;
    for i in (0..dims.len()).rev() {
        out[i] = rest % dims[i];
        rest /= dims[i];
    }
    out
}

impl Operator {
    pub fn new(mat: CMatrix, dims: Vec<usize>) -> Result<Self> {
        let product: usize = dims.iter().product();
        if dims.iter().any(|&d| d == 0) || product != mat.nrows() || mat.nrows() != mat.ncols() {
            return Err(QipError::DimsMismatch {
                product,
                side: mat.nrows(),
                dims,
            });
        }
        Ok(Self { mat, dims })
    }

    /// Operator on a single unstructured subsystem of dimension `mat.nrows()`.
    pub fn from_matrix(mat: CMatrix) -> Result<Self> {
        let d = mat.nrows();
        Self::new(mat, vec![d])
    }

    /// Density-operator constructor: additionally checks Hermiticity,
    /// positive semidefiniteness and unit trace, all within [`TOL`].
    pub fn density(mat: CMatrix, dims: Vec<usize>) -> Result<Self> {
        let op = Self::new(mat, dims)?;
        op.validate_density()?;
        Ok(op)
    }

    pub fn identity(dims: &[usize]) -> Self {
        let d: usize = dims.iter().product();
        Self {
            mat: CMatrix::identity(d, d),
            dims: dims.to_vec(),
        }
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> CMatrix {
        self.mat
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// Total Hilbert-space dimension.
    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn parties(&self) -> usize {
        self.dims.len()
    }

    pub fn trace(&self) -> Complex64 {
        self.mat.trace()
    }

    /// Largest absolute entry of `M - M†`.
    pub fn hermiticity_residual(&self) -> f64 {
        let mut r = 0.0f64;
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                r = r.max((self.mat[(i, j)] - self.mat[(j, i)].conj()).norm());
            }
        }
        r
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermiticity_residual() <= TOL
    }

    /// Checks the density-operator invariants: Hermitian, PSD and unit trace,
    /// all within [`TOL`].
    pub fn validate_density(&self) -> Result<()> {
        let tr = self.trace();
        if (tr.re - 1.0).abs() > TOL || tr.im.abs() > TOL {
            return Err(QipError::InvalidState {
                reason: format!("trace {} is not 1", tr),
            });
        }
        let evs = self.eigenvalues_hermitian()?;
        if let Some(&min) = evs.last() {
            if min < -TOL {
                return Err(QipError::InvalidState {
                    reason: format!("negative eigenvalue {min:.3e}"),
                });
            }
        }
        Ok(())
    }

    /// Kronecker composition. The result's dimension list is the
    /// concatenation of the operands' lists.
    pub fn tensor(&self, other: &Operator) -> Operator {
        let mat = self.mat.kronecker(&other.mat);
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        Operator { mat, dims }
    }

    /// Largest absolute entrywise difference to `other`.
    pub fn max_abs_diff(&self, other: &Operator) -> f64 {
        assert_eq!(self.dim(), other.dim(), "operators must have equal dimension");
        let mut r = 0.0f64;
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                r = r.max((self.mat[(i, j)] - other.mat[(i, j)]).norm());
            }
        }
        r
    }

    /// Trace over every subsystem not listed in `keep`. The returned operator
    /// carries the kept subsystems in their original order; the trace is
    /// preserved.
    pub fn partial_trace(&self, keep: &[usize]) -> Result<Operator> {
        let n = self.dims.len();
        for &k in keep {
            if k >= n {
                return Err(QipError::PartyOutOfRange { index: k, count: n });
            }
        }
        let mut keep: Vec<usize> = keep.to_vec();
        keep.sort_unstable();
        keep.dedup();
        let traced: Vec<usize> = (0..n).filter(|i| !keep.contains(i)).collect();

        let st = strides(&self.dims);
        let keep_dims: Vec<usize> = keep.iter().map(|&i| self.dims[i]).collect();
        let traced_dims: Vec<usize> = traced.iter().map(|&i| self.dims[i]).collect();
        let dk: usize = keep_dims.iter().product();
        let dt: usize = traced_dims.iter().product();

        // Flat offsets contributed by each sub-multi-index.
        let offset = |flat: usize, sub_dims: &[usize], positions: &[usize]| -> usize {
            multi_index(flat, sub_dims)
                .iter()
                .zip(positions)
                .map(|(&c, &p)| c * st[p])
                .sum()
        };
        let keep_offsets: Vec<usize> = (0..dk).map(|f| offset(f, &keep_dims, &keep)).collect();
        let traced_offsets: Vec<usize> = (0..dt).map(|f| offset(f, &traced_dims, &traced)).collect();

        let mut out = CMatrix::zeros(dk, dk);
        for (r, &ro) in keep_offsets.iter().enumerate() {
            for (c, &co) in keep_offsets.iter().enumerate() {
                let mut acc = Complex64::new(0.0, 0.0);
                for &to in &traced_offsets {
                    acc += self.mat[(ro + to, co + to)];
                }
                out[(r, c)] = acc;
            }
        }
        Operator::new(out, keep_dims)
    }

    /// Transposition applied to the chosen tensor factor only.
    pub fn partial_transpose(&self, party: usize) -> Result<Operator> {
        let n = self.dims.len();
        if party >= n {
            return Err(QipError::PartyOutOfRange {
                index: party,
                count: n,
            });
        }
        let st = strides(&self.dims);
        let (sp, dp) = (st[party], self.dims[party]);
        let d = self.dim();
        let mut out = CMatrix::zeros(d, d);
        for i in 0..d {
            let ip = (i / sp) % dp;
            for j in 0..d {
                let jp = (j / sp) % dp;
                let i2 = i - ip * sp + jp * sp;
                let j2 = j - jp * sp + ip * sp;
                out[(i2, j2)] = self.mat[(i, j)];
            }
        }
        Operator::new(out, self.dims.clone())
    }

    /// Real eigenvalues of a Hermitian operator, in descending order.
    /// Fails if the Hermiticity residual exceeds [`TOL`].
    pub fn eigenvalues_hermitian(&self) -> Result<Vec<f64>> {
        let residual = self.hermiticity_residual();
        if residual > TOL {
            return Err(QipError::NonHermitian { residual });
        }
        let sym = symmetrize(&self.mat);
        let eig = SymmetricEigen::new(sym);
        let mut evs: Vec<f64> = eig.eigenvalues.iter().copied().collect();
        evs.sort_by(|a, b| b.total_cmp(a));
        Ok(evs)
    }

    /// Trace norm of a Hermitian operator (sum of absolute eigenvalues).
    pub fn trace_norm_hermitian(&self) -> Result<f64> {
        Ok(self.eigenvalues_hermitian()?.iter().map(|l| l.abs()).sum())
    }

    /// Spectral purification. The environment is appended as a final
    /// subsystem of dimension equal to the rank, with its basis ordered by
    /// descending eigenvalue; tracing the environment out recovers the input.
    ///
    /// Eigenvector phases are fixed so that each vector's largest-magnitude
    /// component is real and nonnegative, making the output deterministic
    /// for nondegenerate spectra.
    pub fn purify(&self) -> Result<Ket> {
        self.validate_density()?;
        let eig = SymmetricEigen::new(symmetrize(&self.mat));
        let d = self.dim();

        let mut order: Vec<usize> = (0..d).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
        let rank = order
            .iter()
            .filter(|&&k| eig.eigenvalues[k] > EIG_CLIP)
            .count();
        if rank == 0 {
            return Err(QipError::InvalidState {
                reason: "zero-rank operator".into(),
            });
        }

        let mut amps = nalgebra::DVector::from_element(d * rank, Complex64::new(0.0, 0.0));
        for (env, &k) in order.iter().take(rank).enumerate() {
            let lambda = eig.eigenvalues[k];
            let col = eig.eigenvectors.column(k);
            // Phase convention: largest-magnitude component real nonnegative.
            let mut imax = 0;
            for i in 1..d {
                if col[i].norm() > col[imax].norm() {
                    imax = i;
                }
            }
            let phase = if col[imax].norm() > 0.0 {
                col[imax].conj() / col[imax].norm()
            } else {
                Complex64::new(1.0, 0.0)
            };
            let w = Complex64::new(lambda.sqrt(), 0.0) * phase;
            for i in 0..d {
                amps[i * rank + env] = w * col[i];
            }
        }
        let mut dims = self.dims.clone();
        dims.push(rank);
        Ket::new(amps, dims)
    }
}

/// `(M + M†)/2`; removes the sub-tolerance anti-Hermitian part before
/// handing the matrix to the eigensolver.
fn symmetrize(m: &CMatrix) -> CMatrix {
    let adj = m.adjoint();
    (m + adj).scale(0.5)
}
