//! Seeded random states, unitaries and channels for property tests and
//! stochastic searches.

use num_complex::Complex64;
use rand::Rng;

use crate::channel::Channel;
use crate::error::Result;
use crate::operator::Operator;
use crate::CMatrix;

/// One standard normal sample via Box-Muller.
fn normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
    let u2: f64 = rng.gen();
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

fn ginibre<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| {
        Complex64::new(normal(rng), normal(rng)) * std::f64::consts::FRAC_1_SQRT_2
    })
}

/// Haar-random unitary: QR of a Ginibre matrix with the R-diagonal phases
/// absorbed into Q.
pub fn random_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> CMatrix {
    let g = ginibre(dim, dim, rng);
    let qr = g.qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..dim {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 {
            d / d.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        for i in 0..dim {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// Random full-rank density operator `G G† / tr(G G†)` on one subsystem.
pub fn random_density<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Operator {
    random_density_with_dims(&[dim], rng)
}

/// Random full-rank density operator carrying the given dimension list.
pub fn random_density_with_dims<R: Rng + ?Sized>(dims: &[usize], rng: &mut R) -> Operator {
    let d: usize = dims.iter().product();
    let g = ginibre(d, d, rng);
    let m = &g * g.adjoint();
    let tr = m.trace();
    Operator::new(m.scale(1.0 / tr.re), dims.to_vec()).expect("construction is consistent")
}

/// Random normalized pure state.
pub fn random_ket<R: Rng + ?Sized>(dims: &[usize], rng: &mut R) -> crate::ket::Ket {
    let d: usize = dims.iter().product();
    let mut v = nalgebra::DVector::from_fn(d, |_, _| Complex64::new(normal(rng), normal(rng)));
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.scale_mut(1.0 / norm);
    crate::ket::Ket::new(v, dims.to_vec()).expect("normalized by construction")
}

/// Random channel from a Haar-random isometry `C^in -> C^out (x) C^env`,
/// sliced over the environment index into `env_dim` Kraus operators.
/// Requires `out_dim * env_dim >= in_dim`.
pub fn random_channel<R: Rng + ?Sized>(
    in_dim: usize,
    out_dim: usize,
    env_dim: usize,
    rng: &mut R,
) -> Result<Channel> {
    let total = out_dim * env_dim;
    if total < in_dim {
        return Err(crate::error::QipError::DimensionMismatch {
            context: format!("isometry needs out*env = {total} >= in = {in_dim}"),
        });
    }
    let u = random_unitary(total, rng);
    let kraus = (0..env_dim)
        .map(|k| {
            CMatrix::from_fn(out_dim, in_dim, |o, m| u[(o * env_dim + k, m)])
        })
        .collect();
    Channel::new(kraus)
}
