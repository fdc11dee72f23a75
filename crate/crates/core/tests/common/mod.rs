#![allow(dead_code)]

use micromorph::anisotropy::{build_cubic, build_isotropic, build_orthotropic};
use micromorph::{Coupling3, Mat3, NotationConvention, StiffnessVoigt};
use nalgebra::{DMatrix, Matrix3, SMatrix, SVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random orthogonal matrix from the QR factor of a uniform matrix.
pub fn orthogonal<const N: usize>(r: &mut ChaCha8Rng) -> SMatrix<f64, N, N> {
    let a = DMatrix::<f64>::from_fn(N, N, |_, _| r.gen_range(-1.0..1.0));
    SMatrix::<f64, N, N>::from_iterator(a.qr().q().iter().copied())
}

/// `Q diag(λ) Qᵀ` with eigenvalues uniform in `[lo, hi]`.
pub fn spd<const N: usize>(r: &mut ChaCha8Rng, lo: f64, hi: f64) -> SMatrix<f64, N, N> {
    let q = orthogonal::<N>(r);
    let d = SVector::<f64, N>::from_fn(|_, _| r.gen_range(lo..hi));
    let m = q * SMatrix::<f64, N, N>::from_diagonal(&d) * q.transpose();
    (m + m.transpose()) * 0.5
}

pub fn stiffness(r: &mut ChaCha8Rng, conv: NotationConvention) -> StiffnessVoigt {
    StiffnessVoigt::new(&spd::<6>(r, 0.5, 10.0), conv)
}

pub fn coupling(r: &mut ChaCha8Rng) -> Coupling3 {
    Coupling3::new(&spd::<3>(r, 0.2, 5.0))
}

pub fn mat3(r: &mut ChaCha8Rng) -> Mat3 {
    Mat3::from_fn(|_, _| r.gen_range(-1.0..1.0))
}

pub fn rotation(r: &mut ChaCha8Rng) -> Mat3 {
    let mut q: Matrix3<f64> = orthogonal::<3>(r);
    if q.determinant() < 0.0 {
        q.set_column(0, &(-q.column(0)));
    }
    q
}

/// Isotropic stiffness with `μ ∈ [0.2, 5]` and `κ ∈ [0.2, 8]`.
pub fn iso(r: &mut ChaCha8Rng, conv: NotationConvention) -> StiffnessVoigt {
    let mu = r.gen_range(0.2..5.0);
    let kappa = r.gen_range(0.2..8.0);
    build_isotropic(kappa - 2.0 * mu / 3.0, mu, conv)
}

pub fn cubic(r: &mut ChaCha8Rng, conv: NotationConvention) -> StiffnessVoigt {
    build_cubic(r.gen_range(0.2..8.0), r.gen_range(0.2..5.0), r.gen_range(0.2..5.0), conv)
}

/// Orthotropic stiffness with an SPD normal block and positive shears.
pub fn ortho(r: &mut ChaCha8Rng, conv: NotationConvention) -> StiffnessVoigt {
    let b = spd::<3>(r, 0.5, 10.0);
    let p = [
        b[(0, 0)],
        b[(1, 1)],
        b[(2, 2)],
        b[(0, 1)],
        b[(0, 2)],
        b[(1, 2)],
        r.gen_range(0.2..5.0),
        r.gen_range(0.2..5.0),
        r.gen_range(0.2..5.0),
    ];
    build_orthotropic(&p, conv)
}

pub fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

pub fn rel_mat<const R: usize, const C: usize>(a: &SMatrix<f64, R, C>, b: &SMatrix<f64, R, C>) -> f64 {
    (a - b).norm() / b.norm().max(f64::MIN_POSITIVE)
}
