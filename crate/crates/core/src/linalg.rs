//! Small dense symmetric helpers shared by the modules.
//!
//! Every inverse of a symmetric matrix goes through its eigendecomposition,
//! so the result is symmetric by construction.

use nalgebra::{DMatrix, SMatrix, SVector};

use crate::{Error, Result};

/// Relative floor below which an eigenvalue counts as zero.
pub const SPD_REL_FLOOR: f64 = 1e-12;

/// Positive definiteness mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Definiteness {
    Strict,
    Semi,
}

/// Eigenvalues (ascending) and matching eigenvectors (columns) of the symmetric part of `m`.
pub fn sym_eig<const N: usize>(m: &SMatrix<f64, N, N>) -> (SVector<f64, N>, SMatrix<f64, N, N>) {
    let s = symmetrize(m);
    let d = DMatrix::from_column_slice(N, N, s.as_slice());
    let eig = d.symmetric_eigen();
    let mut idx: Vec<usize> = (0..N).collect();
    idx.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let mut vals = SVector::<f64, N>::zeros();
    let mut vecs = SMatrix::<f64, N, N>::zeros();
    for (dst, &src) in idx.iter().enumerate() {
        vals[dst] = eig.eigenvalues[src];
        vecs.set_column(dst, &SVector::<f64, N>::from_iterator(eig.eigenvectors.column(src).iter().copied()));
    }
    (vals, vecs)
}

/// (min, max) eigenvalue of the symmetric part.
pub fn eig_range<const N: usize>(m: &SMatrix<f64, N, N>) -> (f64, f64) {
    let (v, _) = sym_eig(m);
    (v[0], v[N - 1])
}

/// Returns `(ok, min_eig)` for the relative-floor definiteness test.
pub fn check_definite<const N: usize>(m: &SMatrix<f64, N, N>, mode: Definiteness) -> (bool, f64) {
    let (lo, hi) = eig_range(m);
    let scale = hi.abs().max(lo.abs());
    let ok = match mode {
        Definiteness::Strict => lo > SPD_REL_FLOOR * hi && hi > 0.0,
        Definiteness::Semi => lo >= -SPD_REL_FLOOR * scale,
    };
    (ok, lo)
}

pub fn require_spd<const N: usize>(m: &SMatrix<f64, N, N>, what: &str) -> Result<()> {
    let (ok, min_eig) = check_definite(m, Definiteness::Strict);
    if ok {
        Ok(())
    } else {
        Err(Error::NotPositiveDefinite { what: what.to_string(), min_eig })
    }
}

/// Inverse of a symmetric positive definite matrix.
pub fn spd_inverse<const N: usize>(m: &SMatrix<f64, N, N>, what: &str) -> Result<SMatrix<f64, N, N>> {
    let (vals, vecs) = sym_eig(m);
    let hi = vals[N - 1];
    if !(vals[0] > SPD_REL_FLOOR * hi && hi > 0.0) {
        return Err(Error::NotPositiveDefinite { what: what.to_string(), min_eig: vals[0] });
    }
    Ok(spectral_apply(&vals, &vecs, |x| 1.0 / x))
}

/// Moore-Penrose pseudo-inverse of a symmetric matrix; eigenvalues with
/// modulus below the relative floor are treated as exact zeros.
pub fn sym_pinv<const N: usize>(m: &SMatrix<f64, N, N>) -> SMatrix<f64, N, N> {
    let (vals, vecs) = sym_eig(m);
    let scale = vals.iter().fold(0.0f64, |a, &x| a.max(x.abs()));
    spectral_apply(&vals, &vecs, |x| if x.abs() > SPD_REL_FLOOR * scale { 1.0 / x } else { 0.0 })
}

/// `V f(Λ) Vᵀ`, symmetrized.
pub fn spectral_apply<const N: usize>(
    vals: &SVector<f64, N>,
    vecs: &SMatrix<f64, N, N>,
    f: impl Fn(f64) -> f64,
) -> SMatrix<f64, N, N> {
    let d = SMatrix::<f64, N, N>::from_diagonal(&vals.map(f));
    symmetrize(&(vecs * d * vecs.transpose()))
}

pub fn symmetrize<const N: usize>(m: &SMatrix<f64, N, N>) -> SMatrix<f64, N, N> {
    (m + m.transpose()) * 0.5
}

/// Largest singular value.
pub fn spectral_norm<const R: usize, const C: usize>(m: &SMatrix<f64, R, C>) -> f64 {
    let d = DMatrix::from_column_slice(R, C, m.as_slice());
    d.singular_values().iter().fold(0.0f64, |a, &x| a.max(x))
}

/// Max absolute entry.
pub fn max_abs<const R: usize, const C: usize>(m: &SMatrix<f64, R, C>) -> f64 {
    m.iter().fold(0.0f64, |a, &x| a.max(x.abs()))
}
