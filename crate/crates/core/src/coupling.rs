//! Rotational coupling tensors acting on axial vectors and their isotropy
//! projections by arithmetic, geometric and harmonic means of the eigenvalues.

use crate::linalg::{self, SPD_REL_FLOOR};
use crate::tensor::{axl, Mat3, Skew3};
use crate::{Error, Result};

/// Symmetric 3×3 `C̃_c` with `⟨ℂ_c A, A⟩ = axl(A)·C̃_c·axl(A)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Coupling3(Mat3);

impl Coupling3 {
    pub fn new(m: &Mat3) -> Self {
        Coupling3((m + m.transpose()) * 0.5)
    }

    /// Builds from a full matrix, rejecting asymmetry beyond `tol·max|C|`.
    pub fn try_from_full(m: &Mat3, tol: f64) -> Result<Self> {
        let scale = linalg::max_abs(m).max(f64::MIN_POSITIVE);
        for i in 0..3 {
            for j in i + 1..3 {
                let diff = (m[(i, j)] - m[(j, i)]).abs();
                if diff > tol * scale {
                    return Err(Error::Asymmetric { row: i, col: j, diff });
                }
            }
        }
        Ok(Coupling3::new(m))
    }

    pub fn scalar(gamma: f64) -> Self {
        Coupling3(Mat3::identity() * gamma)
    }

    /// `(μ_c/2)·1`.
    pub fn isotropic(mu_c: f64) -> Self {
        Coupling3::scalar(mu_c / 2.0)
    }

    pub fn zero() -> Self {
        Coupling3(Mat3::zeros())
    }

    pub fn matrix(&self) -> &Mat3 {
        &self.0
    }

    /// `ℂ_c A = ½·anti(C̃_c axl A)`.
    pub fn apply(&self, a: &Skew3) -> Skew3 {
        Skew3::from_axl(&(self.0 * axl(a) * 0.5))
    }

    /// `⟨ℂ_c A, A⟩`.
    pub fn quad(&self, a: &Skew3) -> f64 {
        let v = axl(a);
        v.dot(&(self.0 * v))
    }

    /// `γ` when the matrix is exactly `γ·1`.
    pub fn exact_scalar(&self) -> Option<f64> {
        let g = self.0[(0, 0)];
        (self.0 == Mat3::identity() * g).then_some(g)
    }

    /// Scalar `γ` if the matrix equals `γ·1` within `tol·max|C|`.
    pub fn as_scalar(&self, tol: f64) -> Option<f64> {
        let g = self.0.trace() / 3.0;
        let scale = linalg::max_abs(&self.0);
        let dev = (self.0 - Mat3::identity() * g).abs().max();
        (dev <= tol * scale).then_some(g)
    }
}

/// `(tr C/3)·1`.
pub fn iso_arithm(cc: &Coupling3) -> Coupling3 {
    if cc.exact_scalar().is_some() {
        return *cc;
    }
    Coupling3::scalar(cc.0.trace() / 3.0)
}

/// `det(C)^{1/3}·1`; the zero matrix once an eigenvalue reaches the floor.
pub fn iso_log(cc: &Coupling3) -> Result<Coupling3> {
    if let Some(g) = cc.exact_scalar() {
        if g >= 0.0 {
            return Ok(*cc);
        }
    }
    let (vals, _) = linalg::sym_eig(&cc.0);
    let scale = vals.iter().fold(0.0f64, |a, &x| a.max(x.abs()));
    if vals[0] < -SPD_REL_FLOOR * scale {
        return Err(Error::NotSemiDefinite { what: "coupling".into(), min_eig: vals[0] });
    }
    if vals[0] <= SPD_REL_FLOOR * scale {
        return Ok(Coupling3::zero());
    }
    let mean_log = vals.iter().map(|x| x.ln()).sum::<f64>() / 3.0;
    Ok(Coupling3::scalar(mean_log.exp()))
}

/// `[iso_arithm(C⁻¹)]⁻¹`.
pub fn iso_harm(cc: &Coupling3) -> Result<Coupling3> {
    if let Some(g) = cc.exact_scalar() {
        if g > 0.0 {
            return Ok(*cc);
        }
    }
    let inv = linalg::spd_inverse(&cc.0, "coupling").map_err(|e| match e {
        Error::NotPositiveDefinite { min_eig, .. } => Error::Singular { what: "coupling".into(), min_eig },
        other => other,
    })?;
    Ok(Coupling3::scalar(3.0 / inv.trace()))
}

pub fn inverse(cc: &Coupling3) -> Result<Coupling3> {
    Ok(Coupling3::new(&linalg::spd_inverse(&cc.0, "coupling")?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::Vector3;

    fn diag(a: f64, b: f64, c: f64) -> Coupling3 {
        Coupling3::new(&Mat3::from_diagonal(&Vector3::new(a, b, c)))
    }

    fn scalar_of(c: &Coupling3) -> f64 {
        c.as_scalar(1e-15).expect("scalar multiple of identity")
    }

    #[test]
    fn arithm_examples() {
        assert_eq!(scalar_of(&iso_arithm(&diag(3.0, 0.0, 0.0))), 1.0);
        assert_eq!(iso_arithm(&Coupling3::scalar(2.5)), Coupling3::scalar(2.5));
        assert_eq!(scalar_of(&iso_arithm(&diag(1.0, 2.0, 3.0))), 2.0);
    }

    #[test]
    fn log_examples() {
        assert!((scalar_of(&iso_log(&diag(1.0, 2.0, 4.0)).unwrap()) - 2.0).abs() < 1e-15);
        assert_eq!(iso_log(&diag(5.0, 0.0, 0.0)).unwrap(), Coupling3::zero());
        assert!((scalar_of(&iso_log(&Coupling3::scalar(0.7)).unwrap()) - 0.7).abs() < 1e-15);
        assert!(iso_log(&diag(-1.0, -2.0, -3.0)).is_err());
    }

    #[test]
    fn harm_examples() {
        assert!((scalar_of(&iso_harm(&diag(1.0, 1.0, 4.0)).unwrap()) - 4.0 / 3.0).abs() < 1e-15);
        assert!((scalar_of(&iso_harm(&diag(1.0, 2.0, 3.0)).unwrap()) - 18.0 / 11.0).abs() < 1e-15);
        assert!((scalar_of(&iso_harm(&Coupling3::scalar(3.0)).unwrap()) - 3.0).abs() < 1e-15);
        assert!(matches!(iso_harm(&diag(1.0, 0.0, 1.0)), Err(Error::Singular { .. })));
    }

    #[test]
    fn isotropic_coupling_quadratic_form() {
        let a = Skew3::new(&Mat3::new(0.0, 1.0, -2.0, -1.0, 0.0, 0.5, 2.0, -0.5, 0.0));
        let cc = Coupling3::isotropic(2.0);
        // ⟨ℂ_c A, A⟩ = ⟨apply(A), A⟩
        assert!((cc.quad(&a) - cc.apply(&a).matrix().dot(a.matrix())).abs() < 1e-14);
        assert!((cc.quad(&a) - 0.5 * a.norm_squared()).abs() < 1e-14);
    }
}
