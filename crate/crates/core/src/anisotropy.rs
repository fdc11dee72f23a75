//! Stiffness and coupling templates per symmetry class, pattern classification,
//! definiteness checks, and the limiting-case constraints on the micro-distortion.

use nalgebra::{Matrix6, SMatrix};

use crate::coupling::Coupling3;
use crate::linalg::{self, Definiteness};
use crate::tensor::{cartan_decompose, Mat3, NotationConvention, StiffnessVoigt};
use crate::{Error, Result};

pub const DEFAULT_CLASS_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SymmetryClass {
    Isotropic,
    Cubic,
    /// Three independent diagonal entries for a coupling; nine constants for a stiffness.
    Orthotropic,
    /// Coupling only: `diag(a, a, b)`.
    Tetragonal,
    /// Coupling only; same pattern as tetragonal.
    TransverselyIsotropic,
    /// Coupling only: zeros at (1,2) and (2,3).
    Monoclinic,
    Triclinic,
}

impl SymmetryClass {
    pub fn name(self) -> &'static str {
        match self {
            SymmetryClass::Isotropic => "isotropic",
            SymmetryClass::Cubic => "cubic",
            SymmetryClass::Orthotropic => "orthotropic",
            SymmetryClass::Tetragonal => "tetragonal",
            SymmetryClass::TransverselyIsotropic => "transversely-isotropic",
            SymmetryClass::Monoclinic => "monoclinic",
            SymmetryClass::Triclinic => "triclinic",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Some(match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "isotropic" | "iso" => SymmetryClass::Isotropic,
            "cubic" => SymmetryClass::Cubic,
            "orthotropic" | "orthorhombic" => SymmetryClass::Orthotropic,
            "tetragonal" => SymmetryClass::Tetragonal,
            "transversely-isotropic" | "transverse" => SymmetryClass::TransverselyIsotropic,
            "monoclinic" => SymmetryClass::Monoclinic,
            "triclinic" => SymmetryClass::Triclinic,
            _ => return None,
        })
    }
}

/// Parameters of a stiffness template. Orthotropic constants are given in
/// Voigt form `(C11,C22,C33,C12,C13,C23,C44,C55,C66)` whatever the target convention.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MaterialSpec {
    Isotropic { lambda: f64, mu: f64 },
    IsotropicBulk { kappa: f64, mu: f64 },
    Cubic { kappa: f64, mu: f64, mu_star: f64 },
    Orthotropic([f64; 9]),
}

impl MaterialSpec {
    pub fn class(&self) -> SymmetryClass {
        match self {
            MaterialSpec::Isotropic { .. } | MaterialSpec::IsotropicBulk { .. } => SymmetryClass::Isotropic,
            MaterialSpec::Cubic { .. } => SymmetryClass::Cubic,
            MaterialSpec::Orthotropic(_) => SymmetryClass::Orthotropic,
        }
    }

    pub fn build(&self, conv: NotationConvention) -> StiffnessVoigt {
        match *self {
            MaterialSpec::Isotropic { lambda, mu } => build_isotropic(lambda, mu, conv),
            MaterialSpec::IsotropicBulk { kappa, mu } => build_isotropic(lambda_from_kappa(kappa, mu), mu, conv),
            MaterialSpec::Cubic { kappa, mu, mu_star } => build_cubic(kappa, mu, mu_star, conv),
            MaterialSpec::Orthotropic(p) => build_orthotropic(&p, conv),
        }
    }

    /// Like [`MaterialSpec::build`], additionally requiring a strictly positive definite result.
    pub fn build_spd(&self, conv: NotationConvention, what: &str) -> Result<StiffnessVoigt> {
        let cv = self.build(conv);
        linalg::require_spd(cv.matrix(), what)?;
        Ok(cv)
    }
}

/// `κ = (2μ + 3λ)/3`.
pub fn bulk_modulus(lambda: f64, mu: f64) -> f64 {
    (2.0 * mu + 3.0 * lambda) / 3.0
}

pub fn lambda_from_kappa(kappa: f64, mu: f64) -> f64 {
    kappa - 2.0 * mu / 3.0
}

fn shear_factor(conv: NotationConvention) -> f64 {
    4.0 / (conv.c() * conv.c())
}

pub fn build_isotropic(lambda: f64, mu: f64, conv: NotationConvention) -> StiffnessVoigt {
    let mut m = Matrix6::zeros();
    for i in 0..3 {
        for j in 0..3 {
            m[(i, j)] = if i == j { 2.0 * mu + lambda } else { lambda };
        }
        m[(i + 3, i + 3)] = shear_factor(conv) * mu;
    }
    StiffnessVoigt::new(&m, conv)
}

pub fn build_cubic(kappa: f64, mu: f64, mu_star: f64, conv: NotationConvention) -> StiffnessVoigt {
    let mut m = Matrix6::zeros();
    for i in 0..3 {
        for j in 0..3 {
            m[(i, j)] = if i == j { kappa + 4.0 * mu / 3.0 } else { kappa - 2.0 * mu / 3.0 };
        }
        m[(i + 3, i + 3)] = shear_factor(conv) * mu_star;
    }
    StiffnessVoigt::new(&m, conv)
}

/// `p = (C11,C22,C33,C12,C13,C23,C44,C55,C66)` in Voigt form.
pub fn build_orthotropic(p: &[f64; 9], conv: NotationConvention) -> StiffnessVoigt {
    let mut m = Matrix6::zeros();
    m[(0, 0)] = p[0];
    m[(1, 1)] = p[1];
    m[(2, 2)] = p[2];
    m[(0, 1)] = p[3];
    m[(0, 2)] = p[4];
    m[(1, 2)] = p[5];
    for k in 0..3 {
        m[(3 + k, 3 + k)] = shear_factor(conv) * p[6 + k];
    }
    StiffnessVoigt::new(&m, conv)
}

/// Coupling templates. Parameter layouts:
/// isotropic/cubic `(μ_c)`; tetragonal/transverse `(a, b)` for `diag(a,a,b)`;
/// orthotropic `(a, b, c)`; monoclinic `(c11, c22, c33, c13)`;
/// triclinic `(c11, c22, c33, c23, c13, c12)`.
pub fn build_coupling(class: SymmetryClass, params: &[f64]) -> Result<Coupling3> {
    let expected = match class {
        SymmetryClass::Isotropic | SymmetryClass::Cubic => 1,
        SymmetryClass::Tetragonal | SymmetryClass::TransverselyIsotropic => 2,
        SymmetryClass::Orthotropic => 3,
        SymmetryClass::Monoclinic => 4,
        SymmetryClass::Triclinic => 6,
    };
    if params.len() != expected {
        return Err(Error::ParamCount { class: class.name().into(), expected, got: params.len() });
    }
    let p = params;
    let m = match class {
        SymmetryClass::Isotropic | SymmetryClass::Cubic => return Ok(Coupling3::isotropic(p[0])),
        SymmetryClass::Tetragonal | SymmetryClass::TransverselyIsotropic => {
            Mat3::new(p[0], 0.0, 0.0, 0.0, p[0], 0.0, 0.0, 0.0, p[1])
        }
        SymmetryClass::Orthotropic => Mat3::new(p[0], 0.0, 0.0, 0.0, p[1], 0.0, 0.0, 0.0, p[2]),
        SymmetryClass::Monoclinic => Mat3::new(p[0], 0.0, p[3], 0.0, p[1], 0.0, p[3], 0.0, p[2]),
        SymmetryClass::Triclinic => Mat3::new(p[0], p[5], p[4], p[5], p[1], p[3], p[4], p[3], p[2]),
    };
    Ok(Coupling3::new(&m))
}

/// Most specific of Isotropic → Cubic → Orthotropic → Triclinic whose template
/// holds within `tol·max|C|`, in the material frame.
pub fn classify_stiffness(cv: &StiffnessVoigt, tol: f64) -> SymmetryClass {
    let m = cv.matrix();
    let eps = tol * linalg::max_abs(m);
    let close = |a: f64, b: f64| (a - b).abs() <= eps;

    let ortho_zeros = (0..6).all(|i| {
        (0..6).all(|j| {
            let in_block = i < 3 && j < 3;
            in_block || i == j || m[(i, j)].abs() <= eps
        })
    });
    if !ortho_zeros {
        return SymmetryClass::Triclinic;
    }
    let cubic = close(m[(0, 0)], m[(1, 1)])
        && close(m[(0, 0)], m[(2, 2)])
        && close(m[(0, 1)], m[(0, 2)])
        && close(m[(0, 1)], m[(1, 2)])
        && close(m[(3, 3)], m[(4, 4)])
        && close(m[(3, 3)], m[(5, 5)]);
    if !cubic {
        return SymmetryClass::Orthotropic;
    }
    let c = cv.convention().c();
    if close(m[(3, 3)], 2.0 / (c * c) * (m[(0, 0)] - m[(0, 1)])) {
        SymmetryClass::Isotropic
    } else {
        SymmetryClass::Cubic
    }
}

/// Pattern classification of a coupling tensor.
pub fn classify_coupling(cc: &Coupling3, tol: f64) -> SymmetryClass {
    let m = cc.matrix();
    let eps = tol * linalg::max_abs(m);
    let zero = |i: usize, j: usize| m[(i, j)].abs() <= eps;
    let close = |a: f64, b: f64| (a - b).abs() <= eps;
    if zero(0, 1) && zero(1, 2) && zero(0, 2) {
        let (a, b, c) = (m[(0, 0)], m[(1, 1)], m[(2, 2)]);
        if close(a, b) && close(b, c) {
            SymmetryClass::Isotropic
        } else if close(a, b) {
            SymmetryClass::Tetragonal
        } else {
            SymmetryClass::Orthotropic
        }
    } else if zero(0, 1) && zero(1, 2) {
        SymmetryClass::Monoclinic
    } else {
        SymmetryClass::Triclinic
    }
}

/// Named parameters recovered from a matrix of the given class (Voigt-form moduli).
pub fn class_parameters(cv: &StiffnessVoigt, class: SymmetryClass) -> Vec<(&'static str, f64)> {
    let m = cv.matrix();
    let unshear = 1.0 / shear_factor(cv.convention());
    let d = |i: usize, j: usize| m[(i, j)];
    match class {
        SymmetryClass::Isotropic => {
            let lambda = (d(0, 1) + d(0, 2) + d(1, 2)) / 3.0;
            let c11 = (d(0, 0) + d(1, 1) + d(2, 2)) / 3.0;
            let mu = (c11 - lambda) / 2.0;
            vec![("lambda", lambda), ("mu", mu), ("kappa", bulk_modulus(lambda, mu))]
        }
        SymmetryClass::Cubic => {
            let c12 = (d(0, 1) + d(0, 2) + d(1, 2)) / 3.0;
            let c11 = (d(0, 0) + d(1, 1) + d(2, 2)) / 3.0;
            let mu = (c11 - c12) / 2.0;
            let mu_star = unshear * (d(3, 3) + d(4, 4) + d(5, 5)) / 3.0;
            vec![("kappa", (c11 + 2.0 * c12) / 3.0), ("mu", mu), ("mu_star", mu_star)]
        }
        SymmetryClass::Orthotropic => vec![
            ("c11", d(0, 0)),
            ("c22", d(1, 1)),
            ("c33", d(2, 2)),
            ("c12", d(0, 1)),
            ("c13", d(0, 2)),
            ("c23", d(1, 2)),
            ("c44", unshear * d(3, 3)),
            ("c55", unshear * d(4, 4)),
            ("c66", unshear * d(5, 5)),
        ],
        _ => Vec::new(),
    }
}

/// `(ok, min_eig)`; strict requires `min > 1e-12·max`, semi `min ≥ −1e-12·max`.
pub fn check_positive_definite<const N: usize>(m: &SMatrix<f64, N, N>, mode: Definiteness) -> (bool, f64) {
    linalg::check_definite(m, mode)
}

/// Special models obtained by constraining the micro-distortion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LimitingCase {
    /// `P ∈ so(3)`.
    Cosserat,
    /// `P ∈ ℝ·1`.
    MicroDilation,
    /// `tr P = 0`.
    MicroIncompressible,
    /// `P ∈ ℝ·1 + so(3)`.
    MicroStretch,
    /// `P ∈ Sym(3)`.
    Microstrain,
}

/// Whether a sample `P` satisfies the constraint of `case` within `1e-12·max(1, ‖P‖)`.
pub fn limiting_case_predicate(case: LimitingCase, p: &Mat3) -> bool {
    let tol = 1e-12 * p.norm().max(1.0);
    let (devsym, skew, tr) = cartan_decompose(p);
    let sph = (tr / 3.0).abs() * 3f64.sqrt();
    match case {
        LimitingCase::Cosserat => devsym.matrix().norm() <= tol && sph <= tol,
        LimitingCase::MicroDilation => devsym.matrix().norm() <= tol && skew.matrix().norm() <= tol,
        LimitingCase::MicroIncompressible => tr.abs() <= tol,
        LimitingCase::MicroStretch => devsym.matrix().norm() <= tol,
        LimitingCase::Microstrain => skew.matrix().norm() <= tol,
    }
}
