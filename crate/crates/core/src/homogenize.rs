//! Micro/macro consistency condition, its inverse, closed forms per class,
//! limit micro-distortions and the sym/skew coupling residual of a full
//! Mindlin–Eringen elastic tensor.

use nalgebra::{Matrix3, Matrix6, Vector3};

use crate::coupling::Coupling3;
use crate::linalg::{self, SPD_REL_FLOOR};
use crate::tensor::{
    sym_skew_projectors, sym_to_vec, tensor4_from_voigt, vec_to_sym, Mat3, Mat9, Skew3, StiffnessVoigt, Sym3,
    Tensor4Full,
};
use crate::{Error, Result};

/// Relative floor on the eigenvalues of `C_micro − C_macro`.
pub const MICRO_MACRO_GAP: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HomogenizationResult {
    pub macro_: StiffnessVoigt,
    /// Raw product symmetric within `1e-12` relative before symmetrization.
    pub symmetric_ok: bool,
    pub spd_ok: bool,
    /// `‖macro⁻¹ − Ce⁻¹ − Cmicro⁻¹‖ / ‖macro⁻¹‖` (Frobenius).
    pub harmonic_residual: f64,
}

fn same_convention(a: &StiffnessVoigt, b: &StiffnessVoigt) -> Result<()> {
    if a.convention() == b.convention() {
        Ok(())
    } else {
        Err(Error::ConventionMismatch)
    }
}

fn rel_asymmetry(m: &Matrix6<f64>) -> f64 {
    (m - m.transpose()).norm() / m.norm().max(f64::MIN_POSITIVE)
}

/// `C̃_macro = C̃_micro (C̃_micro + C̃_e)⁻¹ C̃_e`.
pub fn macro_from_micro_e(cmicro: &StiffnessVoigt, ce: &StiffnessVoigt) -> Result<HomogenizationResult> {
    same_convention(cmicro, ce)?;
    let cm_inv = linalg::spd_inverse(cmicro.matrix(), "C_micro")?;
    let ce_inv = linalg::spd_inverse(ce.matrix(), "C_e")?;
    let sum_inv =
        linalg::spd_inverse(&(cmicro.matrix() + ce.matrix()), "C_micro + C_e").expect("sum of two SPD matrices is SPD");
    let raw = cmicro.matrix() * sum_inv * ce.matrix();
    let symmetric_ok = rel_asymmetry(&raw) <= 1e-12;
    let m = linalg::symmetrize(&raw);
    let spd_ok = linalg::check_definite(&m, linalg::Definiteness::Strict).0;
    let harmonic_residual = match linalg::spd_inverse(&m, "C_macro") {
        Ok(mi) => (mi - ce_inv - cm_inv).norm() / mi.norm(),
        Err(_) => f64::INFINITY,
    };
    Ok(HomogenizationResult {
        macro_: StiffnessVoigt::new(&m, cmicro.convention()),
        symmetric_ok,
        spd_ok,
        harmonic_residual,
    })
}

/// `C̃_e = C̃_micro (C̃_micro − C̃_macro)⁻¹ C̃_macro`.
pub fn e_from_micro_macro(cmicro: &StiffnessVoigt, cmacro: &StiffnessVoigt) -> Result<StiffnessVoigt> {
    same_convention(cmicro, cmacro)?;
    linalg::require_spd(cmicro.matrix(), "C_micro")?;
    linalg::require_spd(cmacro.matrix(), "C_macro")?;
    let diff = cmicro.matrix() - cmacro.matrix();
    let (vals, vecs) = linalg::sym_eig(&diff);
    let (_, micro_max) = linalg::eig_range(cmicro.matrix());
    let lo = vals[0];
    if lo < -MICRO_MACRO_GAP * micro_max {
        return Err(Error::StiffnessExceedsMicro { min_eig: lo });
    }
    if lo <= MICRO_MACRO_GAP * micro_max || lo <= SPD_REL_FLOOR * vals[5] {
        return Err(Error::MicroEqualsMacro { min_eig: lo });
    }
    let diff_inv = linalg::spectral_apply(&vals, &vecs, |x| 1.0 / x);
    let raw = cmicro.matrix() * diff_inv * cmacro.matrix();
    Ok(StiffnessVoigt::new(&linalg::symmetrize(&raw), cmicro.convention()))
}

/// `[½(A⁻¹ + B⁻¹)]⁻¹`.
pub fn harmonic_mean(a: &StiffnessVoigt, b: &StiffnessVoigt) -> Result<StiffnessVoigt> {
    same_convention(a, b)?;
    let ai = linalg::spd_inverse(a.matrix(), "A")?;
    let bi = linalg::spd_inverse(b.matrix(), "B")?;
    let h = linalg::spd_inverse(&((ai + bi) * 0.5), "mean of inverses").expect("SPD");
    Ok(StiffnessVoigt::new(&h, a.convention()))
}

fn par(a: f64, b: f64) -> f64 {
    a * b / (a + b)
}

/// `(κ_macro, μ_macro)` with each modulus the parallel sum of its micro and e values.
pub fn iso_closed_form(kappa_e: f64, mu_e: f64, kappa_m: f64, mu_m: f64) -> (f64, f64) {
    (par(kappa_e, kappa_m), par(mu_e, mu_m))
}

/// `(κ_e, μ_e)` from micro and macro moduli.
pub fn iso_inverse_form(kappa_m: f64, mu_m: f64, kappa_macro: f64, mu_macro: f64) -> (f64, f64) {
    let inv = |m: f64, mac: f64| m * mac / (m - mac);
    (inv(kappa_m, kappa_macro), inv(mu_m, mu_macro))
}

/// `(κ, μ, μ*)_macro`.
pub fn cubic_closed_form(
    kappa_e: f64,
    mu_e: f64,
    mu_star_e: f64,
    kappa_m: f64,
    mu_m: f64,
    mu_star_m: f64,
) -> (f64, f64, f64) {
    (par(kappa_e, kappa_m), par(mu_e, mu_m), par(mu_star_e, mu_star_m))
}

/// `(κ, μ, μ*)_e` from micro and macro.
pub fn cubic_inverse_form(m: (f64, f64, f64), mac: (f64, f64, f64)) -> (f64, f64, f64) {
    let inv = |a: f64, b: f64| a * b / (a - b);
    (inv(m.0, mac.0), inv(m.1, mac.1), inv(m.2, mac.2))
}

/// Orthotropic closed form: the normal 3×3 block obeys the matrix relation,
/// the three shear moduli the scalar one.
pub fn ortho_closed_form(
    ce_block: &Matrix3<f64>,
    ce_shears: &Vector3<f64>,
    cm_block: &Matrix3<f64>,
    cm_shears: &Vector3<f64>,
) -> Result<(Matrix3<f64>, Vector3<f64>)> {
    linalg::require_spd(ce_block, "C_e block")?;
    linalg::require_spd(cm_block, "C_micro block")?;
    if ce_shears.iter().chain(cm_shears.iter()).any(|&s| s <= 0.0) {
        return Err(Error::InvalidInput("shear moduli must be positive".into()));
    }
    let s = linalg::spd_inverse(&(ce_block + cm_block), "block sum")?;
    let block = linalg::symmetrize(&(ce_block * s * cm_block));
    let shears = Vector3::from_fn(|i, _| par(ce_shears[i], cm_shears[i]));
    Ok((block, shears))
}

/// Limit micro-distortion. `skew` is `None` when the coupling is not
/// positive definite, in which case `skew P` is left undetermined.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimitDistortion {
    pub sym: Sym3,
    pub skew: Option<Skew3>,
}

impl LimitDistortion {
    /// `sym P + skew P`, with an undetermined skew part taken as zero.
    pub fn matrix(&self) -> Mat3 {
        self.sym.matrix() + self.skew.map(|s| *s.matrix()).unwrap_or_else(Mat3::zeros)
    }
}

/// `sym P = (ℂ_micro + ℂ_e)⁻¹ ℂ_e sym∇u`, `skew P = skew∇u` for SPD coupling.
pub fn limit_micro_distortion(
    ce: &StiffnessVoigt,
    cmicro: &StiffnessVoigt,
    cc: &Coupling3,
    grad_u: &Mat3,
) -> Result<LimitDistortion> {
    let sym = micro_limit_relation(ce, cmicro, &Sym3::new(grad_u))?;
    let cc_spd = linalg::check_definite(cc.matrix(), linalg::Definiteness::Strict).0;
    Ok(LimitDistortion { sym, skew: cc_spd.then(|| Skew3::new(grad_u)) })
}

/// `sym P̂ = (ℂ_e + ℂ_micro)⁻¹ ℂ_e ε̄`.
pub fn micro_limit_relation(ce: &StiffnessVoigt, cmicro: &StiffnessVoigt, avg_strain: &Sym3) -> Result<Sym3> {
    same_convention(ce, cmicro)?;
    linalg::require_spd(ce.matrix(), "C_e")?;
    linalg::require_spd(cmicro.matrix(), "C_micro")?;
    let conv = ce.convention();
    let sum_inv = linalg::spd_inverse(&(ce.matrix() + cmicro.matrix()), "C_e + C_micro")?;
    let v = sum_inv * (ce.matrix() * sym_to_vec(avg_strain, conv));
    Ok(vec_to_sym(&v, conv))
}

/// 9×9 block operator `X ↦ ℂ_e sym X + ℂ_c skew X`.
pub fn relaxed_block_tensor(ce: &StiffnessVoigt, cc: &Coupling3) -> Tensor4Full {
    Tensor4Full::from_linear_map(|x| ce.apply(&Sym3::new(x)).matrix() + cc.apply(&Skew3::new(x)).matrix())
}

/// `‖P_skew A P_sym‖₂ + ‖P_sym A P_skew‖₂` with `A = (𝔼_e + ℂ_micro)⁻¹ 𝔼_e`,
/// the map from the elastic distortion to `P` in the `L_c → 0` limit of a
/// Mindlin–Eringen energy. Zero exactly when `sym P` is blind to the skew part
/// and vice versa.
///
/// The fully pre-multiplied `ℂ_micro A` is symmetric with range in Sym(3), so
/// its cross blocks vanish for every `𝔼_e`; it cannot witness the coupling.
pub fn mindlin_reduction_residual(ee: &Tensor4Full, cmicro: &StiffnessVoigt) -> Result<f64> {
    linalg::require_spd(ee.matrix(), "E_e")?;
    linalg::require_spd(cmicro.matrix(), "C_micro")?;
    let cm: Mat9 = *tensor4_from_voigt(cmicro).to_full().matrix();
    let e = ee.matrix();
    let s = linalg::spd_inverse(&(e + cm), "E_e + C_micro")?;
    let a = s * e;
    let (psym, pskew) = sym_skew_projectors();
    Ok(linalg::spectral_norm(&(pskew * a * psym)) + linalg::spectral_norm(&(psym * a * pskew)))
}
