//! wasm-bindgen entry points for the browser demo in `www/`.
//!
//! Every export returns a flat `Vec<f64>` (a `Float64Array` on the JS side).

use micromorph::anisotropy::{build_isotropic, class_parameters, lambda_from_kappa, SymmetryClass};
use micromorph::dynamics::{dispersion_sweep, DOF};
use micromorph::homogenize::macro_from_micro_e;
use micromorph::linalg::{self, Definiteness};
use micromorph::oned::{lc_sweep as sweep, MicroBoundary, OneDProblem};
use micromorph::{InertiaSpec, NotationConvention, RelaxedMaterial, Vec3};
use wasm_bindgen::prelude::*;

const CONV: NotationConvention = NotationConvention::Voigt;

/// `[κ, μ, λ, spd, smaller_is_stiffer]` of the macro tensor for isotropic inputs.
pub fn homogenize_iso_impl(kappa_e: f64, mu_e: f64, kappa_m: f64, mu_m: f64) -> Result<Vec<f64>, String> {
    let ce = build_isotropic(lambda_from_kappa(kappa_e, mu_e), mu_e, CONV);
    let cm = build_isotropic(lambda_from_kappa(kappa_m, mu_m), mu_m, CONV);
    let h = macro_from_micro_e(&cm, &ce).map_err(|e| e.to_string())?;
    let p = class_parameters(&h.macro_, SymmetryClass::Isotropic);
    let (lambda, mu, kappa) = (p[0].1, p[1].1, p[2].1);
    let stiffer = linalg::check_definite(&(cm.matrix() - h.macro_.matrix()), Definiteness::Strict).0;
    Ok(vec![kappa, mu, lambda, h.spd_ok as u8 as f64, stiffer as u8 as f64])
}

/// Rows of `[k, ω_1 … ω_12]`, `n` rows, flattened.
#[allow(clippy::too_many_arguments)]
pub fn dispersion_curves_impl(
    lambda_e: f64,
    mu_e: f64,
    lambda_m: f64,
    mu_m: f64,
    mu_c: f64,
    lc: f64,
    k_max: f64,
    n: usize,
) -> Result<Vec<f64>, String> {
    let m = RelaxedMaterial::isotropic(lambda_e, mu_e, lambda_m, mu_m, mu_c, 1.0, lc, CONV);
    let branches = dispersion_sweep(&m, &InertiaSpec::default(), &Vec3::new(1.0, 0.0, 0.0), k_max, n)
        .map_err(|e| e.to_string())?;
    let mut out = Vec::with_capacity(n * (DOF + 1));
    for i in 0..n {
        out.push(branches[0].k_values[i]);
        out.extend(branches.iter().map(|b| b.omega_values[i]));
    }
    Ok(out)
}

/// Pairs `[Lc, μeff]` for `n` lengths spaced evenly on `[0, lc_max]`, clamped micro ends.
pub fn lc_sweep_impl(mu_e: f64, mu_m: f64, lc_max: f64, n: usize, cells: usize) -> Result<Vec<f64>, String> {
    if n < 2 {
        return Err("need at least two lengths".into());
    }
    let lcs: Vec<f64> = (0..n).map(|i| lc_max * i as f64 / (n - 1) as f64).collect();
    let template = OneDProblem::new(mu_e, mu_m, 0.0, cells).with_boundary(MicroBoundary::Clamped);
    let rows = sweep(&template, &lcs).map_err(|e| e.to_string())?;
    Ok(rows.into_iter().flat_map(|(l, m)| [l, m]).collect())
}

#[wasm_bindgen]
pub fn homogenize_iso(kappa_e: f64, mu_e: f64, kappa_m: f64, mu_m: f64) -> Result<Vec<f64>, JsError> {
    homogenize_iso_impl(kappa_e, mu_e, kappa_m, mu_m).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
#[allow(clippy::too_many_arguments)]
pub fn dispersion_curves(
    lambda_e: f64,
    mu_e: f64,
    lambda_m: f64,
    mu_m: f64,
    mu_c: f64,
    lc: f64,
    k_max: f64,
    n: usize,
) -> Result<Vec<f64>, JsError> {
    dispersion_curves_impl(lambda_e, mu_e, lambda_m, mu_m, mu_c, lc, k_max, n).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn lc_sweep(mu_e: f64, mu_m: f64, lc_max: f64, n: usize, cells: usize) -> Result<Vec<f64>, JsError> {
    lc_sweep_impl(mu_e, mu_m, lc_max, n, cells).map_err(|e| JsError::new(&e))
}
