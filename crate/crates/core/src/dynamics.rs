//! Plane-wave dispersion of the isotropic relaxed model.
//!
//! With `u = û e^{i(k·x−ωt)}` and `P = i P̃ e^{i(k·x−ωt)}` every term of the
//! dynamic equations becomes real: the state is `x = (û, vec P̃)` and
//! `ω² M x = K(k) x` with real symmetric `K` and SPD `M`.

use nalgebra::{DMatrix, SMatrix, SVector};

use crate::anisotropy::{class_parameters, classify_stiffness, SymmetryClass, DEFAULT_CLASS_TOL};
use crate::coupling::Coupling3;
use crate::homogenize::macro_from_micro_e;
use crate::material::{InertiaSpec, RelaxedMaterial};
use crate::tensor::{
    axl, sym_skew_projectors, sym_to_vec, vec9, Mat3, NotationConvention, Skew3, StiffnessVoigt, Sym3, Vec3,
};
use crate::{Error, Result};

pub const DOF: usize = 12;
pub type Mat12 = SMatrix<f64, DOF, DOF>;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlaneWaveProblem {
    pub k: Vec3,
    pub mass_matrix: Mat12,
    pub stiffness_matrix: Mat12,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DispersionBranch {
    pub branch_index: usize,
    pub k_values: Vec<f64>,
    pub omega_values: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AcousticSpeeds {
    pub cp: f64,
    pub cs: f64,
    /// Slopes of the two shear branches separately.
    pub shear: (f64, f64),
}

fn require_isotropic(m: &RelaxedMaterial) -> Result<()> {
    let tol = DEFAULT_CLASS_TOL;
    for (what, cv) in [("C_e", &m.ce), ("C_micro", &m.cmicro), ("L_e", &m.le)] {
        if cv.matrix().iter().any(|x| *x != 0.0) && classify_stiffness(cv, tol) != SymmetryClass::Isotropic {
            return Err(Error::Anisotropic { what: what.into() });
        }
    }
    for (what, cc) in [("C_c", &m.cc), ("L_c", &m.lc)] {
        if cc.as_scalar(tol).is_none() {
            return Err(Error::Anisotropic { what: what.into() });
        }
    }
    Ok(())
}

fn split_state(x: &SVector<f64, DOF>) -> (Vec3, Mat3) {
    let u = Vec3::new(x[0], x[1], x[2]);
    let p = Mat3::from_fn(|i, j| x[3 + 3 * i + j]);
    (u, p)
}

/// `(D, C)`: the amplitude of `∇u − P` and of `Curl P`, both up to a common phase.
fn plane_wave_fields(x: &SVector<f64, DOF>, k: &Vec3) -> (Mat3, Mat3, Mat3) {
    let (u, p) = split_state(x);
    let d = u * k.transpose() - p;
    let mut c = Mat3::zeros();
    for i in 0..3 {
        let row = Vec3::new(p[(i, 0)], p[(i, 1)], p[(i, 2)]);
        let r = -k.cross(&row);
        for j in 0..3 {
            c[(i, j)] = r[j];
        }
    }
    (d, p, c)
}

fn gram_sym(rows: &[SVector<f64, DOF>; 6], c: &StiffnessVoigt) -> Mat12 {
    let b = SMatrix::<f64, 6, DOF>::from_fn(|r, a| rows[r][a]);
    b.transpose() * c.matrix() * b
}

fn gram_axl(rows: &[SVector<f64, DOF>; 3], c: &Coupling3) -> Mat12 {
    let b = SMatrix::<f64, 3, DOF>::from_fn(|r, a| rows[r][a]);
    b.transpose() * c.matrix() * b
}

fn stiffness(m: &RelaxedMaterial, k: &Vec3) -> Mat12 {
    let conv = NotationConvention::Mandel;
    let ce = m.ce.to_convention(conv);
    let cm = m.cmicro.to_convention(conv);
    let le = m.le.to_convention(conv);

    // rows of the linear maps x ↦ feature, built column by column
    let mut sd = [SVector::<f64, DOF>::zeros(); 6];
    let mut sp = sd;
    let mut sc = sd;
    let mut ad = [SVector::<f64, DOF>::zeros(); 3];
    let mut ac = ad;
    for a in 0..DOF {
        let mut x = SVector::<f64, DOF>::zeros();
        x[a] = 1.0;
        let (d, p, c) = plane_wave_fields(&x, k);
        let (vd, vp, vc) =
            (sym_to_vec(&Sym3::new(&d), conv), sym_to_vec(&Sym3::new(&p), conv), sym_to_vec(&Sym3::new(&c), conv));
        let (wd, wc) = (axl(&Skew3::new(&d)), axl(&Skew3::new(&c)));
        for r in 0..6 {
            sd[r][a] = vd[r];
            sp[r][a] = vp[r];
            sc[r][a] = vc[r];
        }
        for r in 0..3 {
            ad[r][a] = wd[r];
            ac[r][a] = wc[r];
        }
    }
    let curv = m.mu * m.lc_len * m.lc_len;
    let k_mat = gram_sym(&sd, &ce)
        + gram_axl(&ad, &m.cc)
        + gram_sym(&sp, &cm)
        + (gram_sym(&sc, &le) + gram_axl(&ac, &m.lc)) * curv;
    (k_mat + k_mat.transpose()) * 0.5
}

fn mass(inertia: &InertiaSpec) -> Mat12 {
    let (psym, pskew) = sym_skew_projectors();
    let v = vec9(&Mat3::identity());
    let sph = v * v.transpose();
    let q = (psym - sph / 3.0) * inertia.eta1 + pskew * inertia.eta2 + sph * inertia.eta3;
    let mut m = Mat12::zeros();
    for i in 0..3 {
        m[(i, i)] = inertia.rho;
    }
    let s = inertia.rho * inertia.lc_hat * inertia.lc_hat;
    m.fixed_view_mut::<9, 9>(3, 3).copy_from(&(q * s));
    m
}

/// Assembles `M` and `K(k)` for an isotropic material.
pub fn assemble_plane_wave(material: &RelaxedMaterial, inertia: &InertiaSpec, k: &Vec3) -> Result<PlaneWaveProblem> {
    material.validate()?;
    inertia.validate()?;
    require_isotropic(material)?;
    if inertia.lc_hat <= 0.0 {
        return Err(Error::InvalidInput("Lc_hat must be positive for a non-singular micro-inertia".into()));
    }
    Ok(PlaneWaveProblem { k: *k, mass_matrix: mass(inertia), stiffness_matrix: stiffness(material, k) })
}

impl PlaneWaveProblem {
    /// Eigenvalues `ω²` of the pencil `(K, M)`, ascending.
    pub fn omega_squared(&self) -> Result<[f64; DOF]> {
        let fail = || Error::EigenFailure { k: self.k.norm() };
        let m = DMatrix::from_column_slice(DOF, DOF, self.mass_matrix.as_slice());
        let k = DMatrix::from_column_slice(DOF, DOF, self.stiffness_matrix.as_slice());
        let l = m.cholesky().ok_or_else(fail)?.unpack();
        let y = l.solve_lower_triangular(&k).ok_or_else(fail)?;
        let a = l.solve_lower_triangular(&y.transpose()).ok_or_else(fail)?;
        let a = (&a + a.transpose()) * 0.5;
        let mut vals: Vec<f64> = a.symmetric_eigenvalues().iter().copied().collect();
        if vals.iter().any(|x| !x.is_finite()) {
            return Err(fail());
        }
        vals.sort_by(f64::total_cmp);
        let mut out = [0.0; DOF];
        out.copy_from_slice(&vals);
        Ok(out)
    }

    /// `ω = √max(ω², 0)`, ascending.
    pub fn frequencies(&self) -> Result<[f64; DOF]> {
        Ok(self.omega_squared()?.map(|w2| w2.max(0.0).sqrt()))
    }
}

fn sweep_point(material: &RelaxedMaterial, inertia: &InertiaSpec, dir: &Vec3, k: f64) -> Result<[f64; DOF]> {
    assemble_plane_wave(material, inertia, &(dir * k))?.frequencies()
}

/// `n_points` uniform wavenumbers on `[0, k_max]`; branches threaded by sorted order.
pub fn dispersion_sweep(
    material: &RelaxedMaterial,
    inertia: &InertiaSpec,
    direction: &Vec3,
    k_max: f64,
    n_points: usize,
) -> Result<Vec<DispersionBranch>> {
    if n_points < 2 || !(k_max > 0.0) || !k_max.is_finite() {
        return Err(Error::InvalidInput("need n_points >= 2 and k_max > 0".into()));
    }
    let norm = direction.norm();
    if !(norm > 0.0) || !norm.is_finite() {
        return Err(Error::InvalidInput("direction must be a non-zero vector".into()));
    }
    let dir = direction / norm;
    let ks: Vec<f64> = (0..n_points).map(|i| k_max * i as f64 / (n_points - 1) as f64).collect();

    #[cfg(feature = "parallel")]
    let rows: Vec<Result<[f64; DOF]>> = {
        use rayon::prelude::*;
        ks.par_iter().map(|&k| sweep_point(material, inertia, &dir, k)).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let rows: Vec<Result<[f64; DOF]>> = ks.iter().map(|&k| sweep_point(material, inertia, &dir, k)).collect();

    let rows = rows.into_iter().collect::<Result<Vec<_>>>()?;
    Ok((0..DOF)
        .map(|b| DispersionBranch {
            branch_index: b,
            k_values: ks.clone(),
            omega_values: rows.iter().map(|r| r[b]).collect(),
        })
        .collect())
}

fn slope_through_origin(k: &[f64], w: &[f64], window: f64) -> (f64, usize) {
    let (mut kw, mut kk, mut n) = (0.0, 0.0, 0);
    for (&ki, &wi) in k.iter().zip(w) {
        if ki > 0.0 && ki <= window {
            kw += ki * wi;
            kk += ki * ki;
            n += 1;
        }
    }
    (if kk > 0.0 { kw / kk } else { f64::NAN }, n)
}

/// Least-squares slopes of the three lowest branches over `(0, k_window]`.
pub fn acoustic_slopes(branches: &[DispersionBranch], k_window: f64) -> Result<AcousticSpeeds> {
    if branches.len() < 3 {
        return Err(Error::InvalidInput("need at least three branches".into()));
    }
    let fit = |b: &DispersionBranch| slope_through_origin(&b.k_values, &b.omega_values, k_window);
    let (s1, n) = fit(&branches[0]);
    if n < 2 {
        return Err(Error::InvalidInput(format!("only {n} samples inside the k window; need at least 2")));
    }
    let (s2, _) = fit(&branches[1]);
    let (sp, _) = fit(&branches[2]);
    Ok(AcousticSpeeds { cp: sp, cs: 0.5 * (s1 + s2), shear: (s1, s2) })
}

/// `(cp, cs)` of the macroscopic isotropic tensor obtained by homogenization.
pub fn macro_wave_speeds(material: &RelaxedMaterial, rho: f64) -> Result<(f64, f64)> {
    require_isotropic(material)?;
    let h = macro_from_micro_e(&material.cmicro, &material.ce)?;
    let p = class_parameters(&h.macro_, SymmetryClass::Isotropic);
    let (lambda, mu) = (p[0].1, p[1].1);
    Ok((((lambda + 2.0 * mu) / rho).sqrt(), (mu / rho).sqrt()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg;

    fn material(mu_c: f64) -> RelaxedMaterial {
        RelaxedMaterial::isotropic(0.5, 1.0, 0.3, 2.0, mu_c, 1.0, 0.8, NotationConvention::Voigt)
    }

    fn zero_count(w2: &[f64; DOF]) -> usize {
        let scale = w2[DOF - 1];
        w2.iter().filter(|x| x.abs() <= 1e-10 * scale).count()
    }

    #[test]
    fn k_zero_modes() {
        let i = InertiaSpec::default();
        let p = assemble_plane_wave(&material(1.0), &i, &Vec3::zeros()).unwrap();
        assert_eq!(zero_count(&p.omega_squared().unwrap()), 3);
        let p = assemble_plane_wave(&material(0.0), &i, &Vec3::zeros()).unwrap();
        assert_eq!(zero_count(&p.omega_squared().unwrap()), 6);
    }

    #[test]
    fn mass_is_spd_and_matches_kinetic_energy() {
        let i = InertiaSpec { rho: 1.5, lc_hat: 0.7, eta1: 2.0, eta2: 0.5, eta3: 3.0 };
        let m = mass(&i);
        assert!(linalg::check_definite(&m, linalg::Definiteness::Strict).0);
        let pd = Mat3::new(0.3, 0.1, -0.2, 0.5, 0.4, 0.0, 0.2, -0.6, 0.1);
        let mut x = SVector::<f64, DOF>::zeros();
        x.fixed_rows_mut::<9>(3).copy_from(&vec9(&pd));
        let t = 0.5 * x.dot(&(m * x));
        assert!((t - crate::energy::kinetic_density(&i, &pd)).abs() < 1e-14);
    }

    #[test]
    fn stiffness_matches_energy() {
        let m = material(0.7);
        let k = Vec3::new(0.3, -0.4, 1.1);
        let kk = stiffness(&m, &k);
        let x = SVector::<f64, DOF>::from_fn(|a, _| ((a * 7 + 3) % 11) as f64 / 11.0 - 0.4);
        let (d, p, c) = plane_wave_fields(&x, &k);
        let s = crate::energy::KinematicState::new(d + p, p, c);
        let w = crate::energy::relaxed_energy_parts(&m, &s).total();
        assert!((0.5 * x.dot(&(kk * x)) - w).abs() < 1e-13);
    }

    #[test]
    fn anisotropic_rejected() {
        let mut m = material(1.0);
        m.cc = Coupling3::new(&Mat3::from_diagonal(&Vec3::new(1.0, 2.0, 3.0)));
        assert!(matches!(assemble_plane_wave(&m, &InertiaSpec::default(), &Vec3::x()), Err(Error::Anisotropic { .. })));
    }

    #[test]
    fn branch_count_and_window_errors() {
        let b = dispersion_sweep(&material(1.0), &InertiaSpec::default(), &Vec3::x(), 1.0, 5).unwrap();
        assert_eq!(b.len(), DOF);
        assert!(b.iter().all(|br| br.omega_values.len() == 5));
        assert!(acoustic_slopes(&b, 0.1).is_err());
    }
}
