//! Pointwise energy densities, elastic stress and the linear-elastic upper bound.

use crate::material::{InertiaSpec, RelaxedMaterial};
use crate::tensor::{cartan_decompose, Mat3, Skew3, StiffnessVoigt, Sym3, Tensor4Full};
use crate::Result;

/// Pointwise kinematic values supplied by the caller.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KinematicState {
    pub grad_u: Mat3,
    pub p: Mat3,
    pub curl_p: Mat3,
    pub p_dot: Mat3,
}

impl KinematicState {
    pub fn zero() -> Self {
        KinematicState { grad_u: Mat3::zeros(), p: Mat3::zeros(), curl_p: Mat3::zeros(), p_dot: Mat3::zeros() }
    }

    pub fn new(grad_u: Mat3, p: Mat3, curl_p: Mat3) -> Self {
        KinematicState { grad_u, p, curl_p, p_dot: Mat3::zeros() }
    }
}

/// The four contributions of the relaxed energy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyParts {
    pub elastic: f64,
    pub micro_self: f64,
    pub rotational: f64,
    pub curvature: f64,
}

impl EnergyParts {
    pub fn total(&self) -> f64 {
        self.elastic + self.micro_self + self.rotational + self.curvature
    }
}

/// Contributions of `W` without validating the material.
pub fn relaxed_energy_parts(m: &RelaxedMaterial, s: &KinematicState) -> EnergyParts {
    let e = s.grad_u - s.p;
    EnergyParts {
        elastic: 0.5 * m.ce.quad(&Sym3::new(&e)),
        micro_self: 0.5 * m.cmicro.quad(&Sym3::new(&s.p)),
        rotational: 0.5 * m.cc.quad(&Skew3::new(&e)),
        curvature: 0.5
            * m.mu
            * m.lc_len
            * m.lc_len
            * (m.le.quad(&Sym3::new(&s.curl_p)) + m.lc.quad(&Skew3::new(&s.curl_p))),
    }
}

pub fn relaxed_energy(m: &RelaxedMaterial, s: &KinematicState) -> Result<f64> {
    m.validate()?;
    Ok(relaxed_energy_parts(m, s).total())
}

/// `σ = ℂ_e sym(∇u − P) + ℂ_c skew(∇u − P)`.
pub fn relaxed_stress(m: &RelaxedMaterial, grad_u: &Mat3, p: &Mat3) -> Mat3 {
    let e = grad_u - p;
    m.ce.apply(&Sym3::new(&e)).matrix() + m.cc.apply(&Skew3::new(&e)).matrix()
}

/// `½⟨𝔼_e(∇u−P), ∇u−P⟩ + ½⟨ℂ_micro sym P, sym P⟩ + (μL_c²/2)‖∇P‖²`.
pub fn mindlin_energy(
    ee: &Tensor4Full,
    cmicro: &StiffnessVoigt,
    grad_p_norm_sq: f64,
    mu: f64,
    lc: f64,
    grad_u: &Mat3,
    p: &Mat3,
) -> f64 {
    let e = grad_u - p;
    0.5 * ee.quad(&e) + 0.5 * cmicro.quad(&Sym3::new(p)) + 0.5 * mu * lc * lc * grad_p_norm_sq
}

/// `(μL_c²/2)(α₁‖devsym X‖² + α₂‖skew X‖² + α₃ tr(X)²)`.
pub fn isotropic_curvature(alpha1: f64, alpha2: f64, alpha3: f64, curl_p: &Mat3, mu: f64, lc: f64) -> f64 {
    let (d, w, tr) = cartan_decompose(curl_p);
    0.5 * mu * lc * lc * (alpha1 * d.norm_squared() + alpha2 * w.norm_squared() + alpha3 * tr * tr)
}

/// `(ρL̂_c²/2)(η₁‖devsym Ṗ‖² + η₂‖skew Ṗ‖² + η₃ tr(Ṗ)²)`.
pub fn kinetic_density(inertia: &InertiaSpec, p_dot: &Mat3) -> f64 {
    let (d, w, tr) = cartan_decompose(p_dot);
    0.5 * inertia.rho
        * inertia.lc_hat
        * inertia.lc_hat
        * (inertia.eta1 * d.norm_squared() + inertia.eta2 * w.norm_squared() + inertia.eta3 * tr * tr)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UpperBound {
    pub w_admissible: f64,
    pub w_linear: f64,
    pub ok: bool,
}

/// Compares `W(P=∇u, Curl P=0)` with `½⟨ℂ_micro sym∇u, sym∇u⟩`.
pub fn upper_bound_check(m: &RelaxedMaterial, grad_u: &Mat3) -> Result<UpperBound> {
    let w_admissible = relaxed_energy(m, &KinematicState::new(*grad_u, *grad_u, Mat3::zeros()))?;
    let w_linear = 0.5 * m.cmicro.quad(&Sym3::new(grad_u));
    let ok = (w_admissible - w_linear).abs() <= 1e-13 * (1.0 + w_linear);
    Ok(UpperBound { w_admissible, w_linear, ok })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homogenize::relaxed_block_tensor;
    use crate::tensor::NotationConvention::{Mandel, Voigt};

    fn sample() -> (RelaxedMaterial, KinematicState) {
        let m = RelaxedMaterial::isotropic(0.3, 1.2, 0.8, 0.9, 0.6, 1.1, 0.7, Voigt);
        let s = KinematicState::new(
            Mat3::new(0.1, -0.3, 0.2, 0.5, 0.05, -0.1, 0.2, 0.4, -0.2),
            Mat3::new(0.02, 0.1, -0.3, 0.2, -0.1, 0.05, 0.3, -0.2, 0.1),
            Mat3::new(0.3, 0.1, 0.0, -0.2, 0.4, 0.2, 0.1, 0.0, -0.5),
        );
        (m, s)
    }

    #[test]
    fn zero_state_zero_energy() {
        let (m, _) = sample();
        assert_eq!(relaxed_energy(&m, &KinematicState::zero()).unwrap(), 0.0);
    }

    #[test]
    fn isotropic_term_by_term() {
        let (lambda_e, mu_e, lambda_m, mu_m, mu_c, mu, lc) = (0.3, 1.2, 0.8, 0.9, 0.6, 1.1, 0.7);
        let (_, s) = sample();
        for conv in [Voigt, Mandel] {
            let m = RelaxedMaterial::isotropic(lambda_e, mu_e, lambda_m, mu_m, mu_c, mu, lc, conv);
            let e = s.grad_u - s.p;
            let se = Sym3::new(&e);
            let sp = Sym3::new(&s.p);
            let expect = mu_e * se.norm_squared()
                + 0.5 * lambda_e * e.trace().powi(2)
                + mu_m * sp.norm_squared()
                + 0.5 * lambda_m * s.p.trace().powi(2)
                + mu_c / 8.0 * Skew3::new(&e).norm_squared()
                + 0.5 * mu * lc * lc * s.curl_p.norm_squared();
            assert!((relaxed_energy(&m, &s).unwrap() - expect).abs() < 1e-13);
        }
    }

    #[test]
    fn boltzmann_symmetry_without_coupling() {
        let (mut m, s) = sample();
        m.cc = crate::Coupling3::zero();
        let sig = relaxed_stress(&m, &s.grad_u, &s.p);
        assert!((sig - sig.transpose()).abs().max() == 0.0);
        assert_eq!(relaxed_stress(&m, &s.grad_u, &s.grad_u), Mat3::zeros());
    }

    #[test]
    fn stress_decomposition() {
        let (m, s) = sample();
        let sig = relaxed_stress(&m, &s.grad_u, &s.p);
        let e = s.grad_u - s.p;
        let sym_part = m.ce.apply(&Sym3::new(&e));
        let skew_part = m.cc.apply(&Skew3::new(&e));
        assert!((Sym3::new(&sig).matrix() - sym_part.matrix()).abs().max() < 1e-14);
        assert!((Skew3::new(&sig).matrix() - skew_part.matrix()).abs().max() < 1e-14);
    }

    #[test]
    fn mindlin_with_block_tensor() {
        let (m, s) = sample();
        let ee = relaxed_block_tensor(&m.ce, &m.cc);
        let wm = mindlin_energy(&ee, &m.cmicro, 0.0, m.mu, m.lc_len, &s.grad_u, &s.p);
        let parts = relaxed_energy_parts(&m, &s);
        assert!((wm - (parts.total() - parts.curvature)).abs() < 1e-14);
        assert_eq!(mindlin_energy(&ee, &m.cmicro, 0.0, 1.0, 1.0, &Mat3::zeros(), &Mat3::zeros()), 0.0);
        let g = s.grad_u;
        let only_micro = mindlin_energy(&ee, &m.cmicro, 0.0, 1.0, 1.0, &g, &g);
        assert!((only_micro - 0.5 * m.cmicro.quad(&Sym3::new(&g))).abs() < 1e-15);
    }

    #[test]
    fn curvature_forms() {
        let (_, s) = sample();
        let full = isotropic_curvature(1.0, 1.0, 1.0 / 3.0, &s.curl_p, 1.3, 0.4);
        assert!((full - 0.5 * 1.3 * 0.16 * s.curl_p.norm_squared()).abs() < 1e-15);
        assert_eq!(isotropic_curvature(1.0, 1.0, 0.0, &(Mat3::identity() * 2.0), 1.0, 1.0), 0.0);
        let w = Skew3::new(&s.curl_p);
        assert_eq!(isotropic_curvature(1.0, 0.0, 1.0, w.matrix(), 1.0, 1.0), 0.0);
    }

    #[test]
    fn kinetic_examples() {
        let i = InertiaSpec { rho: 2.0, lc_hat: 0.5, eta1: 3.0, eta2: 5.0, eta3: 1.0 };
        assert_eq!(kinetic_density(&i, &Mat3::zeros()), 0.0);
        let k = kinetic_density(&i, &Mat3::identity());
        assert!((k - 0.5 * 2.0 * 0.25 * 9.0).abs() < 1e-15);
        let w = Mat3::new(0.0, 1.0, 0.0, -1.0, 0.0, 0.0, 0.0, 0.0, 0.0);
        assert!((kinetic_density(&i, &w) - 0.5 * 2.0 * 0.25 * 5.0 * 2.0).abs() < 1e-15);
    }

    #[test]
    fn upper_bound_equality() {
        let (m, s) = sample();
        assert!(upper_bound_check(&m, &s.grad_u).unwrap().ok);
        let z = upper_bound_check(&m, &Mat3::zeros()).unwrap();
        assert_eq!((z.w_admissible, z.w_linear, z.ok), (0.0, 0.0, true));
    }
}
