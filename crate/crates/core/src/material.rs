use crate::anisotropy::build_isotropic;
use crate::coupling::Coupling3;
use crate::linalg::{self, Definiteness};
use crate::tensor::{NotationConvention, StiffnessVoigt};
use crate::{Error, Result};

/// Micro-inertia parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InertiaSpec {
    pub rho: f64,
    pub lc_hat: f64,
    pub eta1: f64,
    pub eta2: f64,
    pub eta3: f64,
}

impl Default for InertiaSpec {
    fn default() -> Self {
        InertiaSpec { rho: 1.0, lc_hat: 1.0, eta1: 1.0, eta2: 1.0, eta3: 1.0 }
    }
}

impl InertiaSpec {
    pub fn validate(&self) -> Result<()> {
        let all_finite = [self.rho, self.lc_hat, self.eta1, self.eta2, self.eta3].iter().all(|x| x.is_finite());
        if !all_finite {
            return Err(Error::InvalidInput("inertia parameters must be finite".into()));
        }
        if self.rho <= 0.0 {
            return Err(Error::InvalidInput(format!("rho must be positive, got {}", self.rho)));
        }
        if self.lc_hat < 0.0 {
            return Err(Error::InvalidInput(format!("Lc_hat must be non-negative, got {}", self.lc_hat)));
        }
        if self.eta1 <= 0.0 || self.eta2 <= 0.0 || self.eta3 <= 0.0 {
            return Err(Error::InvalidInput("eta1, eta2, eta3 must be positive".into()));
        }
        Ok(())
    }
}

/// Constitutive data of the relaxed model. `le` acts on `sym Curl P` like a
/// stiffness; `lc` acts on `axl(skew Curl P)` like a coupling.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RelaxedMaterial {
    pub ce: StiffnessVoigt,
    pub cmicro: StiffnessVoigt,
    pub cc: Coupling3,
    pub le: StiffnessVoigt,
    pub lc: Coupling3,
    pub mu: f64,
    pub lc_len: f64,
    pub inertia: InertiaSpec,
}

/// Curvature tensors for which `⟨𝕃_e sym X⟩ + ⟨𝕃_c skew X⟩ = ‖X‖²`.
pub fn unit_curvature(conv: NotationConvention) -> (StiffnessVoigt, Coupling3) {
    let le = StiffnessVoigt::new(&nalgebra::Matrix6::identity(), NotationConvention::Mandel).to_convention(conv);
    (le, Coupling3::scalar(2.0))
}

impl RelaxedMaterial {
    /// Isotropic material with the unit curvature `‖Curl P‖²`.
    #[allow(clippy::too_many_arguments)]
    pub fn isotropic(
        lambda_e: f64,
        mu_e: f64,
        lambda_m: f64,
        mu_m: f64,
        mu_c: f64,
        mu: f64,
        lc_len: f64,
        conv: NotationConvention,
    ) -> Self {
        let (le, lc) = unit_curvature(conv);
        RelaxedMaterial {
            ce: build_isotropic(lambda_e, mu_e, conv),
            cmicro: build_isotropic(lambda_m, mu_m, conv),
            cc: Coupling3::isotropic(mu_c),
            le,
            lc,
            mu,
            lc_len,
            inertia: InertiaSpec::default(),
        }
    }

    pub fn with_inertia(mut self, inertia: InertiaSpec) -> Self {
        self.inertia = inertia;
        self
    }

    pub fn convention(&self) -> NotationConvention {
        self.ce.convention()
    }

    /// Strict definiteness of `ℂ_e` and `ℂ_micro`, semi-definiteness of the rest.
    pub fn validate(&self) -> Result<()> {
        let conv = self.ce.convention();
        if self.cmicro.convention() != conv || self.le.convention() != conv {
            return Err(Error::ConventionMismatch);
        }
        linalg::require_spd(self.ce.matrix(), "C_e")?;
        linalg::require_spd(self.cmicro.matrix(), "C_micro")?;
        for (what, (ok, min_eig)) in [
            ("C_c", linalg::check_definite(self.cc.matrix(), Definiteness::Semi)),
            ("L_e", linalg::check_definite(self.le.matrix(), Definiteness::Semi)),
            ("L_c", linalg::check_definite(self.lc.matrix(), Definiteness::Semi)),
        ] {
            if !ok {
                return Err(Error::NotSemiDefinite { what: what.into(), min_eig });
            }
        }
        if !(self.mu.is_finite() && self.mu >= 0.0 && self.lc_len.is_finite() && self.lc_len >= 0.0) {
            return Err(Error::InvalidInput("mu and Lc must be finite and non-negative".into()));
        }
        Ok(())
    }
}
