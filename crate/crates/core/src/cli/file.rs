//! Material and state files (TOML).

use nalgebra::{Matrix3, Matrix6};
use serde::Deserialize;

use crate::anisotropy::{build_coupling, MaterialSpec, SymmetryClass};
use crate::coupling::Coupling3;
use crate::material::{unit_curvature, InertiaSpec, RelaxedMaterial};
use crate::tensor::{Mat3, NotationConvention, StiffnessVoigt};
use crate::Error;

/// Load failures split by exit code: syntax/schema problems versus invalid values.
#[derive(Debug, Clone, PartialEq)]
pub enum LoadError {
    Parse(String),
    Domain(String),
}

impl std::fmt::Display for LoadError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            LoadError::Parse(s) | LoadError::Domain(s) => f.write_str(s),
        }
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTensor {
    class: Option<String>,
    lambda: Option<f64>,
    mu: Option<f64>,
    kappa: Option<f64>,
    mu_star: Option<f64>,
    c11: Option<f64>,
    c22: Option<f64>,
    c33: Option<f64>,
    c12: Option<f64>,
    c13: Option<f64>,
    c23: Option<f64>,
    c44: Option<f64>,
    c55: Option<f64>,
    c66: Option<f64>,
    matrix: Option<Vec<Vec<f64>>>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCoupling {
    class: Option<String>,
    mu_c: Option<f64>,
    params: Option<Vec<f64>>,
    matrix: Option<Vec<Vec<f64>>>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCurvature {
    le: Option<RawTensor>,
    lc: Option<RawCoupling>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFile {
    convention: Option<String>,
    mu: Option<f64>,
    #[serde(rename = "Lc")]
    lc: Option<f64>,
    rho: Option<f64>,
    #[serde(rename = "Lc_hat")]
    lc_hat: Option<f64>,
    eta1: Option<f64>,
    eta2: Option<f64>,
    eta3: Option<f64>,
    micro: Option<RawTensor>,
    e: Option<RawTensor>,
    #[serde(rename = "macro")]
    macro_: Option<RawTensor>,
    coupling: Option<RawCoupling>,
    curvature: Option<RawCurvature>,
}

/// A parsed material file. Tensors absent from the file are `None`.
#[derive(Debug, Clone, PartialEq)]
pub struct MaterialFile {
    pub convention: NotationConvention,
    pub micro: Option<StiffnessVoigt>,
    pub e: Option<StiffnessVoigt>,
    pub macro_: Option<StiffnessVoigt>,
    pub coupling: Option<Coupling3>,
    pub le: Option<StiffnessVoigt>,
    pub lc: Option<Coupling3>,
    pub mu: f64,
    pub lc_len: f64,
    pub inertia: InertiaSpec,
    pub warnings: Vec<String>,
}

fn parse_err(what: &str, msg: impl std::fmt::Display) -> LoadError {
    LoadError::Parse(format!("{what}: {msg}"))
}

fn domain_err(what: &str, e: Error) -> LoadError {
    match e {
        Error::Asymmetric { row, col, diff } => LoadError::Domain(format!(
            "{what}: matrix is not symmetric at entry ({},{}) vs ({},{}), difference {diff:e}",
            row + 1,
            col + 1,
            col + 1,
            row + 1
        )),
        other => LoadError::Domain(format!("{what}: {other}")),
    }
}

fn square<const N: usize>(what: &str, rows: &[Vec<f64>]) -> Result<nalgebra::SMatrix<f64, N, N>, LoadError> {
    if rows.len() != N || rows.iter().any(|r| r.len() != N) {
        return Err(parse_err(what, format!("matrix must have {N} rows of {N} numbers")));
    }
    if rows.iter().flatten().any(|x| !x.is_finite()) {
        return Err(parse_err(what, "matrix entries must be finite"));
    }
    Ok(nalgebra::SMatrix::from_fn(|i, j| rows[i][j]))
}

fn need(what: &str, name: &str, v: Option<f64>) -> Result<f64, LoadError> {
    v.ok_or_else(|| parse_err(what, format!("missing parameter `{name}`")))
}

fn tensor_spec(what: &str, t: &RawTensor) -> Result<MaterialSpec, LoadError> {
    let class = t.class.as_deref().ok_or_else(|| parse_err(what, "needs `class` or `matrix`"))?;
    let class = SymmetryClass::parse(class).ok_or_else(|| parse_err(what, format!("unknown class `{class}`")))?;
    match class {
        SymmetryClass::Isotropic => {
            let mu = need(what, "mu", t.mu)?;
            match (t.lambda, t.kappa) {
                (Some(lambda), None) => Ok(MaterialSpec::Isotropic { lambda, mu }),
                (None, Some(kappa)) => Ok(MaterialSpec::IsotropicBulk { kappa, mu }),
                (Some(_), Some(_)) => Err(parse_err(what, "give either `lambda` or `kappa`, not both")),
                (None, None) => Err(parse_err(what, "missing `lambda` or `kappa`")),
            }
        }
        SymmetryClass::Cubic => Ok(MaterialSpec::Cubic {
            kappa: need(what, "kappa", t.kappa)?,
            mu: need(what, "mu", t.mu)?,
            mu_star: need(what, "mu_star", t.mu_star)?,
        }),
        SymmetryClass::Orthotropic => {
            let names = ["c11", "c22", "c33", "c12", "c13", "c23", "c44", "c55", "c66"];
            let vals = [t.c11, t.c22, t.c33, t.c12, t.c13, t.c23, t.c44, t.c55, t.c66];
            let mut p = [0.0; 9];
            for i in 0..9 {
                p[i] = need(what, names[i], vals[i])?;
            }
            Ok(MaterialSpec::Orthotropic(p))
        }
        other => {
            Err(parse_err(what, format!("class `{}` has no stiffness template; give a raw `matrix`", other.name())))
        }
    }
}

fn has_params(t: &RawTensor) -> bool {
    t.class.is_some()
        || [t.lambda, t.mu, t.kappa, t.mu_star, t.c11, t.c22, t.c33, t.c12, t.c13, t.c23, t.c44, t.c55, t.c66]
            .iter()
            .any(Option::is_some)
}

fn load_tensor(
    what: &str,
    t: &RawTensor,
    conv: NotationConvention,
    tol: f64,
    warnings: &mut Vec<String>,
) -> Result<StiffnessVoigt, LoadError> {
    if let Some(rows) = &t.matrix {
        if has_params(t) {
            warnings.push(format!("{what}: both class parameters and a raw matrix given; using the matrix"));
        }
        let m: Matrix6<f64> = square(what, rows)?;
        return StiffnessVoigt::try_from_full(&m, conv, tol).map_err(|e| domain_err(what, e));
    }
    let spec = tensor_spec(what, t)?;
    if spec_values(&spec).iter().any(|x| !x.is_finite()) {
        return Err(parse_err(what, "parameters must be finite"));
    }
    Ok(spec.build(conv))
}

fn spec_values(s: &MaterialSpec) -> Vec<f64> {
    match *s {
        MaterialSpec::Isotropic { lambda, mu } => vec![lambda, mu],
        MaterialSpec::IsotropicBulk { kappa, mu } => vec![kappa, mu],
        MaterialSpec::Cubic { kappa, mu, mu_star } => vec![kappa, mu, mu_star],
        MaterialSpec::Orthotropic(p) => p.to_vec(),
    }
}

fn load_coupling(what: &str, c: &RawCoupling, tol: f64, warnings: &mut Vec<String>) -> Result<Coupling3, LoadError> {
    if let Some(rows) = &c.matrix {
        if c.class.is_some() || c.mu_c.is_some() || c.params.is_some() {
            warnings.push(format!("{what}: both class parameters and a raw matrix given; using the matrix"));
        }
        let m: Matrix3<f64> = square(what, rows)?;
        return Coupling3::try_from_full(&m, tol).map_err(|e| domain_err(what, e));
    }
    let class = c.class.as_deref().ok_or_else(|| parse_err(what, "needs `class` or `matrix`"))?;
    let class = SymmetryClass::parse(class).ok_or_else(|| parse_err(what, format!("unknown class `{class}`")))?;
    let params = match (class, c.mu_c, &c.params) {
        (SymmetryClass::Isotropic | SymmetryClass::Cubic, Some(mu_c), None) => vec![mu_c],
        (_, None, Some(p)) => p.clone(),
        (_, Some(_), Some(_)) => return Err(parse_err(what, "give either `mu_c` or `params`, not both")),
        (SymmetryClass::Isotropic | SymmetryClass::Cubic, None, None) => return Err(parse_err(what, "missing `mu_c`")),
        _ => return Err(parse_err(what, "missing `params`")),
    };
    if params.iter().any(|x| !x.is_finite()) {
        return Err(parse_err(what, "parameters must be finite"));
    }
    build_coupling(class, &params).map_err(|e| parse_err(what, e))
}

impl MaterialFile {
    pub fn parse(text: &str, tol: f64) -> Result<Self, LoadError> {
        let raw: RawFile =
            toml::from_str(text).map_err(|e| LoadError::Parse(format!("material file: {}", e.message())))?;
        let convention = match raw.convention.as_deref() {
            None => NotationConvention::Voigt,
            Some(s) => NotationConvention::parse(s)
                .ok_or_else(|| parse_err("convention", format!("unknown convention `{s}`")))?,
        };
        let mut warnings = Vec::new();
        let mut tensor = |what: &str, t: &Option<RawTensor>| -> Result<Option<StiffnessVoigt>, LoadError> {
            t.as_ref().map(|t| load_tensor(what, t, convention, tol, &mut warnings)).transpose()
        };
        let micro = tensor("micro", &raw.micro)?;
        let e = tensor("e", &raw.e)?;
        let macro_ = tensor("macro", &raw.macro_)?;
        let curvature = raw.curvature.unwrap_or_default();
        let le = tensor("curvature.le", &curvature.le)?;
        let coupling = raw.coupling.as_ref().map(|c| load_coupling("coupling", c, tol, &mut warnings)).transpose()?;
        let lc = curvature.lc.as_ref().map(|c| load_coupling("curvature.lc", c, tol, &mut warnings)).transpose()?;
        let d = InertiaSpec::default();
        let inertia = InertiaSpec {
            rho: raw.rho.unwrap_or(d.rho),
            lc_hat: raw.lc_hat.unwrap_or(d.lc_hat),
            eta1: raw.eta1.unwrap_or(d.eta1),
            eta2: raw.eta2.unwrap_or(d.eta2),
            eta3: raw.eta3.unwrap_or(d.eta3),
        };
        Ok(MaterialFile {
            convention,
            micro,
            e,
            macro_,
            coupling,
            le,
            lc,
            mu: raw.mu.unwrap_or(1.0),
            lc_len: raw.lc.unwrap_or(0.0),
            inertia,
            warnings,
        })
    }

    /// Assembles a full material from micro and e (deriving e from macro if needed).
    pub fn relaxed_material(&self) -> Result<RelaxedMaterial, LoadError> {
        let micro = self.micro.ok_or_else(|| LoadError::Parse("material file has no [micro] table".into()))?;
        let ce = match (self.e, self.macro_) {
            (Some(e), _) => e,
            (None, Some(mac)) => crate::homogenize::e_from_micro_macro(&micro, &mac).map_err(|e| domain_err("e", e))?,
            (None, None) => return Err(LoadError::Parse("material file needs [e] or [macro]".into())),
        };
        let (le_default, lc_default) = unit_curvature(self.convention);
        Ok(RelaxedMaterial {
            ce,
            cmicro: micro,
            cc: self.coupling.unwrap_or_else(Coupling3::zero),
            le: self.le.unwrap_or(le_default),
            lc: self.lc.unwrap_or(lc_default),
            mu: self.mu,
            lc_len: self.lc_len,
            inertia: self.inertia,
        })
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawState {
    grad_u: Option<Vec<Vec<f64>>>,
    #[serde(rename = "P")]
    p: Option<Vec<Vec<f64>>>,
    #[serde(rename = "curl_P")]
    curl_p: Option<Vec<Vec<f64>>>,
    #[serde(rename = "P_dot")]
    p_dot: Option<Vec<Vec<f64>>>,
}

pub fn parse_state(text: &str) -> Result<crate::energy::KinematicState, LoadError> {
    let raw: RawState = toml::from_str(text).map_err(|e| LoadError::Parse(format!("state file: {}", e.message())))?;
    let get = |what: &str, m: &Option<Vec<Vec<f64>>>| -> Result<Mat3, LoadError> {
        m.as_ref().map(|rows| square::<3>(what, rows)).transpose().map(|m| m.unwrap_or_else(Mat3::zeros))
    };
    Ok(crate::energy::KinematicState {
        grad_u: get("grad_u", &raw.grad_u)?,
        p: get("P", &raw.p)?,
        curl_p: get("curl_P", &raw.curl_p)?,
        p_dot: get("P_dot", &raw.p_dot)?,
    })
}
