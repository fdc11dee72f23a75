//! Anisotropic relaxed micromorphic elasticity.
//!
//! Fixed-size tensor algebra in Voigt/Mandel form, micro/macro homogenization
//! of stiffness matrices, isotropy projections of the rotational coupling,
//! pointwise energies, plane-wave dispersion, and a 1D two-field demonstrator.
//!
//! ```
//! use micromorph::{anisotropy::build_isotropic, homogenize::macro_from_micro_e, NotationConvention};
//!
//! let conv = NotationConvention::Voigt;
//! let ce = build_isotropic(0.0, 1.0, conv);
//! let cm = build_isotropic(0.0, 1.0, conv);
//! let h = macro_from_micro_e(&cm, &ce).unwrap();
//! assert!((h.macro_.matrix()[(3, 3)] - 0.5).abs() < 1e-12);
//! ```

pub mod anisotropy;
pub mod cli;
pub mod coupling;
pub mod dynamics;
pub mod energy;
mod error;
pub mod homogenize;
pub mod linalg;
pub mod material;
pub mod oned;
pub mod tensor;

pub use coupling::Coupling3;
pub use error::{Error, Result};
pub use material::{InertiaSpec, RelaxedMaterial};
pub use tensor::{Mat3, NotationConvention, Skew3, StiffnessVoigt, Sym3, Tensor4Full, Tensor4Sym, Vec3, Vec6};
