use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{what} is not positive definite (min eigenvalue {min_eig:e})")]
    NotPositiveDefinite { what: String, min_eig: f64 },

    #[error("{what} is not positive semi-definite (min eigenvalue {min_eig:e})")]
    NotSemiDefinite { what: String, min_eig: f64 },

    #[error("{what} is singular (min eigenvalue {min_eig:e})")]
    Singular { what: String, min_eig: f64 },

    #[error(
        "C_micro - C_macro is not positive definite (min eigenvalue {min_eig:e}); \
         smaller is stiffer: the macroscopic stiffness must stay strictly below the microscopic one"
    )]
    StiffnessExceedsMicro { min_eig: f64 },

    #[error("C_micro equals C_macro (min eigenvalue of difference {min_eig:e}); this is the limit mu_e -> infinity")]
    MicroEqualsMacro { min_eig: f64 },

    #[error("matrix is not symmetric at entry ({row},{col}): difference {diff:e}")]
    Asymmetric { row: usize, col: usize, diff: f64 },

    #[error("fourth-order tensor lacks minor symmetry at ({i},{j},{k},{l})")]
    MinorSymmetry { i: usize, j: usize, k: usize, l: usize },

    #[error("{class} expects {expected} parameters, got {got}")]
    ParamCount { class: String, expected: usize, got: usize },

    #[error("convention mismatch between operands")]
    ConventionMismatch,

    #[error("{what} is not isotropic; only isotropic materials are supported here")]
    Anisotropic { what: String },

    #[error("eigensolver failed at k = {k:e}")]
    EigenFailure { k: f64 },

    #[error("invalid input: {0}")]
    InvalidInput(String),
}
