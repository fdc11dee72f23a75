//! Fixed-dimension tensor algebra: Cartan decomposition, axial vectors and
//! the Voigt/Mandel maps between Sym(3) and R^6.

use nalgebra::{Matrix3, Matrix6, SMatrix, SVector, Vector3, Vector6};

use crate::linalg::{self, SPD_REL_FLOOR};
use crate::{Error, Result};

pub type Mat3 = Matrix3<f64>;
pub type Vec3 = Vector3<f64>;
pub type Vec6 = Vector6<f64>;
pub type Mat9 = SMatrix<f64, 9, 9>;
pub type Vec9 = SVector<f64, 9>;

/// Index pairs in the order (11,22,33,23,13,12).
pub const VOIGT_PAIRS: [(usize, usize); 6] = [(0, 0), (1, 1), (2, 2), (1, 2), (0, 2), (0, 1)];

/// Symmetric 3×3 tensor. Symmetry is exact: the constructor symmetrizes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sym3(Mat3);

impl Sym3 {
    pub fn new(m: &Mat3) -> Self {
        Sym3((m + m.transpose()) * 0.5)
    }

    pub fn zero() -> Self {
        Sym3(Mat3::zeros())
    }

    pub fn identity() -> Self {
        Sym3(Mat3::identity())
    }

    pub fn matrix(&self) -> &Mat3 {
        &self.0
    }

    pub fn trace(&self) -> f64 {
        self.0.trace()
    }

    pub fn norm_squared(&self) -> f64 {
        self.0.norm_squared()
    }
}

/// Skew-symmetric 3×3 tensor with exactly zero diagonal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Skew3(Mat3);

impl Skew3 {
    pub fn new(m: &Mat3) -> Self {
        Skew3((m - m.transpose()) * 0.5)
    }

    pub fn zero() -> Self {
        Skew3(Mat3::zeros())
    }

    /// The skew tensor whose axial vector is `v`.
    pub fn from_axl(v: &Vec3) -> Self {
        Skew3(Mat3::new(0.0, -v[2], v[1], v[2], 0.0, -v[0], -v[1], v[0], 0.0))
    }

    pub fn matrix(&self) -> &Mat3 {
        &self.0
    }

    pub fn norm_squared(&self) -> f64 {
        self.0.norm_squared()
    }
}

/// Off-diagonal scaling used to pack symmetric tensors into R^6.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Hash)]
pub enum NotationConvention {
    /// c = 2
    #[default]
    Voigt,
    /// c = √2
    Mandel,
}

impl NotationConvention {
    pub fn c(self) -> f64 {
        match self {
            NotationConvention::Voigt => 2.0,
            NotationConvention::Mandel => std::f64::consts::SQRT_2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            NotationConvention::Voigt => "voigt",
            NotationConvention::Mandel => "mandel",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.to_ascii_lowercase().as_str() {
            "voigt" => Some(NotationConvention::Voigt),
            "mandel" => Some(NotationConvention::Mandel),
            _ => None,
        }
    }
}

/// `(devsym X, skew X, tr X)` with `X = devsym + skew + (tr/3)·1`.
pub fn cartan_decompose(x: &Mat3) -> (Sym3, Skew3, f64) {
    let tr = x.trace();
    let sym = Sym3::new(x);
    let dev = sym.0 - Mat3::identity() * (tr / 3.0);
    (Sym3::new(&dev), Skew3::new(x), tr)
}

/// `axl(A) = (−A₂₃, A₁₃, −A₁₂)`.
pub fn axl(a: &Skew3) -> Vec3 {
    let m = &a.0;
    Vec3::new(-m[(1, 2)], m[(0, 2)], -m[(0, 1)])
}

pub fn sym(x: &Mat3) -> Sym3 {
    Sym3::new(x)
}

pub fn skew(x: &Mat3) -> Skew3 {
    Skew3::new(x)
}

pub fn dev(x: &Mat3) -> Mat3 {
    x - Mat3::identity() * (x.trace() / 3.0)
}

pub fn sym_to_vec(s: &Sym3, conv: NotationConvention) -> Vec6 {
    let c = conv.c();
    let m = &s.0;
    Vec6::new(m[(0, 0)], m[(1, 1)], m[(2, 2)], c * m[(1, 2)], c * m[(0, 2)], c * m[(0, 1)])
}

pub fn vec_to_sym(v: &Vec6, conv: NotationConvention) -> Sym3 {
    let ic = 1.0 / conv.c();
    let (a, b, d) = (v[3] * ic, v[4] * ic, v[5] * ic);
    Sym3(Mat3::new(v[0], d, b, d, v[1], a, b, a, v[2]))
}

/// Component `𝔐_{α ij}` of the strain-side map.
pub fn mapping(alpha: usize, i: usize, j: usize, conv: NotationConvention) -> f64 {
    let (p, q) = VOIGT_PAIRS[alpha];
    if (i, j) == (p, q) || (i, j) == (q, p) {
        if p == q {
            1.0
        } else {
            conv.c() / 2.0
        }
    } else {
        0.0
    }
}

/// Component `𝔐⁻¹_{ij α}` of the inverse map.
pub fn mapping_inv(i: usize, j: usize, alpha: usize, conv: NotationConvention) -> f64 {
    let (p, q) = VOIGT_PAIRS[alpha];
    if (i, j) == (p, q) || (i, j) == (q, p) {
        if p == q {
            1.0
        } else {
            1.0 / conv.c()
        }
    } else {
        0.0
    }
}

/// Symmetric 6×6 stiffness under a fixed convention. Only the upper triangle
/// of the input is read.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StiffnessVoigt {
    m: Matrix6<f64>,
    conv: NotationConvention,
}

impl StiffnessVoigt {
    pub fn new(upper: &Matrix6<f64>, conv: NotationConvention) -> Self {
        let mut m = *upper;
        for i in 0..6 {
            for j in 0..i {
                m[(i, j)] = m[(j, i)];
            }
        }
        StiffnessVoigt { m, conv }
    }

    /// Builds from a full matrix, rejecting asymmetry beyond `tol·max|C|`.
    pub fn try_from_full(m: &Matrix6<f64>, conv: NotationConvention, tol: f64) -> Result<Self> {
        let scale = linalg::max_abs(m).max(f64::MIN_POSITIVE);
        for i in 0..6 {
            for j in i + 1..6 {
                let diff = (m[(i, j)] - m[(j, i)]).abs();
                if diff > tol * scale {
                    return Err(Error::Asymmetric { row: i, col: j, diff });
                }
            }
        }
        Ok(StiffnessVoigt::new(m, conv))
    }

    pub fn zero(conv: NotationConvention) -> Self {
        StiffnessVoigt { m: Matrix6::zeros(), conv }
    }

    pub fn matrix(&self) -> &Matrix6<f64> {
        &self.m
    }

    pub fn convention(&self) -> NotationConvention {
        self.conv
    }

    /// Same tensor expressed under another convention.
    pub fn to_convention(&self, conv: NotationConvention) -> Self {
        if conv == self.conv {
            return *self;
        }
        let r = self.conv.c() / conv.c();
        let d = Vec6::new(1.0, 1.0, 1.0, r, r, r);
        let m = Matrix6::from_diagonal(&d) * self.m * Matrix6::from_diagonal(&d);
        StiffnessVoigt::new(&m, conv)
    }

    pub fn scale(&self, s: f64) -> Self {
        StiffnessVoigt { m: self.m * s, conv: self.conv }
    }

    /// `ℂ S` as a symmetric tensor.
    pub fn apply(&self, s: &Sym3) -> Sym3 {
        let t = self.m * sym_to_vec(s, self.conv);
        // stress side: σ_ij = 𝔐_{α ij} t_α
        let h = self.conv.c() / 2.0;
        Sym3(Mat3::new(t[0], h * t[5], h * t[4], h * t[5], t[1], h * t[3], h * t[4], h * t[3], t[2]))
    }

    /// `⟨ℂ S, S⟩`.
    pub fn quad(&self, s: &Sym3) -> f64 {
        let v = sym_to_vec(s, self.conv);
        v.dot(&(self.m * v))
    }
}

/// Fourth-order tensor acting on Sym(3), stored as the full ijkl array.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tensor4Sym {
    c: [[[[f64; 3]; 3]; 3]; 3],
}

impl Tensor4Sym {
    pub fn zero() -> Self {
        Tensor4Sym { c: [[[[0.0; 3]; 3]; 3]; 3] }
    }

    /// Wraps raw components; symmetry is checked by the consumers that require it.
    pub fn from_components(c: [[[[f64; 3]; 3]; 3]; 3]) -> Self {
        Tensor4Sym { c }
    }

    pub fn get(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        self.c[i][j][k][l]
    }

    pub fn components(&self) -> &[[[[f64; 3]; 3]; 3]; 3] {
        &self.c
    }

    pub fn max_abs(&self) -> f64 {
        self.c.iter().flatten().flatten().flatten().fold(0.0f64, |a, &x| a.max(x.abs()))
    }

    /// First index quadruple violating a minor symmetry beyond `tol` (absolute).
    pub fn minor_symmetry_violation(&self, tol: f64) -> Option<(usize, usize, usize, usize)> {
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    for l in 0..3 {
                        let x = self.c[i][j][k][l];
                        if (x - self.c[j][i][k][l]).abs() > tol || (x - self.c[i][j][l][k]).abs() > tol {
                            return Some((i, j, k, l));
                        }
                    }
                }
            }
        }
        None
    }

    /// The 9×9 row-major matrix of the same linear map on R^{3×3}.
    pub fn to_full(&self) -> Tensor4Full {
        let mut m = Mat9::zeros();
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    for l in 0..3 {
                        m[(3 * i + j, 3 * k + l)] = self.c[i][j][k][l];
                    }
                }
            }
        }
        Tensor4Full::new(&m)
    }
}

/// Fourth-order tensor on all of R^{3×3}, as a 9×9 matrix in the row-major
/// basis (11,12,13,21,22,23,31,32,33). Major symmetry is enforced on construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tensor4Full(Mat9);

impl Tensor4Full {
    pub fn new(m: &Mat9) -> Self {
        Tensor4Full(linalg::symmetrize(m))
    }

    /// Matrix of a linear map given by its action on the basis.
    pub fn from_linear_map(f: impl Fn(&Mat3) -> Mat3) -> Self {
        let mut m = Mat9::zeros();
        for b in 0..9 {
            let mut e = Mat3::zeros();
            e[(b / 3, b % 3)] = 1.0;
            m.set_column(b, &vec9(&f(&e)));
        }
        Tensor4Full::new(&m)
    }

    pub fn matrix(&self) -> &Mat9 {
        &self.0
    }

    pub fn apply(&self, x: &Mat3) -> Mat3 {
        from_vec9(&(self.0 * vec9(x)))
    }

    /// `⟨𝔼 X, X⟩`.
    pub fn quad(&self, x: &Mat3) -> f64 {
        let v = vec9(x);
        v.dot(&(self.0 * v))
    }
}

/// Row-major flattening.
pub fn vec9(x: &Mat3) -> Vec9 {
    Vec9::from_fn(|a, _| x[(a / 3, a % 3)])
}

pub fn from_vec9(v: &Vec9) -> Mat3 {
    Mat3::from_fn(|i, j| v[3 * i + j])
}

/// 9×9 orthogonal projectors onto Sym(3) and so(3).
pub fn sym_skew_projectors() -> (Mat9, Mat9) {
    let psym = Tensor4Full::from_linear_map(|x| *Sym3::new(x).matrix());
    let pskew = Tensor4Full::from_linear_map(|x| *Skew3::new(x).matrix());
    (psym.0, pskew.0)
}

/// `ℂ_{ijkl} = 𝔐_{αij} C̃_{αβ} 𝔐_{βkl}`.
pub fn tensor4_from_voigt(cv: &StiffnessVoigt) -> Tensor4Sym {
    let conv = cv.convention();
    let m = cv.matrix();
    let mut c = [[[[0.0; 3]; 3]; 3]; 3];
    for (a, &(i, j)) in VOIGT_PAIRS.iter().enumerate() {
        let ma = mapping(a, i, j, conv);
        for (b, &(k, l)) in VOIGT_PAIRS.iter().enumerate() {
            let v = ma * m[(a, b)] * mapping(b, k, l, conv);
            for (p, q) in [(i, j), (j, i)] {
                for (r, s) in [(k, l), (l, k)] {
                    c[p][q][r][s] = v;
                }
            }
        }
    }
    Tensor4Sym { c }
}

/// Inverse of [`tensor4_from_voigt`]: entry (α,β) is `(2/c)^{n}·ℂ_{ijkl}` with `n`
/// the number of off-diagonal index pairs.
pub fn voigt_from_tensor4(c: &Tensor4Sym, conv: NotationConvention) -> Result<StiffnessVoigt> {
    let tol = 1e-12 * c.max_abs().max(1.0);
    if let Some((i, j, k, l)) = c.minor_symmetry_violation(tol) {
        return Err(Error::MinorSymmetry { i, j, k, l });
    }
    let mut m = Matrix6::zeros();
    for (a, &(i, j)) in VOIGT_PAIRS.iter().enumerate() {
        for (b, &(k, l)) in VOIGT_PAIRS.iter().enumerate() {
            let f = |p: usize, q: usize| if p == q { 1.0 } else { 2.0 / conv.c() };
            m[(a, b)] = f(i, j) * f(k, l) * c.c[i][j][k][l];
        }
    }
    Ok(StiffnessVoigt::new(&m, conv))
}

/// `‖ℂ⁻¹ − 𝔐⁻¹ C̃⁻¹ 𝔐⁻¹‖_∞ / ‖C̃⁻¹‖_∞`, where `ℂ⁻¹` is the inverse of ℂ on
/// Sym(3) computed independently as the pseudo-inverse of its 9×9 matrix.
pub fn check_inverse_mapping_identity(cv: &StiffnessVoigt) -> Result<f64> {
    let conv = cv.convention();
    let (lo, hi) = linalg::eig_range(cv.matrix());
    if !(lo > SPD_REL_FLOOR * hi && hi > 0.0) {
        return Err(Error::Singular { what: "stiffness".into(), min_eig: lo });
    }
    let inv6 = linalg::spd_inverse(cv.matrix(), "stiffness")?;
    let full = tensor4_from_voigt(cv).to_full();
    let pinv = linalg::sym_pinv(full.matrix());

    let mut worst = 0.0f64;
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                for l in 0..3 {
                    let mut rhs = 0.0;
                    for a in 0..6 {
                        let ma = mapping_inv(i, j, a, conv);
                        if ma == 0.0 {
                            continue;
                        }
                        for b in 0..6 {
                            rhs += ma * inv6[(a, b)] * mapping_inv(k, l, b, conv);
                        }
                    }
                    worst = worst.max((pinv[(3 * i + j, 3 * k + l)] - rhs).abs());
                }
            }
        }
    }
    Ok(worst / linalg::max_abs(&inv6))
}

#[cfg(test)]
mod tests {
    use super::*;
    use NotationConvention::{Mandel, Voigt};

    #[test]
    fn cartan_of_identity() {
        let (d, s, t) = cartan_decompose(&Mat3::identity());
        assert_eq!(d, Sym3::zero());
        assert_eq!(s, Skew3::zero());
        assert_eq!(t, 3.0);
    }

    #[test]
    fn cartan_single_offdiagonal() {
        let mut x = Mat3::zeros();
        x[(0, 1)] = 1.0;
        let (d, s, t) = cartan_decompose(&x);
        assert_eq!(d.matrix()[(0, 1)], 0.5);
        assert_eq!(d.matrix()[(1, 0)], 0.5);
        assert_eq!(s.matrix()[(0, 1)], 0.5);
        assert_eq!(s.matrix()[(1, 0)], -0.5);
        assert_eq!(t, 0.0);
    }

    #[test]
    fn axl_examples() {
        let a = Skew3::new(&Mat3::new(0.0, 1.0, 0.0, -1.0, 0.0, 0.0, 0.0, 0.0, 0.0));
        assert_eq!(axl(&a), Vec3::new(0.0, 0.0, -1.0));
        assert_eq!(axl(&Skew3::zero()), Vec3::zeros());
        let b = Skew3::new(&Mat3::new(0.0, 0.0, 0.0, 0.0, 0.0, 5.0, 0.0, -5.0, 0.0));
        assert_eq!(axl(&b), Vec3::new(-5.0, 0.0, 0.0));
    }

    #[test]
    fn axl_inverts_from_axl() {
        let v = Vec3::new(0.3, -1.2, 2.5);
        assert_eq!(axl(&Skew3::from_axl(&v)), v);
    }

    #[test]
    fn sym_to_vec_examples() {
        assert_eq!(sym_to_vec(&Sym3::identity(), Voigt), Vec6::new(1.0, 1.0, 1.0, 0.0, 0.0, 0.0));
        let mut m = Mat3::zeros();
        m[(1, 2)] = 1.0;
        m[(2, 1)] = 1.0;
        let s = Sym3::new(&m);
        assert_eq!(sym_to_vec(&s, Voigt), Vec6::new(0.0, 0.0, 0.0, 2.0, 0.0, 0.0));
        assert_eq!(sym_to_vec(&s, Mandel), Vec6::new(0.0, 0.0, 0.0, 2f64.sqrt(), 0.0, 0.0));
    }

    #[test]
    fn vec_to_sym_examples() {
        assert_eq!(vec_to_sym(&Vec6::new(1.0, 1.0, 1.0, 0.0, 0.0, 0.0), Voigt), Sym3::identity());
        let s = vec_to_sym(&Vec6::new(0.0, 0.0, 0.0, 2.0, 0.0, 0.0), Voigt);
        assert_eq!(s.matrix()[(1, 2)], 1.0);
        assert_eq!(s.matrix()[(2, 1)], 1.0);
    }

    #[test]
    fn mapping_composition_is_kronecker() {
        for conv in [Voigt, Mandel] {
            for a in 0..6 {
                for b in 0..6 {
                    let mut s = 0.0;
                    for i in 0..3 {
                        for j in 0..3 {
                            s += mapping(a, i, j, conv) * mapping_inv(i, j, b, conv);
                        }
                    }
                    assert_eq!(s, if a == b { 1.0 } else { 0.0 });
                }
            }
        }
    }

    #[test]
    fn tensor4_unit_diagonal() {
        let cv = StiffnessVoigt::new(&Matrix6::identity(), Voigt);
        assert_eq!(tensor4_from_voigt(&cv).get(1, 2, 1, 2), 1.0);
    }

    #[test]
    fn tensor4_isotropic_lame() {
        let cv = StiffnessVoigt::new(&Matrix6::from_diagonal(&Vec6::new(2.0, 2.0, 2.0, 1.0, 1.0, 1.0)), Voigt);
        let c = tensor4_from_voigt(&cv);
        assert_eq!(c.get(0, 0, 0, 0), 2.0);
        assert_eq!(c.get(0, 1, 0, 1), 1.0);
        assert_eq!(c.get(0, 1, 1, 0), 1.0);
    }

    #[test]
    fn tensor4_zero() {
        assert_eq!(tensor4_from_voigt(&StiffnessVoigt::zero(Mandel)), Tensor4Sym::zero());
        assert_eq!(voigt_from_tensor4(&Tensor4Sym::zero(), Voigt).unwrap(), StiffnessVoigt::zero(Voigt));
    }

    #[test]
    fn voigt_from_single_pair() {
        let mut c = [[[[0.0; 3]; 3]; 3]; 3];
        c[0][0][1][1] = 1.0;
        c[1][1][0][0] = 1.0;
        let cv = voigt_from_tensor4(&Tensor4Sym::from_components(c), Voigt).unwrap();
        assert_eq!(cv.matrix()[(0, 1)], 1.0);
        assert_eq!(cv.matrix()[(1, 0)], 1.0);
    }

    #[test]
    fn voigt_layout_shear_factor() {
        for conv in [Voigt, Mandel] {
            let mut c = [[[[0.0; 3]; 3]; 3]; 3];
            for (p, q) in [(1, 2), (2, 1)] {
                for (r, s) in [(1, 2), (2, 1)] {
                    c[p][q][r][s] = 1.0;
                }
            }
            let cv = voigt_from_tensor4(&Tensor4Sym::from_components(c), conv).unwrap();
            let expect = 4.0 / (conv.c() * conv.c());
            assert!((cv.matrix()[(3, 3)] - expect).abs() < 1e-15);
        }
    }

    #[test]
    fn minor_symmetry_violation_rejected() {
        let mut c = [[[[0.0; 3]; 3]; 3]; 3];
        c[0][1][0][0] = 1.0;
        assert!(matches!(voigt_from_tensor4(&Tensor4Sym::from_components(c), Voigt), Err(Error::MinorSymmetry { .. })));
    }

    #[test]
    fn isotropic_identity_residual() {
        for conv in [Voigt, Mandel] {
            let cv = crate::anisotropy::build_isotropic(1.0, 1.0, conv);
            assert!(check_inverse_mapping_identity(&cv).unwrap() < 1e-12);
        }
    }

    #[test]
    fn singular_input_rejected() {
        let cv = StiffnessVoigt::new(&Matrix6::from_diagonal(&Vec6::new(1.0, 1.0, 1.0, 1.0, 1.0, 0.0)), Voigt);
        assert!(matches!(check_inverse_mapping_identity(&cv), Err(Error::Singular { .. })));
    }

    #[test]
    fn convention_change_preserves_tensor() {
        let cv = crate::anisotropy::build_cubic(2.0, 1.0, 3.0, Voigt);
        let cm = cv.to_convention(Mandel);
        let a = tensor4_from_voigt(&cv);
        let b = tensor4_from_voigt(&cm);
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    for l in 0..3 {
                        assert!((a.get(i, j, k, l) - b.get(i, j, k, l)).abs() < 1e-14);
                    }
                }
            }
        }
        assert!((cm.matrix()[(3, 3)] - 6.0).abs() < 1e-14);
    }

    #[test]
    fn apply_matches_tensor_contraction() {
        let cv = crate::anisotropy::build_orthotropic(&[5.0, 6.0, 7.0, 1.0, 1.5, 2.0, 0.7, 0.8, 0.9], Voigt);
        let s = Sym3::new(&Mat3::new(0.1, 0.2, 0.3, 0.2, -0.4, 0.5, 0.3, 0.5, 0.6));
        let t = tensor4_from_voigt(&cv);
        let direct = Mat3::from_fn(|i, j| {
            let mut acc = 0.0;
            for k in 0..3 {
                for l in 0..3 {
                    acc += t.get(i, j, k, l) * s.matrix()[(k, l)];
                }
            }
            acc
        });
        assert!((cv.apply(&s).matrix() - direct).abs().max() < 1e-14);
        assert!((cv.quad(&s) - direct.dot(s.matrix())).abs() < 1e-14);
    }
}
