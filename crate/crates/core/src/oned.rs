//! One-dimensional two-field model
//!
//! `E = ∫ μe|u′−p|² + μmicro|p|² + (μLc²/2)|p′|²` on `[0, 1]` with Dirichlet
//! data for `u`, and its effective modulus `μeff = f / (2Δu)` where
//! `f = 2μe(u′−p)` is the (constant) flux.
//!
//! The discretization is a uniform grid with piecewise linear fields: cell
//! averages of `p` in the `u′−p` term, trapezoidal nodal weights in the
//! `μmicro` term. Stationarity in `u` makes the discrete flux exactly
//! constant and the stationarity in `p` is the central-difference equation
//! `−f + 2μmicro p − μLc² p″ = 0` at every node.

use crate::{Error, Result};

/// Boundary treatment of `p` at both ends.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MicroBoundary {
    /// Natural ends. The homogeneous state solves the problem for every `Lc`.
    Free,
    /// `p = 0` at both ends; produces boundary layers of width `~Lc`.
    #[default]
    Clamped,
}

impl MicroBoundary {
    pub fn parse(s: &str) -> Option<Self> {
        match s.to_ascii_lowercase().as_str() {
            "free" | "natural" => Some(MicroBoundary::Free),
            "clamped" => Some(MicroBoundary::Clamped),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OneDProblem {
    pub mu_e: f64,
    pub mu_micro: f64,
    pub mu: f64,
    pub lc: f64,
    pub n_cells: usize,
    pub u_left: f64,
    pub u_right: f64,
    pub micro_boundary: MicroBoundary,
}

impl OneDProblem {
    pub fn new(mu_e: f64, mu_micro: f64, lc: f64, n_cells: usize) -> Self {
        OneDProblem {
            mu_e,
            mu_micro,
            mu: 1.0,
            lc,
            n_cells,
            u_left: 0.0,
            u_right: 1.0,
            micro_boundary: MicroBoundary::default(),
        }
    }

    pub fn with_boundary(mut self, b: MicroBoundary) -> Self {
        self.micro_boundary = b;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let pos = [self.mu_e, self.mu_micro, self.mu];
        if pos.iter().any(|x| !(x.is_finite() && *x > 0.0)) {
            return Err(Error::InvalidInput("mu_e, mu_micro and mu must be positive".into()));
        }
        if !(self.lc.is_finite() && self.lc >= 0.0) {
            return Err(Error::InvalidInput(format!("Lc must be non-negative, got {}", self.lc)));
        }
        if self.n_cells < 8 {
            return Err(Error::InvalidInput(format!("need at least 8 cells, got {}", self.n_cells)));
        }
        if !(self.u_left.is_finite() && self.u_right.is_finite()) || self.u_left == self.u_right {
            return Err(Error::InvalidInput("u_left and u_right must be finite and distinct".into()));
        }
        Ok(())
    }

    /// `p` is pinned at the ends only when the curvature term is present.
    fn clamps(&self) -> bool {
        self.micro_boundary == MicroBoundary::Clamped && self.lc > 0.0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OneDSolution {
    pub grid: Vec<f64>,
    pub u: Vec<f64>,
    pub p: Vec<f64>,
    /// Flux `2μe(u′−p)` in the first cell.
    pub flux: f64,
    pub effective_modulus: f64,
    /// Max nodal residual of the full discrete system, relative to `|f|`.
    pub residual: f64,
}

/// `μe μm / (μe + μm)`.
pub fn mu_macro(mu_e: f64, mu_micro: f64) -> f64 {
    mu_e * mu_micro / (mu_e + mu_micro)
}

/// Exact `μeff` of the continuous clamped problem:
/// `[1/μe + (1 − 2ℓ tanh(1/(2ℓ)))/μm]⁻¹` with `ℓ = Lc √(μ/(2μm))`.
pub fn clamped_effective_modulus(mu_e: f64, mu_micro: f64, mu: f64, lc: f64) -> f64 {
    let ell = lc * (mu / (2.0 * mu_micro)).sqrt();
    let avg = if ell == 0.0 { 1.0 } else { 1.0 - 2.0 * ell * (0.5 / ell).tanh() };
    1.0 / (1.0 / mu_e + avg / mu_micro)
}

/// Thomas algorithm for a symmetric positive definite tridiagonal system.
fn solve_tridiagonal(lower: &[f64], diag: &[f64], upper: &[f64], rhs: &[f64]) -> Vec<f64> {
    let n = diag.len();
    let mut c = vec![0.0; n];
    let mut d = vec![0.0; n];
    c[0] = if n > 1 { upper[0] / diag[0] } else { 0.0 };
    d[0] = rhs[0] / diag[0];
    for i in 1..n {
        let m = diag[i] - lower[i - 1] * c[i - 1];
        assert!(m > 0.0, "tridiagonal system lost positive definiteness");
        if i < n - 1 {
            c[i] = upper[i] / m;
        }
        d[i] = (rhs[i] - lower[i - 1] * d[i - 1]) / m;
    }
    for i in (0..n - 1).rev() {
        d[i] -= c[i] * d[i + 1];
    }
    d
}

/// Discrete energy `E_h(u, p)`.
pub fn discrete_energy(prob: &OneDProblem, u: &[f64], p: &[f64]) -> f64 {
    let n = prob.n_cells;
    let h = 1.0 / n as f64;
    let curv = 0.5 * prob.mu * prob.lc * prob.lc;
    let mut e = 0.0;
    for c in 0..n {
        let du = (u[c + 1] - u[c]) / h;
        let dp = (p[c + 1] - p[c]) / h;
        let pbar = 0.5 * (p[c] + p[c + 1]);
        e += h * (prob.mu_e * (du - pbar).powi(2) + curv * dp * dp);
    }
    for (i, pi) in p.iter().enumerate() {
        let w = if i == 0 || i == n { 0.5 * h } else { h };
        e += w * prob.mu_micro * pi * pi;
    }
    e
}

fn full_residual(prob: &OneDProblem, u: &[f64], p: &[f64]) -> (f64, f64) {
    let n = prob.n_cells;
    let h = 1.0 / n as f64;
    let k = prob.mu * prob.lc * prob.lc;
    let fl: Vec<f64> = (0..n).map(|c| 2.0 * prob.mu_e * ((u[c + 1] - u[c]) / h - 0.5 * (p[c] + p[c + 1]))).collect();
    let scale = fl[0].abs().max(f64::MIN_POSITIVE);
    let mut worst = 0.0f64;
    for i in 1..n {
        worst = worst.max((fl[i - 1] - fl[i]).abs());
    }
    let clamped = prob.clamps();
    for i in 0..=n {
        if clamped && (i == 0 || i == n) {
            worst = worst.max(p[i].abs() * prob.mu_micro);
            continue;
        }
        let r = if i == 0 {
            -0.5 * fl[0] + prob.mu_micro * p[0] + k * (p[0] - p[1]) / (h * h)
        } else if i == n {
            -0.5 * fl[n - 1] + prob.mu_micro * p[n] + k * (p[n] - p[n - 1]) / (h * h)
        } else {
            -0.5 * (fl[i - 1] + fl[i]) + 2.0 * prob.mu_micro * p[i] + k * (2.0 * p[i] - p[i - 1] - p[i + 1]) / (h * h)
        };
        worst = worst.max(r.abs());
    }
    (fl[0], worst / scale)
}

/// Solves the discrete two-field problem.
pub fn solve_mindlin_1d(prob: &OneDProblem) -> Result<OneDSolution> {
    prob.validate()?;
    let n = prob.n_cells;
    let h = 1.0 / n as f64;
    let k = prob.mu * prob.lc * prob.lc / (h * h);
    let du = prob.u_right - prob.u_left;

    // With f constant, p = f·q where q solves the tridiagonal p-equations
    // with unit right-hand side; Σ_c h(u′_c) = Δu then fixes f.
    let clamped = prob.clamps();
    let (lo, hi) = if clamped { (1, n - 1) } else { (0, n) };
    let m = hi - lo + 1;
    let mut diag = vec![0.0; m];
    let mut rhs = vec![0.0; m];
    for (r, i) in (lo..=hi).enumerate() {
        let end = i == 0 || i == n;
        diag[r] = if end { prob.mu_micro + k } else { 2.0 * prob.mu_micro + 2.0 * k };
        rhs[r] = if end { 0.5 } else { 1.0 };
    }
    let off = vec![-k; m.saturating_sub(1)];
    let qi = solve_tridiagonal(&off, &diag, &off, &rhs);
    let mut q = vec![0.0; n + 1];
    q[lo..=hi].copy_from_slice(&qi);

    let mean_q: f64 = (0..n).map(|c| 0.5 * h * (q[c] + q[c + 1])).sum();
    let f = du / (1.0 / (2.0 * prob.mu_e) + mean_q);
    let p: Vec<f64> = q.iter().map(|x| f * x).collect();

    let mut u = vec![prob.u_left; n + 1];
    for c in 0..n {
        let slope = f / (2.0 * prob.mu_e) + 0.5 * (p[c] + p[c + 1]);
        u[c + 1] = u[c] + h * slope;
    }
    // remove round-off drift so the Dirichlet data hold exactly
    let drift = u[n] - prob.u_right;
    for (i, ui) in u.iter_mut().enumerate() {
        *ui -= drift * i as f64 / n as f64;
    }
    u[n] = prob.u_right;

    let (flux, residual) = full_residual(prob, &u, &p);
    let grid = (0..=n).map(|i| i as f64 * h).collect();
    Ok(OneDSolution { grid, u, p, flux, effective_modulus: flux / (2.0 * du), residual })
}

/// Closed form without curvature: linear `u`, `p = μe/(μe+μm)·u′`.
pub fn solve_relaxed_1d(mu_e: f64, mu_micro: f64, u_left: f64, u_right: f64, n_cells: usize) -> Result<OneDSolution> {
    let prob = OneDProblem { u_left, u_right, ..OneDProblem::new(mu_e, mu_micro, 0.0, n_cells) };
    prob.validate()?;
    let n = n_cells;
    let du = u_right - u_left;
    let grid: Vec<f64> = (0..=n).map(|i| i as f64 / n as f64).collect();
    let u = grid.iter().map(|x| u_left + du * x).collect();
    let p = vec![mu_e / (mu_e + mu_micro) * du; n + 1];
    let mm = mu_macro(mu_e, mu_micro);
    Ok(OneDSolution { grid, u, p, flux: 2.0 * mm * du, effective_modulus: mm, residual: 0.0 })
}

/// `(Lc, μeff)` per entry of `lc_values`, using `template` for everything else.
pub fn lc_sweep(template: &OneDProblem, lc_values: &[f64]) -> Result<Vec<(f64, f64)>> {
    let one = |lc: f64| -> Result<(f64, f64)> {
        let prob = OneDProblem { lc, ..*template };
        Ok((lc, solve_mindlin_1d(&prob)?.effective_modulus))
    };
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        lc_values.par_iter().map(|&lc| one(lc)).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        lc_values.iter().map(|&lc| one(lc)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lc_zero_equal_moduli() {
        let s = solve_mindlin_1d(&OneDProblem::new(1.0, 1.0, 0.0, 64)).unwrap();
        assert!((s.effective_modulus - 0.5).abs() < 1e-14);
        for (x, u) in s.grid.iter().zip(&s.u) {
            assert!((u - x).abs() < 1e-14);
        }
        assert!(s.p.iter().all(|p| (p - 0.5).abs() < 1e-14));
        assert!(s.residual < 1e-10);
    }

    #[test]
    fn relaxed_limits() {
        assert_eq!(solve_relaxed_1d(1.0, 1.0, 0.0, 1.0, 8).unwrap().effective_modulus, 0.5);
        let big = solve_relaxed_1d(1.0, 1e9, 0.0, 1.0, 8).unwrap().effective_modulus;
        assert!((big - 1.0).abs() < 1e-8);
    }

    #[test]
    fn relaxed_matches_lc_zero_nodewise() {
        for b in [MicroBoundary::Free, MicroBoundary::Clamped] {
            let prob =
                OneDProblem { u_left: 0.2, u_right: -0.3, ..OneDProblem::new(2.0, 0.7, 0.0, 50) }.with_boundary(b);
            let a = solve_mindlin_1d(&prob).unwrap();
            let r = solve_relaxed_1d(2.0, 0.7, 0.2, -0.3, 50).unwrap();
            for i in 0..=50 {
                assert!((a.u[i] - r.u[i]).abs() < 1e-12);
                assert!((a.p[i] - r.p[i]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn free_ends_stay_homogeneous() {
        let prob = OneDProblem::new(1.0, 2.0, 0.3, 128).with_boundary(MicroBoundary::Free);
        let s = solve_mindlin_1d(&prob).unwrap();
        assert!((s.effective_modulus - mu_macro(1.0, 2.0)).abs() < 1e-12);
    }

    #[test]
    fn clamped_closed_form_limits() {
        assert_eq!(clamped_effective_modulus(1.0, 1.0, 1.0, 0.0), 0.5);
        let stiff = clamped_effective_modulus(1.0, 1.0, 1.0, 1e4);
        assert!((stiff - 1.0).abs() < 1e-7);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(solve_mindlin_1d(&OneDProblem::new(1.0, 1.0, 0.0, 4)).is_err());
        assert!(solve_mindlin_1d(&OneDProblem::new(-1.0, 1.0, 0.0, 16)).is_err());
        assert!(solve_mindlin_1d(&OneDProblem { u_right: 0.0, ..OneDProblem::new(1.0, 1.0, 0.0, 16) }).is_err());
    }

    #[test]
    fn tridiagonal_small() {
        let x = solve_tridiagonal(&[-1.0, -1.0], &[2.0, 2.0, 2.0], &[-1.0, -1.0], &[1.0, 0.0, 1.0]);
        for (a, b) in x.iter().zip([1.0, 1.0, 1.0]) {
            assert!((a - b).abs() < 1e-15);
        }
    }
}
