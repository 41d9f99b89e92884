//! Rayleigh-Ritz discretisation in `x = cos θ` with weighted Jacobi polynomials.
//!
//! The f-basis is `(1-x)^{a_f} (1+x)^{b_f} P_i(x)` with `2a_f, 2b_f` the
//! Frobenius exponents of f at θ = 0 and θ = π, and `P_i` orthonormal for the
//! weight `(1-x)^{2a_f-1/2} (1+x)^{2b_f-1/2}`, which makes the basis
//! orthonormal in `L²((0, π), dθ)`. The g-basis is built the same way.

use nalgebra::{DMatrix, SymmetricEigen};
use statrs::function::gamma::ln_gamma;

use super::series::frobenius_exponents;
use super::spectrum::{Spectrum, SpectrumEntry};
use super::{AngularOperator, Result, SolverError};
use crate::angular::AngularParams;

/// Orthonormal Jacobi polynomials for the weight `(1-x)^α (1+x)^β` on [-1, 1]:
/// `x p_j = b_{j+1} p_{j+1} + a_j p_j + b_j p_{j-1}`.
#[derive(Debug, Clone)]
pub struct JacobiBasis {
    pub alpha: f64,
    pub beta: f64,
    pub a: Vec<f64>,
    /// `b[j]` for `j ≥ 1`; `b[0]` is unused.
    pub b: Vec<f64>,
    /// Total mass of the weight.
    pub mu0: f64,
}

pub fn jacobi_recurrence(alpha: f64, beta: f64, n: usize) -> Result<JacobiBasis> {
    if !(alpha > -1.0 && beta > -1.0) {
        return Err(SolverError::QuadratureBreakdown(format!(
            "weight exponents α = {alpha}, β = {beta} not integrable"
        )));
    }
    let ab = alpha + beta;
    let mut a = Vec::with_capacity(n);
    let mut b = vec![0.0; n + 1];
    for j in 0..n {
        let s = 2.0 * j as f64 + ab;
        a.push(if j == 0 {
            (beta - alpha) / (ab + 2.0)
        } else {
            (beta * beta - alpha * alpha) / (s * (s + 2.0))
        });
    }
    for (j, bj) in b.iter_mut().enumerate().skip(1) {
        let jf = j as f64;
        let s = 2.0 * jf + ab;
        let num = 4.0 * jf * (jf + alpha) * (jf + beta) * (jf + ab);
        let den = s * s * (s + 1.0) * (s - 1.0);
        *bj = if j == 1 && (ab + 1.0).abs() < 1e-14 {
            // (s - 1) and (j + α + β) cancel for α + β = -1.
            (4.0 * (1.0 + alpha) * (1.0 + beta) / ((2.0 + ab).powi(2) * (3.0 + ab))).sqrt()
        } else {
            (num / den).sqrt()
        };
    }
    let ln_mu0 = (ab + 1.0) * std::f64::consts::LN_2 + ln_gamma(alpha + 1.0) + ln_gamma(beta + 1.0)
        - ln_gamma(ab + 2.0);
    let mu0 = ln_mu0.exp();
    if !mu0.is_finite() || a.iter().chain(&b).any(|v| !v.is_finite()) {
        return Err(SolverError::QuadratureBreakdown(format!(
            "recurrence overflow for α = {alpha}, β = {beta}"
        )));
    }
    Ok(JacobiBasis {
        alpha,
        beta,
        a,
        b,
        mu0,
    })
}

impl JacobiBasis {
    /// Values and derivatives of `p_0 .. p_{n-1}` at `x`, with `n ≤ a.len()`.
    pub fn eval(&self, x: f64, n: usize) -> (Vec<f64>, Vec<f64>) {
        let mut p = vec![0.0; n];
        let mut dp = vec![0.0; n];
        p[0] = 1.0 / self.mu0.sqrt();
        for j in 0..n - 1 {
            let prev = if j > 0 { p[j - 1] } else { 0.0 };
            let dprev = if j > 0 { dp[j - 1] } else { 0.0 };
            let b_j = if j > 0 { self.b[j] } else { 0.0 };
            p[j + 1] = ((x - self.a[j]) * p[j] - b_j * prev) / self.b[j + 1];
            dp[j + 1] = (p[j] + (x - self.a[j]) * dp[j] - b_j * dprev) / self.b[j + 1];
        }
        (p, dp)
    }

    /// `∫ w x p_i p_j`, the truncated Jacobi matrix.
    pub fn jacobi_matrix(&self, n: usize) -> DMatrix<f64> {
        DMatrix::from_fn(n, n, |i, j| {
            if i == j {
                self.a[i]
            } else if i + 1 == j {
                self.b[j]
            } else if j + 1 == i {
                self.b[i]
            } else {
                0.0
            }
        })
    }
}

/// Gauss-Jacobi nodes and weights by the Golub-Welsch eigenvalue method.
pub fn gauss_jacobi(alpha: f64, beta: f64, m: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    let basis = jacobi_recurrence(alpha, beta, m)?;
    let eig = SymmetricEigen::new(basis.jacobi_matrix(m));
    let mut nw: Vec<(f64, f64)> = (0..m)
        .map(|i| {
            (
                eig.eigenvalues[i],
                basis.mu0 * eig.eigenvectors[(0, i)].powi(2),
            )
        })
        .collect();
    nw.sort_by(|a, b| a.0.total_cmp(&b.0));
    Ok(nw.into_iter().unzip())
}

fn assemble(p: &AngularParams, n: usize) -> Result<DMatrix<f64>> {
    if n < 1 {
        return Err(SolverError::QuadratureBreakdown("empty basis".into()));
    }
    let ex = frobenius_exponents(p.k);
    let (af, bf) = (ex.at0.0 / 2.0, ex.at_pi.0 / 2.0);
    let (ag, bg) = (ex.at0.1 / 2.0, ex.at_pi.1 / 2.0);
    let pf = jacobi_recurrence(2.0 * af - 0.5, 2.0 * bf - 0.5, n + 1)?;
    let pg = jacobi_recurrence(2.0 * ag - 0.5, 2.0 * bg - 0.5, n + 1)?;
    let kappa = p.kappa();
    let kk = kappa.abs();

    // ⟨φ_i, B₊ ψ_j⟩ = ∫ φ_i (-ψ_j' + κ ψ_j / (1 - x²) + aω ψ_j) dx.
    let mut c = DMatrix::<f64>::zeros(n, n);
    let (x1, w1) = gauss_jacobi(kk - 0.5, kk - 0.5, n + 2)?;
    for (x, w) in x1.iter().zip(&w1) {
        let (pv, _) = pf.eval(*x, n);
        let (qv, dq) = pg.eval(*x, n);
        let lin = ag * (1.0 + x) - bg * (1.0 - x) + kappa;
        for j in 0..n {
            let t = lin * qv[j] - (1.0 - x * x) * dq[j];
            for i in 0..n {
                c[(i, j)] += w * pv[i] * t;
            }
        }
    }
    if p.aomega() != 0.0 {
        let (x2, w2) = gauss_jacobi(kk + 0.5, kk + 0.5, n + 2)?;
        for (x, w) in x2.iter().zip(&w2) {
            let (pv, _) = pf.eval(*x, n);
            let (qv, _) = pg.eval(*x, n);
            for j in 0..n {
                for i in 0..n {
                    c[(i, j)] += p.aomega() * w * pv[i] * qv[j];
                }
            }
        }
    }
    let cf = pf.jacobi_matrix(n) * (-p.am());
    let cg = pg.jacobi_matrix(n) * p.am();
    let mut h = DMatrix::<f64>::zeros(2 * n, 2 * n);
    h.view_mut((0, 0), (n, n)).copy_from(&cf);
    h.view_mut((n, n), (n, n)).copy_from(&cg);
    h.view_mut((0, n), (n, n)).copy_from(&c);
    h.view_mut((n, 0), (n, n)).copy_from(&c.transpose());
    if h.iter().any(|v| !v.is_finite()) {
        return Err(SolverError::QuadratureBreakdown(
            "non-finite matrix element".into(),
        ));
    }
    Ok(h)
}

/// Sorted eigenvalues of the `2N × 2N` Galerkin matrix.
pub fn galerkin_eigenvalues(p: &AngularParams, n: usize) -> Result<Vec<f64>> {
    let h = assemble(p, n)?;
    let mut ev: Vec<f64> = SymmetricEigen::new(h).eigenvalues.iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    Ok(ev)
}

/// Galerkin eigenvalues with `|λ| ≤ N/4`, where they are converged.
pub fn galerkin_spectrum(op: &AngularOperator, n: usize) -> Result<Spectrum> {
    if n < 8 {
        return Err(SolverError::QuadratureBreakdown(format!(
            "basis size {n} below the minimum of 8"
        )));
    }
    let limit = n as f64 / 4.0;
    let entries = galerkin_eigenvalues(&op.params, n)?
        .into_iter()
        .filter(|l| l.abs() <= limit)
        .map(|lambda| SpectrumEntry {
            n: None,
            lambda,
            efun: None,
            diagnostics: None,
        })
        .collect();
    Ok(Spectrum::unlabelled(op.params, entries))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::angular::exact_spectrum_a0;

    #[test]
    fn gauss_legendre_nodes() {
        let (x, w) = gauss_jacobi(0.0, 0.0, 3).unwrap();
        let r = (0.6f64).sqrt();
        assert!((x[0] + r).abs() < 1e-14 && x[1].abs() < 1e-14 && (x[2] - r).abs() < 1e-14);
        assert!((w[0] - 5.0 / 9.0).abs() < 1e-14 && (w[1] - 8.0 / 9.0).abs() < 1e-14);
    }

    #[test]
    fn quadrature_is_exact_for_jacobi_moments() {
        // ∫ (1-x)^α (1+x)^β x² dx against a fine midpoint-free closed form via
        // the orthonormality of the computed polynomials.
        for (al, be) in [(0.5, 1.5), (2.0, 0.0), (1.5, 1.5)] {
            let basis = jacobi_recurrence(al, be, 8).unwrap();
            let (x, w) = gauss_jacobi(al, be, 6).unwrap();
            for i in 0..5 {
                for j in 0..5 {
                    let s: f64 = x
                        .iter()
                        .zip(&w)
                        .map(|(x, w)| {
                            let (p, _) = basis.eval(*x, 5);
                            w * p[i] * p[j]
                        })
                        .sum();
                    let e = if i == j { 1.0 } else { 0.0 };
                    assert!((s - e).abs() < 1e-12, "α={al} β={be} ({i},{j}): {s}");
                }
            }
        }
    }

    #[test]
    fn derivative_recurrence() {
        let basis = jacobi_recurrence(0.5, 1.5, 6).unwrap();
        let (x, h) = (0.3, 1e-6);
        let (_, d) = basis.eval(x, 6);
        let (pp, _) = basis.eval(x + h, 6);
        let (pm, _) = basis.eval(x - h, 6);
        for j in 0..6 {
            assert!((d[j] - (pp[j] - pm[j]) / (2.0 * h)).abs() < 1e-7);
        }
    }

    #[test]
    fn exact_spectrum_at_a0() {
        for k in [-2, -1, 0, 1] {
            let p = AngularParams::new(0.0, 0.0, 0.0, k);
            let ev = galerkin_eigenvalues(&p, 24).unwrap();
            let pos: Vec<f64> = ev.iter().copied().filter(|&l| l > 0.0).take(5).collect();
            for (i, l) in pos.iter().enumerate() {
                let e = exact_spectrum_a0(k, i as i32 + 1);
                assert!((l - e).abs() < 1e-9, "k={k}: {l} vs {e}");
            }
        }
    }

    #[test]
    fn massless_spectrum_is_symmetric() {
        let p = AngularParams::from_products(0.0, 0.75, -2);
        let ev = galerkin_eigenvalues(&p, 20).unwrap();
        let n = ev.len();
        for i in 0..n {
            assert!((ev[i] + ev[n - 1 - i]).abs() < 1e-10);
        }
    }

    #[test]
    fn infeasible_weight_is_reported() {
        assert!(matches!(
            jacobi_recurrence(-1.5, 0.0, 4),
            Err(SolverError::QuadratureBreakdown(_))
        ));
    }
}
