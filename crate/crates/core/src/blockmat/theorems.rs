//! Checks of the variational principle and of the two-sided eigenvalue
//! estimates against the dense eigendecomposition.

use serde::Serialize;

use super::{BlockError, CMatrix, HermitianBlockMatrix, Result};

/// Agreement required between `μ_{j+n0}` and the oracle eigenvalues.
pub const DEFAULT_MATCH_TOL: f64 = 1e-8;
/// Agreement required between `σ([[0,T12],[T12*,0]])` and `±sqrt(ν)`.
pub const OFFDIAG_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    /// Relative-bound estimate with constants `(ax, abx)`.
    General,
    /// Estimate for bounded `T11`, using `c1_plus`.
    Bounded,
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundCheck {
    pub index: usize,
    pub kind: BoundKind,
    pub lower_bound: f64,
    pub upper_bound: f64,
    pub eigenvalue: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct VariationalReport {
    pub n0: usize,
    pub eigenvalues_right: Vec<f64>,
    /// `μ_1, …, μ_{n0+N}`; the first `n0` entries are `-∞`.
    pub mu_values: Vec<f64>,
    pub nu_values: Vec<f64>,
    pub ax: f64,
    pub abx: f64,
    pub bound_checks: Vec<BoundCheck>,
    /// `|μ_{j+n0} - λ_j| ≤ match_tol` for every `j`.
    pub minmax_matches: bool,
}

impl VariationalReport {
    pub fn all_pass(&self) -> bool {
        self.minmax_matches && self.bound_checks.iter().all(|c| c.pass)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SingularityReport {
    pub t_singular: bool,
    pub s_singular: bool,
    pub kernel_dims_match: bool,
    pub t_kernel_dim: usize,
    pub s_kernel_dim: usize,
}

/// Upper estimate for the `ℓ`-th eigenvalue right of `c2` from a relative bound
/// `‖T11 x‖ ≤ ax‖x‖ + abx‖T12* x‖`.
pub fn general_upper_bound(nu: f64, ax: f64, abx: f64, c2: f64) -> f64 {
    let s = nu.sqrt();
    0.5 * abx * s + (nu + 0.25 * (abx * s + (ax - c2).abs()).powi(2)).sqrt() + 0.5 * (ax + c2)
}

pub fn lower_bound(nu: f64, c1: f64, c2_minus: f64) -> f64 {
    (nu + 0.25 * (c1 - c2_minus).powi(2)).sqrt() + 0.5 * (c1 + c2_minus)
}

pub fn bounded_upper_bound(nu: f64, c1_plus: f64, c2: f64) -> f64 {
    (nu + 0.25 * (c1_plus - c2).powi(2)).sqrt() + 0.5 * (c1_plus + c2)
}

impl HermitianBlockMatrix {
    /// Spectral norm of `T11`; `(‖T11‖, 0)` is always an admissible pair `(ax, abx)`.
    pub fn t11_norm(&self) -> f64 {
        self.c1().abs().max(self.c1_plus().abs())
    }

    /// Runs the estimate theorems with the default constants `(‖T11‖, 0)`.
    pub fn verify_bound_theorems_default(&self) -> Result<VariationalReport> {
        self.verify_bound_theorems(self.t11_norm(), 0.0)
    }

    pub fn verify_bound_theorems(&self, ax: f64, abx: f64) -> Result<VariationalReport> {
        let mut violated = Vec::new();
        if !self.t12_bijective() {
            violated.push("T12 is not bijective".to_string());
        }
        let nu = self.nu_values();
        if nu.first().is_none_or(|&v| v <= 0.0) {
            violated.push("smallest eigenvalue of T12 T12* is not positive".to_string());
        }
        if ax < 0.0 || abx < 0.0 {
            violated.push("relative bound constants must be nonnegative".to_string());
        } else {
            // Sufficient: ‖T11 x‖ ≤ ‖T11‖‖x‖ ≤ ax‖x‖ + abx·s_min‖x‖ ≤ ax‖x‖ + abx‖T12* x‖.
            let smin = self.t12_singular_values()[0];
            if ax + abx * smin < self.t11_norm() * (1.0 - 1e-12) {
                violated.push(format!(
                    "cannot certify ‖T11 x‖ ≤ {ax}‖x‖ + {abx}‖T12* x‖ (‖T11‖ = {})",
                    self.t11_norm()
                ));
            }
        }
        if !violated.is_empty() {
            return Err(BlockError::HypothesisViolated(violated));
        }

        let n0 = self.index_shift_n0()?;
        let right = self.eigenvalues_right_of_c2();
        let mut mu_values = Vec::with_capacity(n0 + right.len());
        for n in 1..=n0 + right.len() {
            mu_values.push(self.mu_minmax(n)?);
        }
        let minmax_matches = right
            .iter()
            .enumerate()
            .all(|(j, &l)| (mu_values[j + n0] - l).abs() <= DEFAULT_MATCH_TOL * (1.0 + l.abs()));

        let slack = 1e-9 * self.scale();
        let mut bound_checks = Vec::new();
        for (j, &l) in right.iter().enumerate() {
            let Some(&nu_j) = nu.get(j + n0) else { break };
            let lower = lower_bound(nu_j, self.c1(), self.c2_minus());
            let upper = general_upper_bound(nu_j, ax, abx, self.c2());
            let bounded = bounded_upper_bound(nu_j, self.c1_plus(), self.c2());
            for (kind, up) in [(BoundKind::General, upper), (BoundKind::Bounded, bounded)] {
                bound_checks.push(BoundCheck {
                    index: j + 1,
                    kind,
                    lower_bound: lower,
                    upper_bound: up,
                    eigenvalue: l,
                    pass: lower - slack <= l && l <= up + slack,
                });
            }
        }

        Ok(VariationalReport {
            n0,
            eigenvalues_right: right,
            mu_values,
            nu_values: nu,
            ax,
            abx,
            bound_checks,
            minmax_matches,
        })
    }

    /// Whether `σ([[0, T12], [T12*, 0]]) = {±sqrt(ν) : ν ∈ σ(T12 T12*)}`.
    pub fn offdiag_sqrt_check(&self) -> Result<bool> {
        if !self.t12_bijective() {
            return Err(BlockError::HypothesisViolated(vec![
                "T12 is not bijective".into()
            ]));
        }
        let n = self.n1();
        let mut off = CMatrix::zeros(2 * n, 2 * n);
        off.view_mut((0, n), (n, n)).copy_from(self.t12());
        off.view_mut((n, 0), (n, n))
            .copy_from(&self.t12().adjoint());
        let eig = super::sorted(off.symmetric_eigen().eigenvalues.iter().copied());
        let roots: Vec<f64> = self.nu_values().iter().map(|v| v.max(0.0).sqrt()).collect();
        let expected = super::sorted(roots.iter().map(|r| -r).chain(roots.iter().copied()));
        let tol = OFFDIAG_TOL * self.scale();
        Ok(eig.iter().zip(&expected).all(|(a, b)| (a - b).abs() <= tol))
    }

    /// Compares singularity and kernel dimension of `T - λ` and `S1(λ)`.
    pub fn singularity_equivalence_check(&self, lambda: f64) -> Result<SingularityReport> {
        let s = self.schur_complement(lambda)?;
        let tol = 1e-9 * self.scale();
        let n = self.n1() + self.n2();
        let shifted = self.assemble() - CMatrix::identity(n, n) * super::C64::new(lambda, 0.0);
        let t_kernel_dim = shifted
            .symmetric_eigen()
            .eigenvalues
            .iter()
            .filter(|e| e.abs() < tol)
            .count();
        let s_kernel_dim = s.eigenvalues.iter().filter(|e| e.abs() < tol).count();
        let t_singular = t_kernel_dim > 0;
        let s_singular = s_kernel_dim > 0;
        Ok(SingularityReport {
            t_singular,
            s_singular,
            kernel_dims_match: t_kernel_dim == s_kernel_dim,
            t_kernel_dim,
            s_kernel_dim,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::{dvector, DMatrix};

    fn offdiag(diag: &[f64]) -> HermitianBlockMatrix {
        let n = diag.len();
        HermitianBlockMatrix::from_real(
            DMatrix::zeros(n, n),
            DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(diag)),
            DMatrix::zeros(n, n),
        )
        .unwrap()
    }

    #[test]
    fn oracle_small_cases() {
        let e = offdiag(&[2.0]).oracle_eigenvalues();
        assert!((e[0] + 2.0).abs() < 1e-14 && (e[1] - 2.0).abs() < 1e-14);
        let m = HermitianBlockMatrix::from_real(
            DMatrix::from_element(1, 1, 1.0),
            DMatrix::from_element(1, 1, 2.0),
            DMatrix::from_element(1, 1, -1.0),
        )
        .unwrap();
        let e = m.oracle_eigenvalues();
        assert!((e[1] - 5f64.sqrt()).abs() < 1e-14);
        let m = HermitianBlockMatrix::from_real(
            DMatrix::from_element(1, 1, 1.0),
            DMatrix::from_element(1, 1, 0.0),
            DMatrix::from_element(1, 1, -1.0),
        )
        .unwrap();
        assert_eq!(m.oracle_eigenvalues(), vec![-1.0, 1.0]);
    }

    #[test]
    fn zero_diagonal_bounds_collapse() {
        let m = offdiag(&[2.0, 5.0]);
        let r = m.verify_bound_theorems_default().unwrap();
        assert_eq!(r.n0, 0);
        assert!(r.all_pass());
        for c in &r.bound_checks {
            assert!((c.lower_bound - c.eigenvalue).abs() < 1e-10);
            assert!((c.upper_bound - c.eigenvalue).abs() < 1e-10);
        }
        assert!((r.bound_checks[0].eigenvalue - 2.0).abs() < 1e-12);
        assert!((r.bound_checks[2].eigenvalue - 5.0).abs() < 1e-12);
    }

    #[test]
    fn singular_t12_violates_hypothesis() {
        let m = HermitianBlockMatrix::from_real(
            DMatrix::identity(2, 2),
            DMatrix::from_diagonal(&dvector![1.0, 0.0]),
            DMatrix::zeros(2, 2),
        )
        .unwrap();
        assert!(matches!(
            m.verify_bound_theorems_default(),
            Err(BlockError::HypothesisViolated(_))
        ));
        assert!(matches!(
            m.offdiag_sqrt_check(),
            Err(BlockError::HypothesisViolated(_))
        ));
        // Rectangular T12 is never bijective.
        let r = HermitianBlockMatrix::from_real(
            DMatrix::zeros(2, 2),
            DMatrix::from_row_slice(2, 1, &[1.0, 0.0]),
            DMatrix::zeros(1, 1),
        )
        .unwrap();
        assert!(!r.t12_bijective());
        assert!(r.t21_surjective());
    }

    #[test]
    fn offdiag_square_roots() {
        assert!(offdiag(&[2.0]).offdiag_sqrt_check().unwrap());
        assert!(offdiag(&[2.0, 5.0]).offdiag_sqrt_check().unwrap());
    }

    #[test]
    fn singularity_in_scalar_case() {
        let m = offdiag(&[2.0]);
        let at = m.singularity_equivalence_check(2.0).unwrap();
        assert!(at.t_singular && at.s_singular && at.kernel_dims_match);
        assert_eq!(at.t_kernel_dim, 1);
        let off = m.singularity_equivalence_check(1.0).unwrap();
        assert!(!off.t_singular && !off.s_singular);
    }
}
