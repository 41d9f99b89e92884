//! Finite-dimensional self-adjoint block matrices
//!
//! ```text
//!         [ T11   T12 ]
//!     T = [           ]      on C^n1 ⊕ C^n2
//!         [ T12*  T22 ]
//! ```
//!
//! with `T11`, `T22` Hermitian. Everything the variational principle needs is
//! expressed through the first Schur complement
//! `S1(λ) = T11 - λ - T12 (T22 - λ)^{-1} T12*`, defined for `λ > c2 = max σ(T22)`.

mod json;
mod qnr;
pub mod random;
mod schur;
pub mod suite;
mod theorems;

use nalgebra::{Complex, DMatrix, DVector};
use thiserror::Error;

pub use json::InstanceJson;
pub use qnr::{det_identity_terms, monotone_aux, DetIdentity};
pub use schur::SchurSample;
pub use theorems::{
    BoundCheck, SingularityReport, VariationalReport, DEFAULT_MATCH_TOL, OFFDIAG_TOL,
};

pub type C64 = Complex<f64>;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

/// Relative Hermiticity tolerance, scaled by the largest entry magnitude.
pub const HERM_TOL: f64 = 1e-12;
/// Eigenvalues of `S1(λ)` below `-COUNT_TOL` count as negative.
pub const COUNT_TOL: f64 = 1e-10;
/// Absolute tolerance for the zero `p(x)` and for the bisection in `μ_n`.
pub const ROOT_TOL: f64 = 1e-10;
/// Upper end of the search window is `c2 + SEARCH_SPAN * (1 + |c2|)`.
pub const SEARCH_SPAN: f64 = 1e6;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BlockError {
    #[error("block {block} has shape {rows}x{cols}, expected {expected_rows}x{expected_cols}")]
    DimensionMismatch {
        block: &'static str,
        rows: usize,
        cols: usize,
        expected_rows: usize,
        expected_cols: usize,
    },
    #[error("block {block} is not Hermitian (defect {defect:e})")]
    NotHermitian { block: &'static str, defect: f64 },
    #[error("λ = {lambda} is not to the right of max σ(T22) = {c2} (separation {sep:e})")]
    LambdaInSpectrumOfT22 { lambda: f64, c2: f64, sep: f64 },
    #[error("vector argument has zero norm")]
    ZeroVector,
    #[error("vector has the wrong length {got}, expected {expected}")]
    VectorLength { got: usize, expected: usize },
    #[error("σ(λ)[x] has no zero to the right of c2, p(x) = -∞")]
    NoZero,
    #[error("degenerate instance: {0}")]
    DegenerateInstance(String),
    #[error("hypothesis violated: {}", .0.join("; "))]
    HypothesisViolated(Vec<String>),
    #[error("malformed instance: {0}")]
    Malformed(String),
}

pub type Result<T, E = BlockError> = std::result::Result<T, E>;

/// A Hermitian block matrix together with its cached spectral data.
///
/// `c1 ≤ σ(T11) ≤ c1_plus` and `c2_minus ≤ σ(T22) ≤ c2`.
#[derive(Debug, Clone)]
pub struct HermitianBlockMatrix {
    t11: CMatrix,
    t12: CMatrix,
    t22: CMatrix,
    c1: f64,
    c1_plus: f64,
    c2_minus: f64,
    c2: f64,
    // T22 = V diag(d) V*, used for fast evaluation of (T22 - λ)^{-1}
    t22_eigvals: DVector<f64>,
    t22_eigvecs: CMatrix,
}

impl HermitianBlockMatrix {
    pub fn new(t11: CMatrix, t12: CMatrix, t22: CMatrix) -> Result<Self> {
        let n1 = t11.nrows();
        let n2 = t22.nrows();
        if n1 == 0 || n2 == 0 {
            return Err(BlockError::Malformed(
                "block dimensions must be positive".into(),
            ));
        }
        check_shape("T11", &t11, n1, n1)?;
        check_shape("T22", &t22, n2, n2)?;
        check_shape("T12", &t12, n1, n2)?;

        let scale = [&t11, &t12, &t22]
            .iter()
            .flat_map(|m| m.iter())
            .map(|z| z.norm())
            .fold(0.0_f64, f64::max);
        let tol = HERM_TOL * scale;
        for (name, m) in [("T11", &t11), ("T22", &t22)] {
            let defect = hermitian_defect(m);
            if defect > tol {
                return Err(BlockError::NotHermitian {
                    block: name,
                    defect,
                });
            }
        }

        let e11 = t11.clone().symmetric_eigen();
        let e22 = t22.clone().symmetric_eigen();
        let c1 = e11.eigenvalues.min();
        let c1_plus = e11.eigenvalues.max();
        let c2_minus = e22.eigenvalues.min();
        let c2 = e22.eigenvalues.max();

        Ok(Self {
            t11,
            t12,
            t22,
            c1,
            c1_plus,
            c2_minus,
            c2,
            t22_eigvals: e22.eigenvalues,
            t22_eigvecs: e22.eigenvectors,
        })
    }

    /// Convenience constructor from real blocks.
    pub fn from_real(t11: DMatrix<f64>, t12: DMatrix<f64>, t22: DMatrix<f64>) -> Result<Self> {
        let c = |m: DMatrix<f64>| m.map(|x| C64::new(x, 0.0));
        Self::new(c(t11), c(t12), c(t22))
    }

    pub fn n1(&self) -> usize {
        self.t11.nrows()
    }

    pub fn n2(&self) -> usize {
        self.t22.nrows()
    }

    pub fn t11(&self) -> &CMatrix {
        &self.t11
    }

    pub fn t12(&self) -> &CMatrix {
        &self.t12
    }

    pub fn t22(&self) -> &CMatrix {
        &self.t22
    }

    pub fn c1(&self) -> f64 {
        self.c1
    }

    pub fn c1_plus(&self) -> f64 {
        self.c1_plus
    }

    pub fn c2_minus(&self) -> f64 {
        self.c2_minus
    }

    pub fn c2(&self) -> f64 {
        self.c2
    }

    /// Largest entry magnitude over all three blocks, at least 1.
    pub fn scale(&self) -> f64 {
        [&self.t11, &self.t12, &self.t22]
            .iter()
            .flat_map(|m| m.iter())
            .map(|z| z.norm())
            .fold(1.0_f64, f64::max)
    }

    /// Safety margin to the right of `c2`.
    pub fn sep_tol(&self) -> f64 {
        1e-9 * (1.0 + self.c2.abs())
    }

    pub fn rank_tol(&self) -> f64 {
        1e-9 * self.scale()
    }

    /// The full `(n1 + n2)`-dimensional matrix.
    pub fn assemble(&self) -> CMatrix {
        let (n1, n2) = (self.n1(), self.n2());
        let mut m = CMatrix::zeros(n1 + n2, n1 + n2);
        m.view_mut((0, 0), (n1, n1)).copy_from(&self.t11);
        m.view_mut((0, n1), (n1, n2)).copy_from(&self.t12);
        m.view_mut((n1, 0), (n2, n1)).copy_from(&self.t12.adjoint());
        m.view_mut((n1, n1), (n2, n2)).copy_from(&self.t22);
        m
    }

    /// Singular values of `T12`, ascending.
    pub fn t12_singular_values(&self) -> Vec<f64> {
        let mut s: Vec<f64> = self.t12.clone().singular_values().iter().copied().collect();
        s.sort_by(f64::total_cmp);
        s
    }

    /// `T12*` is onto `C^n2`, i.e. `T12` has rank `n2`.
    pub fn t21_surjective(&self) -> bool {
        self.n1() >= self.n2()
            && self
                .t12_singular_values()
                .iter()
                .rev()
                .take(self.n2())
                .all(|&s| s > self.rank_tol())
    }

    pub fn t12_bijective(&self) -> bool {
        self.n1() == self.n2() && self.t12_singular_values()[0] > self.rank_tol()
    }

    /// Eigenvalues of `T12 T12*`, ascending (`ν_1 ≤ ν_2 ≤ …`).
    pub fn nu_values(&self) -> Vec<f64> {
        let g = &self.t12 * self.t12.adjoint();
        sorted(g.symmetric_eigen().eigenvalues.iter().copied())
    }

    /// All eigenvalues of the assembled matrix, ascending.
    pub fn oracle_eigenvalues(&self) -> Vec<f64> {
        sorted(
            self.assemble()
                .symmetric_eigen()
                .eigenvalues
                .iter()
                .copied(),
        )
    }

    /// Eigenpairs of the assembled matrix, ascending by eigenvalue.
    pub fn oracle_eigenpairs(&self) -> Vec<(f64, CVector)> {
        let e = self.assemble().symmetric_eigen();
        let mut pairs: Vec<(f64, CVector)> = e
            .eigenvalues
            .iter()
            .enumerate()
            .map(|(i, &l)| (l, e.eigenvectors.column(i).into_owned()))
            .collect();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        pairs
    }

    /// Oracle eigenvalues strictly to the right of `c2 + sep_tol`.
    pub fn eigenvalues_right_of_c2(&self) -> Vec<f64> {
        let cut = self.c2 + self.sep_tol();
        self.oracle_eigenvalues()
            .into_iter()
            .filter(|&l| l > cut)
            .collect()
    }

    pub(crate) fn check_lambda(&self, lambda: f64) -> Result<()> {
        let sep = self.sep_tol();
        if !(lambda >= self.c2 + sep) {
            return Err(BlockError::LambdaInSpectrumOfT22 {
                lambda,
                c2: self.c2,
                sep,
            });
        }
        Ok(())
    }

    pub(crate) fn check_len(&self, v: &CVector, expected: usize) -> Result<()> {
        if v.len() != expected {
            return Err(BlockError::VectorLength {
                got: v.len(),
                expected,
            });
        }
        if v.norm() == 0.0 {
            return Err(BlockError::ZeroVector);
        }
        Ok(())
    }

    /// `(T22 - λ)^{-1} z` via the cached eigendecomposition of `T22`.
    pub(crate) fn t22_resolvent_apply(&self, lambda: f64, z: &CVector) -> CVector {
        let v = &self.t22_eigvecs;
        let mut w = v.adjoint() * z;
        for (wi, &d) in w.iter_mut().zip(self.t22_eigvals.iter()) {
            *wi /= C64::new(d - lambda, 0.0);
        }
        v * w
    }

    /// Returns `(⟨z, (T22-λ)^{-1} z⟩, ‖(T22-λ)^{-1} z‖²)` for `λ > c2`.
    pub(crate) fn t22_resolvent_forms(&self, lambda: f64, z: &CVector) -> (f64, f64) {
        let w = self.t22_eigvecs.adjoint() * z;
        let mut quad = 0.0;
        let mut sq = 0.0;
        for (wi, &d) in w.iter().zip(self.t22_eigvals.iter()) {
            let r = 1.0 / (d - lambda);
            let m = wi.norm_sqr();
            quad += m * r;
            sq += m * r * r;
        }
        (quad, sq)
    }
}

fn check_shape(block: &'static str, m: &CMatrix, rows: usize, cols: usize) -> Result<()> {
    if m.nrows() != rows || m.ncols() != cols {
        return Err(BlockError::DimensionMismatch {
            block,
            rows: m.nrows(),
            cols: m.ncols(),
            expected_rows: rows,
            expected_cols: cols,
        });
    }
    Ok(())
}

/// Largest entry of `|M - M*|`.
pub fn hermitian_defect(m: &CMatrix) -> f64 {
    (m - m.adjoint())
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max)
}

pub(crate) fn sorted(it: impl Iterator<Item = f64>) -> Vec<f64> {
    let mut v: Vec<f64> = it.collect();
    v.sort_by(f64::total_cmp);
    v
}

/// `⟨x, A x⟩` for Hermitian `A`, real part.
pub(crate) fn quad_form(a: &CMatrix, x: &CVector) -> f64 {
    x.dotc(&(a * x)).re
}
