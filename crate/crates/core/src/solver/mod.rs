//! Numerical eigenvalues and eigenfunctions of the angular operator.

mod diagnostics;
mod enumerate;
mod galerkin;
pub mod ode;
mod series;
mod shooting;
mod spectrum;

use thiserror::Error;

use crate::angular::{AngularError, AngularParams};

pub use diagnostics::{diagnostics, Diagnostics};
pub use enumerate::{
    enumerate_indices, m_pm_count, nu_numeric, solve_indexed, track_lambda1, MPlusMinus, Method,
    MAX_STEPS,
};
pub use galerkin::{
    galerkin_eigenvalues, galerkin_spectrum, gauss_jacobi, jacobi_recurrence, JacobiBasis,
};
pub use series::{frobenius_exponents, frobenius_start, FrobeniusExponents};
pub use shooting::{eigenfunction, find_roots, miss_distance, shooting_spectrum};
pub use spectrum::{Eigenfunction, Spectrum, SpectrumEntry, GRID_POINTS, SPECTRUM_CSV_HEADER};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolverError {
    #[error("integrator failed at θ = {t}: {reason}")]
    IntegratorFailure { t: f64, reason: String },
    #[error("suspected double root near λ = {lambda}")]
    SuspectedDoubleRoot { lambda: f64 },
    #[error("quadrature breakdown: {0}")]
    QuadratureBreakdown(String),
    #[error("continuation could not certify the labelling ({0})")]
    ContinuationAmbiguity(String),
    #[error("spectrum window too small: {0}")]
    WindowTooSmall(String),
    #[error(transparent)]
    Bounds(#[from] AngularError),
}

pub type Result<T> = std::result::Result<T, SolverError>;

/// The operator `A` for fixed parameters, with its coefficient functions
/// `d(θ) = am cosθ`, `s(θ) = aω sinθ` and `q(θ) = κ / sinθ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AngularOperator {
    pub params: AngularParams,
}

impl AngularOperator {
    pub fn new(params: AngularParams) -> Self {
        Self { params }
    }

    pub fn d(&self, theta: f64) -> f64 {
        self.params.am() * theta.cos()
    }

    pub fn s(&self, theta: f64) -> f64 {
        self.params.aomega() * theta.sin()
    }

    pub fn q(&self, theta: f64) -> f64 {
        self.params.kappa() / theta.sin()
    }

    /// `(f, g)' ` for `(A - λ)(f, g) = 0`.
    pub fn rhs(&self, theta: f64, lambda: f64, u: &[f64; 2]) -> [f64; 2] {
        let (s, c) = theta.sin_cos();
        let qs = self.params.kappa() / s + self.params.aomega() * s;
        let d = self.params.am() * c;
        [
            qs * u[0] + (d - lambda) * u[1],
            (lambda + d) * u[0] - qs * u[1],
        ]
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShootingConfig {
    pub match_point: f64,
    pub series_order: usize,
    pub start_offset: f64,
    pub integrator_tol: f64,
    pub scan_step: f64,
    pub eig_tol: f64,
}

impl Default for ShootingConfig {
    fn default() -> Self {
        Self {
            match_point: std::f64::consts::FRAC_PI_2,
            series_order: 8,
            start_offset: 1e-4,
            integrator_tol: 1e-11,
            scan_step: 0.05,
            eig_tol: 1e-12,
        }
    }
}
