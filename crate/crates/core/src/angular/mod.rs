//! The angular operator of the Dirac equation in Kerr-Newman geometry,
//!
//! ```text
//! A = [ -am cosθ      d/dθ + κ/sinθ + aω sinθ ]
//!     [ -d/dθ + κ/sinθ + aω sinθ      am cosθ ]      on L²(0, π)²,  κ = k + 1/2,
//! ```
//!
//! and closed-form enclosures of its eigenvalues.

mod bounds;
mod criteria;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use bounds::{
    a_perturbation_bounds, best_enclosure, best_enclosure_with, enclosure_for_index,
    exact_spectrum_a0, lambda_q, nu_enclosure, omega_pm, re_sqrt, refined_endpoint_bounds,
    spt_bounds, variational_bounds, BoundSet, Enclosure, Interval, LambdaQ, Refinement,
    BOUNDSET_CSV_HEADER,
};
pub use criteria::{index_shift_criteria, IndexShiftCriteria, IndexedEigenvalues, Tristate};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AngularError {
    #[error("negative radicand {radicand} under the upper bound square root")]
    RadicandNegativeUpper { radicand: f64 },
    #[error("enclosures do not intersect: [{lo}, {hi}]")]
    EmptyIntersection { lo: f64, hi: f64 },
    #[error("eigenvalue index must be nonzero")]
    ZeroIndex,
}

/// Physical parameters. Only the products `am`, `aω` enter the operator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AngularParams {
    pub a: f64,
    pub m: f64,
    pub omega: f64,
    pub k: i32,
}

impl AngularParams {
    pub fn new(a: f64, m: f64, omega: f64, k: i32) -> Self {
        Self { a, m, omega, k }
    }

    /// Parameters with `a = 1`, so `m = am` and `ω = aω`.
    pub fn from_products(am: f64, aomega: f64, k: i32) -> Self {
        Self {
            a: 1.0,
            m: am,
            omega: aomega,
            k,
        }
    }

    pub fn am(&self) -> f64 {
        self.a * self.m
    }

    pub fn aomega(&self) -> f64 {
        self.a * self.omega
    }

    pub fn kappa(&self) -> f64 {
        self.k as f64 + 0.5
    }

    /// Same operator with `a` replaced by `t·a`.
    pub fn scaled(&self, t: f64) -> Self {
        Self {
            a: self.a * t,
            ..*self
        }
    }

    /// The parameter set with `am → -am`; its spectrum is the negated one.
    pub fn mass_reflected(&self) -> Self {
        Self {
            m: -self.m,
            ..*self
        }
    }

    /// `(k, aω, am) → (-k-1, -aω, -am)`, which leaves the spectrum unchanged.
    pub fn reflected(&self) -> Self {
        Self {
            a: self.a,
            m: -self.m,
            omega: -self.omega,
            k: -self.k - 1,
        }
    }
}
