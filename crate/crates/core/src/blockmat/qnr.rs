//! The quadratic numerical range functional `λ±(x, y)` and the zero `p(x)` of
//! the Schur complement form.

use super::{quad_form, BlockError, CVector, HermitianBlockMatrix, Result, C64, ROOT_TOL};

impl HermitianBlockMatrix {
    /// Eigenvalues `(λ-, λ+)` of the compression
    ///
    /// ```text
    ///   T_{x,y} = [ ⟨x,T11 x⟩/‖x‖²          ⟨x,T12 y⟩/(‖x‖‖y‖) ]
    ///             [ ⟨y,T12* x⟩/(‖x‖‖y‖)    ⟨y,T22 y⟩/‖y‖²      ]
    /// ```
    pub fn qnr_lambda_pm(&self, x: &CVector, y: &CVector) -> Result<(f64, f64)> {
        self.check_len(x, self.n1())?;
        self.check_len(y, self.n2())?;
        let (nx, ny) = (x.norm(), y.norm());
        let a = quad_form(self.t11(), x) / (nx * nx);
        let d = quad_form(self.t22(), y) / (ny * ny);
        let b = x.dotc(&(self.t12() * y)) / C64::new(nx * ny, 0.0);
        let mid = 0.5 * (a + d);
        let rad = (0.25 * (a - d) * (a - d) + b.norm_sqr()).sqrt();
        Ok((mid - rad, mid + rad))
    }

    /// The unique zero of `λ ↦ σ(λ)[x]` in `(c2, ∞)`, or `-∞` if there is none.
    ///
    /// `σ(·)[x]` is strictly decreasing, so a single sign probe at
    /// `c2 + sep_tol` decides existence. The zero is then bracketed on the
    /// geometric grid and polished by safeguarded Newton steps.
    pub fn p_of_x(&self, x: &CVector) -> Result<f64> {
        self.check_len(x, self.n1())?;
        let mut lo = self.c2() + self.sep_tol();
        let (f_lo, _) = self.sigma_unchecked(x, lo);
        if f_lo < 0.0 {
            return Ok(f64::NEG_INFINITY);
        }
        if f_lo == 0.0 {
            return Ok(lo);
        }
        let mut hi = None;
        for lambda in self.geometric_grid() {
            let (f, _) = self.sigma_unchecked(x, lambda);
            if f <= 0.0 {
                hi = Some(lambda);
                break;
            }
            lo = lambda;
        }
        let mut hi = hi.ok_or_else(|| {
            BlockError::DegenerateInstance("σ(λ)[x] stays positive on the search window".into())
        })?;

        let mut lambda = 0.5 * (lo + hi);
        for _ in 0..200 {
            let (f, df) = self.sigma_unchecked(x, lambda);
            if f > 0.0 {
                lo = lambda;
            } else {
                hi = lambda;
            }
            let newton = lambda - f / df;
            let next = if newton > lo && newton < hi {
                newton
            } else {
                0.5 * (lo + hi)
            };
            let step = (next - lambda).abs();
            lambda = next;
            if step <= 1e-15 * (1.0 + lambda.abs()) || hi - lo <= ROOT_TOL * 1e-3 {
                break;
            }
        }
        Ok(lambda)
    }

    /// `sup_y λ+(x, y)`, attained at `y* = (T22 - p(x))^{-1} T12* x`.
    pub fn sup_lambda_plus(&self, x: &CVector) -> Result<f64> {
        Ok(self.sup_lambda_plus_with_maximiser(x)?.0)
    }

    /// As [`sup_lambda_plus`](Self::sup_lambda_plus), also returning the maximiser.
    pub fn sup_lambda_plus_with_maximiser(&self, x: &CVector) -> Result<(f64, CVector)> {
        let p = self.p_of_x(x)?;
        if p == f64::NEG_INFINITY {
            return Err(BlockError::NoZero);
        }
        let z = self.t12().adjoint() * x;
        let mut y = self.t22_resolvent_apply(p, &z);
        if y.norm() == 0.0 {
            // T12* x = 0: then p(x) = ⟨x,T11x⟩/‖x‖² and every y attains it.
            y = CVector::zeros(self.n2());
            y[0] = C64::new(1.0, 0.0);
        }
        let (_, plus) = self.qnr_lambda_pm(x, &y)?;
        Ok((plus, y))
    }
}

/// Both sides of the determinant identity
/// `‖x‖²‖y‖² det(T_{x,y} - λ) = ⟨y,(T22-λ)y⟩ σ(λ)[x] + gap`, where
/// `gap = ⟨y,(T22-λ)y⟩⟨T12*x,(T22-λ)^{-1}T12*x⟩ - |⟨y,T12*x⟩|²`.
#[derive(Debug, Clone, Copy)]
pub struct DetIdentity {
    pub lhs: f64,
    pub rhs: f64,
    pub gap: f64,
}

pub fn det_identity_terms(
    m: &HermitianBlockMatrix,
    x: &CVector,
    y: &CVector,
    lambda: f64,
) -> Result<DetIdentity> {
    m.check_lambda(lambda)?;
    m.check_len(x, m.n1())?;
    m.check_len(y, m.n2())?;
    let xx = x.norm_squared();
    let yy = y.norm_squared();
    let a = quad_form(m.t11(), x) - lambda * xx;
    let d = quad_form(m.t22(), y) - lambda * yy;
    let b = x.dotc(&(m.t12() * y)).norm_sqr();
    let lhs = a * d - b;

    let z = m.t12().adjoint() * x;
    let (quad, _) = m.t22_resolvent_forms(lambda, &z);
    let sigma = m.sigma_unchecked(x, lambda).0;
    let gap = d * quad - y.dotc(&z).norm_sqr();
    Ok(DetIdentity {
        lhs,
        rhs: d * sigma + gap,
        gap,
    })
}

/// `f(s, t) = s + t + sqrt((s - t)² + γ²)`, nondecreasing in both arguments.
pub fn monotone_aux(s: f64, t: f64, gamma: f64) -> f64 {
    s + t + ((s - t).powi(2) + gamma * gamma).sqrt()
}
