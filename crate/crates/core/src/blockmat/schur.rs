use nalgebra::DVector;

use super::{
    quad_form, BlockError, CMatrix, CVector, HermitianBlockMatrix, Result, C64, COUNT_TOL,
    ROOT_TOL, SEARCH_SPAN,
};

/// `S1(λ)` evaluated at one point, with its negative index.
#[derive(Debug, Clone)]
pub struct SchurSample {
    pub lambda: f64,
    pub matrix: CMatrix,
    pub neg_count: usize,
    pub eigenvalues: Vec<f64>,
}

impl HermitianBlockMatrix {
    /// `S1(λ) = T11 - λ - T12 (T22 - λ)^{-1} T12*`.
    ///
    /// Assembled as `T11 - λ + W* W` with `λ - T22 = L L*` and `W = L^{-1} T12*`,
    /// which keeps the result Hermitian up to the rounding in `T11`.
    pub fn schur_complement(&self, lambda: f64) -> Result<SchurSample> {
        self.check_lambda(lambda)?;
        let n1 = self.n1();
        let n2 = self.n2();
        let shifted = CMatrix::identity(n2, n2) * C64::new(lambda, 0.0) - self.t22();
        let chol = shifted
            .cholesky()
            .ok_or_else(|| BlockError::LambdaInSpectrumOfT22 {
                lambda,
                c2: self.c2(),
                sep: self.sep_tol(),
            })?;
        let w = chol
            .l()
            .solve_lower_triangular(&self.t12().adjoint())
            .expect("Cholesky factor is nonsingular");
        let mut s =
            self.t11() - CMatrix::identity(n1, n1) * C64::new(lambda, 0.0) + w.adjoint() * w;
        // Symmetrise the rounding of T11 away.
        s = (&s + s.adjoint()) * C64::new(0.5, 0.0);
        let eigenvalues = super::sorted(s.clone().symmetric_eigen().eigenvalues.iter().copied());
        let neg_count = eigenvalues.iter().filter(|&&e| e < -COUNT_TOL).count();
        Ok(SchurSample {
            lambda,
            matrix: s,
            neg_count,
            eigenvalues,
        })
    }

    /// The quadratic form `σ(λ)[x] = ⟨x,(T11-λ)x⟩ - ⟨T12*x, (T22-λ)^{-1} T12*x⟩`.
    pub fn sigma_form(&self, x: &CVector, lambda: f64) -> Result<f64> {
        self.check_lambda(lambda)?;
        self.check_len(x, self.n1())?;
        Ok(self.sigma_unchecked(x, lambda).0)
    }

    /// Value and λ-derivative of `σ(λ)[x]`.
    pub(crate) fn sigma_unchecked(&self, x: &CVector, lambda: f64) -> (f64, f64) {
        let z = self.t12().adjoint() * x;
        let (quad, sq) = self.t22_resolvent_forms(lambda, &z);
        let xx = x.norm_squared();
        let value = quad_form(self.t11(), x) - lambda * xx - quad;
        let slope = -xx - sq;
        (value, slope)
    }

    /// Number of eigenvalues of `S1(λ)` below `-COUNT_TOL`.
    pub fn counting_function(&self, lambda: f64) -> Result<usize> {
        Ok(self.schur_complement(lambda)?.neg_count)
    }

    /// Upper end of the λ search window.
    pub fn search_limit(&self) -> f64 {
        self.c2() + SEARCH_SPAN * (1.0 + self.c2().abs())
    }

    /// Geometric grid `c2 + sep·2^k` up to the search limit.
    pub(crate) fn geometric_grid(&self) -> impl Iterator<Item = f64> + '_ {
        let sep = self.sep_tol();
        let limit = self.search_limit();
        (0..)
            .map(move |k| self.c2() + sep * 2f64.powi(k))
            .take_while(move |&l| l <= limit)
    }

    /// The index shift `n0 = min_{λ > c2} dim L_(-∞,0) S1(λ)`.
    ///
    /// The minimum is taken over the geometric grid, cut off at the first
    /// eigenvalue of the full matrix to the right of `c2`.
    pub fn index_shift_n0(&self) -> Result<usize> {
        let cap = self.eigenvalues_right_of_c2().first().copied();
        let mut best: Option<usize> = None;
        for lambda in self.geometric_grid() {
            if cap.is_some_and(|c| lambda >= c) {
                break;
            }
            let count = self.counting_function(lambda)?;
            best = Some(best.map_or(count, |b| b.min(count)));
        }
        best.ok_or_else(|| {
            BlockError::DegenerateInstance(
                "an eigenvalue lies within the separation margin of c2".into(),
            )
        })
    }

    /// `μ_n = min_{dim L = n} max_{x ∈ L} p(x)`, computed from the jumps of the
    /// counting function: `μ_n = inf { λ > c2 : counting(λ) ≥ n }`.
    ///
    /// Returns `-∞` for `n ≤ n0` and `+∞` when the count never reaches `n`
    /// in the search window.
    pub fn mu_minmax(&self, n: usize) -> Result<f64> {
        assert!(n >= 1, "μ_n is indexed from 1");
        let mut lo = self.c2() + self.sep_tol();
        if self.counting_function(lo)? >= n {
            return Ok(f64::NEG_INFINITY);
        }
        let mut hi = None;
        for lambda in self.geometric_grid() {
            if self.counting_function(lambda)? >= n {
                hi = Some(lambda);
                break;
            }
            lo = lambda;
        }
        let Some(mut hi) = hi else {
            return Ok(f64::INFINITY);
        };
        while hi - lo > ROOT_TOL * 0.5 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.counting_function(mid)? >= n {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Ok(0.5 * (lo + hi))
    }

    /// Sorted real eigenvalues of `S1(λ)`.
    pub fn schur_eigenvalues(&self, lambda: f64) -> Result<DVector<f64>> {
        Ok(DVector::from_vec(
            self.schur_complement(lambda)?.eigenvalues,
        ))
    }
}
