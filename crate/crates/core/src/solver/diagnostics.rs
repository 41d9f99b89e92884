use serde::Serialize;

use super::spectrum::Eigenfunction;
use super::AngularOperator;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Diagnostics {
    /// `max |(A - λ)u| / max |u|` on the sample grid.
    pub residual: f64,
    /// `max_i ||f(θ_i)| - |g(π - θ_i)||` for the ℓ²-normalised samples.
    pub symmetry_defect: f64,
}

/// Finite-difference weights for the first derivative at `z` (Fornberg's recursion).
fn fd_weights(z: f64, x: &[f64]) -> Vec<f64> {
    let n = x.len();
    let mut c = vec![[0.0f64; 2]; n];
    let mut c1 = 1.0;
    let mut c4 = x[0] - z;
    c[0][0] = 1.0;
    for i in 1..n {
        let mn = i.min(1);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = x[i] - z;
        for j in 0..i {
            let c3 = x[i] - x[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[i][k] = c1 * (k as f64 * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                }
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for k in (1..=mn).rev() {
                c[j][k] = (c4 * c[j][k] - k as f64 * c[j][k - 1]) / c3;
            }
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    c.iter().map(|w| w[1]).collect()
}

const STENCIL: usize = 9;

/// Derivative of samples on a grid by 9-point stencils, one-sided near the ends.
fn derivative(x: &[f64], y: &[f64]) -> Vec<f64> {
    let n = x.len();
    (0..n)
        .map(|i| {
            let lo = i.saturating_sub(STENCIL / 2).min(n - STENCIL);
            let w = fd_weights(x[i], &x[lo..lo + STENCIL]);
            w.iter().zip(&y[lo..lo + STENCIL]).map(|(a, b)| a * b).sum()
        })
        .collect()
}

/// Residual of the eigen-equation and the reflection symmetry of the samples.
///
/// `u/√sinθ` is smooth up to the endpoints for the regular solution, so it
/// is differentiated instead of `u` itself.
pub fn diagnostics(op: &AngularOperator, lambda: f64, efun: &Eigenfunction) -> Diagnostics {
    let th = &efun.theta;
    let n = th.len();
    let sq: Vec<f64> = th.iter().map(|t| t.sin().sqrt()).collect();
    let deriv = |u: &[f64]| -> Vec<f64> {
        let phi: Vec<f64> = u.iter().zip(&sq).map(|(v, s)| v / s).collect();
        let dphi = derivative(th, &phi);
        (0..n)
            .map(|i| sq[i] * dphi[i] + th[i].cos() / (2.0 * sq[i]) * phi[i])
            .collect()
    };
    let df = deriv(&efun.f);
    let dg = deriv(&efun.g);
    let mut res: f64 = 0.0;
    for i in 0..n {
        let (t, f, g) = (th[i], efun.f[i], efun.g[i]);
        let qs = op.q(t) + op.s(t);
        let d = op.d(t);
        let rf = -d * f + dg[i] + qs * g - lambda * f;
        let rg = -df[i] + qs * f + d * g - lambda * g;
        res = res.max(rf.abs()).max(rg.abs());
    }
    let sym = (0..n)
        .map(|i| (efun.f[i].abs() - efun.g[n - 1 - i].abs()).abs())
        .fold(0.0, f64::max);
    Diagnostics {
        residual: res / efun.sup_norm(),
        symmetry_defect: sym,
    }
}
