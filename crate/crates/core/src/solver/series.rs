//! Frobenius starting values at the regular-singular endpoints.

use crate::angular::AngularParams;

/// Indicial exponents of the square-integrable solution, `(f, g)` at each end.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrobeniusExponents {
    pub at0: (f64, f64),
    pub at_pi: (f64, f64),
}

pub fn frobenius_exponents(k: i32) -> FrobeniusExponents {
    let kappa = k as f64 + 0.5;
    let r = kappa.abs();
    if kappa > 0.0 {
        FrobeniusExponents {
            at0: (r, r + 1.0),
            at_pi: (r + 1.0, r),
        }
    } else {
        FrobeniusExponents {
            at0: (r + 1.0, r),
            at_pi: (r, r + 1.0),
        }
    }
}

/// Taylor coefficients of `x / sin x` up to `x^order`.
fn x_over_sin(order: usize) -> Vec<f64> {
    // Invert sin(x)/x = Σ (-1)^j x^{2j} / (2j+1)!.
    let mut s = vec![0.0; order + 1];
    let mut fact = 1.0; // (2i+1)!
    for i in 0..=order / 2 {
        if i > 0 {
            fact *= (2 * i * (2 * i + 1)) as f64;
        }
        s[2 * i] = if i % 2 == 0 { 1.0 } else { -1.0 } / fact;
    }
    let mut inv = vec![0.0; order + 1];
    inv[0] = 1.0;
    for n in 1..=order {
        inv[n] = -(1..=n).map(|j| s[j] * inv[n - j]).sum::<f64>();
    }
    inv
}

/// Taylor coefficients of `x sin x` and `x cos x`.
fn x_sin_cos(order: usize) -> (Vec<f64>, Vec<f64>) {
    let mut xs = vec![0.0; order + 1];
    let mut xc = vec![0.0; order + 1];
    let mut fact = 1.0; // j!
    for j in 0..order {
        if j > 0 {
            fact *= j as f64;
        }
        let c = match j % 4 {
            0 => (0.0, 1.0),
            1 => (1.0, 0.0),
            2 => (0.0, -1.0),
            _ => (-1.0, 0.0),
        };
        // sin x = Σ c.0 x^j / j!, cos x = Σ c.1 x^j / j!
        xs[j + 1] = c.0 / fact;
        xc[j + 1] = c.1 / fact;
    }
    (xs, xc)
}

/// Regular solution of `x u' = P(x) u` near `x = 0`, with the factor `x^ρ`
/// removed, evaluated at `x` and normalised to unit length.
///
/// `P` is the system at `θ = 0` (`right = false`) or, in `t = π - θ`, at `θ = π`.
pub fn frobenius_start(
    p: &AngularParams,
    lambda: f64,
    order: usize,
    x: f64,
    right: bool,
) -> [f64; 2] {
    let kappa = p.kappa();
    let (am, aw) = (p.am(), p.aomega());
    let xq = x_over_sin(order);
    let (xsin, xcos) = x_sin_cos(order);
    let sgn = if right { -1.0 } else { 1.0 };

    // P_i for i = 0..=order.
    let mut pm = vec![[[0.0; 2]; 2]; order + 1];
    for i in 0..=order {
        let d = kappa * xq[i] + aw * xsin[i];
        let lx = if i == 1 { lambda } else { 0.0 };
        pm[i][0][0] = sgn * d;
        pm[i][1][1] = -sgn * d;
        if right {
            pm[i][0][1] = am * xcos[i] + lx;
            pm[i][1][0] = am * xcos[i] - lx;
        } else {
            pm[i][0][1] = am * xcos[i] - lx;
            pm[i][1][0] = am * xcos[i] + lx;
        }
    }

    let rho = kappa.abs();
    let d0 = [pm[0][0][0], pm[0][1][1]];
    let mut c = vec![[0.0; 2]; order + 1];
    c[0] = if (d0[0] - rho).abs() < 1e-12 {
        [1.0, 0.0]
    } else {
        [0.0, 1.0]
    };
    for j in 1..=order {
        let mut rhs = [0.0; 2];
        for i in 1..=j {
            for r in 0..2 {
                rhs[r] += pm[i][r][0] * c[j - i][0] + pm[i][r][1] * c[j - i][1];
            }
        }
        for r in 0..2 {
            c[j][r] = rhs[r] / (rho + j as f64 - d0[r]);
        }
    }

    let mut u = [0.0; 2];
    let mut pow = 1.0;
    for cj in &c {
        u[0] += cj[0] * pow;
        u[1] += cj[1] * pow;
        pow *= x;
    }
    let n = u[0].hypot(u[1]);
    [u[0] / n, u[1] / n]
}
