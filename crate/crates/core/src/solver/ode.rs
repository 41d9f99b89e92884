//! Adaptive Dormand-Prince 5(4) integration of linear 2×2 systems.
//!
//! The state is renormalised after every accepted step and the discarded
//! growth is accumulated as a logarithm, so exponentially growing solutions
//! never overflow.

use super::SolverError;

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
const B: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
const B_HAT: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

pub type State = [f64; 2];

fn axpy(y: &State, h: f64, ks: &[State], coef: &[f64]) -> State {
    let mut out = *y;
    for (k, c) in ks.iter().zip(coef) {
        out[0] += h * c * k[0];
        out[1] += h * c * k[1];
    }
    out
}

/// One step from `(t, y)` with `k1 = f(t, y)`. Returns the 5th-order
/// solution, `f` at the new point and the embedded error estimate.
pub fn dopri_step<F: Fn(f64, &State) -> State>(
    f: &F,
    t: f64,
    y: &State,
    k1: State,
    h: f64,
) -> (State, State, State) {
    let mut k = [[0.0; 2]; 7];
    k[0] = k1;
    for s in 1..7 {
        let ys = axpy(y, h, &k[..s], &A[s][..s]);
        k[s] = f(t + C[s] * h, &ys);
    }
    let y5 = axpy(y, h, &k, &B);
    let mut err = [0.0; 2];
    for (i, e) in err.iter_mut().enumerate() {
        *e = h * (0..7).map(|s| (B[s] - B_HAT[s]) * k[s][i]).sum::<f64>();
    }
    (y5, k[6], err)
}

#[derive(Debug, Clone, Copy)]
pub struct Dopri5 {
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
}

impl Dopri5 {
    pub fn new(tol: f64) -> Self {
        Self {
            rtol: tol,
            atol: tol,
            max_steps: 200_000,
        }
    }
}

/// A unit vector together with `ln` of the norm it was divided by.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scaled {
    pub dir: State,
    pub log_scale: f64,
}

impl Dopri5 {
    /// Integrates from `t0` to `t1` (either direction), recording the
    /// solution at each of `outputs`, which must be ordered from `t0` towards `t1`.
    pub fn integrate<F: Fn(f64, &State) -> State>(
        &self,
        f: &F,
        t0: f64,
        y0: State,
        t1: f64,
        outputs: &[f64],
    ) -> Result<(Scaled, Vec<Scaled>), SolverError> {
        let dir = (t1 - t0).signum();
        let norm0 = y0[0].hypot(y0[1]);
        let mut y = [y0[0] / norm0, y0[1] / norm0];
        let mut log_scale = norm0.ln();
        let mut t = t0;
        let mut k1 = f(t, &y);

        let d1 = k1[0].hypot(k1[1]).max(1e-300);
        let mut h = dir * (0.01 / d1).min((t1 - t0).abs());
        let mut samples = Vec::with_capacity(outputs.len());
        let mut next_out = 0;
        let mut steps = 0;

        while (t1 - t) * dir > 0.0 {
            steps += 1;
            if steps > self.max_steps {
                return Err(SolverError::IntegratorFailure {
                    t,
                    reason: "step budget exhausted".into(),
                });
            }
            let target = outputs.get(next_out).copied().unwrap_or(t1);
            let mut hit = false;
            if (t + h - target) * dir >= 0.0 {
                h = target - t;
                hit = true;
            }
            if h.abs() < 1e-14 * t.abs().max(1.0) {
                return Err(SolverError::IntegratorFailure {
                    t,
                    reason: "step size collapsed".into(),
                });
            }
            let (y5, k7, e) = dopri_step(f, t, &y, k1, h);
            let sc = |i: usize| self.atol + self.rtol * y[i].abs().max(y5[i].abs());
            let err = (((e[0] / sc(0)).powi(2) + (e[1] / sc(1)).powi(2)) / 2.0).sqrt();
            if !err.is_finite() {
                h *= 0.2;
                continue;
            }
            if err <= 1.0 {
                t = if hit { target } else { t + h };
                let n = y5[0].hypot(y5[1]);
                y = [y5[0] / n, y5[1] / n];
                k1 = [k7[0] / n, k7[1] / n];
                log_scale += n.ln();
                if hit && next_out < outputs.len() {
                    samples.push(Scaled { dir: y, log_scale });
                    next_out += 1;
                }
            }
            let fac = if err == 0.0 {
                5.0
            } else {
                (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
            };
            h *= if err <= 1.0 { fac } else { fac.min(1.0) };
        }
        Ok((Scaled { dir: y, log_scale }, samples))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn rotation(_: f64, y: &State) -> State {
        [-y[1], y[0]]
    }

    #[test]
    fn fifth_order_convergence() {
        // Fixed steps on y' = Jy; error ratio on halving h should approach 2^5.
        let run = |n: usize| {
            let h = 1.0 / n as f64;
            let mut y = [1.0, 0.0];
            let mut k1 = rotation(0.0, &y);
            for i in 0..n {
                let (y5, k7, _) = dopri_step(&rotation, i as f64 * h, &y, k1, h);
                y = y5;
                k1 = k7;
            }
            ((y[0] - 1f64.cos()).powi(2) + (y[1] - 1f64.sin()).powi(2)).sqrt()
        };
        let (e1, e2) = (run(8), run(16));
        let order = (e1 / e2).log2();
        assert!((order - 5.0).abs() < 0.3, "observed order {order}");
    }

    #[test]
    fn embedded_estimate_is_fourth_order() {
        let (_, _, e1) = dopri_step(&rotation, 0.0, &[1.0, 0.0], [0.0, 1.0], 0.1);
        let (_, _, e2) = dopri_step(&rotation, 0.0, &[1.0, 0.0], [0.0, 1.0], 0.05);
        let ratio = e1[0].hypot(e1[1]) / e2[0].hypot(e2[1]);
        assert!((ratio.log2() - 5.0).abs() < 0.5, "{ratio}");
    }

    #[test]
    fn adaptive_growth_and_outputs() {
        // y' = diag(1, -1) y from 0 to 30; the scale must survive e^30.
        let f = |_: f64, y: &State| [y[0], -y[1]];
        let (end, samples) = Dopri5::new(1e-11)
            .integrate(&f, 0.0, [1.0, 1.0], 30.0, &[10.0, 20.0])
            .unwrap();
        assert_abs_diff_eq!(end.log_scale + end.dir[0].ln(), 30.0, epsilon = 1e-8);
        assert_eq!(samples.len(), 2);
        assert_abs_diff_eq!(
            samples[0].log_scale + samples[0].dir[0].ln(),
            10.0,
            epsilon = 1e-8
        );
        // Backwards.
        let (end, _) = Dopri5::new(1e-11)
            .integrate(&rotation, 2.0, [1.0, 0.0], 0.0, &[])
            .unwrap();
        assert_abs_diff_eq!(end.dir[0], 2f64.cos(), epsilon = 1e-9);
        assert_abs_diff_eq!(end.dir[1], -2f64.sin(), epsilon = 1e-9);
    }
}
