use std::f64::consts::PI;

use super::ode::{Dopri5, Scaled};
use super::series::frobenius_start;
use super::spectrum::{grid, Eigenfunction, Spectrum, SpectrumEntry};
use super::{AngularOperator, Result, ShootingConfig, SolverError};

fn integrate_side(
    op: &AngularOperator,
    cfg: &ShootingConfig,
    lambda: f64,
    right: bool,
    outputs: &[f64],
) -> Result<(Scaled, Vec<Scaled>)> {
    let x0 = cfg.start_offset;
    let y0 = frobenius_start(&op.params, lambda, cfg.series_order, x0, right);
    let t0 = if right { PI - x0 } else { x0 };
    let f = |t: f64, u: &[f64; 2]| op.rhs(t, lambda, u);
    Dopri5::new(cfg.integrator_tol).integrate(&f, t0, y0, cfg.match_point, outputs)
}

/// Cross determinant of the unit left and right regular solutions at the
/// match point; zero exactly at eigenvalues.
pub fn miss_distance(op: &AngularOperator, cfg: &ShootingConfig, lambda: f64) -> Result<f64> {
    let (l, _) = integrate_side(op, cfg, lambda, false, &[])?;
    let (r, _) = integrate_side(op, cfg, lambda, true, &[])?;
    Ok(l.dir[0] * r.dir[1] - r.dir[0] * l.dir[1])
}

/// Illinois-modified regula falsi on a sign-change bracket.
fn refine<F: FnMut(f64) -> Result<f64>>(
    f: &mut F,
    mut a: f64,
    mut fa: f64,
    mut b: f64,
    mut fb: f64,
    tol: f64,
) -> Result<f64> {
    let mut side = 0;
    for _ in 0..200 {
        if (b - a).abs() <= tol * (1.0 + a.abs().max(b.abs())) {
            break;
        }
        let mut c = (a * fb - b * fa) / (fb - fa);
        if !(c > a.min(b) && c < a.max(b)) {
            c = 0.5 * (a + b);
        }
        let fc = f(c)?;
        if fc == 0.0 {
            return Ok(c);
        }
        if fc.signum() == fb.signum() {
            b = c;
            fb = fc;
            if side == -1 {
                fa *= 0.5;
            }
            side = -1;
        } else {
            a = c;
            fa = fc;
            if side == 1 {
                fb *= 0.5;
            }
            side = 1;
        }
    }
    Ok(if fa.abs() < fb.abs() { a } else { b })
}

/// Roots of a continuous function on `[lo, hi]` by a uniform scan and
/// bracket refinement. Local minima of `|f|` without a sign change are
/// examined on a finer grid; if they still show no crossing but `|f|`
/// nearly vanishes, a double root is reported.
pub fn find_roots<F: FnMut(f64) -> Result<f64>>(
    mut f: F,
    lo: f64,
    hi: f64,
    step: f64,
    tol: f64,
) -> Result<Vec<f64>> {
    let n = ((hi - lo) / step).ceil().max(2.0) as usize;
    let xs: Vec<f64> = (0..=n)
        .map(|i| lo + (hi - lo) * i as f64 / n as f64)
        .collect();
    let mut ys = Vec::with_capacity(xs.len());
    for &x in &xs {
        ys.push(f(x)?);
    }
    let mut roots = Vec::new();
    for i in 0..n {
        if ys[i] == 0.0 {
            roots.push(xs[i]);
        } else if ys[i] * ys[i + 1] < 0.0 {
            roots.push(refine(&mut f, xs[i], ys[i], xs[i + 1], ys[i + 1], tol)?);
        } else if i > 0
            && ys[i].abs() < ys[i - 1].abs()
            && ys[i].abs() < ys[i + 1].abs()
            && ys[i].abs() < 0.05
        {
            // A dip: look closer for a close pair of roots.
            let sub = find_roots_plain(&mut f, xs[i - 1], xs[i + 1], 64, tol)?;
            if sub.is_empty() {
                let m = golden_min(&mut f, xs[i - 1], xs[i + 1])?;
                if m.1 < 1e-6 {
                    return Err(SolverError::SuspectedDoubleRoot { lambda: m.0 });
                }
            } else {
                roots.extend(sub);
            }
        }
    }
    if ys[n] == 0.0 {
        roots.push(xs[n]);
    }
    roots.sort_by(f64::total_cmp);
    roots.dedup_by(|a, b| (*a - *b).abs() <= 10.0 * tol * (1.0 + a.abs()));
    Ok(roots)
}

fn find_roots_plain<F: FnMut(f64) -> Result<f64>>(
    f: &mut F,
    lo: f64,
    hi: f64,
    n: usize,
    tol: f64,
) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    let mut x0 = lo;
    let mut y0 = f(lo)?;
    for i in 1..=n {
        let x1 = lo + (hi - lo) * i as f64 / n as f64;
        let y1 = f(x1)?;
        if y0 * y1 < 0.0 {
            out.push(refine(f, x0, y0, x1, y1, tol)?);
        }
        x0 = x1;
        y0 = y1;
    }
    Ok(out)
}

fn golden_min<F: FnMut(f64) -> Result<f64>>(
    f: &mut F,
    mut a: f64,
    mut b: f64,
) -> Result<(f64, f64)> {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c)?.abs(), f(d)?.abs());
    for _ in 0..80 {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c)?.abs();
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d)?.abs();
        }
    }
    Ok(if fc < fd { (c, fc) } else { (d, fd) })
}

/// Eigenfunction samples on the uniform interior grid, assembled from the
/// left solution below the match point and the rescaled right solution above it.
pub fn eigenfunction(
    op: &AngularOperator,
    cfg: &ShootingConfig,
    lambda: f64,
) -> Result<Eigenfunction> {
    let theta = grid();
    let tm = cfg.match_point;
    let left_pts: Vec<f64> = theta.iter().copied().filter(|&t| t < tm).collect();
    let mut right_pts: Vec<f64> = theta.iter().copied().filter(|&t| t >= tm).collect();
    right_pts.reverse();
    // The integrator records the end point itself only when asked to.
    if right_pts.last() != Some(&tm) {
        right_pts.push(tm);
    }

    let (l_end, l_samples) = integrate_side(op, cfg, lambda, false, &left_pts)?;
    let (r_end, mut r_samples) = integrate_side(op, cfg, lambda, true, &right_pts)?;
    if right_pts.last() == Some(&tm) && !theta.contains(&tm) {
        r_samples.pop();
    }
    // Right solution scaled to agree with the left one at the match point.
    let c = l_end.dir[0] * r_end.dir[0] + l_end.dir[1] * r_end.dir[1];

    let mut f = Vec::with_capacity(theta.len());
    let mut g = Vec::with_capacity(theta.len());
    for s in &l_samples {
        let w = (s.log_scale - l_end.log_scale).exp();
        f.push(s.dir[0] * w);
        g.push(s.dir[1] * w);
    }
    for s in r_samples.iter().rev() {
        let w = c * (s.log_scale - r_end.log_scale).exp();
        f.push(s.dir[0] * w);
        g.push(s.dir[1] * w);
    }
    Ok(Eigenfunction::normalised(theta, f, g))
}

/// All eigenvalues in `window`, unlabelled, with eigenfunctions.
pub fn shooting_spectrum(
    op: &AngularOperator,
    cfg: &ShootingConfig,
    window: (f64, f64),
) -> Result<Spectrum> {
    let roots = find_roots(
        |l| miss_distance(op, cfg, l),
        window.0,
        window.1,
        cfg.scan_step,
        cfg.eig_tol,
    )?;
    let mut entries = Vec::with_capacity(roots.len());
    for lambda in roots {
        let efun = eigenfunction(op, cfg, lambda)?;
        entries.push(SpectrumEntry {
            n: None,
            lambda,
            efun: Some(efun),
            diagnostics: None,
        });
    }
    Ok(Spectrum::unlabelled(op.params, entries))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::angular::{exact_spectrum_a0, AngularParams};

    #[test]
    fn miss_vanishes_at_exact_eigenvalue() {
        let op = AngularOperator::new(AngularParams::new(0.0, 0.0, 0.0, 0));
        let cfg = ShootingConfig::default();
        assert!(miss_distance(&op, &cfg, 1.0).unwrap().abs() < 1e-8);
        assert!(miss_distance(&op, &cfg, 0.5).unwrap().abs() > 1e-3);
    }

    #[test]
    fn a0_spectrum_in_window() {
        let op = AngularOperator::new(AngularParams::new(0.0, 0.0, 0.0, 0));
        let s = shooting_spectrum(&op, &ShootingConfig::default(), (-5.5, 5.5)).unwrap();
        let got: Vec<f64> = s.entries.iter().map(|e| e.lambda).collect();
        let want: Vec<f64> = (-5..=5)
            .filter(|&n| n != 0)
            .map(|n| exact_spectrum_a0(0, n))
            .collect();
        assert_eq!(got.len(), want.len(), "{got:?}");
        for (a, b) in got.iter().zip(&want) {
            assert!((a - b).abs() < 1e-8, "{a} vs {b}");
        }
    }

    #[test]
    fn finds_both_roots_of_a_close_pair() {
        let r = find_roots(|x| Ok((x - 0.301) * (x - 0.311)), 0.0, 1.0, 0.05, 1e-14).unwrap();
        assert_eq!(r.len(), 2);
        assert!((r[0] - 0.301).abs() < 1e-12 && (r[1] - 0.311).abs() < 1e-12);
        let e = find_roots(|x| Ok((x - 0.501f64).powi(2)), 0.0, 1.0, 0.05, 1e-14);
        assert!(matches!(e, Err(SolverError::SuspectedDoubleRoot { .. })));
    }
}
