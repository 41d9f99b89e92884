//! Labelling eigenvalues by continuation from `a = 0`.
//!
//! Along `t ↦ A(t·a)` every eigenvalue moves by at most `Δt·max(|am|, |aω|)`,
//! the norm of the `a`-dependent coefficient matrix. If that step `δ` is at
//! most half the distance from `λ₁(t)` to its neighbours, `[λ₁(t) - δ, λ₁(t) + δ]`
//! contains exactly one eigenvalue of `A(t + Δt)`, and it is `λ₁(t + Δt)`.
//! Since the spectrum is simple and ordered by index, knowing `λ₁` labels
//! every other eigenvalue.

use serde::Serialize;

use super::diagnostics::diagnostics;
use super::galerkin::galerkin_eigenvalues;
use super::shooting::{eigenfunction, find_roots, miss_distance};
use super::spectrum::{Spectrum, SpectrumEntry};
use super::{AngularOperator, Result, ShootingConfig, SolverError};
use crate::angular::{exact_spectrum_a0, nu_enclosure, AngularParams};

/// Largest number of continuation steps before giving up.
pub const MAX_STEPS: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Method {
    Shooting,
    Galerkin,
}

fn perturbation_size(p: &AngularParams) -> f64 {
    p.am().abs().max(p.aomega().abs())
}

fn galerkin_size(p: &AngularParams, top: f64) -> usize {
    let _ = p;
    (4.0 * (top + 2.0)).ceil().max(32.0) as usize
}

/// Eigenvalues of `A(t·a)` in `[lo, hi]`.
fn eigen_in(
    p: &AngularParams,
    t: f64,
    lo: f64,
    hi: f64,
    cfg: &ShootingConfig,
    method: Method,
) -> Result<Vec<f64>> {
    let q = p.scaled(t);
    match method {
        Method::Shooting => {
            let op = AngularOperator::new(q);
            let step = cfg.scan_step.min((hi - lo) / 24.0);
            find_roots(|l| miss_distance(&op, cfg, l), lo, hi, step, cfg.eig_tol)
        }
        Method::Galerkin => {
            let top = lo.abs().max(hi.abs());
            let ev = galerkin_eigenvalues(&q, galerkin_size(p, top))?;
            Ok(ev.into_iter().filter(|l| *l >= lo && *l <= hi).collect())
        }
    }
}

/// `λ₁` at the full parameter value, certified by the step rule above.
pub fn track_lambda1(p: &AngularParams, cfg: &ShootingConfig, method: Method) -> Result<f64> {
    let start = exact_spectrum_a0(p.k, 1);
    let delta = perturbation_size(p);
    if delta == 0.0 {
        return Ok(start);
    }
    let mut steps = ((4.0 * delta).ceil() as usize).max(1);
    let mut last_failure = String::new();
    while steps <= MAX_STEPS {
        match track_with(p, cfg, method, start, delta, steps) {
            Ok(l) => return Ok(l),
            Err(SolverError::ContinuationAmbiguity(msg)) => last_failure = msg,
            Err(e) => return Err(e),
        }
        steps *= 2;
    }
    Err(SolverError::ContinuationAmbiguity(format!(
        "no certified path with {MAX_STEPS} steps; {last_failure}"
    )))
}

fn track_with(
    p: &AngularParams,
    cfg: &ShootingConfig,
    method: Method,
    start: f64,
    delta: f64,
    steps: usize,
) -> Result<f64> {
    let ds = delta / steps as f64;
    // At a = 0 the gaps around λ₁ are 1 and 2|κ| + 1.
    if 2.0 * ds > 1.0 {
        return Err(SolverError::ContinuationAmbiguity(format!(
            "step {ds} too large at a = 0"
        )));
    }
    let mut lambda = start;
    for j in 1..=steps {
        let t = j as f64 / steps as f64;
        let roots = eigen_in(p, t, lambda - 3.0 * ds, lambda + 3.0 * ds, cfg, method)?;
        let slack = 1e-9 * (1.0 + lambda.abs());
        let inside: Vec<f64> = roots
            .iter()
            .copied()
            .filter(|r| (r - lambda).abs() <= ds + slack)
            .collect();
        if inside.len() != 1 {
            return Err(SolverError::ContinuationAmbiguity(format!(
                "{} candidates within {ds:.3e} of λ₁ = {lambda} at t = {t}",
                inside.len()
            )));
        }
        let next = inside[0];
        if j < steps
            && roots
                .iter()
                .any(|r| *r != next && (r - next).abs() < 2.0 * ds)
        {
            return Err(SolverError::ContinuationAmbiguity(format!(
                "neighbour within {:.3e} of λ₁ at t = {t}",
                2.0 * ds
            )));
        }
        lambda = next;
    }
    Ok(lambda)
}

/// Assigns continuation indices to an unlabelled spectrum.
pub fn enumerate_indices(
    op: &AngularOperator,
    cfg: &ShootingConfig,
    raw: Spectrum,
) -> Result<Spectrum> {
    let l1 = track_lambda1(&op.params, cfg, Method::Shooting)?;
    label(raw, l1)
}

fn label(mut raw: Spectrum, l1: f64) -> Result<Spectrum> {
    raw.entries.sort_by(|a, b| a.lambda.total_cmp(&b.lambda));
    let tol = 1e-6 * (1.0 + l1.abs());
    let pos = raw
        .entries
        .iter()
        .position(|e| (e.lambda - l1).abs() < tol)
        .ok_or_else(|| {
            SolverError::WindowTooSmall(format!("λ₁ = {l1} is not among the computed eigenvalues"))
        })?;
    for (i, e) in raw.entries.iter_mut().enumerate() {
        let d = i as i32 - pos as i32;
        e.n = Some(if d >= 0 { d + 1 } else { d });
    }
    Ok(raw)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct MPlusMinus {
    pub m_minus: i32,
    pub m_plus: i32,
    pub interval_count: usize,
}

/// `m₊ = p - 1` and `m₋ = q + 1`, where `λ_p` is the first eigenvalue above
/// `|am|` and `λ_q` the last one below `-|am|`.
pub fn m_pm_count(spectrum: &Spectrum) -> Result<MPlusMinus> {
    let am = spectrum.params.am().abs();
    let mut labelled: Vec<(i32, f64)> = spectrum
        .entries
        .iter()
        .filter_map(|e| e.n.map(|n| (n, e.lambda)))
        .collect();
    labelled.sort_by_key(|e| e.0);
    let p = labelled.iter().find(|e| e.1 > am).map(|e| e.0);
    let q = labelled.iter().rev().find(|e| e.1 < -am).map(|e| e.0);
    let (Some(p), Some(q)) = (p, q) else {
        return Err(SolverError::WindowTooSmall(format!(
            "spectrum does not reach past ±{am}"
        )));
    };
    let (m_plus, m_minus) = (p - 1, q + 1);
    let count = if m_minus <= 0 && 0 <= m_plus {
        m_plus - m_minus
    } else {
        m_plus - m_minus + 1
    };
    let direct = labelled.iter().filter(|e| e.1.abs() <= am).count();
    debug_assert_eq!(count.max(0) as usize, direct);
    Ok(MPlusMinus {
        m_minus,
        m_plus,
        interval_count: direct,
    })
}

/// Labelled eigenvalues `λ_n`, `0 < |n| ≤ n_max`, with eigenfunctions and
/// diagnostics (shooting only), and the `m±` bookkeeping.
pub fn solve_indexed(
    p: &AngularParams,
    n_max: u32,
    cfg: &ShootingConfig,
    method: Method,
) -> Result<Spectrum> {
    let n_max = n_max.max(1) as i32;
    let l1 = track_lambda1(p, cfg, method)?;
    let delta = perturbation_size(p);
    let lo = exact_spectrum_a0(p.k, -n_max) - delta - 0.25;
    let hi = exact_spectrum_a0(p.k, n_max) + delta + 0.25;
    let roots = eigen_in(p, 1.0, lo, hi, cfg, method)?;
    let raw = Spectrum::unlabelled(
        *p,
        roots
            .into_iter()
            .map(|lambda| SpectrumEntry {
                n: None,
                lambda,
                efun: None,
                diagnostics: None,
            })
            .collect(),
    );
    let mut s = label(raw, l1)?;
    s.entries.retain(|e| e.n.is_some_and(|n| n.abs() <= n_max));
    for n in (-n_max..=n_max).filter(|&n| n != 0) {
        let Some(l) = s.lambda(n) else {
            return Err(SolverError::WindowTooSmall(format!(
                "λ_{n} not found in [{lo}, {hi}]"
            )));
        };
        let c = exact_spectrum_a0(p.k, n);
        if (l - c).abs() > delta + 1e-9 {
            return Err(SolverError::ContinuationAmbiguity(format!(
                "λ_{n} = {l} is farther than {delta} from λ_{n}(0) = {c}"
            )));
        }
    }
    if method == Method::Shooting {
        let op = AngularOperator::new(*p);
        for e in &mut s.entries {
            let ef = eigenfunction(&op, cfg, e.lambda)?;
            e.diagnostics = Some(diagnostics(&op, e.lambda, &ef));
            e.efun = Some(ef);
        }
    }
    if let Ok(m) = m_pm_count(&s) {
        s.m_minus = Some(m.m_minus);
        s.m_plus = Some(m.m_plus);
        s.interval_count = Some(m.interval_count);
    }
    Ok(s)
}

/// `ν_n`, the eigenvalues of `BB*`, as squares of the positive eigenvalues at `m = 0`.
pub fn nu_numeric(p: &AngularParams, n_max: u32, cfg: &ShootingConfig) -> Result<Vec<f64>> {
    let q = AngularParams { m: 0.0, ..*p };
    let op = AngularOperator::new(q);
    let top = nu_enclosure(&q, n_max).hi.sqrt() + 0.5;
    let roots = find_roots(
        |l| miss_distance(&op, cfg, l),
        0.0,
        top,
        cfg.scan_step,
        cfg.eig_tol,
    )?;
    let pos: Vec<f64> = roots
        .into_iter()
        .filter(|l| *l > 0.0)
        .take(n_max as usize)
        .collect();
    if pos.len() < n_max as usize {
        return Err(SolverError::WindowTooSmall(format!(
            "found {} of {n_max} positive eigenvalues below {top}",
            pos.len()
        )));
    }
    Ok(pos.iter().map(|l| l * l).collect())
}
