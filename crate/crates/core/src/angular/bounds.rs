use serde::Serialize;

use super::{AngularError, AngularParams};

type Result<T> = std::result::Result<T, AngularError>;

/// `Re √r`, i.e. 0 for negative radicands.
pub fn re_sqrt(r: f64) -> f64 {
    if r > 0.0 {
        r.sqrt()
    } else {
        0.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        Self { lo, hi }
    }

    pub fn contains(&self, x: f64, tol: f64) -> bool {
        x >= self.lo - tol && x <= self.hi + tol
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    fn negated(self) -> Self {
        Self {
            lo: -self.hi,
            hi: -self.lo,
        }
    }
}

/// `(Ω₋, Ω₊)` from the Sturm comparison of `BB*` with the `a = 0` operator.
pub fn omega_pm(p: &AngularParams) -> (f64, f64) {
    let aw = p.aomega();
    let cross = 2.0 * p.kappa() * aw;
    let minus = cross - aw.abs();
    let plus = if (2.0 * aw).abs() > 1.0 {
        aw * aw + 0.25 + cross
    } else {
        cross + aw.abs()
    };
    (minus, plus)
}

fn base(p: &AngularParams, n: u32) -> f64 {
    p.kappa().abs() - 0.5 + n as f64
}

/// Enclosure of the n-th eigenvalue `ν_n` of `BB*`.
pub fn nu_enclosure(p: &AngularParams, n: u32) -> Interval {
    assert!(n >= 1, "ν_n is indexed from 1");
    let (om, op) = omega_pm(p);
    let b = base(p, n);
    Interval::new((b * b + om).max(0.0), b * b + op)
}

fn upper_sqrt(b: f64, op: f64) -> Result<f64> {
    let r = b * b + op;
    if r < 0.0 {
        return Err(AngularError::RadicandNegativeUpper { radicand: r });
    }
    Ok(r.sqrt())
}

/// `(λ̌_{n+n0}, λ̂_{n+n0})`, bounds for the eigenvalue `λ_{m₊+n}`.
pub fn variational_bounds(p: &AngularParams, n: u32, n0: u32) -> Result<(f64, f64)> {
    assert!(n >= 1, "bounds are indexed from 1");
    let (om, op) = omega_pm(p);
    let b = base(p, n + n0);
    let am = p.am().abs();
    let lo = am.max(re_sqrt(b * b + om) - am);
    Ok((lo, upper_sqrt(b, op)? + am))
}

/// Bounds on `λ_n` from perturbation in `m` with `am cosθ` as a bounded perturbation.
pub fn spt_bounds(p: &AngularParams, n: u32) -> Result<(f64, f64)> {
    assert!(n >= 1, "bounds are indexed from 1");
    let (om, op) = omega_pm(p);
    let b = base(p, n);
    let am = p.am().abs();
    Ok((re_sqrt(b * b + om) - am, upper_sqrt(b, op)? + am))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "status", content = "value")]
pub enum LambdaQ {
    Defined(f64),
    Undefined,
}

impl LambdaQ {
    pub fn value(&self) -> Option<f64> {
        match self {
            LambdaQ::Defined(v) => Some(*v),
            LambdaQ::Undefined => None,
        }
    }
}

/// Lower bound on `|λ|` for every eigenvalue, from the quadratic form of `A²`.
pub fn lambda_q(p: &AngularParams) -> LambdaQ {
    let kappa = p.kappa();
    let aw = p.aomega();
    if aw.abs() <= kappa.abs() {
        LambdaQ::Defined((aw + kappa).abs())
    } else if kappa.signum() * aw >= kappa.abs() {
        LambdaQ::Defined(2.0 * (aw * kappa).sqrt())
    } else {
        LambdaQ::Undefined
    }
}

/// `λ_n(0)`.
pub fn exact_spectrum_a0(k: i32, n: i32) -> f64 {
    assert!(n != 0, "eigenvalues are indexed by nonzero integers");
    let kappa = (k as f64 + 0.5).abs();
    (n.signum() as f64) * (kappa - 0.5 + n.unsigned_abs() as f64)
}

/// `λ_n(0) ± max(|am|, |aω|)`: the `a`-dependent part of the operator is a
/// multiplication by a matrix of norm at most `max(|am|, |aω|)`.
pub fn a_perturbation_bounds(p: &AngularParams, n: i32) -> Result<(f64, f64)> {
    if n == 0 {
        return Err(AngularError::ZeroIndex);
    }
    let c = exact_spectrum_a0(p.k, n);
    let d = p.am().abs().max(p.aomega().abs());
    Ok((c - d, c + d))
}

/// An endpoint improvement that relies on an external lemma; reported as unverified.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Refinement {
    /// `1` for a lower bound on `λ₁`, `-1` for an upper bound on `λ₋₁`.
    pub index: i32,
    pub value: f64,
}

/// For `k ≤ -1`: `λ₁ ≥ √ν₁`; for `k ≥ 0`: `λ₋₁ ≤ -√ν₁`, with `ν₁` replaced by
/// its certified lower bound. Applies only when `[-|am|, |am|]` is certified
/// free of eigenvalues and `√ν₁ > |am|`.
pub fn refined_endpoint_bounds(p: &AngularParams, enabled: bool) -> Option<Refinement> {
    if !enabled {
        return None;
    }
    let am = p.am().abs();
    let root = nu_enclosure(p, 1).lo.sqrt();
    let (check, _) = variational_bounds(p, 1, 0).ok()?;
    if !(check > am && root > am) {
        return None;
    }
    Some(if p.k <= -1 {
        Refinement {
            index: 1,
            value: root,
        }
    } else {
        Refinement {
            index: -1,
            value: -root,
        }
    })
}

/// Intersection of several enclosures, remembering which one is active at each end.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Enclosure {
    pub interval: Interval,
    pub active_lo: &'static str,
    pub active_hi: &'static str,
}

impl Enclosure {
    fn whole() -> Self {
        Self {
            interval: Interval::new(f64::NEG_INFINITY, f64::INFINITY),
            active_lo: "none",
            active_hi: "none",
        }
    }

    // Ties keep the earlier bound, so the order of calls sets the precedence.
    fn lower(&mut self, v: f64, name: &'static str) {
        if v > self.interval.lo + 1e-12 {
            self.interval.lo = v;
            self.active_lo = name;
        }
    }

    fn upper(&mut self, v: f64, name: &'static str) {
        if v < self.interval.hi - 1e-12 {
            self.interval.hi = v;
            self.active_hi = name;
        }
    }

    fn negated(self) -> Self {
        Self {
            interval: self.interval.negated(),
            active_lo: self.active_hi,
            active_hi: self.active_lo,
        }
    }

    fn checked(self) -> Result<Self> {
        if self.interval.lo > self.interval.hi + 1e-12 {
            return Err(AngularError::EmptyIntersection {
                lo: self.interval.lo,
                hi: self.interval.hi,
            });
        }
        Ok(self)
    }
}

/// All closed-form bounds for the `n`-th positive eigenvalue above `|am|`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundSet {
    pub k: i32,
    pub am: f64,
    pub aomega: f64,
    pub n: u32,
    pub n0: u32,
    pub nu_lower: f64,
    pub nu_upper: f64,
    pub lambda_check: f64,
    pub lambda_hat: f64,
    /// The `λ̌` radicand was negative and `Re √·` clamped it.
    pub clamped: bool,
    pub spt_lower: f64,
    pub spt_upper: f64,
    pub apert_lower: f64,
    pub apert_upper: f64,
    pub lambda_q: LambdaQ,
    pub refined: Option<Refinement>,
    pub combined: Interval,
    pub active_lo: &'static str,
    pub active_hi: &'static str,
}

pub const BOUNDSET_CSV_HEADER: &str =
    "k,am,aomega,n,n0,nu_lo,nu_hi,lam_check,lam_hat,spt_lo,spt_hi,apert_lo,apert_hi,lamQ,comb_lo,comb_hi,active_lo,active_hi";

fn num(x: f64) -> String {
    format!("{x:.8}")
}

impl BoundSet {
    pub fn csv_row(&self) -> String {
        let lq = match self.lambda_q {
            LambdaQ::Defined(v) => num(v),
            LambdaQ::Undefined => "undefined".into(),
        };
        let mut active_lo = self.active_lo.to_string();
        if self.active_lo == "refined" {
            active_lo.push_str(" (unverified)");
        }
        [
            self.k.to_string(),
            num(self.am),
            num(self.aomega),
            self.n.to_string(),
            self.n0.to_string(),
            num(self.nu_lower),
            num(self.nu_upper),
            num(self.lambda_check),
            num(self.lambda_hat),
            num(self.spt_lower),
            num(self.spt_upper),
            num(self.apert_lower),
            num(self.apert_upper),
            lq,
            num(self.combined.lo),
            num(self.combined.hi),
            active_lo,
            self.active_hi.to_string(),
        ]
        .join(",")
    }
}

/// [`best_enclosure_with`] without the unverified refinements.
pub fn best_enclosure(p: &AngularParams, n: u32, n0: u32) -> Result<BoundSet> {
    best_enclosure_with(p, n, n0, false)
}

/// Bounds for `λ_{m₊+n}` assuming `m₊ = n0`, which is the situation the
/// index-shift criteria certify. The perturbation bounds then refer to the
/// continuation index `n + n0`.
pub fn best_enclosure_with(p: &AngularParams, n: u32, n0: u32, refine: bool) -> Result<BoundSet> {
    assert!(n >= 1, "bounds are indexed from 1");
    let idx = n + n0;
    let nu = nu_enclosure(p, idx);
    let (om, _) = omega_pm(p);
    let b = base(p, idx);
    let (lambda_check, lambda_hat) = variational_bounds(p, n, n0)?;
    let (spt_lower, spt_upper) = spt_bounds(p, idx)?;
    let (apert_lower, apert_upper) = a_perturbation_bounds(p, idx as i32)?;
    let lq = lambda_q(p);
    let refined = refined_endpoint_bounds(p, refine).filter(|r| r.index == 1 && idx == 1);

    let mut e = Enclosure::whole();
    e.lower(lambda_check, "variational");
    e.upper(lambda_hat, "variational");
    e.lower(spt_lower, "spt");
    e.upper(spt_upper, "spt");
    e.lower(apert_lower, "a-perturbation");
    e.upper(apert_upper, "a-perturbation");
    if let LambdaQ::Defined(q) = lq {
        e.lower(q, "lambda_q");
    }
    if let Some(r) = refined {
        e.lower(r.value, "refined");
    }
    let e = e.checked()?;

    Ok(BoundSet {
        k: p.k,
        am: p.am(),
        aomega: p.aomega(),
        n,
        n0,
        nu_lower: nu.lo,
        nu_upper: nu.hi,
        lambda_check,
        lambda_hat,
        clamped: b * b + om < 0.0,
        spt_lower,
        spt_upper,
        apert_lower,
        apert_upper,
        lambda_q: lq,
        refined,
        combined: e.interval,
        active_lo: e.active_lo,
        active_hi: e.active_hi,
    })
}

/// Combined enclosure of the continuation-indexed eigenvalue `λ_n`, `n ≠ 0`,
/// assuming `m₊ = n0`. Negative indices use `λ₋ₙ(am) = -λₙ(-am)`.
pub fn enclosure_for_index(p: &AngularParams, n: i32, n0: u32, refine: bool) -> Result<Enclosure> {
    if n == 0 {
        return Err(AngularError::ZeroIndex);
    }
    let q = if n > 0 { *p } else { p.mass_reflected() };
    let idx = n.unsigned_abs();
    let e = if idx > n0 {
        let s = best_enclosure_with(&q, idx - n0, n0, false)?;
        Enclosure {
            interval: s.combined,
            active_lo: s.active_lo,
            active_hi: s.active_hi,
        }
    } else {
        // Below the variational range only the perturbation bounds apply.
        let (slo, shi) = spt_bounds(&q, idx)?;
        let (alo, ahi) = a_perturbation_bounds(&q, idx as i32)?;
        let mut e = Enclosure::whole();
        e.lower(slo, "spt");
        e.upper(shi, "spt");
        e.lower(alo, "a-perturbation");
        e.upper(ahi, "a-perturbation");
        e
    };
    let mut e = if n > 0 { e } else { e.negated() };
    if let Some(r) = refined_endpoint_bounds(p, refine).filter(|r| r.index == n) {
        if n > 0 {
            e.lower(r.value, "refined");
        } else {
            e.upper(r.value, "refined");
        }
    }
    e.checked()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn p(am: f64, aw: f64, k: i32) -> AngularParams {
        AngularParams::from_products(am, aw, k)
    }

    #[test]
    fn omega_examples() {
        assert_eq!(omega_pm(&p(0.0, 0.0, 3)), (0.0, 0.0));
        let (m, pl) = omega_pm(&p(0.25, 0.75, -5));
        assert_abs_diff_eq!(m, -7.5, epsilon = 1e-14);
        assert_abs_diff_eq!(pl, -5.9375, epsilon = 1e-14);
        let (m, pl) = omega_pm(&p(0.005, 0.015, 0));
        assert_abs_diff_eq!(m, 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(pl, 0.03, epsilon = 1e-14);
    }

    #[test]
    fn nu_enclosure_examples() {
        let i = nu_enclosure(&p(0.25, 0.75, -5), 1);
        assert_abs_diff_eq!(i.lo, 17.5, epsilon = 1e-12);
        assert_abs_diff_eq!(i.hi, 19.0625, epsilon = 1e-12);
        let i = nu_enclosure(&p(0.25, 0.75, -1), 1);
        assert_eq!(i.lo, 0.0);
        assert_abs_diff_eq!(i.hi, 1.0625, epsilon = 1e-12);
        for k in -3..3 {
            for n in 1..5 {
                let i = nu_enclosure(&AngularParams::new(0.0, 1.0, 1.0, k), n);
                let e = exact_spectrum_a0(k, n as i32);
                assert_eq!((i.lo, i.hi), (e * e, e * e));
            }
        }
    }

    #[test]
    fn variational_examples() {
        let (lo, hi) = variational_bounds(&p(0.25, 0.75, -5), 1, 0).unwrap();
        assert_abs_diff_eq!(lo, 3.93330, epsilon = 5e-6);
        assert_abs_diff_eq!(hi, 4.61606, epsilon = 5e-6);
        let (lo, hi) = variational_bounds(&p(0.25, 0.75, 4), 1, 0).unwrap();
        assert_abs_diff_eq!(lo, 5.31776, epsilon = 5e-6);
        assert_abs_diff_eq!(hi, 5.95636, epsilon = 5e-6);
        let (lo, hi) = variational_bounds(&p(0.005, 0.015, 0), 1, 0).unwrap();
        assert_abs_diff_eq!(lo, 0.99500, epsilon = 5e-6);
        assert_abs_diff_eq!(hi, 1.01989, epsilon = 5e-6);
    }

    #[test]
    fn upper_radicand_never_negative() {
        // (|κ|+½)² + Ω₊ ≥ (|κ|+½)² - κ² + ¼ > 0 on both branches.
        for k in -6..6 {
            for i in -40..=40 {
                let q = p(0.3, i as f64 * 0.25, k);
                assert!(
                    variational_bounds(&q, 1, 0).is_ok(),
                    "k={k} aω={}",
                    q.aomega()
                );
            }
        }
    }

    #[test]
    fn lambda_q_examples() {
        assert_eq!(lambda_q(&p(0.25, 0.75, -5)), LambdaQ::Defined(3.75));
        assert_eq!(lambda_q(&p(0.25, 0.75, -1)), LambdaQ::Undefined);
        assert_abs_diff_eq!(
            lambda_q(&p(0.005, 0.015, 0)).value().unwrap(),
            0.515,
            epsilon = 1e-14
        );
        assert_abs_diff_eq!(
            lambda_q(&p(0.25, 0.75, 0)).value().unwrap(),
            1.22474,
            epsilon = 5e-6
        );
    }

    #[test]
    fn lambda_q_branches_agree_at_the_boundary() {
        for k in -4..4 {
            let kappa = k as f64 + 0.5;
            let aw = kappa.signum() * kappa.abs();
            let a = (aw + kappa).abs();
            let b = 2.0 * (aw * kappa).sqrt();
            assert_abs_diff_eq!(a, b, epsilon = 1e-14);
            assert_abs_diff_eq!(
                lambda_q(&p(0.1, aw, k)).value().unwrap(),
                a,
                epsilon = 1e-14
            );
            assert_abs_diff_eq!(
                lambda_q(&p(0.1, aw * (1.0 + 1e-12), k)).value().unwrap(),
                a,
                epsilon = 1e-10
            );
        }
    }

    #[test]
    fn spt_examples() {
        let (lo, hi) = spt_bounds(&p(0.25, 0.75, -1), 1).unwrap();
        assert_abs_diff_eq!(lo, -0.25, epsilon = 1e-14);
        assert_abs_diff_eq!(hi, 1.28078, epsilon = 5e-6);
        let (lo, hi) = spt_bounds(&p(0.25, 0.75, -5), 1).unwrap();
        let (vlo, vhi) = variational_bounds(&p(0.25, 0.75, -5), 1, 0).unwrap();
        assert_eq!((lo, hi), (vlo, vhi));
        let (lo, hi) = spt_bounds(&AngularParams::new(0.0, 2.0, 2.0, -3), 2).unwrap();
        assert_eq!((lo, hi), (4.0, 4.0));
    }

    #[test]
    fn a_perturbation_examples() {
        let q = p(0.25, 0.75, -1);
        for n in [-3, -2, -1, 1, 2, 3] {
            let (lo, hi) = a_perturbation_bounds(&q, n).unwrap();
            assert_abs_diff_eq!(lo, n as f64 - 0.75, epsilon = 1e-14);
            assert_abs_diff_eq!(hi, n as f64 + 0.75, epsilon = 1e-14);
        }
        assert_eq!(a_perturbation_bounds(&q, 0), Err(AngularError::ZeroIndex));
    }

    #[test]
    fn perturbation_norm_by_sampling() {
        for (am, aw) in [(0.25, 0.75), (0.9, -0.2), (-0.4, 0.4), (0.0, 1.3)] {
            let mut best: f64 = 0.0;
            for i in 0..=100_000 {
                let t = std::f64::consts::PI * i as f64 / 100_000.0;
                // Norm of [[-am cos, aw sin], [aw sin, am cos]].
                let (c, s) = (t.cos(), t.sin());
                best = best.max((am * am * c * c + aw * aw * s * s).sqrt());
            }
            assert_abs_diff_eq!(best, f64::max(am.abs(), aw.abs()), epsilon = 1e-9);
        }
    }

    #[test]
    fn exact_spectrum_examples() {
        assert_eq!(exact_spectrum_a0(0, 1), 1.0);
        assert_eq!(exact_spectrum_a0(0, -1), -1.0);
        assert_eq!(exact_spectrum_a0(-3, 2), 4.0);
    }

    #[test]
    fn refinement_examples() {
        let r = refined_endpoint_bounds(&p(0.25, 0.75, -5), true).unwrap();
        assert_eq!(r.index, 1);
        assert_abs_diff_eq!(r.value, 4.18330, epsilon = 5e-6);
        assert!(refined_endpoint_bounds(&p(0.25, 0.75, -1), true).is_none());
        assert!(refined_endpoint_bounds(&p(0.25, 0.75, -5), false).is_none());
        assert_eq!(
            refined_endpoint_bounds(&p(0.005, 0.015, 2), true)
                .unwrap()
                .index,
            -1
        );
    }

    #[test]
    fn combined_examples() {
        let s = best_enclosure(&p(0.25, 0.75, -1), 1, 0).unwrap();
        assert_abs_diff_eq!(s.combined.lo, 0.25, epsilon = 5e-6);
        assert_abs_diff_eq!(s.combined.hi, 1.28078, epsilon = 5e-6);
        assert_eq!((s.active_lo, s.active_hi), ("variational", "variational"));

        let s = best_enclosure(&AngularParams::new(0.0, 0.3, 0.2, 1), 2, 0).unwrap();
        assert_eq!((s.combined.lo, s.combined.hi), (3.0, 3.0));

        let s = best_enclosure(&p(0.25, 0.75, 0), 1, 0).unwrap();
        assert_abs_diff_eq!(s.combined.lo, 1.22474, epsilon = 5e-6);
        assert_eq!(s.active_lo, "lambda_q");
        assert_abs_diff_eq!(s.lambda_hat, 1.85078, epsilon = 5e-6);
        // The a-perturbation interval 1 ± 0.75 is tighter than λ̂₁ here.
        assert_abs_diff_eq!(s.combined.hi, 1.75, epsilon = 1e-14);
    }

    #[test]
    fn negative_index_enclosure_is_reflected() {
        let q = p(0.25, 0.75, -1);
        let e = enclosure_for_index(&q, -1, 0, false).unwrap();
        assert_abs_diff_eq!(e.interval.lo, -1.28078, epsilon = 5e-6);
        assert_abs_diff_eq!(e.interval.hi, -0.25, epsilon = 5e-6);
        let e = enclosure_for_index(&p(0.005, 0.015, 2), -1, 0, true).unwrap();
        assert_eq!(e.active_hi, "refined");
    }

    #[test]
    fn csv_row_has_header_arity() {
        let s = best_enclosure(&p(0.25, 0.75, -1), 1, 0).unwrap();
        assert_eq!(
            s.csv_row().split(',').count(),
            BOUNDSET_CSV_HEADER.split(',').count()
        );
        assert!(s.csv_row().contains("undefined"));
    }
}
