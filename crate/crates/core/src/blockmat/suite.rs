//! Randomised verification of the block-matrix invariants.
//!
//! Every check compares an implementation route against the dense
//! eigendecomposition of the assembled matrix or against an algebraic identity.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::random::{
    dominant_instance, random_hermitian, random_matrix, random_nonsingular, random_vector,
};
use super::{
    det_identity_terms, hermitian_defect, monotone_aux, CVector, HermitianBlockMatrix, C64,
};

pub const DEFAULT_SEED: u64 = 0xA27;

#[derive(Debug, Clone, Serialize)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct InstanceReport {
    pub index: usize,
    pub n1: usize,
    pub n2: usize,
    pub checks: Vec<CheckOutcome>,
    /// Instance JSON, recorded only when some check failed.
    pub counterexample: Option<String>,
}

impl InstanceReport {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

/// Deterministic per-instance generator.
pub fn instance_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64 + 1);
    rng
}

/// Instance number `index` of a suite: alternates between off-diagonally
/// dominant instances and instances with large diagonal blocks.
/// `dims = Some((n1, n2))` fixes the block sizes, otherwise `n1 = n2 ≤ max_dim`.
pub fn generate_instance(
    seed: u64,
    index: usize,
    dims: Option<(usize, usize)>,
    max_dim: usize,
) -> HermitianBlockMatrix {
    let mut rng = instance_rng(seed, index);
    let (n1, n2) = dims.unwrap_or_else(|| {
        let n = rng.gen_range(1..=max_dim.max(1));
        (n, n)
    });
    if n1 == n2 && index % 2 == 0 {
        return dominant_instance(&mut rng, n1);
    }
    let t11 = {
        let nrm = rng.gen_range(0.1..3.0);
        random_hermitian(&mut rng, n1, nrm)
    };
    let t22 = {
        let nrm = rng.gen_range(0.1..3.0);
        random_hermitian(&mut rng, n2, nrm)
    };
    let t12 = if n1 == n2 {
        random_nonsingular(&mut rng, n1, 0.3, 3.0)
    } else {
        random_matrix(&mut rng, n1, n2)
    };
    HermitianBlockMatrix::new(t11, t12, t22).expect("generated blocks are Hermitian")
}

struct Checks {
    out: Vec<CheckOutcome>,
}

impl Checks {
    fn record(&mut self, name: &'static str, pass: bool, detail: impl FnOnce() -> String) {
        let detail = if pass { String::new() } else { detail() };
        self.out.push(CheckOutcome { name, pass, detail });
    }
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * (1.0 + a.abs().max(b.abs()))
}

/// λ samples to the right of `c2` that stay away from the eigenvalues.
fn lambda_samples(m: &HermitianBlockMatrix) -> Vec<f64> {
    let c2 = m.c2();
    let w = 1.0 + c2.abs();
    let eig = m.oracle_eigenvalues();
    [1e-3, 1e-2, 0.1, 0.5, 1.0, 2.5, 7.0]
        .iter()
        .map(|f| c2 + f * w)
        .filter(|l| eig.iter().all(|e| (e - l).abs() > 1e-6 * w))
        .collect()
}

/// Runs every invariant on one instance.
pub fn check_instance<R: Rng + ?Sized>(m: &HermitianBlockMatrix, rng: &mut R) -> Vec<CheckOutcome> {
    let mut c = Checks { out: Vec::new() };
    let (n1, n2) = (m.n1(), m.n2());
    let samples = lambda_samples(m);
    let probes: Vec<CVector> = (0..8).map(|_| random_vector(rng, n1)).collect();

    // S1(λ) Hermitian and bounded below by c1 - λ.
    let mut herm_ok = true;
    let mut lower_ok = true;
    let mut sigma_ok = true;
    let mut detail = String::new();
    for &l in &samples {
        let s = match m.schur_complement(l) {
            Ok(s) => s,
            Err(e) => {
                herm_ok = false;
                detail = e.to_string();
                continue;
            }
        };
        let scale = s.matrix.iter().map(|z| z.norm()).fold(1.0, f64::max);
        if hermitian_defect(&s.matrix) > 1e-12 * scale {
            herm_ok = false;
            detail = format!("λ={l}: Hermitian defect {}", hermitian_defect(&s.matrix));
        }
        for x in &probes {
            let sx = x.dotc(&(&s.matrix * x)).re;
            let bound = (m.c1() - l) * x.norm_squared();
            if sx < bound - 1e-9 * (1.0 + sx.abs()) {
                lower_ok = false;
                detail = format!("λ={l}: ⟨x,S x⟩={sx} < (c1-λ)‖x‖²={bound}");
            }
            let sigma = m.sigma_form(x, l).unwrap_or(f64::NAN);
            if !close(sigma, sx, 1e-11 * scale) {
                sigma_ok = false;
                detail = format!("λ={l}: σ={sigma} vs ⟨x,S x⟩={sx}");
            }
        }
    }
    let d = detail.clone();
    c.record("schur_hermitian", herm_ok, || d);
    let d = detail.clone();
    c.record("schur_lower_bound", lower_ok, || d);
    c.record("sigma_matches_schur", sigma_ok, || detail);

    // Strict decrease of σ(·)[x].
    let mut mono_ok = true;
    let mut detail = String::new();
    for x in &probes {
        for w in samples.windows(2) {
            let (a, b) = (w[0], w[1]);
            let (sa, sb) = (m.sigma_unchecked(x, a).0, m.sigma_unchecked(x, b).0);
            let need = sa - (b - a) * x.norm_squared() * (1.0 - 1e-9);
            if !(sb < need + 1e-12 * (1.0 + sa.abs())) {
                mono_ok = false;
                detail = format!("σ({b})={sb} not below σ({a}) - (Δλ)‖x‖² = {need}");
            }
        }
    }
    c.record("sigma_strictly_decreasing", mono_ok, || detail);

    // p(ξx) = p(x).
    let x = &probes[0];
    let p = m.p_of_x(x);
    let mut scale_ok = p.is_ok();
    let mut detail = format!("{p:?}");
    if let Ok(p) = p {
        for _ in 0..16 {
            let xi = C64::new(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
            if xi.norm() < 1e-3 {
                continue;
            }
            let q = m.p_of_x(&(x * xi)).unwrap_or(f64::NAN);
            let ok = if p.is_infinite() {
                q == p
            } else {
                close(p, q, 1e-10)
            };
            if !ok {
                scale_ok = false;
                detail = format!("p(x)={p}, p(ξx)={q} for ξ={xi}");
            }
        }
    }
    c.record("p_scale_invariant", scale_ok, || detail);

    // λ+(x, y) ≤ p(x) for random y, equality at the maximiser.
    if let Ok(p) = m.p_of_x(x) {
        if p.is_finite() {
            let mut ok = true;
            let mut detail = String::new();
            for _ in 0..64 {
                let y = random_vector(rng, n2);
                let (_, plus) = m.qnr_lambda_pm(x, &y).expect("nonzero probes");
                if plus > p + 1e-9 * (1.0 + p.abs()) {
                    ok = false;
                    detail = format!("λ+(x,y)={plus} exceeds p(x)={p}");
                }
            }
            match m.sup_lambda_plus(x) {
                Ok(s) if close(s, p, 1e-8) => {}
                other => {
                    ok = false;
                    detail = format!("sup λ+ = {other:?}, p(x) = {p}");
                }
            }
            c.record("sup_lambda_plus_attained", ok, || detail);
        }
    }

    // Eigenvalues right of c2 are recovered from their eigenvectors.
    let mut ident_ok = true;
    let mut detail = String::new();
    let cut = m.c2() + m.sep_tol();
    for (l, v) in m.oracle_eigenpairs().into_iter().filter(|(l, _)| *l > cut) {
        let xs = v.rows(0, n1).into_owned();
        let p = m.p_of_x(&xs).unwrap_or(f64::NAN);
        let sup = m.sup_lambda_plus(&xs).unwrap_or(f64::NAN);
        let y0 = m.t22_resolvent_apply(l, &(m.t12().adjoint() * &xs));
        let plus = if y0.norm() > 0.0 {
            m.qnr_lambda_pm(&xs, &y0).map(|r| r.1).unwrap_or(f64::NAN)
        } else {
            l
        };
        if !(close(p, l, 1e-8) && close(sup, l, 1e-8) && close(plus, l, 1e-8)) {
            ident_ok = false;
            detail = format!("λ*={l}: p={p}, sup={sup}, λ+(x*,y°)={plus}");
        }
    }
    c.record("eigenvalue_identification", ident_ok, || detail);

    // μ_{j+n0} = λ_j and counting-function jumps.
    match m.index_shift_n0() {
        Ok(n0) => {
            let right = m.eigenvalues_right_of_c2();
            let mut ok = true;
            let mut detail = String::new();
            for (j, &l) in right.iter().enumerate() {
                let mu = m.mu_minmax(j + 1 + n0).unwrap_or(f64::NAN);
                if !close(mu, l, 1e-8) {
                    ok = false;
                    detail = format!("μ_{}={mu} vs λ_{}={l} (n0={n0})", j + 1 + n0, j + 1);
                }
            }
            let beyond = m.mu_minmax(right.len() + n0 + 1).unwrap_or(f64::NAN);
            if beyond != f64::INFINITY {
                ok = false;
                detail = format!("μ beyond the spectrum is {beyond}, expected +∞");
            }
            c.record("minmax_equality", ok, || detail);

            let mut ok = true;
            let mut detail = String::new();
            let mut prev = 0;
            for &l in &samples {
                let count = m.counting_function(l).unwrap_or(usize::MAX);
                let expected = n0 + right.iter().filter(|&&e| e < l).count();
                if count != expected || count < prev {
                    ok = false;
                    detail = format!("count({l})={count}, expected {expected}");
                }
                prev = count;
            }
            c.record("counting_function_jumps", ok, || detail);
        }
        Err(e) => c.record("minmax_equality", false, || e.to_string()),
    }

    // Determinant identity and the Cauchy-Schwarz gap.
    let mut det_ok = true;
    let mut gap_ok = true;
    let mut detail = String::new();
    for &l in &samples {
        for x in probes.iter().take(4) {
            let y = random_vector(rng, n2);
            let Ok(t) = det_identity_terms(m, x, &y, l) else {
                continue;
            };
            let mag = 1.0 + t.lhs.abs() + t.gap.abs() + (t.rhs - t.gap).abs();
            if (t.lhs - t.rhs).abs() > 1e-10 * mag {
                det_ok = false;
                detail = format!("λ={l}: lhs={} rhs={}", t.lhs, t.rhs);
            }
            if t.gap < -1e-10 * mag {
                gap_ok = false;
                detail = format!("λ={l}: Cauchy-Schwarz gap {}", t.gap);
            }
        }
    }
    let d = detail.clone();
    c.record("det_identity", det_ok, || d);
    c.record("cauchy_schwarz_gap", gap_ok, || detail);

    // Monotone auxiliary function.
    let gamma = 2.0 * m.nu_values()[0].max(0.0).sqrt();
    let mut ok = true;
    for i in -8..8 {
        for j in -8..8 {
            let (s, t) = (i as f64 * 0.5, j as f64 * 0.5);
            let f = monotone_aux(s, t, gamma);
            ok &= monotone_aux(s + 0.5, t, gamma) >= f - 1e-12
                && monotone_aux(s, t + 0.5, gamma) >= f - 1e-12;
        }
    }
    c.record("monotone_aux", ok, || format!("γ={gamma}"));

    // Theorems that need a bijective T12.
    if m.t12_bijective() {
        match m.verify_bound_theorems_default() {
            Ok(r) => {
                let failed: Vec<String> = r
                    .bound_checks
                    .iter()
                    .filter(|b| !b.pass)
                    .map(|b| {
                        format!(
                            "{:?} j={}: {} ∉ [{}, {}]",
                            b.kind, b.index, b.eigenvalue, b.lower_bound, b.upper_bound
                        )
                    })
                    .collect();
                c.record("estimate_bounds", r.all_pass(), || failed.join("; "));
            }
            Err(e) => c.record("estimate_bounds", false, || e.to_string()),
        }
        let ok = m.offdiag_sqrt_check().unwrap_or(false);
        c.record("offdiag_sqrt", ok, String::new);
    }

    // Singular exactly at eigenvalues right of c2.
    let right = m.eigenvalues_right_of_c2();
    let mut ok = true;
    let mut detail = String::new();
    for &l in right
        .iter()
        .filter(|&&l| l > m.c2() + 1e-6 * (1.0 + m.c2().abs()))
    {
        match m.singularity_equivalence_check(l) {
            Ok(r) if r.t_singular && r.s_singular && r.kernel_dims_match => {}
            other => {
                ok = false;
                detail = format!("at λ={l}: {other:?}");
            }
        }
    }
    for &l in &samples {
        if let Ok(r) = m.singularity_equivalence_check(l) {
            if r.t_singular != r.s_singular {
                ok = false;
                detail = format!("at λ={l}: {r:?}");
            }
        }
    }
    c.record("singularity_equivalence", ok, || detail);

    c.out
}

/// Runs the suite sequentially; see [`generate_instance`] for the instances.
pub fn run_suite(
    instances: usize,
    seed: u64,
    dims: Option<(usize, usize)>,
    max_dim: usize,
) -> Vec<InstanceReport> {
    (0..instances)
        .map(|i| run_one(seed, i, dims, max_dim))
        .collect()
}

pub fn run_one(
    seed: u64,
    index: usize,
    dims: Option<(usize, usize)>,
    max_dim: usize,
) -> InstanceReport {
    let m = generate_instance(seed, index, dims, max_dim);
    let mut rng = instance_rng(seed ^ 0x5eed, index);
    report_for(index, &m, &mut rng)
}

pub fn report_for<R: Rng + ?Sized>(
    index: usize,
    m: &HermitianBlockMatrix,
    rng: &mut R,
) -> InstanceReport {
    let checks = check_instance(m, rng);
    let failed = checks.iter().any(|c| !c.pass);
    InstanceReport {
        index,
        n1: m.n1(),
        n2: m.n2(),
        checks,
        counterexample: failed.then(|| m.to_json()),
    }
}
