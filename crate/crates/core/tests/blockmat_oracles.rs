use angspec_core::blockmat::random::{random_instance, random_vector};
use angspec_core::blockmat::suite::{run_suite, DEFAULT_SEED};
use angspec_core::blockmat::{CMatrix, CVector, C64};
use angspec_core::HermitianBlockMatrix;
use nalgebra::DMatrix;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Gauss-Jordan inverse with partial pivoting, kept independent of nalgebra's solvers.
fn gj_inverse(m: &CMatrix) -> CMatrix {
    let n = m.nrows();
    let mut a: Vec<Vec<C64>> = (0..n)
        .map(|i| {
            let mut row: Vec<C64> = (0..n).map(|j| m[(i, j)]).collect();
            row.extend((0..n).map(|j| {
                if i == j {
                    C64::new(1.0, 0.0)
                } else {
                    C64::new(0.0, 0.0)
                }
            }));
            row
        })
        .collect();
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&p, &q| a[p][col].norm().total_cmp(&a[q][col].norm()))
            .unwrap();
        a.swap(col, piv);
        let d = a[col][col];
        for v in a[col].iter_mut() {
            *v /= d;
        }
        for r in 0..n {
            if r != col {
                let f = a[r][col];
                let pivot_row = a[col].clone();
                for (v, p) in a[r].iter_mut().zip(pivot_row) {
                    *v -= f * p;
                }
            }
        }
    }
    CMatrix::from_fn(n, n, |i, j| a[i][n + j])
}

fn dense_schur(m: &HermitianBlockMatrix, lambda: f64) -> CMatrix {
    let lam = C64::new(lambda, 0.0);
    let n1 = m.n1();
    let n2 = m.n2();
    let r = gj_inverse(&(m.t22() - CMatrix::identity(n2, n2) * lam));
    m.t11() - CMatrix::identity(n1, n1) * lam - m.t12() * r * m.t12().adjoint()
}

#[test]
fn schur_complement_matches_dense_solve() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for n in 1..=6 {
        let m = random_instance(&mut rng, n);
        for f in [0.01, 0.3, 2.0] {
            let l = m.c2() + f * (1.0 + m.c2().abs());
            let s = m.schur_complement(l).unwrap().matrix;
            let d = dense_schur(&m, l);
            let err = (&s - &d).iter().map(|z| z.norm()).fold(0.0, f64::max);
            assert!(err < 1e-9 * (1.0 + 1.0 / f), "n={n} λ={l}: {err}");
        }
    }
}

/// Rayleigh-Ritz on span{(x,0),(0,y)} of the assembled matrix.
fn ritz_pair(m: &HermitianBlockMatrix, x: &CVector, y: &CVector) -> (f64, f64) {
    let n = m.n1() + m.n2();
    let mut u = CVector::zeros(n);
    u.rows_mut(0, m.n1())
        .copy_from(&(x / C64::new(x.norm(), 0.0)));
    let mut v = CVector::zeros(n);
    v.rows_mut(m.n1(), m.n2())
        .copy_from(&(y / C64::new(y.norm(), 0.0)));
    let a = m.assemble();
    let h = CMatrix::from_fn(2, 2, |i, j| {
        let (p, q) = ([&u, &v][i], [&u, &v][j]);
        p.dotc(&(&a * q))
    });
    let e = h.symmetric_eigen().eigenvalues;
    (e.min(), e.max())
}

#[test]
fn qnr_matches_two_dimensional_compression() {
    let mut rng = ChaCha8Rng::seed_from_u64(43);
    let t11 = DMatrix::from_fn(4, 4, |i, j| {
        ((i + j) as f64).cos() + if i == j { 1.0 } else { 0.0 }
    });
    let t11 = (&t11 + t11.transpose()) * 0.5;
    let t22 = DMatrix::from_fn(3, 3, |i, j| ((i * j) as f64 * 0.7).sin());
    let t22 = (&t22 + t22.transpose()) * 0.5;
    let t12 = DMatrix::from_fn(4, 3, |i, j| (i as f64 - j as f64) * 0.4 + 0.1);
    let m = HermitianBlockMatrix::from_real(t11, t12, t22).unwrap();
    for _ in 0..50 {
        let x = random_vector(&mut rng, 4);
        let y = random_vector(&mut rng, 3);
        let (lo, hi) = m.qnr_lambda_pm(&x, &y).unwrap();
        let (rlo, rhi) = ritz_pair(&m, &x, &y);
        assert!(
            (lo - rlo).abs() < 1e-12 && (hi - rhi).abs() < 1e-12,
            "{lo} {hi} vs {rlo} {rhi}"
        );
    }
}

#[test]
fn sup_of_lambda_plus_by_sampling() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let m = random_instance(&mut rng, 4);
    let x = random_vector(&mut rng, 4);
    let p = m.p_of_x(&x).unwrap();
    let (sup, y_star) = m.sup_lambda_plus_with_maximiser(&x).unwrap();
    assert!((sup - p).abs() < 1e-9 * (1.0 + p.abs()));
    let mut best = f64::NEG_INFINITY;
    for _ in 0..4000 {
        let y = random_vector(&mut rng, 4);
        best = best.max(m.qnr_lambda_pm(&x, &y).unwrap().1);
    }
    assert!(best <= p + 1e-9);
    let at_star = m.qnr_lambda_pm(&x, &y_star).unwrap().1;
    assert!((at_star - p).abs() < 1e-8, "{at_star} vs {p}");
}

#[test]
fn default_suite_passes() {
    let reports = run_suite(120, DEFAULT_SEED, None, 8);
    let failures: Vec<_> = reports
        .iter()
        .flat_map(|r| {
            r.checks
                .iter()
                .filter(|c| !c.pass)
                .map(move |c| format!("#{} {}: {}", r.index, c.name, c.detail))
        })
        .collect();
    assert!(failures.is_empty(), "{failures:#?}");
}

#[test]
fn rectangular_instances_pass() {
    for dims in [(1, 3), (3, 1), (2, 5)] {
        let reports = run_suite(20, 99, Some(dims), 8);
        for r in reports {
            assert!(
                r.pass(),
                "{dims:?} #{}: {:?}",
                r.index,
                r.checks.iter().filter(|c| !c.pass).collect::<Vec<_>>()
            );
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn counting_function_is_monotone(seed in any::<u64>(), n in 1usize..6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = random_instance(&mut rng, n);
        let mut prev = 0;
        for k in 0..40 {
            let l = m.c2() + 1e-4 * 1.5f64.powi(k);
            let c = m.counting_function(l).unwrap();
            prop_assert!(c >= prev);
            prev = c;
        }
    }

    #[test]
    fn p_of_x_is_a_zero_of_sigma(seed in any::<u64>(), n in 1usize..6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = random_instance(&mut rng, n);
        let x = random_vector(&mut rng, n);
        let p = m.p_of_x(&x).unwrap();
        if p.is_finite() {
            let s = m.sigma_form(&x, p).unwrap();
            let slope = x.norm_squared();
            prop_assert!(s.abs() <= 1e-8 * slope * (1.0 + p.abs()), "σ(p)={}", s);
        }
    }

    #[test]
    fn json_roundtrip(seed in any::<u64>(), n in 1usize..5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = random_instance(&mut rng, n);
        let back = HermitianBlockMatrix::from_json(&m.to_json()).unwrap();
        prop_assert_eq!(back.assemble(), m.assemble());
    }
}
