use angspec_core::angular::*;
use proptest::prelude::*;

fn params() -> impl Strategy<Value = AngularParams> {
    (-2.0f64..2.0, -3.0f64..3.0, -8i32..8)
        .prop_map(|(am, aw, k)| AngularParams::from_products(am, aw, k))
}

proptest! {
    #[test]
    fn check_below_hat_and_increasing(p in params(), n in 1u32..8, n0 in 0u32..3) {
        let (lo, hi) = variational_bounds(&p, n, n0).unwrap();
        prop_assert!(lo <= hi);
        let (lo2, hi2) = variational_bounds(&p, n + 1, n0).unwrap();
        prop_assert!(lo2 >= lo && hi2 > hi);
        let nu = nu_enclosure(&p, n);
        prop_assert!(nu.lo <= nu.hi);
        let (om, _) = omega_pm(&p);
        let b = p.kappa().abs() - 0.5 + (n + n0) as f64;
        if b * b + om > 0.0 && lo > p.am().abs() {
            prop_assert!(lo2 > lo);
        }
    }

    #[test]
    fn bounds_invariant_under_reflection(p in params(), n in 1u32..6) {
        let r = p.reflected();
        prop_assert_eq!(omega_pm(&p), omega_pm(&r));
        prop_assert_eq!(nu_enclosure(&p, n), nu_enclosure(&r, n));
        prop_assert_eq!(variational_bounds(&p, n, 0), variational_bounds(&r, n, 0));
        prop_assert_eq!(spt_bounds(&p, n), spt_bounds(&r, n));
        prop_assert_eq!(lambda_q(&p), lambda_q(&r));
    }

    #[test]
    fn degenerate_at_a_zero(m in -2.0f64..2.0, w in -2.0f64..2.0, k in -8i32..8, n in 1u32..8) {
        let p = AngularParams::new(0.0, m, w, k);
        let exact = exact_spectrum_a0(k, n as i32);
        prop_assert_eq!(variational_bounds(&p, n, 0).unwrap(), (exact, exact));
        prop_assert_eq!(spt_bounds(&p, n).unwrap(), (exact, exact));
        prop_assert_eq!(a_perturbation_bounds(&p, -(n as i32)).unwrap(), (-exact, -exact));
        let s = best_enclosure(&p, n, 0).unwrap();
        prop_assert_eq!((s.combined.lo, s.combined.hi), (exact, exact));
    }

    #[test]
    fn combined_is_inside_every_constituent(p in params(), n in 1u32..6) {
        if let Ok(s) = best_enclosure(&p, n, 0) {
            prop_assert!(s.combined.lo >= s.lambda_check && s.combined.hi <= s.lambda_hat);
            prop_assert!(s.combined.lo >= s.spt_lower && s.combined.hi <= s.spt_upper);
            prop_assert!(s.combined.lo >= s.apert_lower && s.combined.hi <= s.apert_upper);
        }
    }
}
