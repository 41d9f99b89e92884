//! Browser bindings for three operations: a bounds table, an `a`-sweep and a
//! single eigenfunction. Each returns JSON; the page in `www/` draws it.
//!
//! The plain functions are ordinary Rust so they can be tested natively.

use serde::Serialize;
use wasm_bindgen::prelude::*;

use angspec_core::angular::AngularParams;
use angspec_core::report::{bounds_rows, sweep, N0Policy, SweepParam, SweepSpec};
use angspec_core::solver::{eigenfunction, solve_indexed, AngularOperator, Method, ShootingConfig};

/// Sweeps with the solver get slow in the browser; past this many points the
/// solver column is dropped.
pub const MAX_SOLVER_POINTS: usize = 121;
pub const MAX_POINTS: usize = 2001;

fn check_finite(vals: &[(&str, f64)]) -> Result<(), String> {
    match vals.iter().find(|(_, v)| !v.is_finite()) {
        Some((name, v)) => Err(format!("{name} must be finite, got {v}")),
        None => Ok(()),
    }
}

/// Bound rows for `k_from..=k_to`, `n = 1..=n_max`, as a JSON array.
pub fn bounds_json(
    am: f64,
    aomega: f64,
    k_from: i32,
    k_to: i32,
    n_max: u32,
) -> Result<String, String> {
    check_finite(&[("am", am), ("aomega", aomega)])?;
    if k_from > k_to {
        return Err(format!("empty k range {k_from}..{k_to}"));
    }
    if !(1..=20).contains(&n_max) {
        return Err("n must be between 1 and 20".into());
    }
    let ks: Vec<i32> = (k_from..=k_to).collect();
    let rows =
        bounds_rows(am, aomega, &ks, n_max, N0Policy::Auto, false).map_err(|e| e.to_string())?;
    serde_json::to_string(&rows).map_err(|e| e.to_string())
}

pub fn sweep_a_json(
    k: i32,
    m: f64,
    omega: f64,
    from: f64,
    to: f64,
    steps: usize,
    solver: bool,
) -> Result<String, String> {
    check_finite(&[("m", m), ("omega", omega), ("from", from), ("to", to)])?;
    if !(2..=MAX_POINTS).contains(&steps) {
        return Err(format!("steps must be between 2 and {MAX_POINTS}"));
    }
    let spec = SweepSpec {
        param: SweepParam::A,
        from,
        to,
        steps,
        base: AngularParams::new(0.0, m, omega, k),
    };
    let rows = sweep(&spec, solver && steps <= MAX_SOLVER_POINTS).map_err(|e| e.to_string())?;
    serde_json::to_string(&rows).map_err(|e| e.to_string())
}

#[derive(Debug, Serialize)]
struct EigenfunctionOut<'a> {
    n: i32,
    lambda: f64,
    theta: &'a [f64],
    f: &'a [f64],
    g: &'a [f64],
}

/// `λ_n` and its eigenfunction `(f, g)` on the solver grid.
pub fn eigenfunction_json(am: f64, aomega: f64, k: i32, n: i32) -> Result<String, String> {
    check_finite(&[("am", am), ("aomega", aomega)])?;
    if n == 0 || n.abs() > 12 {
        return Err("n must be nonzero with |n| ≤ 12".into());
    }
    let p = AngularParams::from_products(am, aomega, k);
    let cfg = ShootingConfig::default();
    // labels come from the cheap Galerkin run; only one function is integrated
    let s =
        solve_indexed(&p, n.unsigned_abs(), &cfg, Method::Galerkin).map_err(|e| e.to_string())?;
    let lambda = s.lambda(n).ok_or_else(|| format!("λ_{n} not found"))?;
    let ef = eigenfunction(&AngularOperator::new(p), &cfg, lambda).map_err(|e| e.to_string())?;
    serde_json::to_string(&EigenfunctionOut {
        n,
        lambda,
        theta: &ef.theta,
        f: &ef.f,
        g: &ef.g,
    })
    .map_err(|e| e.to_string())
}

#[wasm_bindgen]
pub fn bounds_table(
    am: f64,
    aomega: f64,
    k_from: i32,
    k_to: i32,
    n_max: u32,
) -> Result<String, JsValue> {
    bounds_json(am, aomega, k_from, k_to, n_max).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn sweep_a(
    k: i32,
    m: f64,
    omega: f64,
    from: f64,
    to: f64,
    steps: usize,
    solver: bool,
) -> Result<String, JsValue> {
    sweep_a_json(k, m, omega, from, to, steps, solver).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen(js_name = eigenfunction)]
pub fn eigenfunction_js(am: f64, aomega: f64, k: i32, n: i32) -> Result<String, JsValue> {
    eigenfunction_json(am, aomega, k, n).map_err(|e| JsValue::from_str(&e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::Value;

    #[test]
    fn bounds_rows_per_k_and_n() {
        let v: Value = serde_json::from_str(&bounds_json(0.5, 0.25, -1, 1, 2).unwrap()).unwrap();
        let rows = v.as_array().unwrap();
        assert!(rows.len() >= 6);
        for r in rows {
            assert!(r["lambda_check"].as_f64().unwrap() <= r["lambda_hat"].as_f64().unwrap());
        }
    }

    #[test]
    fn bounds_at_zero_are_exact() {
        // a = 0: λ_n = |k + 1/2| - 1/2 + n
        let v: Value = serde_json::from_str(&bounds_json(0.0, 0.0, 2, 2, 3).unwrap()).unwrap();
        for (i, r) in v.as_array().unwrap().iter().enumerate() {
            let want = 2.0 + (i + 1) as f64;
            assert!((r["lambda_check"].as_f64().unwrap() - want).abs() < 1e-12);
            assert!((r["lambda_hat"].as_f64().unwrap() - want).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert!(bounds_json(f64::NAN, 0.0, 0, 0, 1).is_err());
        assert!(bounds_json(0.0, 0.0, 2, 1, 1).is_err());
        assert!(bounds_json(0.0, 0.0, 0, 0, 0).is_err());
        assert!(sweep_a_json(0, 0.1, 0.1, 0.0, 1.0, 1, false).is_err());
        assert!(eigenfunction_json(0.0, 0.0, 0, 0).is_err());
    }

    #[test]
    fn sweep_points_and_solver_cap() {
        let v: Value =
            serde_json::from_str(&sweep_a_json(0, 0.025, 0.75, -1.0, 1.0, 5, true).unwrap())
                .unwrap();
        let rows = v.as_array().unwrap();
        assert_eq!(rows.len(), 5);
        assert!(rows.iter().all(|r| r["solver"].is_f64()));
        // the middle point is a = 0, where λ_1 = 1 for k = 0
        assert!((rows[2]["solver"].as_f64().unwrap().abs() - 1.0).abs() < 1e-9);

        let v: Value = serde_json::from_str(
            &sweep_a_json(0, 0.025, 0.75, -1.0, 1.0, MAX_SOLVER_POINTS + 1, true).unwrap(),
        )
        .unwrap();
        assert!(v.as_array().unwrap().iter().all(|r| r["solver"].is_null()));
    }

    #[test]
    fn eigenfunction_at_zero() {
        let v: Value = serde_json::from_str(&eigenfunction_json(0.0, 0.0, 0, 2).unwrap()).unwrap();
        assert!((v["lambda"].as_f64().unwrap() - 2.0).abs() < 1e-9);
        let f = v["f"].as_array().unwrap();
        let g = v["g"].as_array().unwrap();
        assert_eq!(f.len(), v["theta"].as_array().unwrap().len());
        let norm: f64 = f.iter().chain(g).map(|x| x.as_f64().unwrap().powi(2)).sum();
        assert!((norm - 1.0).abs() < 1e-9);
    }

    #[test]
    fn eigenfunction_matches_shooting_label() {
        let p = AngularParams::from_products(0.5, 0.25, -1);
        let s = solve_indexed(&p, 2, &ShootingConfig::default(), Method::Shooting).unwrap();
        let v: Value =
            serde_json::from_str(&eigenfunction_json(0.5, 0.25, -1, -2).unwrap()).unwrap();
        assert!((v["lambda"].as_f64().unwrap() - s.lambda(-2).unwrap()).abs() < 1e-8);
    }
}
