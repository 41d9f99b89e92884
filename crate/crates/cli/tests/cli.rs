//! End-to-end runs of the binary.

use std::process::{Command, Output};

fn angspec(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_angspec"))
        .args(args)
        .output()
        .unwrap()
}

fn csv(out: &Output) -> Vec<Vec<String>> {
    String::from_utf8_lossy(&out.stdout)
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(String::from).collect())
        .collect()
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn num(s: &str) -> f64 {
    s.parse().unwrap()
}

#[test]
fn bounds_table_one() {
    let out = angspec(&[
        "bounds", "--am", "0.25", "--aomega", "0.75", "--k", "-5..4", "--n", "1",
    ]);
    assert!(out.status.success());
    let rows = csv(&out);
    let want = [
        (-5, "3.75", 3.93330, 4.61606),
        (-2, "0.75", 0.75000, 1.85078),
        (0, "1.22474", 0.75000, 1.85078),
        (4, "5.25", 5.31776, 5.95636),
    ];
    for (k, q, lo, hi) in want {
        let r = rows.iter().find(|r| r[0] == k.to_string()).unwrap();
        assert!((num(&r[13]) - num(q)).abs() < 5e-6);
        assert!(
            (num(&r[7]) - lo).abs() < 5e-6 && (num(&r[8]) - hi).abs() < 5e-6,
            "{r:?}"
        );
    }
    let special: Vec<_> = rows.iter().filter(|r| r[0] == "-1").collect();
    assert_eq!(special.len(), 2);
    assert!(special
        .iter()
        .all(|r| r[13] == "undefined" && r[18] == "n0 uncertain"));
}

#[test]
fn bounds_degenerate_and_higher_index() {
    let rows = csv(&angspec(&[
        "bounds", "--am", "0", "--aomega", "0", "--k", "0", "--n", "3",
    ]));
    let got: Vec<(f64, f64)> = rows.iter().map(|r| (num(&r[7]), num(&r[8]))).collect();
    assert_eq!(got, vec![(1.0, 1.0), (2.0, 2.0), (3.0, 3.0)]);

    let rows = csv(&angspec(&[
        "bounds", "--am", "0.005", "--aomega", "0.015", "--k", "0", "--n", "5",
    ]));
    let lo: Vec<f64> = rows.iter().map(|r| num(&r[7])).collect();
    for (l, w) in lo.iter().zip([0.995, 1.995, 2.995, 3.995, 4.995]) {
        assert!((l - w).abs() < 5e-6);
    }
}

#[test]
fn spectrum_examples() {
    let out = angspec(&[
        "spectrum", "--a", "0", "--m", "1", "--omega", "1", "--k", "0", "--n", "3",
    ]);
    let rows = csv(&out);
    for r in &rows {
        let n: i32 = r[3].parse().unwrap();
        assert!((num(&r[4]) - n as f64).abs() < 1e-8);
    }
    assert_eq!(rows.len(), 6);

    // the tabulated 4.01389 is λ̃⁺₁, which corresponds to λ₋₁ = -4.01389
    let rows = csv(&angspec(&[
        "spectrum", "--am", "0.005", "--aomega", "0.015", "--k", "3", "--n", "1",
    ]));
    let neg = rows.iter().find(|r| r[3] == "-1").unwrap();
    assert!((num(&neg[4]) + 4.01389).abs() < 5e-3);

    let out = angspec(&[
        "spectrum", "--am", "0.25", "--aomega", "0.75", "--k", "0", "--method", "both",
    ]);
    let rows = csv(&out);
    assert_eq!(rows.len(), 6);
    assert!(rows.iter().all(|r| num(&r[8]) < 1e-6));
}

#[test]
fn table_two_and_special_row() {
    let out = angspec(&["table", "2"]);
    assert!(out.status.success());
    let rows = csv(&out);
    assert_eq!(rows.len(), 70);
    assert!(rows.iter().all(|r| r[8] == "PASS"), "{rows:?}");

    let rows = csv(&angspec(&["table", "1", "--bounds-only"]));
    let hat = rows
        .iter()
        .find(|r| r[1] == "-1" && r[3] == "lambda_hat")
        .unwrap();
    assert_eq!(hat[4], "(1.28078)");
    assert!(hat[9].starts_with("combined [0.25000; 1.28078]"));

    let rows = csv(&angspec(&["table", "3", "--bounds-only"]));
    let lo: Vec<f64> = rows
        .iter()
        .filter(|r| r[1] == "0" && r[3] == "lambda_check")
        .map(|r| num(&r[5]))
        .collect();
    assert_eq!(lo, vec![0.75, 1.75, 2.75, 3.75, 4.75]);
}

#[test]
fn table_output_is_deterministic() {
    let a = angspec(&["table", "1"]).stdout;
    let b = angspec(&["table", "1"]).stdout;
    assert_eq!(a, b);
    assert!(!a.contains(&b'\r'));
}

#[test]
fn verify_examples() {
    assert!(angspec(&["verify", "--instances", "1", "--dims", "1,1"])
        .status
        .success());
    let dir = std::env::temp_dir().join(format!("angspec-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.json");
    std::fs::write(
        &bad,
        r#"{"n1":2,"n2":1,"t11":[[1,0],[2,0],[0,0],[1,0]],"t12":[[1,0],[0,0]],"t22":[[0,0]]}"#,
    )
    .unwrap();
    let out = angspec(&["verify", "--fixture", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(5));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(
        err.contains("not Hermitian") && err.contains("counterexample"),
        "{err}"
    );
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn sweep_examples() {
    let rows = csv(&angspec(&[
        "sweep", "--param", "omega", "--from", "0", "--to", "2", "--steps", "5", "--a", "0", "--m",
        "0.3", "--k", "1",
    ]));
    assert_eq!(rows.len(), 5);
    assert!(rows.iter().all(|r| r[1..4] == rows[0][1..4]));

    let out = angspec(&[
        "sweep", "--param", "k", "--from", "-4", "--to", "5", "--m", "0.25", "--omega", "0.75",
        "--format", "json",
    ]);
    let v = json(&out);
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 10);
    // |aω + κ| where |aω| ≤ |κ|, 2√(aω κ) for k = 0, undefined at k = -1
    let want = [
        Some(2.75),
        Some(1.75),
        Some(0.75),
        None,
        Some(2.0 * 0.375f64.sqrt()),
        Some(2.25),
        Some(3.25),
        Some(4.25),
        Some(5.25),
        Some(6.25),
    ];
    for (r, w) in rows.iter().zip(want) {
        let got = r["lambda_q"]["value"].as_f64();
        match w {
            Some(w) => assert!((got.unwrap() - w).abs() < 1e-12, "{r}"),
            None => assert_eq!(r["lambda_q"]["status"], "Undefined"),
        }
    }
}

#[test]
fn json_wrapper_and_out_file() {
    let path = std::env::temp_dir().join(format!("angspec-out-{}.json", std::process::id()));
    let out = angspec(&[
        "bounds",
        "--am",
        "0.25",
        "--aomega",
        "0.75",
        "--k",
        "0",
        "--format",
        "json",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success() && out.stdout.is_empty());
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    std::fs::remove_file(&path).ok();
    for key in ["version", "command", "params", "rows"] {
        assert!(v.get(key).is_some(), "{key}");
    }
    assert_eq!(v["command"], "bounds");
    assert_eq!(v["rows"][0]["active_hi"], "a-perturbation");
}

#[test]
fn exit_codes() {
    assert_eq!(angspec(&["bounds", "--k", "x"]).status.code(), Some(2));
    assert_eq!(
        angspec(&["bounds", "--am", "1", "--m", "2"]).status.code(),
        Some(2)
    );
    assert_eq!(angspec(&["table", "7"]).status.code(), Some(2));
    assert_eq!(angspec(&["frobnicate"]).status.code(), Some(2));
    // too large a perturbation for the certified continuation
    assert_eq!(
        angspec(&["spectrum", "--am", "40", "--aomega", "40", "--n", "1"])
            .status
            .code(),
        Some(3)
    );
}

#[test]
fn thread_cap() {
    let out = Command::new(env!("CARGO_BIN_EXE_angspec"))
        .args(["verify", "--instances", "4"])
        .env("ANGSPEC_THREADS", "1")
        .output()
        .unwrap();
    assert!(out.status.success());
}
