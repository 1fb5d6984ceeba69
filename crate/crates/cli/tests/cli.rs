use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn dedekind(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dedekind"))
        .args(args)
        .env("RUST_LOG", "off")
        .output()
        .expect("binary runs")
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is a JSON report")
}

#[test]
fn kernel_eval_matches_bessel_form() {
    let out = dedekind(&["kernel", "eval", "--r1", "2", "--r2", "0", "--x", "0.5", "--abscissa", "-0.25"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["schema"], 1);
    assert_eq!(r["status"], "PASS");
    // 4 (K0(1) + γ - ln 2)
    let v = r["result"]["value"].as_f64().unwrap();
    assert!((v - 1.220_371_690_329_18).abs() < 1e-8);
}

#[test]
fn coarse_quadrature_is_a_tolerance_failure() {
    let out = dedekind(&["kernel", "eval", "--r1", "1", "--r2", "1", "--x", "1", "--quad-step", "1.5"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(report(&out)["status"], "FAIL");
}

#[test]
fn usage_errors_exit_one() {
    for args in [
        &["field", "--field", "4"][..],
        &["frobnicate"],
        &["zeros", "scan", "--T", "-3"],
        &["riesz-scan", "--field", "Q", "--N", "100"],
        &["mellin-check", "--s", "1,2,3"],
    ] {
        assert_eq!(dedekind(args).status.code(), Some(1), "{args:?}");
    }
    let out = Command::new(env!("CARGO_BIN_EXE_dedekind"))
        .arg("selftest")
        .env("DEDEKIND_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn selftest_is_byte_identical_across_thread_counts() {
    let run = |threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_dedekind"))
            .arg("selftest")
            .env("DEDEKIND_THREADS", threads)
            .env("RUST_LOG", "off")
            .output()
            .unwrap()
    };
    let a = run("1");
    let b = run("3");
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn verify_modular_for_gaussian_field() {
    let out = dedekind(&["verify-modular", "--field", "-1", "--alpha", "1", "--T", "40"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["config"]["field"], "-1");
    assert_eq!(r["result"]["rhs_s1"], 0.0);
    assert_eq!(r["result"]["rhs_s0"], 0.0);
    assert!(r["result"]["discrepancy"].as_f64().unwrap().abs() < 1e-6);
}

#[test]
fn config_file_and_exports() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, "field = \"5\"\nT = 30.0\nc0 = 0.02\n").unwrap();
    let json = dir.path().join("zeros.json");
    let csv = dir.path().join("zeros.csv");
    let out = dedekind(&[
        "zeros",
        "scan",
        "--config",
        cfg.to_str().unwrap(),
        "--output",
        json.to_str().unwrap(),
        "--csv",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let r: Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(r["config"]["field"], "5");
    assert_eq!(r["config"]["T"], 30.0);
    assert_eq!(r["config"]["c0"], 0.02);
    assert_eq!(
        header(&csv),
        "gamma,source,re_zeta_K_prime,im_zeta_K_prime,localization_err,bracket_id"
    );
    let rows = std::fs::read_to_string(&csv).unwrap().lines().count() - 1;
    assert_eq!(rows, r["result"]["zeros"]["zeros"].as_array().unwrap().len());
}

#[test]
fn coefficient_and_scan_exports() {
    let dir = tempfile::tempdir().unwrap();
    let coeffs = dir.path().join("coeffs.csv");
    let out = dedekind(&["coeffs", "--field", "-3", "--N", "1000", "--csv", coeffs.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(header(&coeffs), "n,a_n,b_n,M_K,m_K");
    let r = report(&out);
    assert_eq!(r["result"]["b"][0], 1);

    let scan = dir.path().join("scan.csv");
    let out = dedekind(&[
        "riesz-scan",
        "--field",
        "5",
        "--y-min",
        "100",
        "--y-max",
        "10000",
        "--points",
        "40",
        "--csv",
        scan.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(header(&scan), "y,P,main,corrected");
}

#[test]
fn mellin_check_complex_argument() {
    let out = dedekind(&["mellin-check", "--field", "Q", "--s", "0.25,0.1"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert!(r["result"]["relative_discrepancy"].as_f64().unwrap() < 1e-3);
}

fn header(path: &Path) -> String {
    std::fs::read_to_string(path).unwrap().lines().next().unwrap().to_string()
}
