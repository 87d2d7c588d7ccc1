//! End-to-end tests of the command-line binary: argument handling, report
//! schemas, exit codes, and determinism.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_hardylab"))
}

fn write_temp(name: &str, contents: &str) -> PathBuf {
    let path = std::env::temp_dir().join(format!("hardylab-cli-test-{}-{name}", std::process::id()));
    std::fs::write(&path, contents).unwrap();
    path
}

fn stdout_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "bad JSON on stdout: {e}\nstdout: {}\nstderr: {}",
            String::from_utf8_lossy(&out.stdout),
            String::from_utf8_lossy(&out.stderr)
        )
    })
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("terminated by signal")
}

#[test]
fn eval_f1_on_unit_impulse_encloses_zeta2() {
    let input = write_temp("delta.json", r#"{"values": ["1"]}"#);
    let out = bin()
        .args(["eval", "--functional", "f1", "--p", "2"])
        .arg("--input")
        .arg(&input)
        .arg("--exact")
        .output()
        .unwrap();
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    let r = &v.as_array().unwrap()[0];
    // f1(δ_1, 2, linear) = Σ 1/n² = π²/6
    let lo: f64 = r["lo"].as_str().unwrap().parse().unwrap();
    let hi: f64 = r["hi"].as_str().unwrap().parse().unwrap();
    let zeta2 = std::f64::consts::PI.powi(2) / 6.0;
    assert!(lo <= zeta2 && zeta2 <= hi && hi - lo < 1e-9);
    assert_eq!(r["finite_exact"].as_str().unwrap(), "1");
    assert_eq!(r["precision"].as_u64().unwrap(), 128);
}

#[test]
fn eval_accepts_json_and_csv_equally() {
    let json = write_temp("pair.json", r#"{"values": ["1/2", "-3", "7/5"]}"#);
    let csv = write_temp("pair.csv", "index,value\n1,1/2\n2,-3\n3,7/5\n");
    let run = |path: &PathBuf| {
        let out = bin()
            .args(["eval", "--functional", "hardy", "--p", "2"])
            .arg("--input")
            .arg(path)
            .output()
            .unwrap();
        assert_eq!(code(&out), 0);
        stdout_json(&out)
    };
    assert_eq!(run(&json), run(&csv));
}

#[test]
fn eval_empty_input_is_the_zero_sequence() {
    let input = write_temp("empty.json", "");
    let out = bin()
        .args(["eval", "--functional", "f2", "--p", "3"])
        .arg("--input")
        .arg(&input)
        .output()
        .unwrap();
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    let r = &v.as_array().unwrap()[0];
    assert_eq!(r["window"].as_u64().unwrap(), 0);
    assert_eq!(r["lo"].as_str().unwrap().parse::<f64>().unwrap(), 0.0);
}

#[test]
fn eval_uncertainty_reports_all_four_sides() {
    let input = write_temp("unc.json", r#"{"values": ["1", "1"]}"#);
    let out = bin()
        .args(["eval", "--functional", "uncertainty", "--p", "2"])
        .arg("--input")
        .arg(&input)
        .output()
        .unwrap();
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    let names: Vec<&str> = v
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["functional"].as_str().unwrap())
        .collect();
    assert_eq!(
        names,
        [
            "uncertainty-suffix-lhs",
            "uncertainty-suffix-rhs",
            "uncertainty-prefix-lhs",
            "uncertainty-prefix-rhs"
        ]
    );
    // ψ = {1,1}: suffix lhs = 1, suffix rhs = 4 exactly
    let lo: f64 = v[0]["lo"].as_str().unwrap().parse().unwrap();
    let hi: f64 = v[1]["hi"].as_str().unwrap().parse().unwrap();
    assert!((lo - 1.0).abs() < 1e-12 && (hi - 4.0).abs() < 1e-9);
}

#[test]
fn invalid_inputs_exit_2() {
    let input = write_temp("one.json", r#"{"values": ["1"]}"#);
    let cases: &[&[&str]] = &[
        &["eval", "--functional", "f1", "--p", "1"],          // p must exceed 1
        &["eval", "--functional", "frobnicate", "--p", "2"],  // unknown functional
        &["eval", "--functional", "fkp", "--p", "2", "--exact"], // irrational weight
        &["eval", "--functional", "f1", "--p", "2.5", "--exact"], // exact needs integer p
    ];
    for args in cases {
        let out = bin().args(*args).arg("--input").arg(&input).output().unwrap();
        assert_eq!(code(&out), 2, "args {args:?}");
        assert!(!out.stderr.is_empty());
    }
    let out = bin()
        .args(["eval", "--functional", "f1", "--p", "2", "--input", "/nonexistent/nope.json"])
        .output()
        .unwrap();
    assert_eq!(code(&out), 2);
}

#[test]
fn coeffs_prints_exact_anchor_rows() {
    let out = bin().args(["coeffs", "--p", "2", "--l", "4"]).output().unwrap();
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    assert!(v["c0_identity"].as_bool().unwrap());
    assert!(v["nonpositive_even"].as_array().unwrap().is_empty());
    let rows = v["rows"].as_array().unwrap();
    let exact: Vec<(u64, String, String)> = rows
        .iter()
        .map(|r| {
            (
                r["l"].as_u64().unwrap(),
                r["numerator"].as_str().unwrap().to_string(),
                r["denominator"].as_str().unwrap().to_string(),
            )
        })
        .collect();
    let want = [(0, "1", "4"), (2, "5", "64"), (4, "21", "512")]
        .map(|(l, n, d)| (l, n.to_string(), d.to_string()));
    assert_eq!(exact, want);
    // non-integer p is rejected
    let out = bin().args(["coeffs", "--p", "2.5"]).output().unwrap();
    assert_eq!(code(&out), 2);
}

#[test]
fn verify_small_suite_passes_and_rejects_unknown_checks() {
    let out = bin()
        .args([
            "verify", "--suite", "lemma21,thm32,thm41", "--cases", "5", "--p-grid", "2,3",
        ])
        .output()
        .unwrap();
    assert_eq!(code(&out), 0, "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let v = stdout_json(&out);
    let checks = v["checks"].as_array().unwrap();
    assert_eq!(checks.len(), 3);
    for c in checks {
        assert_eq!(c["fail"].as_u64().unwrap(), 0);
        assert!(c["pass"].as_u64().unwrap() > 0);
    }
    let out = bin()
        .args(["verify", "--suite", "lemma99", "--cases", "1"])
        .output()
        .unwrap();
    assert_eq!(code(&out), 2);
}

#[test]
fn sharpness_single_point_matches_anchor_and_is_deterministic() {
    let run = || {
        bin()
            .args(["sharpness", "--grid", "1:1", "--p", "2"])
            .output()
            .unwrap()
    };
    let out = run();
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout.clone()).unwrap();
    let lines: Vec<&str> = text.trim().lines().collect();
    assert_eq!(lines[0], "epsilon,N,lhs_lo,lhs_hi,rhs,ratio");
    assert_eq!(lines.len(), 2);
    let ratio: f64 = lines[1].rsplit(',').next().unwrap().parse().unwrap();
    // ratio(ε=1, N=1) = ζ(2)/4
    assert!((ratio - std::f64::consts::PI.powi(2) / 24.0).abs() < 1e-10);
    assert_eq!(run().stdout, out.stdout);
    // malformed grid entries are input errors
    let out = bin().args(["sharpness", "--grid", "1;2"]).output().unwrap();
    assert_eq!(code(&out), 2);
}

#[test]
fn precision_flag_and_environment_are_honored() {
    let input = write_temp("prec.json", r#"{"values": ["1"]}"#);
    let at = |args: &mut Command| -> Output {
        args.args(["eval", "--functional", "hardy", "--p", "2"])
            .arg("--input")
            .arg(&input)
            .output()
            .unwrap()
    };
    let out = at(bin().arg("--precision").arg("64"));
    assert_eq!(code(&out), 0);
    assert_eq!(stdout_json(&out)[0]["precision"].as_u64().unwrap(), 64);

    let out = at(bin().env("HARDYLAB_PRECISION", "96"));
    assert_eq!(code(&out), 0);
    assert_eq!(stdout_json(&out)[0]["precision"].as_u64().unwrap(), 96);

    // the flag wins over the environment
    let out = at(bin().env("HARDYLAB_PRECISION", "96").arg("--precision").arg("128"));
    assert_eq!(stdout_json(&out)[0]["precision"].as_u64().unwrap(), 128);

    assert_eq!(code(&at(bin().arg("--precision").arg("10"))), 2);
    assert_eq!(code(&at(bin().env("HARDYLAB_PRECISION", "zebra"))), 2);
}

#[test]
fn output_flag_writes_the_report_file() {
    let input = write_temp("outflag.json", r#"{"values": ["2", "-1"]}"#);
    let report = std::env::temp_dir().join(format!("hardylab-cli-out-{}.json", std::process::id()));
    let out = bin()
        .args(["eval", "--functional", "f1", "--p", "2"])
        .arg("--input")
        .arg(&input)
        .arg("--output")
        .arg(&report)
        .output()
        .unwrap();
    assert_eq!(code(&out), 0);
    assert!(out.stdout.is_empty());
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(v[0]["functional"].as_str().unwrap(), "f1");
}
