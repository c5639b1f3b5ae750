use std::path::Path;
use std::process::{Command, Output};

const N5_WORDS: &str = ";2;1 2;3 2;4 3 2;1 3 2;2 1 3 2;1 4 3 2;2 1 4 3 2;3 2 1 4 3 2";

fn tlgns(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tlgns"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("valid json")
}

#[test]
fn counts_table_matches_golden_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("counts.csv");
    let out = tlgns(&[
        "gram", "--N", "5", "--n", "2", "--r", "7", "--words", N5_WORDS, "--format", "csv", "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let golden = Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/tests/golden/n5_counts.csv");
    assert_eq!(std::fs::read(path).unwrap(), std::fs::read(golden).unwrap());
}

#[test]
fn regime_refusal_exits_two() {
    for cmd in ["relations", "gram", "eta", "conjecture"] {
        let out = tlgns(&[cmd, "--N", "4", "--r", "3"]);
        assert_eq!(code(&out), 2, "{cmd}");
        assert!(String::from_utf8_lossy(&out.stderr).contains("r > N"), "{cmd}");
        assert!(out.stdout.is_empty(), "{cmd}");
    }
}

#[test]
fn bad_input_exits_two() {
    assert_eq!(code(&tlgns(&["omega", "--N", "4", "--n", "2", "--r", "7", "--word", "2 9"])), 2);
    assert_eq!(code(&tlgns(&["omega", "--N", "4", "--n", "2", "--r", "7", "--word", "a"])), 2);
    assert_eq!(code(&tlgns(&["omega", "--N", "4", "--n", "5", "--r", "7"])), 2);
    assert_eq!(code(&tlgns(&["relations", "--N", "3", "--r", "0.5"])), 2);
    assert_eq!(code(&tlgns(&["relations", "--N", "3", "--r", "5", "--tol", "0"])), 2);
}

#[test]
fn relations_pass_in_the_generic_regime() {
    let out = tlgns(&["relations", "--N", "4", "--r", "5", "--r", "11.5"]);
    assert_eq!(code(&out), 0);
    let reports = json(&out);
    assert_eq!(reports.as_array().unwrap().len(), 2);
    for rep in reports.as_array().unwrap() {
        assert_eq!(rep["pass"], true);
        assert!(rep["records"].as_array().unwrap().len() > 20);
    }
}

#[test]
fn impossible_tolerance_reports_failure() {
    let out = tlgns(&["relations", "--N", "5", "--r", "7", "--tol", "1e-300"]);
    assert_eq!(code(&out), 1);
}

#[test]
fn one_site_metric_is_identity() {
    let out = tlgns(&["eta", "--N", "1", "--r", "3"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    let eta = &v[0]["operators"][0];
    assert_eq!(eta["name"], "eta");
    let entries = eta["entries"].as_array().unwrap();
    assert_eq!(entries.len(), 2);
    for e in entries {
        assert_eq!(e["row"], e["col"]);
        assert!((e["re"].as_f64().unwrap() - 1.0).abs() < 1e-14);
        assert!(e["im"].as_f64().unwrap().abs() < 1e-14);
    }
}

#[test]
fn restricted_metric_warns() {
    let out = tlgns(&["eta", "--N", "4", "--r", "3", "--restricted"]);
    assert_eq!(code(&out), 0);
    assert!(String::from_utf8_lossy(&out.stderr).contains("warning"));
    assert!(json(&out)[0]["warning"].is_string());
}

#[test]
fn omega_worked_example() {
    let out = tlgns(&["omega", "--N", "4", "--n", "2", "--r", "7", "--word", "2 2 3 1 2", "--format", "csv"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    let row: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    let loop_weight = 2.0 * (std::f64::consts::PI / 7.0).cos();
    assert!((row[3].parse::<f64>().unwrap() + loop_weight).abs() < 1e-12);
    assert_eq!(&row[4..], ["0", "2", "1"]);
}

#[test]
fn conjecture_is_deterministic_per_seed() {
    let args = ["conjecture", "--N", "5", "--r", "6.5", "--seed", "42", "--samples", "30"];
    let a = tlgns(&args);
    let b = tlgns(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let v = json(&a);
    assert_eq!(v["pass"], true);
    assert_eq!(v["sectors"].as_array().unwrap().len(), 6);
    let other = tlgns(&["conjecture", "--N", "5", "--r", "6.5", "--seed", "43", "--samples", "30"]);
    assert_ne!(a.stdout, other.stdout);
}

#[test]
fn spectrum_is_real_and_matches_h() {
    let out = tlgns(&["spectrum", "--N", "4", "--r", "9"]);
    assert_eq!(code(&out), 0);
    let v = &json(&out)[0];
    assert!(v["max_abs_imag"].as_f64().unwrap() < 1e-8);
    let big: Vec<f64> = v["hamiltonian"].as_array().unwrap().iter().map(|z| z[0].as_f64().unwrap()).collect();
    let small: Vec<f64> = v["hermitian"].as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect();
    assert_eq!(big.len(), 16);
    for (x, y) in big.iter().zip(&small) {
        assert!((x - y).abs() < 1e-8);
    }
}

#[test]
fn spectrum_outside_generic_regime_omits_h() {
    let out = tlgns(&["spectrum", "--N", "4", "--r", "3"]);
    assert_eq!(code(&out), 0);
    let v = &json(&out)[0];
    assert_eq!(v["hamiltonian"].as_array().unwrap().len(), 16);
    assert!(v.get("hermitian").is_none());
}

#[test]
fn six_site_spectrum_is_real() {
    let out = tlgns(&["spectrum", "--N", "6", "--r", "8", "--format", "csv"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut rows = 0;
    for line in text.lines().skip(1) {
        let im: f64 = line.split(',').nth(3).unwrap().parse().unwrap();
        assert!(im.abs() < 1e-8);
        rows += 1;
    }
    assert_eq!(rows, 64);
}
