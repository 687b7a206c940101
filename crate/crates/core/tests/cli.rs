use std::process::Command;

use serde_json::Value;

fn hardylab(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_hardylab")).args(args).output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap())
}

fn json(args: &[&str]) -> Value {
    let (code, out) = hardylab(args);
    assert_eq!(code, 0, "{args:?}");
    serde_json::from_str(&out).unwrap()
}

#[test]
fn lpr_coefficients() {
    let v = json(&["coeffs", "--family", "lpr", "--order", "64"]);
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["result"]["a2"][0].as_f64().unwrap(), 0.25);
}

#[test]
fn sector_derivative_exponent() {
    let v = json(&["exponent", "--family", "sector-deriv", "--alpha", "0.5"]);
    let p = v["result"]["p_star"].as_f64().unwrap();
    assert!((p - 2.0 / 3.0).abs() < 0.05 * 2.0 / 3.0, "{p}");
}

#[test]
fn convex_suite_passes() {
    let v = json(&["verify", "--suite", "convex", "--seed", "7"]);
    let checks = v["result"]["checks"].as_array().unwrap();
    assert!(checks.len() > 700);
    assert!(checks.iter().all(|c| c["passed"] == true));
}

#[test]
fn failing_check_exits_one() {
    // a negative tolerance turns every exact check into a failure
    let (code, out) = hardylab(&["verify", "--family", "sector", "--alpha", "1", "--order", "16", "--tol", "a3=-1"]);
    assert_eq!(code, 1);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["result"]["passed"], false);
}

#[test]
fn exit_codes() {
    assert_eq!(hardylab(&["build"]).0, 2);
    assert_eq!(hardylab(&["build", "--family", "nonsense"]).0, 2);
    assert_eq!(hardylab(&["build", "--family", "sector", "--alpha", "3"]).0, 2);
    assert_eq!(hardylab(&["build", "--family", "sector", "--alpha", "0.5", "--format", "xml"]).0, 2);
    assert_eq!(hardylab(&["build", "--family", "sector", "--alpha", "0.5", "--out", "/nonexistent/dir/x.json"]).0, 3);
}

#[test]
fn output_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let mut files = Vec::new();
    for name in ["a.json", "b.json"] {
        let path = dir.path().join(name);
        let (code, _) = hardylab(&["verify", "--suite", "appendix", "--seed", "3", "--out", path.to_str().unwrap()]);
        assert_eq!(code, 0);
        files.push(std::fs::read(path).unwrap());
    }
    assert_eq!(files[0], files[1]);
}

#[test]
fn csv_means_profile() {
    let (code, out) = hardylab(&["means", "--family", "koebe", "--p", "0.5", "--radii", "0.5,0.9", "--format", "csv"]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "p,r,n_theta,M_p");
    assert_eq!(lines.len(), 3);
    assert!(lines[1].starts_with("5.0000000000000000e-1,5.0000000000000000e-1,"));
}

#[test]
fn geometry_and_report() {
    let v = json(&["geometry", "--family", "convex", "--atoms", "0:0.75,0.5:0.25", "--order", "32"]);
    let delta = v["result"]["half_tangents"]["delta"].as_f64().unwrap();
    assert!((delta - std::f64::consts::FRAC_PI_2).abs() < 0.02, "{delta}");
    let v = json(&["report", "--family", "sector", "--alpha", "0.5", "--order", "32"]);
    assert_eq!(v["result"]["passed"], true);
}
