use std::process::Command;

use polyconvex_cli::output::render_value;
use polyconvex_cli::{run, EXIT_COMPUTATION, EXIT_OK, EXIT_UNKNOWN, EXIT_USAGE};
use serde_json::Value;

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn cli(args: &[&str]) -> Run {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let argv = std::iter::once("polyconvex").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    Run { code, stdout: String::from_utf8(out).unwrap(), stderr: String::from_utf8(err).unwrap() }
}

fn json(args: &[&str]) -> Value {
    let r = cli(args);
    assert_eq!(r.code, EXIT_OK, "{args:?}: {}", r.stderr);
    serde_json::from_str(&r.stdout).unwrap()
}

fn assert_error(r: &Run, code: i32, kind: &str) {
    assert_eq!(r.code, code, "stdout {} stderr {}", r.stdout, r.stderr);
    assert!(r.stdout.is_empty());
    assert_eq!(r.stderr.lines().count(), 1, "{}", r.stderr);
    let v: Value = serde_json::from_str(&r.stderr).unwrap();
    assert_eq!(v["error"]["kind"], kind);
    assert_eq!(v["error"]["exit_code"], code);
}

#[test]
fn classify_elliptic_ball() {
    let v = json(&["classify", "--t", "0.5", "--surface", "cubic", "--json"]);
    assert_eq!(v["verdict"]["status"], "HullContainsBall");
    assert_eq!(v["maslov_index"], 2);
    assert!((v["thresholds"]["star"].as_f64().unwrap() - 1.0756066517006793).abs() < 1e-15);
}

#[test]
fn classify_text_mode() {
    let r = cli(&["classify", "--t", "2"]);
    assert_eq!(r.code, EXIT_OK);
    assert!(r.stdout.contains("LocallyPolynomiallyConvex"));
    assert!(r.stdout.contains("index = -2"));
}

#[test]
fn maslov_both_methods() {
    let v = json(&["maslov", "--poly", "z2zb:1,zzb2:0.5,zb3:0.0833333", "--method", "both"]);
    assert_eq!(v["algebraic"], 2);
    assert_eq!(v["winding"], 2);
    let v = json(&["maslov", "--poly", "2,1:1,0,1,2:2,0,0,3:1.3333333333333333,0", "--method", "winding"]);
    assert_eq!(v["winding"], -2);
    assert!(v.get("algebraic").is_none());
}

fn boundaries(step: &str) -> Vec<f64> {
    let v = json(&["sweep", "--t-min", "0.5", "--t-max", "1.3", "--step", step]);
    let ts: Vec<f64> = v["entries"].as_array().unwrap().iter().map(|e| e["t"].as_f64().unwrap()).collect();
    assert!(ts.windows(2).all(|w| w[0] < w[1]));
    v["boundaries"].as_array().unwrap().iter().map(|b| b.as_f64().unwrap()).collect()
}

#[test]
fn sweep_finds_band_edges() {
    let coarse = boundaries("0.01");
    let want = [0.866, 1.0, 1.0760];
    assert_eq!(coarse.len(), 3, "{coarse:?}");
    for (b, w) in coarse.iter().zip(want) {
        assert!((b - w).abs() < 1e-3, "{b} vs {w}");
    }
    let fine = boundaries("0.005");
    assert_eq!(fine.len(), coarse.len());
    for (a, b) in coarse.iter().zip(&fine) {
        assert!((a - b).abs() <= 0.01, "{a} vs {b}");
    }
}

#[test]
fn json_outputs_roundtrip_byte_identical() {
    let commands: [&[&str]; 7] = [
        &["classify", "--t", "1.07", "--json"],
        &["planes", "--t", "2"],
        &["curve", "--t", "0.95", "--samples", "1024"],
        &["subharmonic", "--t", "0.9", "--j", "2", "--angles", "72"],
        &["kallin", "--case", "product-negative", "--samples", "500"],
        &["sweep", "--t-min", "0.8", "--t-max", "1.2", "--step", "0.1"],
        &["factor", "--a1", "1", "--a2", "0.5", "--a3", "0.0833333333333333"],
    ];
    for args in commands {
        let r = cli(args);
        assert_eq!(r.code, EXIT_OK, "{args:?}: {}", r.stderr);
        let parsed: Value = serde_json::from_str(&r.stdout).unwrap();
        assert_eq!(render_value(&parsed), r.stdout, "{args:?}");
    }
}

#[test]
fn typed_schemas_parse_back() {
    let r = cli(&["sweep", "--t-min", "0.9", "--t-max", "1.1", "--step", "0.05"]);
    let report: polyconvex_cli::SweepReport = serde_json::from_str(&r.stdout).unwrap();
    assert_eq!(report.entries.len(), 5);
    let r = cli(&["classify", "--t", "3", "--json"]);
    let c: polyconvex::convexity::FamilyClassification = serde_json::from_str(&r.stdout).unwrap();
    assert_eq!(c.t, 3.0);
}

#[test]
fn strict_unknown_exit() {
    assert_eq!(cli(&["classify", "--t", "1.05", "--strict"]).code, EXIT_UNKNOWN);
    assert_eq!(cli(&["--strict", "classify", "--t", "2"]).code, EXIT_OK);
    assert_eq!(cli(&["classify", "--t", "1.05"]).code, EXIT_OK);
    assert_eq!(cli(&["planes", "--t", "1.07", "--strict"]).code, EXIT_UNKNOWN);
}

#[test]
fn usage_errors() {
    assert_error(&cli(&["classify", "--t", "-1"]), EXIT_USAGE, "InvalidArguments");
    assert_error(&cli(&["classify"]), EXIT_USAGE, "InvalidArguments");
    assert_error(&cli(&["maslov", "--poly", "zz:1"]), EXIT_USAGE, "InvalidArguments");
    assert_error(&cli(&["kallin", "--case", "nope"]), EXIT_USAGE, "InvalidArguments");
    assert_error(&cli(&["planes"]), EXIT_USAGE, "InvalidArguments");
    assert_error(&cli(&["sweep", "--t-min", "2", "--t-max", "1", "--step", "0.1"]), EXIT_USAGE, "InvalidArguments");
    assert_error(&cli(&["frobnicate"]), EXIT_USAGE, "InvalidArguments");
}

#[test]
fn computation_errors() {
    assert_error(&cli(&["factor", "--a1", "1", "--a2", "1", "--a3", "1"]), EXIT_COMPUTATION, "NotFactorable");
    assert_error(&cli(&["planes", "--t", "1"]), EXIT_COMPUTATION, "NotTransverse");
    assert_error(&cli(&["maslov", "--poly", "z2zb:1,zzb2:1,zb3:0.3333333333333333"]), EXIT_COMPUTATION, "NotIsolatedSingularity");
    assert_error(&cli(&["curve", "--t", "0.5", "--samples", "4"]), EXIT_COMPUTATION, "InvalidParameter");
}

#[test]
fn help_succeeds() {
    let r = cli(&["--help"]);
    assert_eq!(r.code, EXIT_OK);
    assert!(r.stdout.contains("sweep"));
}

#[test]
fn planes_from_matrix_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("pair.json");
    std::fs::write(&path, r#"{"a1": [[1.0, 0.0], [0.0, 2.0]], "a2": [[0.5, 1.0], [1.0, 0.7]]}"#).unwrap();
    let v = json(&["planes", "--matrices", path.to_str().unwrap()]);
    assert_eq!(v["invariants"]["tr_a1"], 3.0);
    assert!(v["verdict"]["criterion"].is_string());
    std::fs::write(&path, "{\"a1\": 3}").unwrap();
    assert_error(&cli(&["planes", "--matrices", path.to_str().unwrap()]), EXIT_USAGE, "InvalidArguments");
    let missing = dir.path().join("missing.json");
    assert_error(&cli(&["planes", "--matrices", missing.to_str().unwrap()]), EXIT_COMPUTATION, "Io");
}

#[test]
fn curve_emits_csv_pair() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("curve.csv");
    let v = json(&["curve", "--t", "0.95", "--samples", "512", "--emit-csv", path.to_str().unwrap()]);
    let samples = std::fs::read_to_string(&path).unwrap();
    assert_eq!(samples.lines().next().unwrap(), "theta,re_C,im_C");
    assert_eq!(samples.lines().count(), 513);
    let pairs = std::fs::read_to_string(dir.path().join("curve_coincidences.csv")).unwrap();
    assert_eq!(pairs.lines().count(), v["coincidence_pairs"].as_array().unwrap().len() + 1);
}

#[test]
fn sweep_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sweep.json");
    let r = cli(&["sweep", "--t-min", "1", "--t-max", "1.2", "--step", "0.1", "--out", path.to_str().unwrap()]);
    assert_eq!(r.code, EXIT_OK);
    assert_eq!(std::fs::read_to_string(&path).unwrap(), r.stdout);
}

#[test]
fn kallin_reports_pass() {
    for case in ["sum-of-squares-singular", "sum-of-squares-bounded-negative", "product-negative", "linear-parabolic"] {
        let v = json(&["kallin", "--case", case, "--samples", "1000"]);
        assert_eq!(v["passed"], true, "{case}");
        assert_eq!(v["case"], case);
    }
    let v = json(&["kallin", "--case", "product-negative", "--t", "1.3", "--samples", "1000"]);
    assert_eq!(v["passed"], true);
}

#[test]
fn factor_family_planes() {
    let v = json(&["factor", "--a1", "1,0", "--a2", "2,0", "--a3", "1.3333333333333333,0"]);
    let planes = v["planes"].as_array().unwrap();
    assert_eq!(planes.len(), 3);
    assert!(v["pullback_residual"].as_f64().unwrap() <= 1e-9);
    // t = 2: α1 = (-3 + i√3)/4.
    assert!((planes[1]["alpha"][0].as_f64().unwrap() + 0.75).abs() < 1e-12);
    assert!((planes[1]["alpha"][1].as_f64().unwrap() - 3f64.sqrt() / 4.0).abs() < 1e-12);
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_polyconvex");
    let ok = Command::new(bin).args(["classify", "--t", "0.5"]).output().unwrap();
    assert_eq!(ok.status.code(), Some(EXIT_OK));
    let bad = Command::new(bin).args(["classify", "--t", "zero"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(EXIT_USAGE));
    let v: Value = serde_json::from_slice(&bad.stderr).unwrap();
    assert_eq!(v["error"]["kind"], "InvalidArguments");
}
