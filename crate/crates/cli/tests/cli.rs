use std::path::Path;
use std::process::{Command, Output};

use serde_json::{json, Value};

fn bimax(config: &Value, dir: &Path, extra: &[&str]) -> Output {
    let path = dir.join("config.json");
    std::fs::write(&path, config.to_string()).unwrap();
    Command::new(env!("CARGO_BIN_EXE_bimax"))
        .arg("run")
        .arg(&path)
        .arg("--out")
        .arg(dir.join("out"))
        .args(extra)
        .output()
        .unwrap()
}

fn suite(experiments: Value) -> Value {
    json!({"name": "t", "seed": 3, "experiments": experiments})
}

fn identity_experiment() -> Value {
    json!({
        "name": "identity", "kind": "maximal",
        "symbol": {"family": "identity", "n": 1},
        "grid": {"points": 64, "extent": 16.0},
        "inputs": {"type": "random", "count": 2, "band_f": [0.0, 1.0], "band_g": [0.0, 1.0]},
        "dilation": {"t_min": 0.5, "t_max": 4.0, "per_octave": 2},
        "tolerances": {"max_ratio": 1.0}
    })
}

fn bessel_experiment() -> Value {
    json!({"name": "bessel", "kind": "bessel-check", "radii": {"min": 0.1, "max": 4.0, "count": 10}})
}

fn report(dir: &Path) -> Value {
    serde_json::from_slice(&std::fs::read(dir.join("out/report.json")).unwrap()).unwrap()
}

#[test]
fn identity_suite_passes() {
    let dir = tempfile::tempdir().unwrap();
    let out = bimax(&suite(json!([identity_experiment()])), dir.path(), &[]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let rep = report(dir.path());
    let checks = rep["experiments"][0]["checks"].as_array().unwrap();
    let ratio = checks.iter().find(|c| c["name"] == "max L1 ratio").unwrap();
    assert!(ratio["value"].as_f64().unwrap() <= 1.0 + 1e-12);
    assert!(dir.path().join("out/metadata.json").exists());
    assert!(dir.path().join("out/identity.csv").exists());
}

#[test]
fn unknown_family_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let mut e = bessel_experiment();
    e["kind"] = json!("maximal");
    e["symbol"] = json!({"family": "bochner-rieszz", "n": 1, "lambda": 2.0});
    let out = bimax(&suite(json!([e])), dir.path(), &[]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!dir.path().join("out/report.json").exists());
}

#[test]
fn malformed_json_and_missing_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, "{ not json").unwrap();
    let run = |p: &Path| Command::new(env!("CARGO_BIN_EXE_bimax")).arg("run").arg(p).output().unwrap();
    assert_eq!(run(&path).status.code(), Some(2));
    assert_eq!(run(&dir.path().join("missing.json")).status.code(), Some(2));
}

#[test]
fn resolution_failure_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let e = json!({
        "name": "conv", "kind": "convergence",
        "symbol": {"family": "bochner-riesz", "n": 1, "lambda": 3.0},
        "grid": {"points": 32, "extent": 8.0},
        "inputs": {"type": "gaussian", "f": {"width": 1.0}, "g": {"width": 1.0}},
        "dilation": {"values": [1.0, 1e-9]}
    });
    let out = bimax(&suite(json!([e])), dir.path(), &[]);
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn failed_verdict_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let mut e = bessel_experiment();
    e["tolerances"] = json!({"deviation": 1e-30});
    let out = bimax(&suite(json!([identity_experiment(), e])), dir.path(), &[]);
    assert_eq!(out.status.code(), Some(1));
    let rep = report(dir.path());
    assert_eq!(rep["verdict"], json!(false));
    assert_eq!(rep["experiments"][0]["verdict"], json!(true));
    assert_eq!(rep["experiments"][1]["verdict"], json!(false));
}

#[test]
fn overrides_and_seed_apply() {
    let dir = tempfile::tempdir().unwrap();
    let out = bimax(
        &suite(json!([identity_experiment()])),
        dir.path(),
        &["--override", "experiments.0.inputs.count=3", "--seed", "99"],
    );
    assert_eq!(out.status.code(), Some(0));
    let rep = report(dir.path());
    assert_eq!(rep["seed"], json!(99));
    assert_eq!(rep["experiments"][0]["details"]["trials"].as_array().unwrap().len(), 3);

    let bad = bimax(&suite(json!([identity_experiment()])), dir.path(), &["--override", "experiments.7.name=x"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn kernel_dump_has_header() {
    let dir = tempfile::tempdir().unwrap();
    let e = json!({
        "name": "kern", "kind": "kernel-decay",
        "symbol": {"family": "bochner-riesz", "n": 1, "lambda": 2.0},
        "grid": {"points": 128, "extent": 4.0},
        "window": {"r_min": 4.0, "r_max": 14.0, "bins": 6},
        "dump_fields": true
    });
    let out = bimax(&suite(json!([e])), dir.path(), &[]);
    assert!(matches!(out.status.code(), Some(0) | Some(1)));
    let bytes = std::fs::read(dir.path().join("out/kern.kernel.bin")).unwrap();
    assert_eq!(&bytes[..8], b"BIMAXFLD");
    assert_eq!(u32::from_le_bytes(bytes[12..16].try_into().unwrap()), 2);
    assert_eq!(u64::from_le_bytes(bytes[16..24].try_into().unwrap()), 128);
    assert_eq!(bytes.len(), 64 + 128 * 128 * 16);
    let field = bimax_cli::rawfield::read(&bytes[..]).unwrap();
    // the kernel lives on the dual grid, extent N/L
    assert_eq!(field.grid().extent(), 32.0);
}
