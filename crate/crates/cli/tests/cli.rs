use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn qfock(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qfock"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn verify_into(dir: &Path, extra: &[&str]) -> Output {
    let mut args = vec!["verify", "--out", dir.to_str().unwrap()];
    args.extend_from_slice(extra);
    qfock(&args)
}

#[test]
fn verify_default_passes_and_is_reproducible() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let first = verify_into(a.path(), &[]);
    assert_eq!(
        first.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&first.stdout)
    );
    assert_eq!(verify_into(b.path(), &[]).status.code(), Some(0));
    for f in [
        "ledger.json",
        "slice_lab.csv",
        "quadrature.json",
        "structure_constants.json",
        "checks.json",
    ] {
        let (x, y) = (
            fs::read(a.path().join(f)).unwrap(),
            fs::read(b.path().join(f)).unwrap(),
        );
        assert!(!x.is_empty());
        assert!(x == y, "{f} differs between runs");
    }

    let ledger: serde_json::Value =
        serde_json::from_slice(&fs::read(a.path().join("ledger.json")).unwrap()).unwrap();
    let ids: Vec<&str> = ledger["entries"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e["identity"].as_str().unwrap())
        .collect();
    for key in [
        "pure squeezed state series",
        "canonical coherent state",
        "three-factor squeeze",
        "measure normalization",
    ] {
        assert!(ids.iter().any(|i| i.starts_with(key)), "ledger lacks {key}");
    }

    let mut rdr = csv::Reader::from_path(a.path().join("slice_lab.csv")).unwrap();
    let header = rdr.headers().unwrap().clone();
    assert_eq!(&header[0], "axis");
    assert_eq!(&header[9], "deviation");
    assert!(rdr.records().count() > 100);
}

#[test]
fn verify_reports_truncation_failures_at_dim_8() {
    let d = tempfile::tempdir().unwrap();
    let out = verify_into(d.path(), &["--dim", "8"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("FAIL"));
}

#[test]
fn config_errors_exit_2() {
    let d = tempfile::tempdir().unwrap();
    assert_eq!(
        verify_into(d.path(), &["--margin", "64"]).status.code(),
        Some(2)
    );
    assert_eq!(
        verify_into(d.path(), &["--tol", "0"]).status.code(),
        Some(2)
    );
    assert_eq!(qfock(&["verify", "--axis", "0,0,0"]).status.code(), Some(2));
    assert_eq!(
        qfock(&["state", "coherent", "--q", "3,0,0,0", "--dim", "16"])
            .status
            .code(),
        Some(2)
    );
}

fn expect_rows(args: &[&str]) -> (Vec<String>, Vec<csv::StringRecord>) {
    let mut full = vec!["expect"];
    full.extend_from_slice(args);
    let out = qfock(&full);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let mut rdr = csv::Reader::from_reader(out.stdout.as_slice());
    let header = rdr.headers().unwrap().iter().map(String::from).collect();
    (header, rdr.records().map(Result::unwrap).collect())
}

fn col(header: &[String], row: &csv::StringRecord, name: &str) -> f64 {
    let k = header.iter().position(|h| h == name).unwrap();
    row[k].parse().unwrap()
}

#[test]
fn expect_vacuum_and_ratio() {
    let (h, rows) = expect_rows(&["--r", "0", "--theta", "1.3"]);
    assert_eq!(rows.len(), 1);
    for name in [
        "var_x_closed",
        "var_x_numeric",
        "var_y_closed",
        "var_y_numeric",
    ] {
        assert!((col(&h, &rows[0], name) - 0.25).abs() < 1e-12, "{name}");
    }

    let (h, rows) = expect_rows(&["--r", "1", "--theta", "0"]);
    let e4 = 4f64.exp();
    let closed = col(&h, &rows[0], "var_x_closed") / col(&h, &rows[0], "var_y_closed");
    let numeric = col(&h, &rows[0], "var_x_numeric") / col(&h, &rows[0], "var_y_numeric");
    assert!((closed / e4 - 1.0).abs() < 1e-12);
    assert!((numeric / e4 - 1.0).abs() < 1e-8);
}

#[test]
fn expect_empty_range_is_header_only() {
    let (h, rows) = expect_rows(&["--r", "0:1:0"]);
    assert_eq!(h[0], "r");
    assert!(rows.is_empty());
}

fn state_json(args: &[&str]) -> serde_json::Value {
    let mut full = vec!["state"];
    full.extend_from_slice(args);
    let out = qfock(&full);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).unwrap()
}

fn coeffs(v: &serde_json::Value) -> Vec<[f64; 4]> {
    serde_json::from_value(v["state"]["data"].clone()).unwrap()
}

#[test]
fn state_coherent_vacuum() {
    let v = state_json(&["coherent", "--dim", "16"]);
    let c = coeffs(&v);
    assert_eq!(c.len(), 16);
    assert_eq!(c[0], [1.0, 0.0, 0.0, 0.0]);
    assert!(c[1..].iter().all(|q| *q == [0.0; 4]));
}

#[test]
fn state_pure_squeezed_is_even() {
    let v = state_json(&["pure-squeezed", "--p", "0.9,0,0,0"]);
    let odd = coeffs(&v)
        .iter()
        .skip(1)
        .step_by(2)
        .flat_map(|q| q.iter().map(|x| x.abs()))
        .fold(0.0, f64::max);
    assert!(odd <= 1e-12);
    assert!((v["norm"].as_f64().unwrap() - 1.0).abs() < 1e-10);
}

#[test]
fn state_squeezed_mixed_slices() {
    let v = state_json(&["squeezed", "--p", "0.3,0.4,0,0", "--q", "0.2,0,0.5,0.1"]);
    assert!((v["norm"].as_f64().unwrap() - 1.0).abs() < 1e-10);
}

#[test]
fn state_output_file() {
    let d = tempfile::tempdir().unwrap();
    let path = d.path().join("s.json");
    let out = qfock(&[
        "state",
        "coherent",
        "--q",
        "0.5,0.1,0,0",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&fs::read(path).unwrap()).unwrap();
    assert_eq!(v["which"], "coherent");
}
