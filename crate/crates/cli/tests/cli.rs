//! End-to-end tests of the `curveclose` binary: exit codes, CSV shape,
//! SVG determinism, and config handling.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_curveclose"))
}

fn workdir(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("curveclose-test-{name}-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn write_curve(dir: &PathBuf, name: &str, json: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, json).unwrap();
    path
}

const CURVE_M1: &str = r#"{"version":1,"speed":1.0,"theta":{"kind":"fourier","winding":1,"terms":[{"amp":0.9,"freq":1.0,"phase":0.7}]}}"#;
const CURVE_M2: &str = r#"{"version":1,"speed":1.0,"theta":{"kind":"fourier","winding":2,"terms":[{"amp":0.8,"freq":1.0,"phase":0.5}]}}"#;

fn run(cmd: &mut Command) -> Output {
    cmd.output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn close_success_exit_zero_and_csv_shape() {
    let dir = workdir("close-ok");
    let curve = write_curve(&dir, "c.json", CURVE_M1);
    let out = run(bin().arg("close").arg(&curve));
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let text = stdout(&out);
    let mut lines = text.lines();
    let header = lines.next().unwrap();
    assert_eq!(
        header,
        "status,sigma,c1,c2,residual,tangent_mismatch,margin,method"
    );
    let row = lines.next().unwrap();
    assert_eq!(row.split(',').count(), 8, "k+5 columns for k=3");
    assert!(row.starts_with("SUCCESS,\"1 3 2\","));
}

#[test]
fn close_rejects_non_multiple_turning_with_exit_two() {
    let dir = workdir("close-reject");
    // Winding 1 plus a half-integer frequency term: theta(1) is not a
    // multiple of 2*pi.
    let curve = write_curve(
        &dir,
        "c.json",
        r#"{"version":1,"speed":1.0,"theta":{"kind":"fourier","winding":1,"terms":[{"amp":0.4,"freq":0.5,"phase":0.3}]}}"#,
    );
    let out = run(bin().arg("close").arg(&curve));
    assert_eq!(out.status.code(), Some(2), "{out:?}");
    let text = stdout(&out);
    assert!(text.lines().nth(1).unwrap().starts_with("REJECTED,"));
}

#[test]
fn close_rejects_cyclic_shift_with_certificate() {
    let dir = workdir("close-cyclic");
    let curve = write_curve(&dir, "c.json", CURVE_M1);
    let out = run(bin().arg("close").arg(&curve).args(["--sigma", "3 4 1 2"]));
    assert_eq!(out.status.code(), Some(2), "{out:?}");
    let err = String::from_utf8(out.stderr.clone()).unwrap();
    assert!(err.contains("cyclic shift"), "{err}");
    assert!(err.contains("certificate"), "{err}");
}

#[test]
fn close_k6_writes_csv_and_svg() {
    let dir = workdir("close-k6");
    let curve = write_curve(&dir, "c.json", CURVE_M1);
    let csv = dir.join("out.csv");
    let svg = dir.join("out.svg");
    let out = run(bin()
        .arg("close")
        .arg(&curve)
        .args(["--sigma", "2 5 1 6 4 3"])
        .arg("--out")
        .arg(&csv)
        .arg("--svg")
        .arg(&svg));
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let text = std::fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with("status,sigma,c1,c2,c3,c4,c5,residual"));
    assert!(text.lines().nth(1).unwrap().starts_with("SUCCESS,"));
    let doc = std::fs::read_to_string(&svg).unwrap();
    assert!(doc.contains("viewBox=\"0 0 1000 1000\""));
    // Original path, rearranged path, and k+1 = 7 cut markers.
    assert_eq!(doc.matches("<path").count(), 2);
    assert_eq!(doc.matches("<circle").count(), 7);
}

#[test]
fn mode_all_finds_multiple_solutions_for_winding_two() {
    let dir = workdir("mode-all");
    let curve = write_curve(&dir, "c.json", CURVE_M2);
    let out = run(bin().arg("close").arg(&curve).args(["--mode", "all"]));
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let text = stdout(&out);
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert!(rows.len() >= 2, "expected >= 2 solutions:\n{text}");
    for row in rows {
        assert!(row.starts_with("SUCCESS,"), "{row}");
    }
}

#[test]
fn render_is_byte_deterministic() {
    let dir = workdir("render-det");
    let curve = write_curve(&dir, "c.json", CURVE_M1);
    let a = dir.join("a.svg");
    let b = dir.join("b.svg");
    for out_path in [&a, &b] {
        let out = run(bin()
            .arg("render")
            .arg(&curve)
            .args(["--cuts", "0.3 0.7"])
            .arg("--out")
            .arg(out_path));
        assert_eq!(out.status.code(), Some(0), "{out:?}");
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn close_csv_is_identical_across_thread_counts() {
    let dir = workdir("threads");
    let curve = write_curve(&dir, "c.json", CURVE_M2);
    let mut outputs = Vec::new();
    for threads in ["1", "8"] {
        let out = run(bin()
            .env("CURVECLOSE_THREADS", threads)
            .arg("close")
            .arg(&curve)
            .args(["--mode", "all"]));
        assert_eq!(out.status.code(), Some(0), "{out:?}");
        outputs.push(out.stdout);
    }
    assert_eq!(outputs[0], outputs[1]);
}

#[test]
fn config_file_is_applied_and_flags_override() {
    let dir = workdir("config");
    let curve = write_curve(&dir, "c.json", CURVE_M1);
    let cfg = dir.join("cfg.json");
    std::fs::write(&cfg, r#"{"resolution": 2048}"#).unwrap();
    let out = run(bin().arg("close").arg(&curve).arg("--config").arg(&cfg));
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    // Invalid override loses: resolution must be a power of two.
    let out = run(bin()
        .arg("close")
        .arg(&curve)
        .arg("--config")
        .arg(&cfg)
        .args(["--resolution", "1000"]));
    assert_eq!(out.status.code(), Some(1), "{out:?}");
    // Unknown config keys are rejected.
    std::fs::write(&cfg, r#"{"resolution": 2048, "typo": 1}"#).unwrap();
    let out = run(bin().arg("close").arg(&curve).arg("--config").arg(&cfg));
    assert_eq!(out.status.code(), Some(1), "{out:?}");
}

#[test]
fn reduce_prints_plan_and_rejects_cyclic() {
    let out = run(bin().args(["reduce", "--sigma", "2 5 1 6 4 3"]));
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let text = stdout(&out);
    assert!(text.contains("chain: F2 F3 F5"), "{text}");
    assert!(text.contains("survivors: 2 3 6"), "{text}");
    assert!(text.contains("induced: 1 3 2"), "{text}");

    let out = run(bin().args(["reduce", "--sigma", "2 3 4 1"]));
    assert_eq!(out.status.code(), Some(2), "{out:?}");
}

#[test]
fn analyze_emits_parseable_json_report() {
    let dir = workdir("analyze");
    let curve = write_curve(&dir, "c.json", CURVE_M1);
    let out = run(bin().arg("analyze").arg(&curve));
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let text = stdout(&out);
    let json_start = text.find('{').unwrap();
    let report: serde_json::Value = serde_json::from_str(&text[json_start..]).unwrap();
    assert_eq!(report["turning_multiple"], 1);
    assert_eq!(report["closed"], false);
    assert!(report["endpoint_norm"].as_f64().unwrap() > 0.4);
}
