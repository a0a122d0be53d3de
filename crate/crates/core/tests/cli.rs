use std::path::Path;
use std::process::{Command, Output};

use serde_json::{json, Value};
use tempfile::TempDir;

fn sepmult(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sepmult"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write(dir: &Path, name: &str, value: &Value) -> String {
    let path = dir.join(name);
    std::fs::write(&path, value.to_string()).unwrap();
    path.to_str().unwrap().to_owned()
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn fourier_character_is_separating() {
    let dir = TempDir::new().unwrap();
    // the character k -> i^k of cyclic(4)
    let phi = write(
        dir.path(),
        "phi.json",
        &json!([[1, 0], [0, 1], [-1, 0], [0, -1]]),
    );
    let out = sepmult(&["classify-fourier", "--group", "cyclic(4)", "--symbol", &phi]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["status"], "separating");
    assert_eq!(v["certificate"]["kind"], "scalar-character");
    assert_eq!(v["trials"], 200);
    assert_eq!(v["p"], 2.0);
}

#[test]
fn fourier_indicator_has_witness() {
    let dir = TempDir::new().unwrap();
    let phi = write(dir.path(), "phi.json", &json!([[1, 0], [0, 0]]));
    let out = sepmult(&[
        "classify-fourier",
        "--group",
        "cyclic(2)",
        "--symbol",
        &phi,
        "--pretty",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let v = stdout_json(&out);
    assert_eq!(v["status"], "not-separating");
    assert!(v["witness"]["violation"].as_f64().unwrap() > 1e-6);
    assert!(String::from_utf8_lossy(&out.stdout).contains("\n  \"status\""));
}

#[test]
fn missing_and_malformed_inputs_exit_four() {
    let dir = TempDir::new().unwrap();
    let out = sepmult(&[
        "classify-fourier",
        "--group",
        "cyclic(2)",
        "--symbol",
        "/no/such/file.json",
    ]);
    assert_eq!(out.status.code(), Some(4));
    assert!(!out.stderr.is_empty());

    let short = write(dir.path(), "short.json", &json!([[1, 0]]));
    let out = sepmult(&[
        "classify-fourier",
        "--group",
        "cyclic(3)",
        "--symbol",
        &short,
    ]);
    assert_eq!(out.status.code(), Some(4));

    let ragged = write(
        dir.path(),
        "ragged.json",
        &json!({"dim": 2, "re": [[1, 2, 3], [4, 5, 6]], "im": [[0, 0, 0], [0, 0, 0]]}),
    );
    let out = sepmult(&["classify-schur", "--symbol", &ragged]);
    assert_eq!(out.status.code(), Some(4));

    let out = sepmult(&["list-characters", "--group", "nosuchgroup(3)"]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn usage_errors_exit_three() {
    assert_eq!(
        sepmult(&["classify-fourier", "--group", "cyclic(2)"])
            .status
            .code(),
        Some(3)
    );
    assert_eq!(
        sepmult(&["classify-schur", "--symbol", "x.json", "--trials", "many"])
            .status
            .code(),
        Some(3)
    );
    let dir = TempDir::new().unwrap();
    let m = write(
        dir.path(),
        "m.json",
        &json!({"dim": 1, "re": [[1]], "im": [[0]]}),
    );
    assert_eq!(
        sepmult(&["classify-schur", "--symbol", &m, "--trials", "0"])
            .status
            .code(),
        Some(3)
    );
    assert_eq!(
        sepmult(&["classify-schur", "--symbol", &m, "--p", "0.5"])
            .status
            .code(),
        Some(3)
    );
}

#[test]
fn schur_verdicts() {
    let dir = TempDir::new().unwrap();
    let rank_one = write(
        dir.path(),
        "rank_one.json",
        &json!({"dim": 2, "re": [[1, 0], [0, 1]], "im": [[0, 1], [-1, 0]]}),
    );
    let out = sepmult(&[
        "classify-schur",
        "--symbol",
        &rank_one,
        "--p",
        "1.5",
        "--seed",
        "3",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["certificate"]["kind"], "rank-one");
    assert_eq!(v["seeds"]["base"], 3);
    assert!(v["max_deviation"].as_f64().unwrap() < 1e-9);

    let hadamard = write(
        dir.path(),
        "h.json",
        &json!({"dim": 2, "re": [[1, 1], [1, -1]], "im": [[0, 0], [0, 0]]}),
    );
    let out = sepmult(&["classify-schur", "--symbol", &hadamard]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stdout_json(&out)["witness"]["source"]["kind"], "trial");
}

#[test]
fn herz_schur_recovers_character() {
    let dir = TempDir::new().unwrap();
    // 2i times the sign character of cyclic(2)
    let phi = write(dir.path(), "phi.json", &json!([[0, 2], [0, -2]]));
    let out = sepmult(&["herz-schur", "--group", "cyclic(2)", "--symbol", &phi]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["recovered"]["c"], json!([0.0, 2.0]));
    assert_eq!(
        v["recovered"]["character"],
        json!([[1.0, 0.0], [-1.0, 0.0]])
    );
    assert_eq!(v["symbol"]["dim"], 2);
}

#[test]
fn yeadon_subcommand() {
    let dir = TempDir::new().unwrap();
    let phi = write(dir.path(), "phi.json", &json!([[1, 0], [0, 0]]));
    let out = sepmult(&["yeadon", "--group", "cyclic(2)", "--symbol", &phi]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stdout_json(&out)["status"], "not-separating");

    let out = sepmult(&["yeadon", "--transpose", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert!(v["residuals"]["jordan"].as_f64().unwrap() < 1e-12);
    assert_eq!(v["b"]["dim"], 3);
}

#[test]
fn list_characters() {
    let out = sepmult(&["list-characters", "--group", "symmetric(3)"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["count"], 2);
    assert_eq!(v["order"], 6);
}

fn strip_times(mut report: Value) -> Value {
    for cell in report["cells"].as_array_mut().unwrap() {
        cell.as_object_mut().unwrap().remove("wall_ms");
    }
    report["config"].as_object_mut().unwrap().remove("output");
    report
}

#[test]
fn verify_theorems_is_reproducible() {
    let dir = TempDir::new().unwrap();
    let config = json!({
        "groups": ["cyclic(3)", "symmetric(3)"],
        "p_values": [1, 2],
        "trials": 20,
        "seed": 11,
        "schur_dims": [2],
        "random_symbols": 3
    });
    let cfg = write(dir.path(), "suite.json", &config);
    let mut reports = Vec::new();
    for run in 0..2 {
        let report = dir.path().join(format!("report{run}.json"));
        let out = sepmult(&[
            "verify-theorems",
            "--config",
            &cfg,
            "--output",
            report.to_str().unwrap(),
        ]);
        assert_eq!(
            out.status.code(),
            Some(0),
            "{}",
            String::from_utf8_lossy(&out.stdout)
        );
        assert!(String::from_utf8_lossy(&out.stdout).contains("PASS characters symmetric(3)"));
        reports.push(
            serde_json::from_str::<Value>(&std::fs::read_to_string(report).unwrap()).unwrap(),
        );
    }
    assert_eq!(reports[0]["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(reports[0]["config"]["seed"], 11);
    assert_eq!(
        strip_times(reports[0].clone()),
        strip_times(reports[1].clone())
    );
}

#[test]
fn verify_theorems_negative_control_and_empty() {
    let dir = TempDir::new().unwrap();
    let config = json!({
        "groups": ["cyclic(2)"],
        "p_values": [2],
        "trials": 10,
        "schur_dims": [],
        "random_symbols": 2,
        "symbols": [{
            "name": "injected-hadamard",
            "matrix": {"dim": 2, "re": [[1, 1], [1, -1]], "im": [[0, 0], [0, 0]]},
            "expect": "separating"
        }]
    });
    let cfg = write(dir.path(), "bad.json", &config);
    let out = sepmult(&["verify-theorems", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("injected-hadamard"));
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["outcome"], "failed");

    let empty = write(dir.path(), "empty.json", &json!({"groups": []}));
    let out = sepmult(&["verify-theorems", "--config", &empty]);
    assert_eq!(out.status.code(), Some(2));

    let bad = write(
        dir.path(),
        "invalid.json",
        &json!({"groups": ["cyclic(2)"], "trials": 0}),
    );
    assert_eq!(
        sepmult(&["verify-theorems", "--config", &bad])
            .status
            .code(),
        Some(3)
    );
}
