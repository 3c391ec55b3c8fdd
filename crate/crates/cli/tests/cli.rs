use std::path::Path;
use std::process::{Command, Output};

use hyperfund::verify::{ResidualReport, Verdict};

fn hyperfund(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hyperfund"))
        .args(args)
        .env_remove("HYPERFUND_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

/// Data rows of a CSV table, skipping metadata and the header.
fn rows(csv: &str) -> Vec<Vec<String>> {
    csv.lines().filter(|l| !l.starts_with('#')).skip(1).map(|l| l.split(',').map(String::from).collect()).collect()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn desitter_kg_identities_pass() {
    let o = hyperfund(&["identities", "--family", "desitter-kg", "--mass", "1", "--t-max", "3"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.starts_with("# schema=hyperfund.identities/1\n"));
    let r = rows(&out);
    assert_eq!(r.len(), 100);
    assert!(r.iter().all(|row| row[2].parse::<f64>().unwrap().abs() <= 1e-6));
}

#[test]
fn edes_constant_source_gives_half_t_squared() {
    let o = hyperfund(&["solve", "--family", "edes", "--source", "const1", "--grid", "-0.5,0.5,3,0.5,1,2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let r = rows(&stdout(&o));
    let at = r.iter().find(|row| row[0] == "0.0" && row[1] == "1.0").expect("node (0, 1)");
    assert!((at[2].parse::<f64>().unwrap() - 0.5).abs() < 1e-9);
    assert_eq!(at[4], "ok");
}

#[test]
fn malformed_family_exits_two_naming_the_field() {
    let o = hyperfund(&["solve", "--family", "de-sitterr"]);
    assert_eq!(o.status.code(), Some(2));
    let err: serde_json::Value = serde_json::from_str(stderr(&o).trim()).unwrap();
    assert_eq!(err["field"], "family.name");
    assert_eq!(err["error"], "config_error");
}

#[test]
fn config_file_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.json", r#"{"grid": {"nx": 4, "ny": 2}}"#);
    let o = hyperfund(&["solve", "--config", &bad]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("ny"));
    let small = write(dir.path(), "small.json", r#"{"grid": {"nx": 1}}"#);
    let o = hyperfund(&["solve", "--config", &small]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("grid.nx"));
    let o = hyperfund(&["identities", "--family", "tricomi", "--k", "-1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("family.k"));
}

#[test]
fn failed_verdict_exits_one_and_still_writes_output() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let o = hyperfund(&[
        "identities",
        "--family",
        "kg-imag",
        "--m",
        "2",
        "--tolerance",
        "1e-20",
        "--format",
        "json",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(1));
    let report: ResidualReport = serde_json::from_slice(&std::fs::read(&out).unwrap()).unwrap();
    assert_eq!(report.verdict, Verdict::Fail);
    assert_eq!(report.per_point.map(|p| p.len()), Some(100));
}

#[test]
fn downstream_error_exits_one_with_json_report() {
    // no node of a Tricomi grid below t = 0.05 admits a residual stencil
    let o = hyperfund(&["residual", "--family", "tricomi", "--grid", "-0.5,0.5,3,0.0,0.04,2"]);
    assert_eq!(o.status.code(), Some(1));
    let err: serde_json::Value = serde_json::from_str(stderr(&o).trim()).unwrap();
    assert_eq!(err["error"], "computation_error");
    assert!(err["message"].as_str().unwrap().contains("stencil"));
}

#[test]
fn reruns_are_byte_identical_across_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["solve", "--family", "desitter", "--phi0", "gaussian", "--grid", "-1,1,9,0.25,1.5,3"];
    let mut outputs = Vec::new();
    for threads in ["1", "4", "4"] {
        let path = dir.path().join(format!("u{}.csv", outputs.len()));
        let o = Command::new(env!("CARGO_BIN_EXE_hyperfund"))
            .args(args)
            .args(["--out", path.to_str().unwrap()])
            .env("HYPERFUND_THREADS", threads)
            .output()
            .unwrap();
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        outputs.push(std::fs::read(&path).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
    assert_eq!(outputs[1], outputs[2]);
}

#[test]
fn bad_thread_override_is_a_config_error() {
    let o = Command::new(env!("CARGO_BIN_EXE_hyperfund"))
        .args(["identities"])
        .env("HYPERFUND_THREADS", "many")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("HYPERFUND_THREADS"));
}

#[test]
fn run_takes_the_command_from_the_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "tail.json",
        r#"{"command": "tail", "data": {"phi0": {"kind": "heaviside"}}, "grid": {"x_min": 0.0, "x_max": 0.6, "nx": 4, "t_min": 0.5, "t_max": 3.0, "nt": 3}}"#,
    );
    let o = hyperfund(&["run", "--config", &cfg]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.contains("\nx,t,u,huygensian,tail,ratio,bound,quotient\n"));
    for r in rows(&out) {
        let v: Vec<f64> = r.iter().map(|s| s.parse().unwrap()).collect();
        assert!((v[3] + v[4] - v[2]).abs() < 1e-9, "{r:?}");
        assert!(v[5] <= v[6] + 1e-9, "{r:?}");
    }
    let o = hyperfund(&["solve", "--config", &cfg]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("command"));
}

#[test]
fn tlin_reports_both_sample_sets() {
    let o = hyperfund(&["tlin"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.contains("\nset,x,t,u,huygensian,tail,ratio,bound,quotient\n"));
    let r = rows(&out);
    assert!(r.iter().any(|row| row[0] == "calibration") && r.iter().any(|row| row[0] == "heldout"));
}
