use std::path::Path;
use std::process::{Command, Output};

use qfa_cli::io::{read_json, TupleFile};
use qfa_cli::ReportRecord;

fn qfa(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qfa"))
        .args(args)
        .arg("--out")
        .arg(dir)
        .env_clear()
        .output()
        .expect("run qfa")
}

#[test]
fn usage_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(qfa(dir.path(), &["verify", "nonsense"]).status.code(), Some(2));
    assert_eq!(qfa(dir.path(), &["verify", "fourier", "--p", "4"]).status.code(), Some(2));
    assert_eq!(qfa(dir.path(), &["frobnicate"]).status.code(), Some(2));
}

#[test]
fn verify_writes_csv_and_json() {
    let dir = tempfile::tempdir().unwrap();
    let o = qfa(dir.path(), &["verify", "fourier", "--n", "2", "--instances", "3", "--deterministic"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(dir.path().join("report-fourier.csv")).unwrap();
    assert_eq!(
        csv.lines().next().unwrap(),
        "suite,anchor,instance,lhs,rhs,ratio,status,note,wall_time_ms"
    );
    let records: Vec<ReportRecord> = read_json(&dir.path().join("report-fourier.json")).unwrap();
    assert_eq!(records.len(), csv.lines().count() - 1);
    assert!(records.iter().all(|r| r.wall_time_ms.is_none() && !r.is_failure()));
}

#[test]
fn config_file_sits_under_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, r#"{"p": 5, "n": 2, "rank": 2}"#).unwrap();
    let file = dir.path().join("t.json");
    let args = ["gen", "random-quadtuple", "--config", cfg.to_str().unwrap(), "--file", file.to_str().unwrap()];
    assert!(qfa(dir.path(), &args).status.success());
    let t: TupleFile = read_json(&file).unwrap();
    assert_eq!((t.p, t.n), (5, 2));

    let mut with_flag = args.to_vec();
    with_flag.extend(["--p", "3"]);
    assert!(qfa(dir.path(), &with_flag).status.success());
    let t: TupleFile = read_json(&file).unwrap();
    assert_eq!((t.p, t.n), (3, 2));
}

#[test]
fn environment_variables_apply() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("t.json");
    let o = Command::new(env!("CARGO_BIN_EXE_qfa"))
        .args(["gen", "random-quadtuple", "--file", file.to_str().unwrap()])
        .env_clear()
        .env("QFA_P", "7")
        .env("QFA_N", "2")
        .output()
        .unwrap();
    assert!(o.status.success());
    let t: TupleFile = read_json(&file).unwrap();
    assert_eq!((t.p, t.n), (7, 2));
}

#[test]
fn generated_files_feed_the_other_commands() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let path = |name: &str| d.join(name).to_str().unwrap().to_string();
    let run = |args: &[&str]| {
        let o = qfa(d, args);
        assert!(o.status.success(), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
        o
    };
    run(&["gen", "random-quadtuple", "--n", "3", "--rank", "3", "--seed", "2", "--file", &path("q.json")]);
    run(&["levelset", "--input", &path("q.json")]);
    run(&["brauer", "count", "--input", &path("q.json")]);
    run(&["gen", "planted-phase", "--tuple", &path("q.json"), "--file", &path("f.json")]);
    run(&["norms", "--input", &path("f.json")]);
    let o = run(&["inverse", "search", "--input", &path("f.json")]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!((v["eta"].as_f64().unwrap() - 1.0).abs() < 1e-6);
    run(&["complexity", "count", "--input", &path("f.json"), "--c", "1,1,2,2"]);
    run(&["gen", "planted-density-set", "--n", "3", "--file", &path("s.json")]);
    run(&["partition", "--input", &path("q.json"), "--sets", &path("s.json"), "--rank", "2"]);
    run(&["brauer", "lower-bound", "--n", "3"]);
}

#[test]
fn a_tampered_certificate_fails_with_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let sets = d.join("c.json");
    let sets = sets.to_str().unwrap();
    let cert = d.join("certificate.json");
    let cert = cert.to_str().unwrap();
    let gen = ["gen", "random-coloring", "--n", "3", "--r", "2", "--seed", "4", "--file", sets];
    assert!(qfa(d, &gen).status.success());
    assert!(qfa(d, &["increment", "run", "--sets", sets, "--rank", "2"]).status.success());
    let verify = ["increment", "verify-cert", "--certificate", cert, "--sets", sets];
    assert_eq!(qfa(d, &verify).status.code(), Some(0));

    let mut v: serde_json::Value = read_json(Path::new(cert)).unwrap();
    v["verdicts"][0]["level_hits"] = serde_json::json!(v["verdicts"][0]["level_hits"].as_u64().unwrap() + 1);
    std::fs::write(cert, serde_json::to_string(&v).unwrap()).unwrap();
    assert_eq!(qfa(d, &verify).status.code(), Some(1));
}
