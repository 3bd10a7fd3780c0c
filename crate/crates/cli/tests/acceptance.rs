//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use qfa_cli::gen::pinned_tuple;
use qfa_cli::report::{summarize, Recorder, Status};
use qfa_cli::suites::*;
use qfa_cli::RunConfig;
use qfa_core::gf::Fp;

const QFA: &str = env!("CARGO_BIN_EXE_qfa");

struct Verdict {
    pass: bool,
    detail: String,
}

fn config() -> RunConfig {
    RunConfig {
        deterministic: true,
        ..Default::default()
    }
}

fn fp(p: i64) -> Fp {
    Fp::new(p).unwrap()
}

/// Runs batteries into one recorder. Every record must pass; skipped or
/// failed records fail the criterion, report-only records are ignored.
fn batteries(f: impl FnOnce(&mut Recorder, &RunConfig)) -> Verdict {
    let cfg = config();
    let mut rec = Recorder::new("acceptance", false);
    f(&mut rec, &cfg);
    let records = rec.finish();
    let s = summarize(&records);
    for r in records.iter().filter(|r| matches!(r.status, Status::Fail | Status::Skipped)) {
        eprintln!("    {} {} {}: lhs={} rhs={} {}", r.status.as_str(), r.anchor, r.instance, r.lhs, r.rhs, r.note);
    }
    Verdict {
        pass: s.fail == 0 && s.skipped == 0 && s.pass > 0,
        detail: format!(
            "{} pass, {} fail, {} skipped, {} report-only",
            s.pass, s.fail, s.skipped, s.report_only
        ),
    }
}

fn qfa(args: &[&str]) -> std::process::Output {
    Command::new(QFA).args(args).output().expect("run qfa")
}

fn path(p: &Path) -> &str {
    p.to_str().expect("utf-8 path")
}

fn iteration_via_cli() -> Verdict {
    let dir = tempfile::tempdir().unwrap();
    let out = path(dir.path());
    let coloring = dir.path().join("coloring.json");
    let cert = dir.path().join("certificate.json");
    let steps: [(&str, Vec<&str>); 3] = [
        (
            "gen",
            vec!["gen", "random-coloring", "--n", "3", "--r", "2", "--seed", "4", "--file", path(&coloring)],
        ),
        (
            "increment run",
            vec!["increment", "run", "--sets", path(&coloring), "--rank", "2", "--out", out],
        ),
        (
            "verify-cert",
            vec![
                "increment",
                "verify-cert",
                "--certificate",
                path(&cert),
                "--sets",
                path(&coloring),
                "--out",
                out,
            ],
        ),
    ];
    for (name, args) in steps {
        let o = qfa(&args);
        if !o.status.success() {
            return Verdict {
                pass: false,
                detail: format!("{name} exited {:?}: {}", o.status.code(), String::from_utf8_lossy(&o.stderr)),
            };
        }
    }
    // in-process run of the same instance records every stage flag
    let inner = batteries(|r, c| iteration(r, c));
    Verdict {
        pass: inner.pass,
        detail: format!("verify-cert exit 0; stages: {}", inner.detail),
    }
}

fn determinism() -> Verdict {
    let dir = tempfile::tempdir().unwrap();
    let runs: [(&str, Option<&str>); 4] = [("a", None), ("b", None), ("t1", Some("1")), ("t8", Some("8"))];
    let mut reports = Vec::new();
    for (name, threads) in runs {
        let out = dir.path().join(name);
        let mut args = vec!["verify", "all", "--seed", "0", "--deterministic", "--out", path(&out)];
        if let Some(t) = threads {
            args.extend(["--threads", t]);
        }
        let o = qfa(&args);
        if !o.status.success() {
            return Verdict {
                pass: false,
                detail: format!("run {name} exited {:?}", o.status.code()),
            };
        }
        let csv = std::fs::read(out.join("report-all.csv")).unwrap();
        let json = std::fs::read(out.join("report-all.json")).unwrap();
        reports.push((name, csv, json));
    }
    let (_, csv0, json0) = &reports[0];
    let differing: Vec<&str> = reports
        .iter()
        .filter(|(_, c, j)| c != csv0 || j != json0)
        .map(|(n, _, _)| *n)
        .collect();
    Verdict {
        pass: differing.is_empty(),
        detail: if differing.is_empty() {
            format!("4 runs identical ({} bytes csv)", csv0.len())
        } else {
            format!("differs: {differing:?}")
        },
    }
}

fn main() -> ExitCode {
    type Check = Box<dyn Fn() -> Verdict>;
    let criteria: Vec<(&str, u64, Check)> = vec![
        (
            "Fourier/Gowers identities",
            10,
            Box::new(|| {
                batteries(|r, c| {
                    for n in 1..=4 {
                        fourier_identities(r, c, fp(3), n, 100);
                    }
                    for n in 1..=2 {
                        fourier_identities(r, c, fp(5), n, 100);
                    }
                })
            }),
        ),
        (
            "spectrum size bound",
            30,
            Box::new(|| batteries(|r, c| spectral_estimate(r, c, fp(3), 4, 4, 200))),
        ),
        (
            "Weyl bound and Gauss sum",
            60,
            Box::new(|| {
                batteries(|r, c| {
                    weyl_exhaustive(r, c, fp(3), 3);
                    weyl_random(r, c, fp(3), 4, 1000);
                    gauss_sum(r, c);
                })
            }),
        ),
        (
            "differenced-set identity",
            120,
            Box::new(|| {
                batteries(|r, c| {
                    differenced_sets(r, c, fp(3), 4, 1, 4, 4, 50);
                    differenced_exhaustive(r, c, &pinned_tuple(), "pinned");
                })
            }),
        ),
        (
            "differenced censuses",
            120,
            Box::new(|| batteries(|r, c| censuses(r, c, &pinned_tuple(), "pinned", CENSUS_SAMPLES))),
        ),
        (
            "Brauer counting",
            60,
            Box::new(|| {
                batteries(|r, c| {
                    brauer_counting(r, c, fp(3), 2, 1, 10);
                    brauer_counting(r, c, fp(3), 3, 1, 10);
                })
            }),
        ),
        (
            "Ramsey colouring",
            30,
            Box::new(|| {
                batteries(|r, _| {
                    lower_bound_colorings(r, 4);
                    monochrome_witness(r, 4);
                })
            }),
        ),
        (
            "partitioning",
            600,
            Box::new(|| {
                batteries(|r, c| {
                    partition(r, c, fp(3), 3, 3, 25);
                    partition(r, c, fp(3), 4, 4, 25);
                })
            }),
        ),
        ("iteration driver", 600, Box::new(iteration_via_cli)),
        (
            "planted inverse family",
            900,
            Box::new(|| {
                batteries(|r, c| {
                    inverse_planted(r, c, fp(3), 3, 3, 30);
                    inverse_planted(r, c, fp(3), 4, 4, 30);
                })
            }),
        ),
        (
            "solution counts and complexity",
            60,
            Box::new(|| {
                batteries(|r, c| {
                    let spaces = [(fp(3), 1), (fp(3), 2), (fp(5), 1), (fp(5), 2), (fp(7), 1)];
                    solution_counts(r, c, &spaces, 50);
                    ci_exhaustive(r, 5);
                    ci_exhaustive(r, 7);
                    linear_systems(r);
                })
            }),
        ),
        ("determinism", 600, Box::new(determinism)),
    ];

    let mut failed = 0;
    for (i, (name, limit, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let v = check();
        let elapsed = start.elapsed();
        let in_time = elapsed <= Duration::from_secs(*limit);
        let pass = v.pass && in_time;
        if !pass {
            failed += 1;
        }
        println!(
            "{} {:>2} {name}: {} [{:.2}s / {limit}s{}]",
            if pass { "PASS" } else { "FAIL" },
            i + 1,
            v.detail,
            elapsed.as_secs_f64(),
            if in_time { "" } else { ", over time" },
        );
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
