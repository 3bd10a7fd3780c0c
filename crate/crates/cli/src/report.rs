//! Report records and their CSV / JSON output.

use std::fs;
use std::path::Path;
use std::time::Instant;

use anyhow::{Context, Result};
use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use qfa_core::Error;

/// Fixed CSV column order.
pub const CSV_COLUMNS: [&str; 9] = [
    "suite",
    "anchor",
    "instance",
    "lhs",
    "rhs",
    "ratio",
    "status",
    "note",
    "wall_time_ms",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    /// Measured against a bound with an unknown constant; never fails.
    ReportOnly,
    /// Not run, e.g. because it exceeded a budget.
    Skipped,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::ReportOnly => "report-only",
            Status::Skipped => "skipped",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportRecord {
    pub suite: String,
    pub anchor: String,
    pub instance: String,
    pub lhs: String,
    pub rhs: String,
    pub ratio: String,
    pub status: Status,
    pub note: String,
    /// Omitted in deterministic runs.
    pub wall_time_ms: Option<f64>,
}

impl ReportRecord {
    pub fn is_failure(&self) -> bool {
        self.status == Status::Fail
    }
}

/// 12 significant digits; integers below 1e15 are written exactly.
pub fn num(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf".into() } else { "-inf".into() }
    } else if x == x.trunc() && x.abs() < 1e15 {
        format!("{}", x as i64)
    } else {
        format!("{:.11e}", x)
    }
}

pub fn rat(x: Rational64) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// What a single check produced.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub lhs: String,
    pub rhs: String,
    pub ratio: String,
    pub status: Status,
    pub note: String,
}

impl Outcome {
    pub fn check(lhs: impl Into<String>, rhs: impl Into<String>, pass: bool) -> Self {
        Outcome {
            lhs: lhs.into(),
            rhs: rhs.into(),
            ratio: String::new(),
            status: if pass { Status::Pass } else { Status::Fail },
            note: String::new(),
        }
    }

    pub fn report(lhs: impl Into<String>, rhs: impl Into<String>, ratio: f64) -> Self {
        Outcome {
            lhs: lhs.into(),
            rhs: rhs.into(),
            ratio: num(ratio),
            status: Status::ReportOnly,
            note: String::new(),
        }
    }

    pub fn with_ratio(mut self, ratio: f64) -> Self {
        self.ratio = num(ratio);
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = note.into();
        self
    }
}

/// Collects records for one suite, timing each check.
pub struct Recorder {
    suite: String,
    timed: bool,
    pub records: Vec<ReportRecord>,
}

impl Recorder {
    pub fn new(suite: &str, timed: bool) -> Self {
        Recorder {
            suite: suite.into(),
            timed,
            records: Vec::new(),
        }
    }

    /// Runs `f`; a budget error becomes a skipped record and any other
    /// library error a failed one.
    pub fn run(&mut self, anchor: &str, instance: impl Into<String>, f: impl FnOnce() -> qfa_core::Result<Outcome>) {
        let start = Instant::now();
        let outcome = match f() {
            Ok(o) => o,
            Err(e @ Error::BudgetExceeded { .. }) => Outcome {
                lhs: String::new(),
                rhs: String::new(),
                ratio: String::new(),
                status: Status::Skipped,
                note: e.to_string(),
            },
            Err(e) => Outcome {
                lhs: String::new(),
                rhs: String::new(),
                ratio: String::new(),
                status: Status::Fail,
                note: e.to_string(),
            },
        };
        let elapsed = start.elapsed().as_secs_f64() * 1e3;
        self.records.push(ReportRecord {
            suite: self.suite.clone(),
            anchor: anchor.into(),
            instance: instance.into(),
            lhs: outcome.lhs,
            rhs: outcome.rhs,
            ratio: outcome.ratio,
            status: outcome.status,
            note: outcome.note,
            wall_time_ms: self.timed.then(|| (elapsed * 1e3).round() / 1e3),
        });
    }

    pub fn finish(self) -> Vec<ReportRecord> {
        self.records
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub report_only: usize,
    pub skipped: usize,
}

pub fn summarize(records: &[ReportRecord]) -> Summary {
    let mut s = Summary::default();
    for r in records {
        match r.status {
            Status::Pass => s.pass += 1,
            Status::Fail => s.fail += 1,
            Status::ReportOnly => s.report_only += 1,
            Status::Skipped => s.skipped += 1,
        }
    }
    s
}

pub fn write_csv(path: &Path, records: &[ReportRecord]) -> Result<()> {
    let mut w = csv::Writer::from_path(path).with_context(|| format!("writing {}", path.display()))?;
    w.write_record(CSV_COLUMNS)?;
    for r in records {
        let time = r.wall_time_ms.map(num).unwrap_or_default();
        w.write_record([
            r.suite.as_str(),
            &r.anchor,
            &r.instance,
            &r.lhs,
            &r.rhs,
            &r.ratio,
            r.status.as_str(),
            &r.note,
            &time,
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Writes `<stem>.csv` and `<stem>.json` into `dir`.
pub fn write_reports(dir: &Path, stem: &str, records: &[ReportRecord]) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    write_csv(&dir.join(format!("{stem}.csv")), records)?;
    crate::io::write_json(&dir.join(format!("{stem}.json")), &records)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn number_format() {
        assert_eq!(num(3.0), "3");
        assert_eq!(num(-0.0), "0");
        assert_eq!(num(1.0 / 3.0), "3.33333333333e-1");
        assert_eq!(num(f64::INFINITY), "inf");
        assert_eq!(rat(Rational64::new(2, 4)), "1/2");
        assert_eq!(rat(Rational64::new(4, 2)), "2");
    }

    #[test]
    fn budget_errors_are_skipped() {
        let mut r = Recorder::new("t", false);
        r.run("a", "0", || {
            Err(Error::BudgetExceeded {
                what: "x",
                requested: 2,
                budget: 1,
            })
        });
        r.run("b", "0", || Err(Error::EmptySet));
        r.run("c", "0", || Ok(Outcome::check("1", "1", true)));
        let s = summarize(&r.records);
        assert_eq!((s.pass, s.fail, s.skipped), (1, 1, 1));
        assert!(r.records.iter().all(|x| x.wall_time_ms.is_none()));
    }
}
