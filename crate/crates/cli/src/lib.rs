//! Instance files, run configuration, report emission and the verification
//! suites behind the `qfa` binary.

pub mod config;
pub mod gen;
pub mod io;
pub mod report;
pub mod suites;

pub use config::RunConfig;
pub use report::{ReportRecord, Status};
pub use suites::run_suite;
