//! Verification suites, run configuration and reports.

mod config;
mod report;
mod suites;

pub use config::{OutputFormat, RunConfig, Suite, SurfaceKind};
pub use report::{Check, CheckKind, Report, Series};
pub use suites::run_suite;
