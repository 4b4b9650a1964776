//! Configuration parsing, pipeline orchestration and reports for the
//! `qwalk` command-line tool.

pub mod config;
pub mod report;
pub mod run;
pub mod suites;

pub use config::{AnalysisConfig, ConfigError, ReportFormat};
pub use report::{AnalysisReport, SuiteReport};
pub use run::{run_analysis, run_configs, run_suite, Status};
