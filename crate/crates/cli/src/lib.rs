//! Front end for `fclosure-core`: request parsing, dispatch and reports.
//!
//! Exit codes: 0 on success, 1 on input errors, 2 when the branch formula
//! and an independent check disagree.

mod report;
mod request;
mod run;

use fclosure_core::graded::GradedError;
use fclosure_core::oracle::OracleError;
use fclosure_core::semigroup::SemigroupError;
use fclosure_core::FieldError;
use thiserror::Error;

pub use report::{AnalysisReport, AnalysisResult, Diagnostics, ProbeSummary, SCHEMA_VERSION};
pub use request::{parse_config, parse_request, AnalysisRequest, Cli, Command, Flags, Format, Mode};
pub use run::{run, DEFAULT_PROBE_E};

#[derive(Debug, Error)]
pub enum CliError {
    /// Clap output; `informational` for `--help` and `--version`.
    #[error("{text}")]
    Usage { text: String, informational: bool },
    #[error("{field}: parse error at offset {position}: expected {expected}")]
    Parse { field: String, position: usize, expected: String },
    #[error("`{mode}` needs --{flag}")]
    Missing { flag: &'static str, mode: Mode },
    #[error("unsupported mode `{0}`")]
    UnsupportedMode(String),
    #[error("{0}")]
    Invalid(String),
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Graded(#[from] GradedError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Semigroup(#[from] SemigroupError),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            // the brute-force exponent beat the bound it must satisfy
            CliError::Semigroup(SemigroupError::FteAboveIndex { .. }) => 2,
            _ => 1,
        }
    }
}

/// Parses, runs and renders; returns the text to print and the exit code.
pub fn execute<I, T>(argv: I) -> (String, i32)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let outcome = parse_request(argv).and_then(|req| run(&req));
    match outcome {
        Ok(report) => (report.render(), report.exit_code()),
        Err(CliError::Usage { text, informational }) => (text, if informational { 0 } else { 1 }),
        Err(e) => (format!("error: {e}\n"), e.exit_code()),
    }
}
