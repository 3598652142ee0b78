//! Scenario runner for `qfridge-core`: reads a TOML scenario, runs one of
//! the four modes and writes CSV tables plus a JSON report.

// NaN must fail parameter checks, so validations use negated comparisons.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod error;
pub mod output;
pub mod report;
pub mod run;

pub use config::{Mode, ScenarioConfig};
pub use error::CliError;
pub use report::{Check, LawAudit, RunReport};
pub use run::{execute, Run, SweepRow};
