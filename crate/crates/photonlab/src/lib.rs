//! Scenario runner for `photonlab-core`: configuration parsing, the
//! verification suite, CSV output and reports.

// `!(x > 0.0)` is used deliberately so NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod checks;
pub mod config;
pub mod output;
pub mod report;
pub mod runner;
pub mod units;

pub use config::{parse_config, ConfigError, ScenarioConfig, ScenarioKind};
pub use report::VerificationReport;
pub use runner::{run_scenario, run_verify, RunError};
