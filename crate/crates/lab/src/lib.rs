//! Scenario runner for the O'Neill submersion lab: JSON configuration,
//! deterministic sampling, parallel verification of the curvature
//! identities and inequalities, and JSON/CSV reports.
//!
//! Exit-status contract: `0` when every applicable check passes, `1` on
//! any violation, `2` on a configuration error.

pub mod config;
pub mod error;
pub mod report;
pub mod runner;

pub use config::{load_scenario, parse_config, OutputFormat, ScenarioConfig, ScenarioSource};
pub use error::{LabError, LabResult};
pub use report::{emit_report, ReportDocument};
pub use runner::{run_identities, run_verify};
