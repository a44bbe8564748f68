//! Batch runner for dynlab experiments: JSON configs in, JSON or CSV reports out.

pub mod config;
pub mod report;
pub mod run;
pub mod setfile;

pub use config::{ConfigError, Experiment, ExperimentConfig, GapSpec};
pub use report::{write_atomic, ClaimRow, Format, Report, RowOutcome};
pub use run::run_experiment;
