//! Benchmark harness: experiment configuration and orchestration, edge-list
//! ingestion, the grid oracle and property checks behind the `subcont` CLI.

pub mod check;
pub mod config;
pub mod experiment;
pub mod oracle;
pub mod tsv;

pub use config::{ExperimentConfig, ExperimentKind, MethodKind};
pub use experiment::{run_experiment, ExperimentError, ExperimentOutput, ResultRecord, Summary};
