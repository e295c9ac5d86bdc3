//! Configuration, execution and reporting for loclab experiments.

pub mod catalog;
pub mod config;
pub mod error;
pub mod export;
pub mod report;
pub mod run;

pub use config::{Experiment, ExperimentConfig, Format, SystemSpec};
pub use error::RunError;
pub use report::ReportDocument;
pub use run::run;
