//! Dataset formats, the experiment pipeline and report writers built on
//! [`hyperorder_core`].

pub mod config;
pub mod correlate;
pub mod formats;
pub mod pipeline;
pub mod report;
pub mod synthetic;

pub use config::{ExperimentConfig, ReportFormat};
pub use pipeline::{run_experiment, ExperimentResult, Outcome};
