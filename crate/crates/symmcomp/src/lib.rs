//! Benchmark harness for symmetrization comparison estimates.
//!
//! A run reads a line-oriented config, solves the radial problems it
//! describes (or runs the randomized property suites), and writes a report
//! of pass/fail rows plus sampled profiles. Independent solves run on a
//! rayon pool unless the crate is built without the `parallel` feature or
//! `Execution::Sequential` is requested; both paths give identical reports.

pub mod config;
mod error;
pub mod exec;
pub mod experiment;
pub mod output;
pub mod properties;
pub mod report;

pub use config::{ConfigError, ExperimentConfig, Mode};
pub use error::BenchError;
pub use exec::Execution;
pub use experiment::{run, run_compare, run_sweep_b, run_sweep_m};
pub use output::emit_outputs;
pub use properties::run_properties;
pub use report::{Check, Report, Verdict};
