//! Experiment harness for the `rap-core` estimators: seeded workloads,
//! algorithm × budget sweeps, metric aggregation, CSV output and the
//! analytic counter calculator.

pub mod config;
pub mod error;
pub mod estimator;
pub mod experiment;
pub mod theory;
pub mod workload;

pub use config::{Algorithm, ExperimentConfig, Metric, Workload};
pub use error::{BenchError, Result};
pub use experiment::{run_experiment, run_sweep, ExperimentResult};
pub use theory::{theory_report, TheoryReport};
