//! Metrics, the split/fit/evaluate pipeline and repeated-split coefficient
//! stability.
//!
//! R² uses the mean of the evaluated partition as its baseline.

mod experiment;
mod metrics;
mod stability;

pub use experiment::{
    check_training_stats, run_experiment, run_experiment_with_stats, run_experiments, ExperimentConfig, FitReport,
    SCHEMA_VERSION,
};
pub use metrics::{r_squared, rmse};
pub use stability::{coefficient_stability, CsvLayout, StabilityReport};
