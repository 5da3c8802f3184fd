//! Linear, regularized and latent-variable regression for spectra-like
//! data, with the datasets, preprocessing and evaluation around it.
//!
//! ```
//! use latentlab_core::datagen::{default_config, example_dataset};
//! use latentlab_core::datasets::{SplitMode, SplitSpec};
//! use latentlab_core::evaluation::{run_experiment, ExperimentConfig};
//! use latentlab_core::regression::{Hyperparameters, Method};
//!
//! let ds = example_dataset(&default_config()).unwrap();
//! let cfg = ExperimentConfig::new(Method::Pls, Hyperparameters::with_components(2), false);
//! let report = run_experiment(&ds, &SplitSpec::new(SplitMode::Random, 1), &cfg).unwrap();
//! assert!(report.rmse_test < 1e-8);
//! ```

pub mod data;
pub mod datagen;
pub mod datasets;
pub mod error;
pub mod evaluation;
pub mod linalg;
pub mod parallel;
pub mod preprocessing;
pub mod regression;

pub use data::{DataMatrix, TargetVector};
pub use error::{Error, Result};
pub use parallel::Execution;
