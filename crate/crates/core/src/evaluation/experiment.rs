use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::metrics::{r_squared, rmse};
use crate::datasets::{split, Dataset, SplitResult, SplitSpec};
use crate::error::{Error, Result};
use crate::parallel::{self, Execution};
use crate::preprocessing::{compute_stats_for_rows, standardize, ColumnStats};
use crate::regression::{fit, FittedModel, Hyperparameters, Method, Predictor};

pub const SCHEMA_VERSION: &str = "1";

/// What to fit and whether to standardize first.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub method: Method,
    #[serde(default)]
    pub hyperparameters: Hyperparameters,
    #[serde(default)]
    pub standardize: bool,
}

impl ExperimentConfig {
    pub fn new(method: Method, hyperparameters: Hyperparameters, standardize: bool) -> Self {
        ExperimentConfig {
            method,
            hyperparameters,
            standardize,
        }
    }
}

/// Outcome of one split + fit + evaluate run.
///
/// `coefficients` and `intercept` act on raw feature values even when the
/// fit was standardized; `zero_coefficients` counts exact zeros. R² is `None`
/// when the partition's targets have zero variance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitReport {
    pub schema_version: String,
    pub dataset: String,
    pub method: Method,
    pub hyperparameters: Hyperparameters,
    pub standardize: bool,
    pub split: SplitSpec,
    pub train_indices: Vec<usize>,
    pub test_indices: Vec<usize>,
    pub rmse_train: f64,
    pub rmse_test: f64,
    pub r2_train: Option<f64>,
    pub r2_test: Option<f64>,
    pub coefficients: Vec<f64>,
    pub intercept: f64,
    pub zero_coefficients: usize,
    pub feature_axis: Vec<f64>,
    pub y_train: Vec<f64>,
    pub y_test: Vec<f64>,
    pub predictions_train: Vec<f64>,
    pub predictions_test: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub explained_variance: Option<Vec<f64>>,
}

impl FitReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// `partition,index,y_true,y_pred`, one line per observation.
    pub fn predictions_csv(&self) -> String {
        let mut out = String::from("partition,index,y_true,y_pred\n");
        let parts = [
            ("train", &self.train_indices, &self.y_train, &self.predictions_train),
            ("test", &self.test_indices, &self.y_test, &self.predictions_test),
        ];
        for (name, idx, truth, pred) in parts {
            for ((i, t), p) in idx.iter().zip(truth).zip(pred) {
                let _ = writeln!(out, "{name},{i},{t:?},{p:?}");
            }
        }
        out
    }

    /// `feature,axis,coefficient`.
    pub fn coefficients_csv(&self) -> String {
        let mut out = String::from("feature,axis,coefficient\n");
        for (j, (a, c)) in self.feature_axis.iter().zip(&self.coefficients).enumerate() {
            let _ = writeln!(out, "{},{a:?},{c:?}", j + 1);
        }
        out
    }
}

/// Fails with [`Error::Leakage`] unless `stats` were computed from exactly
/// the training rows.
pub fn check_training_stats(stats: &ColumnStats, split: &SplitResult) -> Result<()> {
    match &stats.source_rows {
        Some(rows) if *rows == split.train => Ok(()),
        _ => Err(Error::Leakage),
    }
}

pub fn run_experiment(ds: &Dataset, spec: &SplitSpec, cfg: &ExperimentConfig) -> Result<FitReport> {
    let parts = split(ds, spec)?;
    let stats = if cfg.standardize {
        Some(compute_stats_for_rows(ds.x(), &parts.train)?)
    } else {
        None
    };
    evaluate(ds, spec, &parts, cfg, stats)
}

/// Like [`run_experiment`] with caller-supplied standardization statistics,
/// which must come from the training partition of `spec`.
pub fn run_experiment_with_stats(
    ds: &Dataset,
    spec: &SplitSpec,
    cfg: &ExperimentConfig,
    stats: ColumnStats,
) -> Result<FitReport> {
    let parts = split(ds, spec)?;
    evaluate(ds, spec, &parts, &ExperimentConfig { standardize: true, ..cfg.clone() }, Some(stats))
}

fn evaluate(
    ds: &Dataset,
    spec: &SplitSpec,
    parts: &SplitResult,
    cfg: &ExperimentConfig,
    stats: Option<ColumnStats>,
) -> Result<FitReport> {
    let x_train = ds.x().select_rows(&parts.train);
    let y_train = ds.y().select(&parts.train);
    let x_test = ds.x().select_rows(&parts.test);
    let y_test = ds.y().select(&parts.test);

    let model = match stats {
        Some(stats) => {
            check_training_stats(&stats, parts)?;
            let z = standardize(&x_train, &stats)?;
            fit(cfg.method, &cfg.hyperparameters, &z, &y_train)?.with_standardization(stats)?
        }
        None => fit(cfg.method, &cfg.hyperparameters, &x_train, &y_train)?,
    };
    let pred_train = model.predict(&x_train)?;
    let pred_test = model.predict(&x_test)?;
    let linear = model.linear_model();
    let (beta, intercept) = linear.original_coefficients();
    let explained_variance = match &model {
        FittedModel::Latent(l) => Some(l.explained_variance.iter().copied().collect()),
        FittedModel::Linear(_) => None,
    };

    Ok(FitReport {
        schema_version: SCHEMA_VERSION.to_string(),
        dataset: ds.name().to_string(),
        method: cfg.method,
        hyperparameters: cfg.hyperparameters,
        standardize: cfg.standardize,
        split: spec.clone(),
        train_indices: parts.train.clone(),
        test_indices: parts.test.clone(),
        rmse_train: rmse(&y_train, &pred_train)?,
        rmse_test: rmse(&y_test, &pred_test)?,
        r2_train: r_squared(&y_train, &pred_train).ok(),
        r2_test: r_squared(&y_test, &pred_test).ok(),
        coefficients: beta.iter().copied().collect(),
        intercept,
        zero_coefficients: linear.zero_count(),
        feature_axis: ds.feature_axis().values.clone(),
        y_train: y_train.to_vec(),
        y_test: y_test.to_vec(),
        predictions_train: pred_train.to_vec(),
        predictions_test: pred_test.to_vec(),
        explained_variance,
    })
}

/// Independent experiments on one dataset, results in input order.
pub fn run_experiments(
    ds: &Dataset,
    jobs: &[(SplitSpec, ExperimentConfig)],
    execution: Execution,
) -> Vec<Result<FitReport>> {
    parallel::map(execution, jobs, |(spec, cfg)| run_experiment(ds, spec, cfg))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datagen::{default_config, example_dataset};
    use crate::datasets::SplitMode;
    use crate::preprocessing::compute_stats_for_rows;

    fn example() -> Dataset {
        example_dataset(&default_config()).unwrap()
    }

    #[test]
    fn report_shapes_and_json() {
        let ds = example();
        let spec = SplitSpec::new(SplitMode::Random, 3);
        let cfg = ExperimentConfig::new(Method::Pls, Hyperparameters::with_components(2), false);
        let r = run_experiment(&ds, &spec, &cfg).unwrap();
        assert_eq!(r.predictions_train.len(), r.train_indices.len());
        assert_eq!(r.predictions_test.len(), r.test_indices.len());
        assert_eq!(r.coefficients.len(), 30);
        assert!(r.rmse_train < 1e-8 && r.rmse_test < 1e-8);
        let back: FitReport = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(back, r);
        assert_eq!(r.predictions_csv().lines().count(), 101);
        assert_eq!(r.coefficients_csv().lines().count(), 31);
    }

    #[test]
    fn standardized_fit_reports_raw_coefficients() {
        let ds = example();
        let spec = SplitSpec::new(SplitMode::Random, 4);
        let cfg = ExperimentConfig::new(Method::Ridge, Hyperparameters::with_lambda(1e-3), true);
        let r = run_experiment(&ds, &spec, &cfg).unwrap();
        for (k, &i) in r.test_indices.iter().enumerate() {
            let row = ds.x().row_vec(i);
            let yhat: f64 = row.iter().zip(&r.coefficients).map(|(a, b)| a * b).sum::<f64>() + r.intercept;
            assert!((yhat - r.predictions_test[k]).abs() < 1e-9);
        }
    }

    #[test]
    fn leakage_guard_rejects_foreign_stats() {
        let ds = example();
        let spec = SplitSpec::new(SplitMode::Random, 5);
        let parts = split(&ds, &spec).unwrap();
        let cfg = ExperimentConfig::new(Method::Ridge, Hyperparameters::with_lambda(0.1), true);
        let test_stats = compute_stats_for_rows(ds.x(), &parts.test).unwrap();
        assert_eq!(run_experiment_with_stats(&ds, &spec, &cfg, test_stats), Err(Error::Leakage));
        let all: Vec<usize> = (0..ds.n_observations()).collect();
        let all_stats = compute_stats_for_rows(ds.x(), &all).unwrap();
        assert_eq!(run_experiment_with_stats(&ds, &spec, &cfg, all_stats), Err(Error::Leakage));
        let train_stats = compute_stats_for_rows(ds.x(), &parts.train).unwrap();
        assert!(run_experiment_with_stats(&ds, &spec, &cfg, train_stats).is_ok());
    }

    #[test]
    fn batch_matches_individual_runs() {
        let ds = example();
        let jobs: Vec<(SplitSpec, ExperimentConfig)> = (0..6)
            .map(|s| {
                (
                    SplitSpec::new(SplitMode::Random, s),
                    ExperimentConfig::new(Method::Lasso, Hyperparameters::with_lambda(0.015), false),
                )
            })
            .collect();
        let seq = run_experiments(&ds, &jobs, Execution::Sequential);
        let par = run_experiments(&ds, &jobs, Execution::Parallel);
        assert_eq!(seq, par);
    }
}
