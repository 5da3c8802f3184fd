use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::experiment::{run_experiment, ExperimentConfig, SCHEMA_VERSION};
use crate::datasets::{Dataset, SplitSpec};
use crate::error::{Error, Result};
use crate::parallel::{self, derive_seed, Execution};
use crate::regression::{Hyperparameters, Method};

/// Coefficients of the same fit repeated over independently seeded splits.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StabilityReport {
    pub schema_version: String,
    pub dataset: String,
    pub method: Method,
    pub hyperparameters: Hyperparameters,
    pub standardize: bool,
    pub template: SplitSpec,
    pub repeats: usize,
    /// Split seed of each repeat.
    pub seeds: Vec<u64>,
    pub feature_axis: Vec<f64>,
    /// `coefficients[r][j]`: feature `j` in repeat `r`.
    pub coefficients: Vec<Vec<f64>>,
    pub intercepts: Vec<f64>,
    pub rmse_test: Vec<f64>,
    pub mean: Vec<f64>,
    /// Sample standard deviation per feature.
    pub spread: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CsvLayout {
    /// One row per repeat, one column per feature.
    #[default]
    Wide,
    /// One row per (repeat, feature).
    Long,
}

impl StabilityReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_csv(&self, layout: CsvLayout) -> String {
        let mut out = String::new();
        match layout {
            CsvLayout::Wide => {
                out.push_str("repeat,seed,intercept");
                for a in &self.feature_axis {
                    let _ = write!(out, ",{a:?}");
                }
                out.push('\n');
                for (r, row) in self.coefficients.iter().enumerate() {
                    let _ = write!(out, "{},{},{:?}", r + 1, self.seeds[r], self.intercepts[r]);
                    for c in row {
                        let _ = write!(out, ",{c:?}");
                    }
                    out.push('\n');
                }
            }
            CsvLayout::Long => {
                out.push_str("repeat,seed,feature,axis,coefficient\n");
                for (r, row) in self.coefficients.iter().enumerate() {
                    for (j, c) in row.iter().enumerate() {
                        let _ = writeln!(out, "{},{},{},{:?},{c:?}", r + 1, self.seeds[r], j + 1, self.feature_axis[j]);
                    }
                }
            }
        }
        out
    }

    /// `feature,axis,mean,spread`.
    pub fn spread_csv(&self) -> String {
        let mut out = String::from("feature,axis,mean,spread\n");
        for j in 0..self.feature_axis.len() {
            let _ = writeln!(out, "{},{:?},{:?},{:?}", j + 1, self.feature_axis[j], self.mean[j], self.spread[j]);
        }
        out
    }
}

/// Runs `cfg` on `repeats` splits whose seeds are derived from
/// `template.seed`, so the whole study is reproducible from one number.
pub fn coefficient_stability(
    ds: &Dataset,
    template: &SplitSpec,
    cfg: &ExperimentConfig,
    repeats: usize,
    execution: Execution,
) -> Result<StabilityReport> {
    if repeats < 2 {
        return Err(Error::invalid("repeats", format!("must be at least 2, got {repeats}")));
    }
    let seeds: Vec<u64> = (0..repeats as u64).map(|r| derive_seed(template.seed, r)).collect();
    let reports = parallel::map(execution, &seeds, |&seed| run_experiment(ds, &template.with_seed(seed), cfg));
    let reports = reports.into_iter().collect::<Result<Vec<_>>>()?;

    let n = ds.n_features();
    let coefficients: Vec<Vec<f64>> = reports.iter().map(|r| r.coefficients.clone()).collect();
    let k = repeats as f64;
    let mean: Vec<f64> = (0..n).map(|j| coefficients.iter().map(|c| c[j]).sum::<f64>() / k).collect();
    let spread: Vec<f64> = (0..n)
        .map(|j| {
            let ss: f64 = coefficients.iter().map(|c| (c[j] - mean[j]).powi(2)).sum();
            (ss / (k - 1.0)).sqrt()
        })
        .collect();

    Ok(StabilityReport {
        schema_version: SCHEMA_VERSION.to_string(),
        dataset: ds.name().to_string(),
        method: cfg.method,
        hyperparameters: cfg.hyperparameters,
        standardize: cfg.standardize,
        template: template.clone(),
        repeats,
        seeds,
        feature_axis: ds.feature_axis().values.clone(),
        intercepts: reports.iter().map(|r| r.intercept).collect(),
        rmse_test: reports.iter().map(|r| r.rmse_test).collect(),
        coefficients,
        mean,
        spread,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::DataMatrix;
    use crate::datasets::{FeatureAxis, SplitMode, TargetTransform};

    #[test]
    fn forced_single_group_gives_zero_spread() {
        let rows: Vec<Vec<f64>> = (0..8).map(|i| vec![i as f64, (i * i) as f64 * 0.1, 1.0]).collect();
        let y: Vec<f64> = rows.iter().map(|r| r[0] * 2.0 - r[1]).collect();
        let groups = (0..8).map(|i| if i < 6 { "a".to_string() } else { "b".to_string() }).collect();
        let ds = Dataset::new(
            "two-groups",
            DataMatrix::from_rows(&rows).unwrap(),
            y,
            groups,
            FeatureAxis::index(3),
            TargetTransform::Identity,
        )
        .unwrap();
        let cfg = ExperimentConfig::new(Method::Ridge, Hyperparameters::with_lambda(0.5), false);
        let spec = SplitSpec::forced(vec!["b".into()], 11);
        let rep = coefficient_stability(&ds, &spec, &cfg, 5, Execution::Parallel).unwrap();
        assert!(rep.spread.iter().all(|&s| s == 0.0));
        assert_eq!(rep.to_csv(CsvLayout::Wide).lines().count(), 6);
        assert_eq!(rep.to_csv(CsvLayout::Long).lines().count(), 16);
    }

    #[test]
    fn repeats_must_be_at_least_two() {
        let ds = crate::datagen::example_dataset(&crate::datagen::default_config()).unwrap();
        let cfg = ExperimentConfig::new(Method::Pls, Hyperparameters::with_components(2), false);
        let spec = SplitSpec::new(SplitMode::Random, 0);
        assert!(coefficient_stability(&ds, &spec, &cfg, 1, Execution::Sequential).is_err());
        let a = coefficient_stability(&ds, &spec, &cfg, 4, Execution::Sequential).unwrap();
        let b = coefficient_stability(&ds, &spec, &cfg, 4, Execution::Parallel).unwrap();
        assert_eq!(a.to_csv(CsvLayout::Wide), b.to_csv(CsvLayout::Wide));
    }
}
