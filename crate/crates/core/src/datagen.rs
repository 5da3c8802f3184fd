//! The piecewise-linear example dataset.
//!
//! Each curve passes through four random anchors at indices `1`,
//! `relevant_start_index`, `relevant_end_index` and `n_points`, and is sampled
//! at the integer indices in between. The target is the average per-sample
//! slope of the middle section.

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::data::{DataMatrix, TargetVector};
use crate::datasets::{Dataset, FeatureAxis, TargetTransform};
use crate::error::{Error, Result};
use crate::preprocessing::{apply_noise, NoiseSpec};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExampleConfig {
    pub mu_start: f64,
    pub mu_left: f64,
    pub mu_right: f64,
    pub mu_end: f64,
    pub sigma_start: f64,
    pub sigma_left: f64,
    pub sigma_right: f64,
    pub sigma_end: f64,
    pub n_experiments: usize,
    pub n_points: usize,
    pub relevant_start_index: usize,
    pub relevant_end_index: usize,
    #[serde(alias = "snr", skip_serializing_if = "Option::is_none")]
    pub noise: Option<NoiseSpec>,
    pub seed: u64,
}

impl Default for ExampleConfig {
    fn default() -> Self {
        ExampleConfig {
            mu_start: 2.0,
            mu_left: -1.0,
            mu_right: -4.0,
            mu_end: -5.0,
            sigma_start: 0.0,
            sigma_left: 2.0,
            sigma_right: 2.0,
            sigma_end: 0.0,
            n_experiments: 100,
            n_points: 30,
            relevant_start_index: 21,
            relevant_end_index: 30,
            noise: None,
            seed: 0,
        }
    }
}

pub fn default_config() -> ExampleConfig {
    ExampleConfig::default()
}

/// One violated constraint, named by the config field it concerns.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldError {
    pub field: String,
    pub message: String,
}

impl FieldError {
    fn new(field: &str, message: impl Into<String>) -> Self {
        FieldError {
            field: field.to_string(),
            message: message.into(),
        }
    }
}

impl ExampleConfig {
    /// Every violated constraint; empty when the config is usable.
    pub fn field_errors(&self) -> Vec<FieldError> {
        let mut errors = Vec::new();
        let finite = [
            ("mu_start", self.mu_start),
            ("mu_left", self.mu_left),
            ("mu_right", self.mu_right),
            ("mu_end", self.mu_end),
        ];
        for (field, v) in finite {
            if !v.is_finite() {
                errors.push(FieldError::new(field, "must be finite"));
            }
        }
        let sigmas = [
            ("sigma_start", self.sigma_start),
            ("sigma_left", self.sigma_left),
            ("sigma_right", self.sigma_right),
            ("sigma_end", self.sigma_end),
        ];
        for (field, v) in sigmas {
            if !(v.is_finite() && v >= 0.0) {
                errors.push(FieldError::new(field, "must be finite and nonnegative"));
            }
        }
        if self.n_experiments == 0 {
            errors.push(FieldError::new("n_experiments", "must be at least 1"));
        }
        if self.n_points < 2 {
            errors.push(FieldError::new("n_points", "must be at least 2"));
        }
        if self.relevant_start_index < 1 {
            errors.push(FieldError::new("relevant_start_index", "must be at least 1"));
        }
        if self.relevant_start_index >= self.relevant_end_index {
            let msg = format!(
                "relevant_start_index ({}) must be below relevant_end_index ({})",
                self.relevant_start_index, self.relevant_end_index
            );
            errors.push(FieldError::new("relevant_start_index", msg.clone()));
            errors.push(FieldError::new("relevant_end_index", msg));
        }
        if self.relevant_end_index > self.n_points {
            errors.push(FieldError::new(
                "relevant_end_index",
                format!("must not exceed n_points ({})", self.n_points),
            ));
        }
        if let Some(noise) = &self.noise {
            if noise.validate().is_err() {
                errors.push(FieldError::new("noise.snr", "must be positive and finite"));
            }
        }
        errors
    }

    pub fn validate(&self) -> Result<()> {
        match self.field_errors().into_iter().next() {
            None => Ok(()),
            Some(e) => Err(Error::InvalidArgument {
                name: "example config",
                reason: format!("{}: {}", e.field, e.message),
            }),
        }
    }

    /// Width of the relevant section in samples.
    pub fn relevant_width(&self) -> usize {
        self.relevant_end_index - self.relevant_start_index
    }
}

fn lerp(a: f64, b: f64, f: f64) -> f64 {
    a * (1.0 - f) + b * f
}

/// Curve value at 1-based index `k` given the four anchor values.
///
/// When the relevant section touches an end of the grid, the relevant
/// anchor takes precedence over the end anchor.
fn curve_value(cfg: &ExampleConfig, anchors: [f64; 4], k: usize) -> f64 {
    let [a_s, a_l, a_r, a_e] = anchors;
    let (s, e, n) = (cfg.relevant_start_index, cfg.relevant_end_index, cfg.n_points);
    if k <= s {
        if s == 1 {
            a_l
        } else {
            lerp(a_s, a_l, (k - 1) as f64 / (s - 1) as f64)
        }
    } else if k <= e {
        lerp(a_l, a_r, (k - s) as f64 / (e - s) as f64)
    } else {
        lerp(a_r, a_e, (k - e) as f64 / (n - e) as f64)
    }
}

/// Draws the noise-free curves and slopes, then applies optional noise.
pub fn generate_example(cfg: &ExampleConfig) -> Result<(DataMatrix, TargetVector)> {
    cfg.validate()?;
    let (m, n) = (cfg.n_experiments, cfg.n_points);
    let mu = [cfg.mu_start, cfg.mu_left, cfg.mu_right, cfg.mu_end];
    let sigma = [cfg.sigma_start, cfg.sigma_left, cfg.sigma_right, cfg.sigma_end];
    let width = cfg.relevant_width() as f64;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);

    let mut x = DMatrix::zeros(m, n);
    let mut y = DVector::zeros(m);
    for i in 0..m {
        let mut anchors = [0.0; 4];
        for a in 0..4 {
            let z: f64 = StandardNormal.sample(&mut rng);
            anchors[a] = mu[a] + sigma[a] * z;
        }
        for k in 1..=n {
            x[(i, k - 1)] = curve_value(cfg, anchors, k);
        }
        y[i] = (anchors[2] - anchors[1]) / width;
    }
    let x = DataMatrix::new(x)?;
    let y = TargetVector::new(y)?;
    match &cfg.noise {
        Some(spec) => apply_noise(&x, &y, spec),
        None => Ok((x, y)),
    }
}

/// The example as a [`Dataset`]. Every row is its own group, so grouped
/// splits behave like observation-level ones.
pub fn example_dataset(cfg: &ExampleConfig) -> Result<Dataset> {
    let (x, y) = generate_example(cfg)?;
    let groups = (0..x.nrows()).map(|i| format!("row-{:04}", i + 1)).collect();
    let axis = FeatureAxis::index(x.ncols());
    Ok(Dataset::new("example", x, y.to_vec(), groups, axis, TargetTransform::Identity)?
        .with_provenance("piecewise-linear example curves"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults() {
        let c = default_config();
        assert_eq!((c.relevant_start_index, c.relevant_end_index), (21, 30));
        assert_eq!([c.mu_start, c.mu_left, c.mu_right, c.mu_end], [2.0, -1.0, -4.0, -5.0]);
        assert_eq!([c.sigma_start, c.sigma_left, c.sigma_right, c.sigma_end], [0.0, 2.0, 2.0, 0.0]);
        assert_eq!((c.n_experiments, c.n_points), (100, 30));
        assert!(c.field_errors().is_empty());
    }

    #[test]
    fn zero_sigma_rows_are_identical() {
        let cfg = ExampleConfig {
            sigma_left: 0.0,
            sigma_right: 0.0,
            ..default_config()
        };
        let (x, y) = generate_example(&cfg).unwrap();
        for i in 1..x.nrows() {
            assert_eq!(x.row_vec(i), x.row_vec(0));
        }
        assert!(y.as_slice().iter().all(|&v| v == -3.0 / 9.0));
    }

    #[test]
    fn target_is_slope_of_emitted_columns() {
        let cfg = default_config();
        let (x, y) = generate_example(&cfg).unwrap();
        for i in 0..x.nrows() {
            let slope = (x.get(i, 29) - x.get(i, 20)) / 9.0;
            assert_eq!(y.as_slice()[i], slope);
        }
    }

    #[test]
    fn sections_are_linear_without_noise() {
        let cfg = ExampleConfig {
            sigma_start: 0.0,
            sigma_left: 0.0,
            sigma_right: 0.0,
            sigma_end: 0.0,
            n_points: 50,
            ..default_config()
        };
        let (x, _) = generate_example(&cfg).unwrap();
        let row = x.row_vec(0);
        for k in 1..49 {
            // anchors are the only kinks
            if k + 1 == 21 || k + 1 == 30 {
                continue;
            }
            assert!((row[k + 1] - 2.0 * row[k] + row[k - 1]).abs() < 1e-12, "kink at {k}");
        }
        assert_eq!(row[0], 2.0);
        assert_eq!(row[49], -5.0);
    }

    #[test]
    fn interval_validation_names_both_fields() {
        let cfg = ExampleConfig {
            relevant_start_index: 30,
            relevant_end_index: 21,
            ..default_config()
        };
        let fields: Vec<String> = cfg.field_errors().into_iter().map(|e| e.field).collect();
        assert!(fields.contains(&"relevant_start_index".to_string()));
        assert!(fields.contains(&"relevant_end_index".to_string()));
        assert!(generate_example(&cfg).is_err());
        let beyond = ExampleConfig {
            relevant_end_index: 31,
            ..default_config()
        };
        assert!(!beyond.field_errors().is_empty());
        let negative = ExampleConfig {
            sigma_left: -1.0,
            ..default_config()
        };
        assert_eq!(negative.field_errors()[0].field, "sigma_left");
    }

    #[test]
    fn seed_determinism_and_noise() {
        let cfg = default_config();
        assert_eq!(generate_example(&cfg).unwrap(), generate_example(&cfg).unwrap());
        let other = ExampleConfig { seed: 1, ..default_config() };
        assert_ne!(generate_example(&cfg).unwrap().1, generate_example(&other).unwrap().1);
        let noisy = ExampleConfig {
            noise: Some(NoiseSpec::new(20.0, 5)),
            ..default_config()
        };
        let (xn, yn) = generate_example(&noisy).unwrap();
        let (x, y) = generate_example(&cfg).unwrap();
        assert_ne!(xn, x);
        assert_ne!(yn, y);
    }

    #[test]
    fn config_json_accepts_partial_objects() {
        let cfg: ExampleConfig = serde_json::from_str(r#"{"seed": 9, "snr": {"snr": 20}}"#).unwrap();
        assert_eq!(cfg.seed, 9);
        assert_eq!(cfg.noise.unwrap().snr, 20.0);
        assert!(serde_json::from_str::<ExampleConfig>(r#"{"bogus": 1}"#).is_err());
    }

    #[test]
    fn example_dataset_has_index_axis() {
        let ds = example_dataset(&default_config()).unwrap();
        assert_eq!(ds.feature_axis().values[0], 1.0);
        assert_eq!(ds.n_groups(), 100);
    }
}
