//! Column statistics, standardization, SNR-controlled noise and signal cleanup.

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::data::{DataMatrix, TargetVector};
use crate::error::{Error, Result};
use crate::linalg;

/// Per-column means and `(m - 1)`-denominator standard deviations.
///
/// Columns whose spread is numerically zero are flagged `degenerate`; they are
/// centered but never scaled. `source_rows` records which rows of the parent
/// matrix produced the statistics when that is known, so downstream code can
/// check the statistics came from a training partition.
#[derive(Debug, Clone, PartialEq)]
pub struct ColumnStats {
    pub means: DVector<f64>,
    pub stds: DVector<f64>,
    pub degenerate: Vec<bool>,
    pub source_rows: Option<Vec<usize>>,
}

impl ColumnStats {
    pub fn len(&self) -> usize {
        self.means.len()
    }

    pub fn is_empty(&self) -> bool {
        self.means.is_empty()
    }

    /// Divisor actually used for column `j` (1 for degenerate columns).
    pub fn scale(&self, j: usize) -> f64 {
        if self.degenerate[j] {
            1.0
        } else {
            self.stds[j]
        }
    }

    pub fn scales(&self) -> DVector<f64> {
        DVector::from_fn(self.len(), |j, _| self.scale(j))
    }

    pub(crate) fn apply(&self, x: &DMatrix<f64>) -> DMatrix<f64> {
        let mut out = x.clone();
        for (j, mut col) in out.column_iter_mut().enumerate() {
            let (mu, s) = (self.means[j], self.scale(j));
            col.apply(|v| *v = (*v - mu) / s);
        }
        out
    }
}

/// Column means and standard deviations of `x`; needs at least two rows.
pub fn compute_stats(x: &DataMatrix) -> Result<ColumnStats> {
    let m = x.nrows();
    if m < 2 {
        return Err(Error::invalid("X", "standard deviations need at least two rows"));
    }
    let mat = x.as_matrix();
    let means = linalg::column_means(mat);
    let mut stds = DVector::zeros(x.ncols());
    let mut degenerate = vec![false; x.ncols()];
    for (j, col) in mat.column_iter().enumerate() {
        let mu = means[j];
        let ss: f64 = col.iter().map(|v| (v - mu) * (v - mu)).sum();
        let sd = (ss / (m - 1) as f64).sqrt();
        let magnitude = col.iter().fold(0.0_f64, |a, v| a.max(v.abs())).max(1.0);
        stds[j] = sd;
        degenerate[j] = sd <= 1e-12 * magnitude;
    }
    Ok(ColumnStats {
        means,
        stds,
        degenerate,
        source_rows: None,
    })
}

/// Statistics of the selected rows of `x`, tagged with those rows.
pub fn compute_stats_for_rows(x: &DataMatrix, rows: &[usize]) -> Result<ColumnStats> {
    let mut stats = compute_stats(&x.select_rows(rows))?;
    stats.source_rows = Some(rows.to_vec());
    Ok(stats)
}

fn check_stats_width(x: &DataMatrix, stats: &ColumnStats) -> Result<()> {
    if stats.len() != x.ncols() {
        return Err(Error::Dimension {
            context: "column statistics",
            expected: x.ncols(),
            found: stats.len(),
        });
    }
    Ok(())
}

pub fn standardize(x: &DataMatrix, stats: &ColumnStats) -> Result<DataMatrix> {
    check_stats_width(x, stats)?;
    Ok(DataMatrix::from_trusted(stats.apply(x.as_matrix())))
}

/// Inverse of [`standardize`] for the same statistics.
pub fn destandardize(z: &DataMatrix, stats: &ColumnStats) -> Result<DataMatrix> {
    check_stats_width(z, stats)?;
    let mut out = z.as_matrix().clone();
    for (j, mut col) in out.column_iter_mut().enumerate() {
        let (mu, s) = (stats.means[j], stats.scale(j));
        col.apply(|v| *v = *v * s + mu);
    }
    Ok(DataMatrix::from_trusted(out))
}

/// Which arrays of a dataset receive noise.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct NoiseTargets {
    pub x: bool,
    pub y: bool,
}

impl Default for NoiseTargets {
    fn default() -> Self {
        NoiseTargets { x: true, y: true }
    }
}

/// White Gaussian noise at a linear-ratio SNR (signal mean square / noise variance).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseSpec {
    pub snr: f64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub targets: NoiseTargets,
}

impl NoiseSpec {
    pub fn new(snr: f64, seed: u64) -> Self {
        NoiseSpec {
            snr,
            seed,
            targets: NoiseTargets::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.snr.is_finite() && self.snr > 0.0) {
            return Err(Error::invalid("snr", format!("must be positive and finite, got {}", self.snr)));
        }
        Ok(())
    }
}

/// Converts a decibel SNR into the linear power ratio used throughout.
pub fn snr_from_db(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn snr_to_db(snr: f64) -> f64 {
    10.0 * snr.log10()
}

/// Arrays that can be perturbed element-wise.
pub trait NoiseTarget: Sized {
    fn flat_values(&self) -> Vec<f64>;
    fn with_flat_values(&self, values: Vec<f64>) -> Self;
}

impl NoiseTarget for DataMatrix {
    fn flat_values(&self) -> Vec<f64> {
        self.as_matrix().as_slice().to_vec()
    }

    fn with_flat_values(&self, values: Vec<f64>) -> Self {
        DataMatrix::from_trusted(DMatrix::from_vec(self.nrows(), self.ncols(), values))
    }
}

impl NoiseTarget for TargetVector {
    fn flat_values(&self) -> Vec<f64> {
        self.to_vec()
    }

    fn with_flat_values(&self, values: Vec<f64>) -> Self {
        TargetVector::from_trusted(DVector::from_vec(values))
    }
}

/// Adds zero-mean Gaussian noise with variance `mean(signal²) / snr`.
pub fn add_noise<T: NoiseTarget>(signal: &T, snr: f64, seed: u64) -> Result<T> {
    NoiseSpec::new(snr, seed).validate()?;
    let values = signal.flat_values();
    let power = values.iter().map(|v| v * v).sum::<f64>() / values.len() as f64;
    if power == 0.0 {
        return Err(Error::DegenerateSignal);
    }
    let sd = (power / snr).sqrt();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let noisy = values
        .into_iter()
        .map(|v| {
            let z: f64 = StandardNormal.sample(&mut rng);
            v + sd * z
        })
        .collect();
    Ok(signal.with_flat_values(noisy))
}

/// Applies `spec` to X and/or y at the same SNR. y uses a seed derived from
/// `spec.seed` so the two noise draws are independent.
pub fn apply_noise(x: &DataMatrix, y: &TargetVector, spec: &NoiseSpec) -> Result<(DataMatrix, TargetVector)> {
    spec.validate()?;
    let x = if spec.targets.x { add_noise(x, spec.snr, spec.seed)? } else { x.clone() };
    let y = if spec.targets.y {
        add_noise(y, spec.snr, crate::parallel::derive_seed(spec.seed, 1))?
    } else {
        y.clone()
    };
    Ok((x, y))
}

/// Result of [`moving_median_outlier_filter`].
#[derive(Debug, Clone, PartialEq)]
pub struct OutlierFilterOutcome {
    pub kept_values: Vec<f64>,
    pub kept_timestamps: Vec<f64>,
    /// `true` where the observation was removed.
    pub removed: Vec<bool>,
    /// Global standard deviation of the deviations from the moving median.
    pub sigma: f64,
}

/// Removes values whose distance from the moving median exceeds `k` global
/// standard deviations of those distances.
///
/// The window is centered on each sample and spans `window` time units. Near
/// the ends it shrinks symmetrically so it stays centered.
pub fn moving_median_outlier_filter(
    values: &[f64],
    timestamps: &[f64],
    window: f64,
    k: f64,
) -> Result<OutlierFilterOutcome> {
    if values.is_empty() {
        return Err(Error::invalid("series", "is empty"));
    }
    if values.len() != timestamps.len() {
        return Err(Error::Dimension {
            context: "timestamps",
            expected: values.len(),
            found: timestamps.len(),
        });
    }
    if !(window > 0.0 && window.is_finite()) {
        return Err(Error::invalid("window", "must be positive"));
    }
    if !(k > 0.0 && k.is_finite()) {
        return Err(Error::invalid("k", "must be positive"));
    }
    if timestamps.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::invalid("timestamps", "must be nondecreasing"));
    }

    let n = values.len();
    let (first, last) = (timestamps[0], timestamps[n - 1]);
    let half = window / 2.0;
    let mut deviations = Vec::with_capacity(n);
    let mut buf = Vec::new();
    for i in 0..n {
        let t = timestamps[i];
        let h = half.min(t - first).min(last - t);
        buf.clear();
        buf.extend(
            (0..n)
                .filter(|&j| (timestamps[j] - t).abs() <= h)
                .map(|j| values[j]),
        );
        deviations.push(values[i] - median(&mut buf));
    }

    let sigma = if n > 1 {
        let mu = deviations.iter().sum::<f64>() / n as f64;
        (deviations.iter().map(|d| (d - mu) * (d - mu)).sum::<f64>() / (n - 1) as f64).sqrt()
    } else {
        0.0
    };
    let threshold = k * sigma;
    let removed: Vec<bool> = deviations.iter().map(|d| d.abs() > threshold && sigma > 0.0).collect();

    let (kept_values, kept_timestamps) = values
        .iter()
        .zip(timestamps)
        .zip(&removed)
        .filter(|(_, &r)| !r)
        .map(|((&v, &t), _)| (v, t))
        .unzip();
    Ok(OutlierFilterOutcome {
        kept_values,
        kept_timestamps,
        removed,
        sigma,
    })
}

fn median(buf: &mut [f64]) -> f64 {
    buf.sort_by(f64::total_cmp);
    let n = buf.len();
    if n % 2 == 1 {
        buf[n / 2]
    } else {
        0.5 * (buf[n / 2 - 1] + buf[n / 2])
    }
}

/// Keeps the columns whose axis value lies in `[lo, hi]`, in order.
pub fn restrict_feature_range(x: &DataMatrix, axis: &[f64], lo: f64, hi: f64) -> Result<(DataMatrix, Vec<f64>)> {
    if axis.len() != x.ncols() {
        return Err(Error::Dimension {
            context: "feature axis",
            expected: x.ncols(),
            found: axis.len(),
        });
    }
    if !(lo < hi) {
        return Err(Error::invalid("range", format!("lower bound {lo} must be below upper bound {hi}")));
    }
    let keep: Vec<usize> = (0..axis.len()).filter(|&j| axis[j] >= lo && axis[j] <= hi).collect();
    if keep.is_empty() {
        return Err(Error::invalid("range", format!("[{lo}, {hi}] contains no feature-axis values")));
    }
    let cropped_axis = keep.iter().map(|&j| axis[j]).collect();
    Ok((x.select_columns(&keep), cropped_axis))
}
