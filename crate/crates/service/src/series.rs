//! Plot-ready series for the three panels. Only these previews are ever
//! decimated; report numbers are passed through untouched.

use latentlab_core::datasets::{AxisUnit, Dataset};
use latentlab_core::evaluation::FitReport;
use serde::{Deserialize, Serialize};

/// Curves longer than this are reduced by min/max binning.
pub const MAX_PREVIEW_POINTS: usize = 2000;
const BINS: usize = MAX_PREVIEW_POINTS / 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Partition {
    Train,
    Test,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Curve {
    pub index: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub partition: Option<Partition>,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParityPoint {
    pub index: usize,
    pub y_true: f64,
    pub y_pred: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlotSeries {
    pub feature_unit: AxisUnit,
    pub axis: Vec<f64>,
    pub downsampled: bool,
    pub curves: Vec<Curve>,
    pub coefficients: Vec<f64>,
    pub parity_train: Vec<ParityPoint>,
    pub parity_test: Vec<ParityPoint>,
}

/// Contiguous bins covering `0..n`, at most [`BINS`] of them.
fn bins(n: usize) -> Vec<(usize, usize)> {
    let k = BINS.min(n);
    (0..k).map(|b| (b * n / k, (b + 1) * n / k)).collect()
}

/// Keeps each bin's first and last axis value.
pub fn decimate_axis(axis: &[f64]) -> Vec<f64> {
    if axis.len() <= MAX_PREVIEW_POINTS {
        return axis.to_vec();
    }
    bins(axis.len()).into_iter().flat_map(|(a, b)| [axis[a], axis[b - 1]]).collect()
}

/// Replaces each bin by its minimum and maximum, in the order they occur.
pub fn decimate_values(values: &[f64]) -> Vec<f64> {
    if values.len() <= MAX_PREVIEW_POINTS {
        return values.to_vec();
    }
    let mut out = Vec::with_capacity(2 * BINS);
    for (a, b) in bins(values.len()) {
        let slice = &values[a..b];
        let (mut lo, mut hi) = (0, 0);
        for (i, v) in slice.iter().enumerate() {
            if *v < slice[lo] {
                lo = i;
            }
            if *v > slice[hi] {
                hi = i;
            }
        }
        if lo <= hi {
            out.extend([slice[lo], slice[hi]]);
        } else {
            out.extend([slice[hi], slice[lo]]);
        }
    }
    out
}

fn tagged(report: &FitReport) -> Vec<Option<Partition>> {
    let mut tags = vec![None; report.train_indices.len() + report.test_indices.len()];
    for &i in &report.train_indices {
        tags[i] = Some(Partition::Train);
    }
    for &i in &report.test_indices {
        tags[i] = Some(Partition::Test);
    }
    tags
}

fn parity(idx: &[usize], truth: &[f64], pred: &[f64]) -> Vec<ParityPoint> {
    idx.iter()
        .zip(truth.iter().zip(pred))
        .map(|(&index, (&y_true, &y_pred))| ParityPoint { index, y_true, y_pred })
        .collect()
}

pub fn fit_series(ds: &Dataset, report: &FitReport) -> PlotSeries {
    let axis = &ds.feature_axis().values;
    let tags = tagged(report);
    let curves = (0..ds.n_observations())
        .map(|i| Curve {
            index: i,
            partition: tags[i],
            values: decimate_values(&ds.x().row_vec(i)),
        })
        .collect();
    PlotSeries {
        feature_unit: ds.feature_axis().unit,
        axis: decimate_axis(axis),
        downsampled: axis.len() > MAX_PREVIEW_POINTS,
        curves,
        coefficients: decimate_values(&report.coefficients),
        parity_train: parity(&report.train_indices, &report.y_train, &report.predictions_train),
        parity_test: parity(&report.test_indices, &report.y_test, &report.predictions_test),
    }
}

/// Untagged curves plus targets, for previews of freshly generated data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DataPreview {
    pub feature_unit: AxisUnit,
    pub axis: Vec<f64>,
    pub downsampled: bool,
    pub curves: Vec<Curve>,
    pub targets: Vec<f64>,
}

pub fn data_preview(ds: &Dataset) -> DataPreview {
    let axis = &ds.feature_axis().values;
    DataPreview {
        feature_unit: ds.feature_axis().unit,
        axis: decimate_axis(axis),
        downsampled: axis.len() > MAX_PREVIEW_POINTS,
        curves: (0..ds.n_observations())
            .map(|i| Curve {
                index: i,
                partition: None,
                values: decimate_values(&ds.x().row_vec(i)),
            })
            .collect(),
        targets: ds.y().to_vec(),
    }
}
