//! Datasets, CSV ingestion, built-in synthetic stand-ins and the
//! group-aware train/test splitter.

mod io;
mod split;
mod standins;

pub use io::{load_csv, load_csv_str, save_csv, sidecar_path, to_csv_string, DatasetMetadata, TargetTransform};
pub use split::{split, split_indices, SplitMode, SplitResult, SplitSpec};
pub use standins::{builtin_standin, builtin_standins, ftir_group_label, ftir_like, lfp_like, raman_like, STANDIN_NAMES};

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::data::{DataMatrix, TargetVector};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum AxisUnit {
    /// cm⁻¹ of an absorbance spectrum
    Wavenumber,
    /// cm⁻¹ of a Raman spectrum
    RamanShift,
    Voltage,
    #[default]
    Index,
}

impl AxisUnit {
    pub fn label(self) -> &'static str {
        match self {
            AxisUnit::Wavenumber => "wavenumber [1/cm]",
            AxisUnit::RamanShift => "Raman shift [1/cm]",
            AxisUnit::Voltage => "voltage [V]",
            AxisUnit::Index => "index",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureAxis {
    pub values: Vec<f64>,
    pub unit: AxisUnit,
}

impl FeatureAxis {
    /// `1, 2, ..., n`.
    pub fn index(n: usize) -> Self {
        FeatureAxis {
            values: (1..=n).map(|i| i as f64).collect(),
            unit: AxisUnit::Index,
        }
    }
}

/// X, y, group labels and feature axis of one dataset.
///
/// `raw_target` holds the targets as they were supplied; `y` is the model
/// target after the declared transform.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    name: String,
    provenance: String,
    x: DataMatrix,
    y: TargetVector,
    raw_target: Vec<f64>,
    groups: Vec<String>,
    axis: FeatureAxis,
    transform: TargetTransform,
}

impl Dataset {
    /// Validates shapes and applies `transform` to `raw_target`.
    pub fn new(
        name: impl Into<String>,
        x: DataMatrix,
        raw_target: Vec<f64>,
        groups: Vec<String>,
        axis: FeatureAxis,
        transform: TargetTransform,
    ) -> Result<Self> {
        let m = x.nrows();
        let check = |context, found| {
            if found == m {
                Ok(())
            } else {
                Err(Error::Dimension {
                    context,
                    expected: m,
                    found,
                })
            }
        };
        check("target length", raw_target.len())?;
        check("group labels", groups.len())?;
        if axis.values.len() != x.ncols() {
            return Err(Error::Dimension {
                context: "feature axis",
                expected: x.ncols(),
                found: axis.values.len(),
            });
        }
        if let Some(i) = groups.iter().position(|g| g.trim().is_empty()) {
            return Err(Error::invalid("groups", format!("label of row {i} is empty")));
        }
        let y = TargetVector::from_vec(transform.apply_all(&raw_target)?)?;
        Ok(Dataset {
            name: name.into(),
            provenance: String::new(),
            x,
            y,
            raw_target,
            groups,
            axis,
            transform,
        })
    }

    pub fn with_provenance(mut self, provenance: impl Into<String>) -> Self {
        self.provenance = provenance.into();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    pub fn x(&self) -> &DataMatrix {
        &self.x
    }

    pub fn y(&self) -> &TargetVector {
        &self.y
    }

    pub fn raw_target(&self) -> &[f64] {
        &self.raw_target
    }

    pub fn groups(&self) -> &[String] {
        &self.groups
    }

    pub fn feature_axis(&self) -> &FeatureAxis {
        &self.axis
    }

    pub fn target_transform(&self) -> TargetTransform {
        self.transform
    }

    pub fn n_observations(&self) -> usize {
        self.x.nrows()
    }

    pub fn n_features(&self) -> usize {
        self.x.ncols()
    }

    /// Row indices per group label, labels in sorted order.
    pub fn group_members(&self) -> BTreeMap<&str, Vec<usize>> {
        group_members(&self.groups)
    }

    pub fn n_groups(&self) -> usize {
        self.group_members().len()
    }

    /// Replaces X and/or y, keeping labels and axis. Used for noise injection.
    pub fn with_data(&self, x: DataMatrix, y: TargetVector) -> Result<Self> {
        if x.nrows() != self.n_observations() || x.ncols() != self.n_features() || y.len() != self.n_observations() {
            return Err(Error::Dimension {
                context: "replacement data",
                expected: self.n_observations(),
                found: x.nrows(),
            });
        }
        let raw_target = self.transform.invert_all(y.as_slice());
        Ok(Dataset {
            x,
            y,
            raw_target,
            ..self.clone()
        })
    }

    pub fn descriptor(&self) -> DatasetDescriptor {
        DatasetDescriptor {
            name: self.name.clone(),
            m: self.n_observations(),
            n: self.n_features(),
            groups: self.n_groups(),
            feature_unit: self.axis.unit,
            target_transform: self.transform,
        }
    }
}

pub(crate) fn group_members(groups: &[String]) -> BTreeMap<&str, Vec<usize>> {
    let mut map: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
    for (i, g) in groups.iter().enumerate() {
        map.entry(g.as_str()).or_default().push(i);
    }
    map
}

/// Summary shown in dataset listings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetDescriptor {
    pub name: String,
    pub m: usize,
    pub n: usize,
    pub groups: usize,
    pub feature_unit: AxisUnit,
    pub target_transform: TargetTransform,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny() -> Dataset {
        Dataset::new(
            "tiny",
            DataMatrix::from_rows(&[vec![1.0, 2.0], vec![3.0, 4.0], vec![5.0, 6.0]]).unwrap(),
            vec![10.0, 100.0, 1000.0],
            vec!["a".into(), "b".into(), "a".into()],
            FeatureAxis::index(2),
            TargetTransform::Log10,
        )
        .unwrap()
    }

    #[test]
    fn log_target_is_applied() {
        let ds = tiny();
        assert_eq!(ds.y().to_vec(), vec![1.0, 2.0, 3.0]);
        assert_eq!(ds.raw_target(), &[10.0, 100.0, 1000.0]);
    }

    #[test]
    fn groups_are_collected_in_label_order() {
        let ds = tiny();
        let members = ds.group_members();
        assert_eq!(members["a"], vec![0, 2]);
        assert_eq!(members["b"], vec![1]);
        assert_eq!(ds.descriptor().groups, 2);
    }

    #[test]
    fn mismatched_lengths_are_rejected() {
        let x = DataMatrix::from_rows(&[vec![1.0], vec![2.0]]).unwrap();
        assert!(Dataset::new("t", x.clone(), vec![1.0], vec!["a".into(); 2], FeatureAxis::index(1), TargetTransform::Identity).is_err());
        assert!(Dataset::new("t", x.clone(), vec![1.0, 2.0], vec!["a".into()], FeatureAxis::index(1), TargetTransform::Identity).is_err());
        assert!(Dataset::new("t", x.clone(), vec![1.0, 2.0], vec!["a".into(); 2], FeatureAxis::index(3), TargetTransform::Identity).is_err());
        assert!(Dataset::new("t", x, vec![1.0, 2.0], vec!["a".into(), " ".into()], FeatureAxis::index(1), TargetTransform::Identity).is_err());
    }
}
