use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{AxisUnit, Dataset, FeatureAxis};
use crate::data::DataMatrix;
use crate::error::{Error, Result};

/// How stored targets map to model targets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum TargetTransform {
    #[default]
    Identity,
    Log10,
}

impl TargetTransform {
    pub fn apply(self, v: f64) -> Option<f64> {
        match self {
            TargetTransform::Identity => Some(v),
            TargetTransform::Log10 if v > 0.0 => Some(v.log10()),
            TargetTransform::Log10 => None,
        }
    }

    pub fn invert(self, v: f64) -> f64 {
        match self {
            TargetTransform::Identity => v,
            TargetTransform::Log10 => 10f64.powf(v),
        }
    }

    pub(crate) fn apply_all(self, raw: &[f64]) -> Result<Vec<f64>> {
        raw.iter()
            .enumerate()
            .map(|(i, &v)| {
                self.apply(v).ok_or_else(|| Error::Parse {
                    row: i + 1,
                    col: 2,
                    message: format!("log10 target requires a positive value, got {v}"),
                })
            })
            .collect()
    }

    pub(crate) fn invert_all(self, y: &[f64]) -> Vec<f64> {
        y.iter().map(|&v| self.invert(v)).collect()
    }
}

/// Contents of the optional `<file>.meta.json` sidecar.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(default)]
pub struct DatasetMetadata {
    pub name: Option<String>,
    pub feature_unit: AxisUnit,
    pub target_transform: TargetTransform,
    pub provenance: Option<String>,
}

pub fn sidecar_path(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".meta.json");
    PathBuf::from(s)
}

/// Loads a dataset file. Metadata comes from `metadata` when given, otherwise
/// from the sidecar next to the file, otherwise defaults.
pub fn load_csv(path: impl AsRef<Path>, metadata: Option<&DatasetMetadata>) -> Result<Dataset> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let meta = match metadata {
        Some(m) => m.clone(),
        None => {
            let side = sidecar_path(path);
            if side.exists() {
                let raw = fs::read_to_string(&side).map_err(|e| Error::Io(format!("{}: {e}", side.display())))?;
                serde_json::from_str(&raw).map_err(|e| Error::Format(format!("{}: {e}", side.display())))?
            } else {
                DatasetMetadata::default()
            }
        }
    };
    let mut meta = meta;
    if meta.name.is_none() {
        meta.name = path.file_stem().map(|s| s.to_string_lossy().into_owned());
    }
    load_csv_str(&text, &meta)
}

/// Parses CSV text. Row and column numbers in errors are 1-based; rows count
/// data lines after the header, columns count from the `group` column.
pub fn load_csv_str(text: &str, meta: &DatasetMetadata) -> Result<Dataset> {
    let mut reader = csv::ReaderBuilder::new().has_headers(true).flexible(true).from_reader(text.as_bytes());
    let header = reader.headers().map_err(|e| Error::Format(e.to_string()))?.clone();
    if header.len() < 3 {
        return Err(Error::Format("header needs `group`, `target` and at least one feature column".into()));
    }
    if header.get(0).map(str::trim) != Some("group") || header.get(1).map(str::trim) != Some("target") {
        return Err(Error::Format("header must start with `group,target`".into()));
    }
    let axis_values = header
        .iter()
        .skip(2)
        .enumerate()
        .map(|(j, cell)| {
            parse_number(cell).ok_or_else(|| Error::Parse {
                row: 0,
                col: j + 3,
                message: format!("feature-axis header `{cell}` is not a number"),
            })
        })
        .collect::<Result<Vec<f64>>>()?;
    let width = header.len();

    let mut groups = Vec::new();
    let mut targets = Vec::new();
    let mut values = Vec::new();
    for (r, record) in reader.records().enumerate() {
        let row = r + 1;
        let record = record.map_err(|e| Error::Parse {
            row,
            col: 0,
            message: e.to_string(),
        })?;
        if record.len() != width {
            return Err(Error::Parse {
                row,
                col: record.len().min(width) + 1,
                message: format!("expected {width} cells, found {}", record.len()),
            });
        }
        let group = record[0].trim();
        if group.is_empty() {
            return Err(Error::Parse {
                row,
                col: 1,
                message: "empty group label".into(),
            });
        }
        groups.push(group.to_string());
        for (c, cell) in record.iter().enumerate().skip(1) {
            let v = parse_number(cell).filter(|v| v.is_finite()).ok_or_else(|| Error::Parse {
                row,
                col: c + 1,
                message: format!("`{cell}` is not a finite number"),
            })?;
            if c == 1 {
                targets.push(v);
            } else {
                values.push(v);
            }
        }
    }
    if groups.is_empty() {
        return Err(Error::Format("no data rows".into()));
    }
    let x = DataMatrix::from_row_slice(groups.len(), width - 2, &values)?;
    let raw = targets.clone();
    meta.target_transform.apply_all(&raw)?;
    let ds = Dataset::new(
        meta.name.clone().unwrap_or_else(|| "uploaded".into()),
        x,
        raw,
        groups,
        FeatureAxis {
            values: axis_values,
            unit: meta.feature_unit,
        },
        meta.target_transform,
    )?;
    Ok(ds.with_provenance(meta.provenance.clone().unwrap_or_default()))
}

fn parse_number(cell: &str) -> Option<f64> {
    cell.trim().parse::<f64>().ok()
}

/// Serializes with shortest round-trip float formatting, so loading the
/// output reproduces every value bit for bit.
pub fn to_csv_string(ds: &Dataset) -> String {
    let mut writer = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["group".to_string(), "target".to_string()];
    header.extend(ds.feature_axis().values.iter().map(|v| format!("{v:?}")));
    writer.write_record(&header).expect("in-memory write");
    let x = ds.x().as_matrix();
    for i in 0..ds.n_observations() {
        let mut rec = Vec::with_capacity(ds.n_features() + 2);
        rec.push(ds.groups()[i].clone());
        rec.push(format!("{:?}", ds.raw_target()[i]));
        rec.extend((0..ds.n_features()).map(|j| format!("{:?}", x[(i, j)])));
        writer.write_record(&rec).expect("in-memory write");
    }
    String::from_utf8(writer.into_inner().expect("in-memory flush")).expect("utf-8 output")
}

/// Writes the CSV and its metadata sidecar.
pub fn save_csv(ds: &Dataset, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, to_csv_string(ds))?;
    let meta = DatasetMetadata {
        name: Some(ds.name().to_string()),
        feature_unit: ds.feature_axis().unit,
        target_transform: ds.target_transform(),
        provenance: (!ds.provenance().is_empty()).then(|| ds.provenance().to_string()),
    };
    let json = serde_json::to_string_pretty(&meta).map_err(|e| Error::Format(e.to_string()))?;
    fs::write(sidecar_path(path), json)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    const THREE_ROWS: &str = "group,target,1,2,3\na,1.5,0.1,0.2,0.3\nb,2.5,0.4,0.5,0.6\nb,3.5,0.7,0.8,0.9\n";

    #[test]
    fn well_formed_file_loads() {
        let ds = load_csv_str(THREE_ROWS, &DatasetMetadata::default()).unwrap();
        assert_eq!(ds.n_observations(), 3);
        assert_eq!(ds.n_features(), 3);
        assert_eq!(ds.feature_axis().values, vec![1.0, 2.0, 3.0]);
        assert_eq!(ds.y().to_vec(), vec![1.5, 2.5, 3.5]);
        assert_eq!(ds.n_groups(), 2);
    }

    #[test]
    fn non_numeric_cell_is_located() {
        let text = "group,target,1,2,3\na,1,0,0,0\nb,2,0,0,oops\n";
        match load_csv_str(text, &DatasetMetadata::default()) {
            Err(Error::Parse { row, col, .. }) => assert_eq!((row, col), (2, 5)),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn short_row_is_located() {
        let text = "group,target,1,2\na,1,0,0\nb,2,0\n";
        match load_csv_str(text, &DatasetMetadata::default()) {
            Err(Error::Parse { row, .. }) => assert_eq!(row, 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn log10_transform_is_applied_on_load() {
        let meta = DatasetMetadata {
            target_transform: TargetTransform::Log10,
            feature_unit: AxisUnit::Voltage,
            ..Default::default()
        };
        let ds = load_csv_str("group,target,2.0,2.1\np1,1000,0.1,0.2\np2,100,0.3,0.1\n", &meta).unwrap();
        assert_eq!(ds.y().as_slice()[0], 3.0);
        assert_eq!(ds.raw_target()[0], 1000.0);
        let bad = load_csv_str("group,target,2.0\np1,0,0.1\n", &meta);
        assert!(bad.is_err());
    }

    #[test]
    fn header_is_checked() {
        assert!(load_csv_str("grp,target,1\na,1,1\n", &DatasetMetadata::default()).is_err());
        assert!(load_csv_str("group,target,x\na,1,1\n", &DatasetMetadata::default()).is_err());
        assert!(load_csv_str("group,target,1\n", &DatasetMetadata::default()).is_err());
    }

    #[test]
    fn round_trip_through_files_is_identity() {
        let dir = tempfile::tempdir().unwrap();
        let meta = DatasetMetadata {
            name: Some("rt".into()),
            target_transform: TargetTransform::Log10,
            feature_unit: AxisUnit::Wavenumber,
            provenance: Some("unit test".into()),
        };
        let text = "group,target,800.5,801.25\n\"a,1\",0.1234567890123,1e-300,-3.3333333333333335\nb,7,0.1,0.30000000000000004\n";
        let ds = load_csv_str(text, &meta).unwrap();
        let path = dir.path().join("rt.csv");
        save_csv(&ds, &path).unwrap();
        let back = load_csv(&path, None).unwrap();
        assert_eq!(back, ds);
        let path2 = dir.path().join("rt2.csv");
        save_csv(&back, &path2).unwrap();
        assert_eq!(fs::read(&path).unwrap(), fs::read(&path2).unwrap());
    }
}
