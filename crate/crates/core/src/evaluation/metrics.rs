use crate::data::TargetVector;
use crate::error::{Error, Result};

fn check(y_true: &TargetVector, y_pred: &TargetVector) -> Result<()> {
    if y_true.len() != y_pred.len() {
        return Err(Error::Dimension {
            context: "predictions",
            expected: y_true.len(),
            found: y_pred.len(),
        });
    }
    Ok(())
}

/// Root mean squared error.
pub fn rmse(y_true: &TargetVector, y_pred: &TargetVector) -> Result<f64> {
    check(y_true, y_pred)?;
    let n = y_true.len() as f64;
    let ss: f64 = y_true.as_slice().iter().zip(y_pred.as_slice()).map(|(a, b)| (a - b) * (a - b)).sum();
    Ok((ss / n).sqrt())
}

/// `1 - SS_res / SS_tot`, with the mean of `y_true` as baseline.
pub fn r_squared(y_true: &TargetVector, y_pred: &TargetVector) -> Result<f64> {
    check(y_true, y_pred)?;
    let t = y_true.as_slice();
    let mean = t.iter().sum::<f64>() / t.len() as f64;
    let ss_tot: f64 = t.iter().map(|v| (v - mean) * (v - mean)).sum();
    if ss_tot == 0.0 {
        return Err(Error::invalid("y_true", "has zero variance, R² is undefined"));
    }
    let ss_res: f64 = t.iter().zip(y_pred.as_slice()).map(|(a, b)| (a - b) * (a - b)).sum();
    Ok(1.0 - ss_res / ss_tot)
}
