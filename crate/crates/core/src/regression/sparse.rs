//! Lasso and elastic net by cyclic coordinate descent.
//!
//! Objectives are used exactly as written, without a `1/(2m)` loss factor:
//!
//! * lasso: `‖y − Xβ‖² + λ‖β‖₁`
//! * elastic net: `‖y − Xβ‖² + λ((1 − α)/2 ‖β‖² + α‖β‖₁)`
//!
//! so λ values are not interchangeable with libraries that scale the loss.

use nalgebra::{DMatrix, DVector};

use super::least_squares::{ridge_fit, Prepared};
use super::model::{Hyperparameters, LinearModel, Method};
use crate::data::{check_paired, DataMatrix, TargetVector};
use crate::error::{Error, Result};

/// Stopping rule for coordinate descent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CdSettings {
    /// Converged once no coefficient moves by this much in a full sweep.
    pub tolerance: f64,
    pub max_sweeps: usize,
}

impl Default for CdSettings {
    fn default() -> Self {
        CdSettings {
            tolerance: 1e-9,
            max_sweeps: 10_000,
        }
    }
}

/// `sign(z) · max(|z| − t, 0)`, returning an exact zero inside the threshold.
pub fn soft_threshold(z: f64, t: f64) -> f64 {
    if z > t {
        z - t
    } else if z < -t {
        z + t
    } else {
        0.0
    }
}

/// Minimizes `‖y − Xβ‖² + l1‖β‖₁ + l2‖β‖²` starting from `start`.
///
/// Coordinates are visited in ascending index order.
pub(crate) fn coordinate_descent(
    x: &DMatrix<f64>,
    y: &DVector<f64>,
    l1: f64,
    l2: f64,
    start: Option<&DVector<f64>>,
    settings: CdSettings,
) -> Result<DVector<f64>> {
    let mut beta = start.cloned().unwrap_or_else(|| DVector::zeros(x.ncols()));
    match sweep_until_converged(x, y, l1, l2, &mut beta, settings) {
        Ok(()) => Ok(beta),
        Err(max_change) => Err(Error::Convergence {
            sweeps: settings.max_sweeps,
            max_change,
            kkt_residual: kkt_residual(x, y, &beta, l1, l2),
        }),
    }
}

/// Cold-start solve that follows a geometric sequence of penalties from the
/// value at which `β = 0` becomes optimal down to `(l1, l2)`, warm-starting
/// each step. Only the final step's convergence is checked. Cold starts on
/// collinear columns otherwise crawl for many thousands of sweeps.
pub(crate) fn pathwise_descent(
    x: &DMatrix<f64>,
    y: &DVector<f64>,
    l1: f64,
    l2: f64,
    settings: CdSettings,
) -> Result<DVector<f64>> {
    const RATIO: f64 = 0.5;
    let l1_max = 2.0 * x.tr_mul(y).amax();
    let mut beta = DVector::zeros(x.ncols());
    if l1 > 0.0 && l1 < l1_max {
        let mut t = l1_max / l1;
        while t * RATIO > 1.0 {
            t *= RATIO;
            // intermediate steps only provide starting points
            let _ = sweep_until_converged(x, y, l1 * t, l2 * t, &mut beta, settings);
        }
    }
    coordinate_descent(x, y, l1, l2, Some(&beta), settings)
}

/// Runs sweeps on `beta` in place. `Err` carries the last max change.
fn sweep_until_converged(
    x: &DMatrix<f64>,
    y: &DVector<f64>,
    l1: f64,
    l2: f64,
    beta: &mut DVector<f64>,
    settings: CdSettings,
) -> std::result::Result<(), f64> {
    let n = x.ncols();
    let col_sq: Vec<f64> = x.column_iter().map(|c| c.norm_squared()).collect();
    let mut resid = y - x * &*beta;
    let half_l1 = 0.5 * l1;

    let mut max_change = f64::INFINITY;
    for _ in 0..settings.max_sweeps {
        max_change = 0.0_f64;
        for j in 0..n {
            let denom = col_sq[j] + l2;
            if denom == 0.0 {
                continue;
            }
            let col = x.column(j);
            let old = beta[j];
            let rho = col.dot(&resid) + col_sq[j] * old;
            let new = soft_threshold(rho, half_l1) / denom;
            if new != old {
                resid.axpy(old - new, &col, 1.0);
                beta[j] = new;
                max_change = max_change.max((new - old).abs());
            }
        }
        if max_change < settings.tolerance {
            return Ok(());
        }
    }
    Err(max_change)
}

/// Largest violation of the subgradient optimality conditions of
/// `‖y − Xβ‖² + l1‖β‖₁ + l2‖β‖²` at `beta`.
pub fn kkt_residual(x: &DMatrix<f64>, y: &DVector<f64>, beta: &DVector<f64>, l1: f64, l2: f64) -> f64 {
    let resid = y - x * beta;
    let grad = x.tr_mul(&resid) * 2.0 - beta * (2.0 * l2);
    grad.iter()
        .zip(beta.iter())
        .map(|(&g, &b)| {
            if b != 0.0 {
                (g - l1 * b.signum()).abs()
            } else {
                (g.abs() - l1).max(0.0)
            }
        })
        .fold(0.0, f64::max)
}

pub fn lasso_fit(x: &DataMatrix, y: &TargetVector, lambda: f64, fit_intercept: bool) -> Result<LinearModel> {
    lasso_fit_with(x, y, lambda, fit_intercept, CdSettings::default())
}

pub fn lasso_fit_with(
    x: &DataMatrix,
    y: &TargetVector,
    lambda: f64,
    fit_intercept: bool,
    settings: CdSettings,
) -> Result<LinearModel> {
    Hyperparameters::check_lambda(lambda)?;
    check_paired(x, y)?;
    let prep = Prepared::new(x, y, fit_intercept);
    let beta = pathwise_descent(&prep.x, &prep.y, lambda, 0.0, settings)?;
    Ok(prep.finish(beta, Method::Lasso, Hyperparameters::with_lambda(lambda)))
}

/// Elastic net. `alpha = 1` is the lasso; `alpha = 0` is ridge with penalty
/// `λ/2` and is solved in closed form.
pub fn elastic_net_fit(
    x: &DataMatrix,
    y: &TargetVector,
    lambda: f64,
    alpha: f64,
    fit_intercept: bool,
) -> Result<LinearModel> {
    elastic_net_fit_with(x, y, lambda, alpha, fit_intercept, CdSettings::default())
}

pub fn elastic_net_fit_with(
    x: &DataMatrix,
    y: &TargetVector,
    lambda: f64,
    alpha: f64,
    fit_intercept: bool,
    settings: CdSettings,
) -> Result<LinearModel> {
    Hyperparameters::check_lambda(lambda)?;
    Hyperparameters::check_alpha(alpha)?;
    let hp = Hyperparameters::elastic_net(lambda, alpha);
    if alpha == 0.0 {
        return ridge_fit(x, y, lambda / 2.0, fit_intercept).map(|m| m.retag(Method::ElasticNet, hp));
    }
    check_paired(x, y)?;
    let prep = Prepared::new(x, y, fit_intercept);
    let beta = pathwise_descent(&prep.x, &prep.y, lambda * alpha, lambda * (1.0 - alpha) / 2.0, settings)?;
    Ok(prep.finish(beta, Method::ElasticNet, hp))
}

/// Lasso solutions along a λ grid, each warm-started from the previous one.
pub(crate) fn lasso_path_sequential(
    x: &DataMatrix,
    y: &TargetVector,
    lambdas: &[f64],
    fit_intercept: bool,
) -> Vec<Result<LinearModel>> {
    if let Err(e) = check_paired(x, y) {
        return lambdas.iter().map(|_| Err(e.clone())).collect();
    }
    let prep = Prepared::new(x, y, fit_intercept);
    let mut warm: Option<DVector<f64>> = None;
    lambdas
        .iter()
        .map(|&lambda| {
            Hyperparameters::check_lambda(lambda)?;
            let beta = match &warm {
                Some(start) => coordinate_descent(&prep.x, &prep.y, lambda, 0.0, Some(start), CdSettings::default())?,
                None => pathwise_descent(&prep.x, &prep.y, lambda, 0.0, CdSettings::default())?,
            };
            warm = Some(beta.clone());
            let intercept = prep.x_means.as_ref().map_or(0.0, |mu| prep.y_mean - mu.dot(&beta));
            Ok(LinearModel::new(
                beta,
                intercept,
                Method::Lasso,
                Hyperparameters::with_lambda(lambda),
                prep.x_means.clone(),
            ))
        })
        .collect()
}
