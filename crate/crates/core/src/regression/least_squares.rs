//! Ordinary least squares, the minimum-norm solution, and ridge regression.

use nalgebra::{DMatrix, DVector};

use super::model::{Hyperparameters, LinearModel, Method};
use crate::data::{check_paired, DataMatrix, TargetVector};
use crate::error::{Error, Result};
use crate::linalg::{center_columns, center_vector, ThinSvd};

/// Working copy of the data, centered when an intercept is requested.
pub(crate) struct Prepared {
    pub x: DMatrix<f64>,
    pub y: DVector<f64>,
    pub x_means: Option<DVector<f64>>,
    pub y_mean: f64,
}

impl Prepared {
    pub fn new(x: &DataMatrix, y: &TargetVector, fit_intercept: bool) -> Self {
        if fit_intercept {
            let (xc, means) = center_columns(x.as_matrix());
            let (yc, y_mean) = center_vector(y.as_vector());
            Prepared {
                x: xc,
                y: yc,
                x_means: Some(means),
                y_mean,
            }
        } else {
            Prepared {
                x: x.as_matrix().clone(),
                y: y.as_vector().clone(),
                x_means: None,
                y_mean: 0.0,
            }
        }
    }

    /// Wraps coefficients fit on the working data, recovering `β₀ = ȳ − x̄ᵀβ`.
    pub fn finish(self, beta: DVector<f64>, method: Method, hp: Hyperparameters) -> LinearModel {
        let intercept = match &self.x_means {
            Some(means) => self.y_mean - means.dot(&beta),
            None => 0.0,
        };
        LinearModel::new(beta, intercept, method, hp, self.x_means)
    }
}

/// Least squares `min ‖y − Xβ‖²`.
///
/// Tall problems (more usable rows than columns) need full column rank and
/// get the normal-equation solution `(XᵀX)⁻¹Xᵀy`. Wide problems get the
/// minimum-norm solution; with an intercept the centered matrix can have rank
/// at most `m − 1`, which is then what is required.
pub fn ols_fit(x: &DataMatrix, y: &TargetVector, fit_intercept: bool) -> Result<LinearModel> {
    check_paired(x, y)?;
    let (m, n) = (x.nrows(), x.ncols());
    if m < n && !fit_intercept {
        return min_norm_fit(x, y).map(|model| model.retag(Method::Ols, Hyperparameters::default()));
    }

    let prep = Prepared::new(x, y, fit_intercept);
    let usable_rows = if fit_intercept { m - 1 } else { m };
    let svd = ThinSvd::new(&prep.x);
    let rank = svd.rank();
    let required = usable_rows.min(n);
    if rank < required {
        return Err(Error::Singular { rank, required });
    }
    // V Σ⁻¹ Uᵀ y equals (XᵀX)⁻¹Xᵀy at full column rank and Xᵀ(XXᵀ)⁻¹y at
    // full row rank; the SVD avoids squaring the condition number.
    let beta = svd.solve_truncated(&prep.y, required);
    Ok(prep.finish(beta, Method::Ols, Hyperparameters::default()))
}

/// `β = Xᵀ(XXᵀ)⁻¹y` for an underdetermined system of full row rank.
///
/// No intercept; the returned model interpolates the data exactly.
pub fn min_norm_fit(x: &DataMatrix, y: &TargetVector) -> Result<LinearModel> {
    check_paired(x, y)?;
    let (m, n) = (x.nrows(), x.ncols());
    if m >= n {
        return Err(Error::invalid(
            "X",
            format!("minimum-norm solution needs fewer rows than columns, got {m}x{n}"),
        ));
    }
    let svd = ThinSvd::new(x.as_matrix());
    let rank = svd.rank();
    if rank < m {
        return Err(Error::Singular { rank, required: m });
    }
    let beta = svd.solve_truncated(y.as_vector(), m);
    Ok(LinearModel::new(beta, 0.0, Method::Ols, Hyperparameters::default(), None))
}

/// Ridge regression `min ‖y − Xβ‖² + λ‖β‖²`, solved in closed form.
///
/// Uses `(XᵀX + λI)⁻¹Xᵀy` when `n ≤ m` and the equivalent dual form
/// `Xᵀ(XXᵀ + λI)⁻¹y` otherwise. `λ = 0` defers to [`ols_fit`].
pub fn ridge_fit(x: &DataMatrix, y: &TargetVector, lambda: f64, fit_intercept: bool) -> Result<LinearModel> {
    Hyperparameters::check_lambda(lambda)?;
    let hp = Hyperparameters::with_lambda(lambda);
    if lambda == 0.0 {
        return ols_fit(x, y, fit_intercept).map(|model| model.retag(Method::Ridge, hp));
    }
    check_paired(x, y)?;
    let prep = Prepared::new(x, y, fit_intercept);
    let beta = ridge_solve(&prep.x, &prep.y, lambda)?;
    Ok(prep.finish(beta, Method::Ridge, hp))
}

pub(crate) fn ridge_solve(x: &DMatrix<f64>, y: &DVector<f64>, lambda: f64) -> Result<DVector<f64>> {
    let (m, n) = x.shape();
    let singular = || {
        let rank = ThinSvd::new(x).rank();
        Error::Singular {
            rank,
            required: m.min(n),
        }
    };
    if n <= m {
        let mut gram = x.tr_mul(x);
        for i in 0..n {
            gram[(i, i)] += lambda;
        }
        let chol = gram.cholesky().ok_or_else(singular)?;
        Ok(chol.solve(&x.tr_mul(y)))
    } else {
        let mut kernel = x * x.transpose();
        for i in 0..m {
            kernel[(i, i)] += lambda;
        }
        let chol = kernel.cholesky().ok_or_else(singular)?;
        Ok(x.tr_mul(&chol.solve(y)))
    }
}
