//! Fitting methods: OLS (and the minimum-norm solution), lasso, ridge,
//! elastic net, PCA/PCR and PLS1, plus prediction.
//!
//! Every fit is a pure function of its inputs. With `fit_intercept` the
//! columns of X and the target are centered, coefficients are fit on the
//! centered data and the intercept `β₀ = ȳ − x̄ᵀβ` is never penalized. The
//! latent methods always center.

mod latent;
mod least_squares;
mod model;
mod sparse;

pub use latent::{pca_decompose, pcr_fit, pls1_fit, PcaDecomposition};
pub use least_squares::{min_norm_fit, ols_fit, ridge_fit};
pub use model::{predict, FittedModel, Hyperparameters, LatentModel, LinearModel, Method, Predictor};
pub use sparse::{
    elastic_net_fit, elastic_net_fit_with, kkt_residual, lasso_fit, lasso_fit_with, soft_threshold, CdSettings,
};

use crate::data::{DataMatrix, TargetVector};
use crate::error::Result;
use crate::parallel::{self, Execution};

/// Fits `method` with an intercept, validating only the hyperparameters the
/// method reads.
pub fn fit(method: Method, hp: &Hyperparameters, x: &DataMatrix, y: &TargetVector) -> Result<FittedModel> {
    hp.validate_for(method)?;
    Ok(match method {
        Method::Ols => FittedModel::Linear(ols_fit(x, y, true)?),
        Method::Lasso => FittedModel::Linear(lasso_fit(x, y, hp.lambda, true)?),
        Method::Ridge => FittedModel::Linear(ridge_fit(x, y, hp.lambda, true)?),
        Method::ElasticNet => FittedModel::Linear(elastic_net_fit(x, y, hp.lambda, hp.alpha, true)?),
        Method::Pcr => FittedModel::Latent(pcr_fit(x, y, hp.n_components)?),
        Method::Pls => FittedModel::Latent(pls1_fit(x, y, hp.n_components)?),
    })
}

/// Ridge or lasso fits over a grid of λ values.
///
/// Sequential lasso paths are warm-started; parallel ones solve each λ
/// independently, so results agree to solver tolerance rather than bitwise.
pub fn regularization_path(
    method: Method,
    x: &DataMatrix,
    y: &TargetVector,
    lambdas: &[f64],
    fit_intercept: bool,
    execution: Execution,
) -> Vec<Result<LinearModel>> {
    match (method, execution.effective()) {
        (Method::Lasso, Execution::Sequential) => sparse::lasso_path_sequential(x, y, lambdas, fit_intercept),
        (Method::Lasso, exec) => parallel::map(exec, lambdas, |&l| lasso_fit(x, y, l, fit_intercept)),
        (_, exec) => parallel::map(exec, lambdas, |&l| ridge_fit(x, y, l, fit_intercept)),
    }
}

/// `n` values spaced logarithmically from `lo` to `hi` inclusive.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    let (a, b) = (lo.ln(), hi.ln());
    (0..n).map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp()).collect()
}
