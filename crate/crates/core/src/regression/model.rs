use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::data::{DataMatrix, TargetVector};
use crate::error::{Error, Result};
use crate::preprocessing::ColumnStats;

/// The six fitting methods.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Ols,
    Lasso,
    Ridge,
    ElasticNet,
    Pcr,
    Pls,
}

impl Method {
    pub const ALL: [Method; 6] = [
        Method::Ols,
        Method::Lasso,
        Method::Ridge,
        Method::ElasticNet,
        Method::Pcr,
        Method::Pls,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Method::Ols => "ols",
            Method::Lasso => "lasso",
            Method::Ridge => "ridge",
            Method::ElasticNet => "elastic_net",
            Method::Pcr => "pcr",
            Method::Pls => "pls",
        }
    }

    pub fn is_latent(self) -> bool {
        matches!(self, Method::Pcr | Method::Pls)
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "ols" => Ok(Method::Ols),
            "lasso" => Ok(Method::Lasso),
            "ridge" | "rr" => Ok(Method::Ridge),
            "elastic_net" | "en" => Ok(Method::ElasticNet),
            "pcr" => Ok(Method::Pcr),
            "pls" | "pls1" => Ok(Method::Pls),
            other => Err(Error::invalid("method", format!("unknown method `{other}`"))),
        }
    }
}

/// Regularization strength, mixing weight and latent dimension.
///
/// Only the fields a method reads are validated by that method.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Hyperparameters {
    pub lambda: f64,
    pub alpha: f64,
    pub n_components: usize,
}

impl Default for Hyperparameters {
    fn default() -> Self {
        Hyperparameters {
            lambda: 0.0,
            alpha: 0.5,
            n_components: 1,
        }
    }
}

impl Hyperparameters {
    pub fn with_lambda(lambda: f64) -> Self {
        Hyperparameters {
            lambda,
            ..Default::default()
        }
    }

    pub fn with_components(n_components: usize) -> Self {
        Hyperparameters {
            n_components,
            ..Default::default()
        }
    }

    pub fn elastic_net(lambda: f64, alpha: f64) -> Self {
        Hyperparameters {
            lambda,
            alpha,
            ..Default::default()
        }
    }

    pub(crate) fn check_lambda(lambda: f64) -> Result<()> {
        if !(lambda.is_finite() && lambda >= 0.0) {
            return Err(Error::invalid("lambda", format!("must be finite and nonnegative, got {lambda}")));
        }
        Ok(())
    }

    pub(crate) fn check_alpha(alpha: f64) -> Result<()> {
        if !(0.0..=1.0).contains(&alpha) {
            return Err(Error::invalid("alpha", format!("must lie in [0, 1], got {alpha}")));
        }
        Ok(())
    }

    /// Validates the fields `method` uses.
    pub fn validate_for(&self, method: Method) -> Result<()> {
        match method {
            Method::Ols => Ok(()),
            Method::Lasso | Method::Ridge => Self::check_lambda(self.lambda),
            Method::ElasticNet => {
                Self::check_lambda(self.lambda)?;
                Self::check_alpha(self.alpha)
            }
            Method::Pcr | Method::Pls => {
                if self.n_components == 0 {
                    Err(Error::invalid("n_components", "must be at least 1"))
                } else {
                    Ok(())
                }
            }
        }
    }
}

/// A fitted affine predictor `ŷ = x'β + β₀`, where `x'` is the input after
/// replaying the stored standardization (if any).
#[derive(Debug, Clone, PartialEq)]
pub struct LinearModel {
    coefficients: DVector<f64>,
    intercept: f64,
    method: Method,
    hyperparameters: Hyperparameters,
    /// Column means of the fitting matrix when an intercept was fit.
    centering: Option<DVector<f64>>,
    standardization: Option<ColumnStats>,
}

impl LinearModel {
    pub(crate) fn new(
        coefficients: DVector<f64>,
        intercept: f64,
        method: Method,
        hyperparameters: Hyperparameters,
        centering: Option<DVector<f64>>,
    ) -> Self {
        debug_assert!(coefficients.iter().all(|c| c.is_finite()));
        debug_assert!(centering.as_ref().is_none_or(|c| c.len() == coefficients.len()));
        LinearModel {
            coefficients,
            intercept,
            method,
            hyperparameters,
            centering,
            standardization: None,
        }
    }

    /// Builds a model from explicit coefficients, e.g. to replay a saved fit.
    pub fn from_parts(coefficients: Vec<f64>, intercept: f64, method: Method) -> Result<Self> {
        if coefficients.is_empty() || coefficients.iter().any(|c| !c.is_finite()) || !intercept.is_finite() {
            return Err(Error::invalid("coefficients", "must be nonempty and finite"));
        }
        Ok(Self::new(
            DVector::from_vec(coefficients),
            intercept,
            method,
            Hyperparameters::default(),
            None,
        ))
    }

    /// Attaches the standardization the model was fit under; `predict` will
    /// then standardize raw inputs with these statistics first.
    pub fn with_standardization(mut self, stats: ColumnStats) -> Result<Self> {
        if stats.len() != self.n_features() {
            return Err(Error::Dimension {
                context: "standardization statistics",
                expected: self.n_features(),
                found: stats.len(),
            });
        }
        self.standardization = Some(stats);
        Ok(self)
    }

    /// Coefficients in the coordinates the model was fit in.
    pub fn coefficients(&self) -> &DVector<f64> {
        &self.coefficients
    }

    pub fn intercept(&self) -> f64 {
        self.intercept
    }

    pub fn method(&self) -> Method {
        self.method
    }

    pub fn hyperparameters(&self) -> &Hyperparameters {
        &self.hyperparameters
    }

    pub fn n_features(&self) -> usize {
        self.coefficients.len()
    }

    pub fn column_means(&self) -> Option<&DVector<f64>> {
        self.centering.as_ref()
    }

    pub fn standardization(&self) -> Option<&ColumnStats> {
        self.standardization.as_ref()
    }

    /// Coefficients and intercept acting on raw, unstandardized inputs.
    pub fn original_coefficients(&self) -> (DVector<f64>, f64) {
        match &self.standardization {
            None => (self.coefficients.clone(), self.intercept),
            Some(stats) => {
                let beta = self.coefficients.component_div(&stats.scales());
                let intercept = self.intercept - stats.means.dot(&beta);
                (beta, intercept)
            }
        }
    }

    pub fn zero_count(&self) -> usize {
        self.coefficients.iter().filter(|&&c| c == 0.0).count()
    }

    pub fn predict(&self, x: &DataMatrix) -> Result<TargetVector> {
        check_width(x, self.n_features())?;
        let yhat = match &self.standardization {
            None => x.as_matrix() * &self.coefficients,
            Some(stats) => stats.apply(x.as_matrix()) * &self.coefficients,
        };
        Ok(TargetVector::from_trusted(yhat.add_scalar(self.intercept)))
    }

    pub(crate) fn retag(mut self, method: Method, hyperparameters: Hyperparameters) -> Self {
        self.method = method;
        self.hyperparameters = hyperparameters;
        self
    }
}

pub(crate) fn check_width(x: &DataMatrix, n: usize) -> Result<()> {
    if x.ncols() != n {
        return Err(Error::Dimension {
            context: "model input columns",
            expected: n,
            found: x.ncols(),
        });
    }
    Ok(())
}

/// A PCR or PLS1 fit: the latent factors plus the flattened [`LinearModel`].
///
/// For both methods `scores = X_c · rotations`. For PCR `rotations` equals
/// `weights`; for PLS1 the weights are the per-deflation-step directions and
/// `rotations = W (PᵀW)⁻¹` maps centered inputs to scores directly.
#[derive(Debug, Clone, PartialEq)]
pub struct LatentModel {
    pub weights: DMatrix<f64>,
    pub rotations: DMatrix<f64>,
    pub loadings: DMatrix<f64>,
    pub scores: DMatrix<f64>,
    /// Regression coefficients on the scores.
    pub latent_coefficients: DVector<f64>,
    /// Fraction of total X variance carried by each component.
    pub explained_variance: DVector<f64>,
    pub x_means: DVector<f64>,
    pub y_mean: f64,
    pub linear: LinearModel,
}

impl LatentModel {
    pub fn n_components(&self) -> usize {
        self.latent_coefficients.len()
    }

    /// Predicts through the factor path: project onto the rotations, then
    /// apply the score-space coefficients.
    pub fn predict_via_scores(&self, x: &DataMatrix) -> Result<TargetVector> {
        check_width(x, self.x_means.len())?;
        let mut inputs = match self.linear.standardization() {
            None => x.as_matrix().clone(),
            Some(stats) => stats.apply(x.as_matrix()),
        };
        for (j, mut col) in inputs.column_iter_mut().enumerate() {
            col.add_scalar_mut(-self.x_means[j]);
        }
        let scores = inputs * &self.rotations;
        Ok(TargetVector::from_trusted(
            (scores * &self.latent_coefficients).add_scalar(self.y_mean),
        ))
    }

    pub fn with_standardization(mut self, stats: ColumnStats) -> Result<Self> {
        self.linear = self.linear.with_standardization(stats)?;
        Ok(self)
    }
}

/// Anything that maps a design matrix to predictions.
pub trait Predictor {
    fn predict(&self, x: &DataMatrix) -> Result<TargetVector>;
    fn linear_model(&self) -> &LinearModel;
}

impl Predictor for LinearModel {
    fn predict(&self, x: &DataMatrix) -> Result<TargetVector> {
        LinearModel::predict(self, x)
    }

    fn linear_model(&self) -> &LinearModel {
        self
    }
}

impl Predictor for LatentModel {
    fn predict(&self, x: &DataMatrix) -> Result<TargetVector> {
        self.linear.predict(x)
    }

    fn linear_model(&self) -> &LinearModel {
        &self.linear
    }
}

/// Output of [`fit`](crate::regression::fit): either a plain linear model or a latent one.
#[derive(Debug, Clone, PartialEq)]
pub enum FittedModel {
    Linear(LinearModel),
    Latent(LatentModel),
}

impl FittedModel {
    pub fn with_standardization(self, stats: ColumnStats) -> Result<Self> {
        Ok(match self {
            FittedModel::Linear(m) => FittedModel::Linear(m.with_standardization(stats)?),
            FittedModel::Latent(m) => FittedModel::Latent(m.with_standardization(stats)?),
        })
    }

    pub fn as_latent(&self) -> Option<&LatentModel> {
        match self {
            FittedModel::Latent(m) => Some(m),
            FittedModel::Linear(_) => None,
        }
    }
}

impl Predictor for FittedModel {
    fn predict(&self, x: &DataMatrix) -> Result<TargetVector> {
        self.linear_model().predict(x)
    }

    fn linear_model(&self) -> &LinearModel {
        match self {
            FittedModel::Linear(m) => m,
            FittedModel::Latent(m) => &m.linear,
        }
    }
}

/// `ŷ = predict(model, X_new)`; see [`Predictor`].
pub fn predict(model: &impl Predictor, x: &DataMatrix) -> Result<TargetVector> {
    model.predict(x)
}
