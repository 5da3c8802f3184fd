//! PCA, principal component regression and PLS1.
//!
//! All three center the columns of X first. PCA works on the SVD of the
//! centered matrix; PLS1 uses NIPALS with X-deflation (y is never deflated).

use nalgebra::{DMatrix, DVector};

use super::model::{Hyperparameters, LatentModel, LinearModel, Method};
use crate::data::{check_paired, DataMatrix, TargetVector};
use crate::error::{Error, Result};
use crate::linalg::{center_columns, center_vector, fix_column_signs, ThinSvd};

/// Leading principal directions of the centered data.
#[derive(Debug, Clone, PartialEq)]
pub struct PcaDecomposition {
    pub means: DVector<f64>,
    /// n x ℓ, orthonormal columns, largest-magnitude entry of each positive.
    pub weights: DMatrix<f64>,
    /// m x ℓ, `X_c · weights`.
    pub scores: DMatrix<f64>,
    pub singular_values: DVector<f64>,
    /// Eigenvalues of `X_cᵀX_c / (m − 1)` for the kept components.
    pub eigenvalues: DVector<f64>,
    /// Kept eigenvalues divided by the trace of the covariance matrix.
    pub explained_variance: DVector<f64>,
    /// Numerical rank of the centered matrix.
    pub rank: usize,
}

impl PcaDecomposition {
    pub fn n_components(&self) -> usize {
        self.weights.ncols()
    }

    /// `T Wᵀ`, the rank-ℓ approximation of the centered data.
    pub fn reconstruct_centered(&self) -> DMatrix<f64> {
        &self.scores * self.weights.transpose()
    }

    /// Scores of new observations, centered with the training means.
    pub fn transform(&self, x: &DataMatrix) -> Result<DMatrix<f64>> {
        super::model::check_width(x, self.means.len())?;
        let mut xc = x.as_matrix().clone();
        for (j, mut col) in xc.column_iter_mut().enumerate() {
            col.add_scalar_mut(-self.means[j]);
        }
        Ok(xc * &self.weights)
    }
}

pub fn pca_decompose(x: &DataMatrix, n_components: usize) -> Result<PcaDecomposition> {
    if n_components == 0 {
        return Err(Error::invalid("n_components", "must be at least 1"));
    }
    let (m, n) = (x.nrows(), x.ncols());
    let (xc, means) = center_columns(x.as_matrix());
    let svd = ThinSvd::new(&xc);
    let rank = svd.rank();
    let attainable = rank.min(m.saturating_sub(1)).min(n);
    if n_components > attainable {
        return Err(Error::Rank {
            requested: n_components,
            attainable,
        });
    }

    let mut weights = svd.v.columns(0, n_components).into_owned();
    fix_column_signs(&mut weights);
    let scores = &xc * &weights;

    let total: f64 = svd.singular_values.iter().map(|s| s * s).sum();
    let singular_values = svd.singular_values.rows(0, n_components).into_owned();
    let eigenvalues = singular_values.map(|s| s * s / (m - 1) as f64);
    let explained_variance = singular_values.map(|s| s * s / total);
    Ok(PcaDecomposition {
        means,
        weights,
        scores,
        singular_values,
        eigenvalues,
        explained_variance,
        rank,
    })
}

/// `β_ℓ = (TᵀT)⁻¹Tᵀy` for a score matrix with independent columns.
fn score_regression(scores: &DMatrix<f64>, y: &DVector<f64>) -> Result<DVector<f64>> {
    let gram = scores.tr_mul(scores);
    let chol = gram.cholesky().ok_or(Error::Singular {
        rank: ThinSvd::new(scores).rank(),
        required: scores.ncols(),
    })?;
    Ok(chol.solve(&scores.tr_mul(y)))
}

/// Principal component regression: OLS on the first ℓ PCA scores, mapped
/// back through `β = W_ℓ β_ℓ`.
pub fn pcr_fit(x: &DataMatrix, y: &TargetVector, n_components: usize) -> Result<LatentModel> {
    check_paired(x, y)?;
    let pca = pca_decompose(x, n_components)?;
    let (yc, y_mean) = center_vector(y.as_vector());
    let latent_coefficients = score_regression(&pca.scores, &yc)?;
    let beta = &pca.weights * &latent_coefficients;
    let intercept = y_mean - pca.means.dot(&beta);
    let linear = LinearModel::new(
        beta,
        intercept,
        Method::Pcr,
        Hyperparameters::with_components(n_components),
        Some(pca.means.clone()),
    );
    Ok(LatentModel {
        rotations: pca.weights.clone(),
        loadings: pca.weights.clone(),
        weights: pca.weights,
        scores: pca.scores,
        latent_coefficients,
        explained_variance: pca.explained_variance,
        x_means: pca.means,
        y_mean,
        linear,
    })
}

/// PLS1 via NIPALS.
///
/// Component k takes `w_k = X_kᵀy / ‖X_kᵀy‖` on the deflated matrix `X_k`,
/// scores `t_k = X_k w_k`, loadings `p_k = X_kᵀt_k / t_kᵀt_k`, then deflates
/// `X_{k+1} = X_k − t_k p_kᵀ`. The first weight is the maximizer of
/// `wᵀXᵀyyᵀXw / wᵀw` on the centered data.
pub fn pls1_fit(x: &DataMatrix, y: &TargetVector, n_components: usize) -> Result<LatentModel> {
    check_paired(x, y)?;
    if n_components == 0 {
        return Err(Error::invalid("n_components", "must be at least 1"));
    }
    let (m, n) = (x.nrows(), x.ncols());
    let (xc, x_means) = center_columns(x.as_matrix());
    let (yc, y_mean) = center_vector(y.as_vector());

    let rank = ThinSvd::new(&xc).rank();
    let attainable = rank.min(m.saturating_sub(1));
    if n_components > attainable {
        return Err(Error::Rank {
            requested: n_components,
            attainable,
        });
    }

    let scale = m.max(n) as f64 * f64::EPSILON * xc.norm() * yc.norm();
    let mut deflated = xc.clone();
    let mut weights = DMatrix::zeros(n, n_components);
    let mut loadings = DMatrix::zeros(n, n_components);
    let mut scores = DMatrix::zeros(m, n_components);
    let mut explained_variance = DVector::zeros(n_components);
    let total_ss = xc.norm_squared();

    for k in 0..n_components {
        let mut w = deflated.tr_mul(&yc);
        let w_norm = w.norm();
        if w_norm <= scale {
            return Err(if k == 0 {
                Error::DegenerateTarget
            } else {
                Error::Rank {
                    requested: n_components,
                    attainable: k,
                }
            });
        }
        w /= w_norm;
        let t = &deflated * &w;
        let tt = t.norm_squared();
        let p = deflated.tr_mul(&t) / tt;
        deflated -= &t * p.transpose();

        explained_variance[k] = tt * p.norm_squared() / total_ss;
        weights.set_column(k, &w);
        loadings.set_column(k, &p);
        scores.set_column(k, &t);
    }

    // PᵀW is unit upper triangular for NIPALS, so it always inverts.
    let pw = loadings.tr_mul(&weights);
    let pw_inv = pw.try_inverse().ok_or(Error::Singular {
        rank: 0,
        required: n_components,
    })?;
    let rotations = &weights * pw_inv;
    let latent_coefficients = score_regression(&scores, &yc)?;
    let beta = &rotations * &latent_coefficients;
    let intercept = y_mean - x_means.dot(&beta);
    let linear = LinearModel::new(
        beta,
        intercept,
        Method::Pls,
        Hyperparameters::with_components(n_components),
        Some(x_means.clone()),
    );
    Ok(LatentModel {
        weights,
        rotations,
        loadings,
        scores,
        latent_coefficients,
        explained_variance,
        x_means,
        y_mean,
        linear,
    })
}
