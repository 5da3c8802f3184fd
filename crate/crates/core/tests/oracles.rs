mod support;

use latentlab_core::regression::{
    elastic_net_fit, lasso_fit, min_norm_fit, ols_fit, pcr_fit, pls1_fit, ridge_fit, Predictor,
};
use nalgebra::DVector;
use support::*;

#[test]
fn ridge_matches_gradient_descent() {
    for seed in 0..10 {
        let (x, y) = instance(20, 8, seed);
        let (dx, dy) = wrap(&x, &y);
        for &lambda in &[1e-3, 0.5, 10.0] {
            let fit = ridge_fit(&dx, &dy, lambda, false).unwrap();
            let oracle = ridge_gradient_descent(&x, &y, lambda);
            let gap = ridge_objective(&x, &y, fit.coefficients(), lambda) - ridge_objective(&x, &y, &oracle, lambda);
            assert!(gap.abs() < 1e-6, "seed {seed} lambda {lambda}: gap {gap:e}");
        }
    }
}

#[test]
fn ridge_dual_form_matches_oracle_on_wide_data() {
    let (x, y) = instance(6, 15, 77);
    let (dx, dy) = wrap(&x, &y);
    let fit = ridge_fit(&dx, &dy, 0.7, false).unwrap();
    let oracle = ridge_gradient_descent(&x, &y, 0.7);
    assert!((fit.coefficients() - oracle).amax() < 1e-7);
}

#[test]
fn lasso_matches_proximal_gradient() {
    for seed in 0..10 {
        let (x, y) = instance(20, 8, 100 + seed);
        let (dx, dy) = wrap(&x, &y);
        for &lambda in &[0.1, 2.0, 15.0] {
            let fit = lasso_fit(&dx, &dy, lambda, false).unwrap();
            let oracle = proximal_gradient(&x, &y, lambda, 0.0);
            let gap = elastic_objective(&x, &y, fit.coefficients(), lambda, 0.0)
                - elastic_objective(&x, &y, &oracle, lambda, 0.0);
            assert!(gap < 1e-6, "seed {seed} lambda {lambda}: gap {gap:e}");
        }
    }
}

#[test]
fn lasso_with_intercept_matches_oracle_on_centered_data() {
    let (x, y) = instance(25, 6, 9);
    let y = y.add_scalar(4.0);
    let (dx, dy) = wrap(&x, &y);
    let fit = lasso_fit(&dx, &dy, 3.0, true).unwrap();
    let (xc, yc) = center(&x, &y);
    let oracle = proximal_gradient(&xc, &yc, 3.0, 0.0);
    let gap = elastic_objective(&xc, &yc, fit.coefficients(), 3.0, 0.0) - elastic_objective(&xc, &yc, &oracle, 3.0, 0.0);
    assert!(gap < 1e-6);
}

#[test]
fn elastic_net_matches_proximal_gradient() {
    for seed in 0..5 {
        let (x, y) = instance(20, 8, 200 + seed);
        let (dx, dy) = wrap(&x, &y);
        let (lambda, alpha) = (4.0, 0.4);
        let (l1, l2) = (lambda * alpha, lambda * (1.0 - alpha) / 2.0);
        let fit = elastic_net_fit(&dx, &dy, lambda, alpha, false).unwrap();
        let oracle = proximal_gradient(&x, &y, l1, l2);
        let gap = elastic_objective(&x, &y, fit.coefficients(), l1, l2) - elastic_objective(&x, &y, &oracle, l1, l2);
        assert!(gap < 1e-6, "seed {seed}: gap {gap:e}");
    }
}

#[test]
fn elastic_net_limits() {
    let (x, y) = instance(20, 8, 5);
    let (dx, dy) = wrap(&x, &y);
    let en1 = elastic_net_fit(&dx, &dy, 2.0, 1.0, true).unwrap();
    let lasso = lasso_fit(&dx, &dy, 2.0, true).unwrap();
    assert!((en1.coefficients() - lasso.coefficients()).amax() < 1e-8);
    let en0 = elastic_net_fit(&dx, &dy, 2.0, 0.0, true).unwrap();
    let ridge = ridge_fit(&dx, &dy, 1.0, true).unwrap();
    assert!((en0.coefficients() - ridge.coefficients()).amax() < 1e-12);
}

#[test]
fn pcr_at_full_rank_equals_ols() {
    for seed in 0..5 {
        let (x, y) = instance(30, 6, 300 + seed);
        let (dx, dy) = wrap(&x, &y);
        let pcr = pcr_fit(&dx, &dy, 6).unwrap();
        let ols = ols_fit(&dx, &dy, true).unwrap();
        let probe = wrap(&random_matrix(15, 6, seed + 999), &DVector::zeros(15)).0;
        let gap = (pcr.predict(&probe).unwrap().as_vector() - ols.predict(&probe).unwrap().as_vector()).amax();
        assert!(gap < 1e-8, "gap {gap:e}");
    }
}

#[test]
fn pls_first_weight_is_normalized_cross_covariance() {
    for seed in 0..5 {
        let (x, y) = instance(20, 8, 400 + seed);
        let (dx, dy) = wrap(&x, &y);
        let pls = pls1_fit(&dx, &dy, 3).unwrap();
        let (xc, yc) = center(&x, &y);
        let xty = xc.tr_mul(&yc);
        let expected = &xty / xty.norm();
        assert!((pls.weights.column(0) - expected).amax() < 1e-10);
    }
}

#[test]
fn pls_and_pcr_paths_agree_with_flattened_coefficients() {
    let (x, y) = instance(25, 10, 11);
    let (dx, dy) = wrap(&x, &y);
    for model in [pls1_fit(&dx, &dy, 4).unwrap(), pcr_fit(&dx, &dy, 4).unwrap()] {
        let a = model.predict_via_scores(&dx).unwrap();
        let b = model.predict(&dx).unwrap();
        assert!((a.as_vector() - b.as_vector()).amax() < 1e-10);
    }
}

#[test]
fn min_norm_is_never_beaten_by_null_space_perturbations() {
    let x = random_matrix(5, 12, 42);
    let y = random_vector(5, 43);
    let (dx, dy) = wrap(&x, &y);
    let fit = min_norm_fit(&dx, &dy).unwrap();
    let beta = fit.coefficients().clone();
    assert!((&x * &beta - &y).amax() < 1e-10);
    let basis = null_space(&x);
    assert_eq!(basis.ncols(), 7);
    for k in 0..100 {
        let z = random_vector(basis.ncols(), 1000 + k) * 0.1;
        let other = &beta + &basis * z;
        assert!((&x * &other - &y).amax() < 1e-8);
        assert!(other.norm() >= beta.norm());
    }
}
