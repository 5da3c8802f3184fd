mod support;

use std::collections::BTreeSet;

use latentlab_core::datagen::{default_config, example_dataset};
use latentlab_core::datasets::{ftir_like, split, split_indices, SplitMode, SplitSpec};
use latentlab_core::evaluation::{run_experiment, ExperimentConfig};
use latentlab_core::preprocessing::{add_noise, compute_stats, destandardize, standardize};
use latentlab_core::regression::{
    kkt_residual, lasso_fit, log_grid, ols_fit, pca_decompose, regularization_path, ridge_fit, elastic_net_fit,
    Hyperparameters, Method,
};
use latentlab_core::{DataMatrix, Execution};
use nalgebra::DMatrix;
use proptest::prelude::*;
use support::*;

const MODES: [SplitMode; 4] = [
    SplitMode::Random,
    SplitMode::GroupedRandom,
    SplitMode::GroupedInterpolation,
    SplitMode::GroupedExtrapolation,
];

fn check_split(r: &latentlab_core::datasets::SplitResult, m: usize) {
    assert!(!r.train.is_empty() && !r.test.is_empty());
    let train: BTreeSet<usize> = r.train.iter().copied().collect();
    assert!(r.test.iter().all(|i| !train.contains(i)));
    assert_eq!(r.train.len() + r.test.len(), m);
    assert!(r.train.iter().chain(&r.test).all(|&i| i < m));
}

fn straddling_groups(r: &latentlab_core::datasets::SplitResult, groups: &[String]) -> usize {
    let train: BTreeSet<&str> = r.train.iter().map(|&i| groups[i].as_str()).collect();
    let test: BTreeSet<&str> = r.test.iter().map(|&i| groups[i].as_str()).collect();
    train.intersection(&test).count()
}

#[test]
fn splits_hold_invariants_over_1000_seeds() {
    let ds = ftir_like();
    for mode in MODES {
        for seed in 0..1000 {
            let r = split(&ds, &SplitSpec::new(mode, seed)).unwrap();
            check_split(&r, ds.n_observations());
            if mode.is_grouped() {
                assert_eq!(straddling_groups(&r, ds.groups()), 0, "{mode:?} seed {seed}");
            }
        }
    }
    let forced = SplitSpec::forced(vec!["C=0.014".into()], 0);
    for seed in 0..1000 {
        let r = split(&ds, &forced.with_seed(seed)).unwrap();
        check_split(&r, ds.n_observations());
        assert!(r.test.iter().filter(|&&i| ds.groups()[i] == "C=0.014").count() == 10);
    }
}

#[test]
fn interpolation_matches_exhaustive_group_means() {
    let ds = ftir_like();
    let members = ds.group_members();
    let y = ds.y().as_slice();
    let means: Vec<(&str, f64)> = members
        .iter()
        .map(|(g, rows)| (*g, rows.iter().map(|&i| y[i]).sum::<f64>() / rows.len() as f64))
        .collect();
    let lowest = means.iter().min_by(|a, b| a.1.total_cmp(&b.1)).unwrap().0;
    let highest = means.iter().max_by(|a, b| a.1.total_cmp(&b.1)).unwrap().0;
    for seed in 0..50 {
        let r = split(&ds, &SplitSpec::new(SplitMode::GroupedInterpolation, seed)).unwrap();
        let train: BTreeSet<&str> = r.train.iter().map(|&i| ds.groups()[i].as_str()).collect();
        assert!(train.contains(lowest) && train.contains(highest));
        let r = split(&ds, &SplitSpec::new(SplitMode::GroupedExtrapolation, seed)).unwrap();
        assert!(r.test.iter().any(|&i| ds.groups()[i] == highest));
    }
}

#[test]
fn lasso_support_shrinks_along_lambda_grid_on_example() {
    let ds = example_dataset(&default_config()).unwrap();
    let grid = log_grid(1e-3, 50.0, 20);
    let mut previous = usize::MAX;
    for res in regularization_path(Method::Lasso, ds.x(), ds.y(), &grid, true, Execution::Sequential) {
        let nonzero = res.unwrap().coefficients().iter().filter(|&&c| c != 0.0).count();
        assert!(nonzero <= previous);
        previous = nonzero;
    }
}

#[test]
fn parallel_and_sequential_paths_agree() {
    let (x, y) = instance(30, 10, 3);
    let (dx, dy) = wrap(&x, &y);
    let grid = log_grid(0.01, 100.0, 12);
    for method in [Method::Lasso, Method::Ridge] {
        let seq = regularization_path(method, &dx, &dy, &grid, true, Execution::Sequential);
        let par = regularization_path(method, &dx, &dy, &grid, true, Execution::Parallel);
        for (a, b) in seq.iter().zip(&par) {
            let (a, b) = (a.as_ref().unwrap(), b.as_ref().unwrap());
            assert!((a.coefficients() - b.coefficients()).amax() < 1e-6);
        }
    }
}

#[test]
fn fit_reports_are_deterministic() {
    let ds = ftir_like();
    let cfg = ExperimentConfig::new(Method::Pls, Hyperparameters::with_components(5), true);
    let spec = SplitSpec::new(SplitMode::GroupedRandom, 17);
    let a = run_experiment(&ds, &spec, &cfg).unwrap().to_json();
    let b = run_experiment(&ds, &spec, &cfg).unwrap().to_json();
    assert_eq!(a, b);
}

fn orthogonal_design(m: usize, n: usize, seed: u64, scales: &[f64]) -> DMatrix<f64> {
    let q = random_matrix(m, n, seed).qr().q();
    let mut x = q.columns(0, n).into_owned();
    for (j, s) in scales.iter().enumerate() {
        x.column_mut(j).scale_mut(*s);
    }
    x
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn lasso_support_is_monotone_on_orthogonal_designs(seed in 0u64..10_000, scale in 0.5f64..5.0) {
        let n = 6;
        let scales: Vec<f64> = (0..n).map(|j| scale * (1.0 + j as f64 * 0.3)).collect();
        let x = orthogonal_design(20, n, seed, &scales);
        let y = random_vector(20, seed + 1) * 3.0;
        let (dx, dy) = wrap(&x, &y);
        let mut previous = usize::MAX;
        for lambda in log_grid(1e-3, 100.0, 20) {
            let nz = lasso_fit(&dx, &dy, lambda, false).unwrap().coefficients().iter().filter(|&&c| c != 0.0).count();
            prop_assert!(nz <= previous);
            previous = nz;
        }
    }

    #[test]
    fn ridge_norm_is_nonincreasing(seed in 0u64..10_000) {
        let (x, y) = instance(20, 8, seed);
        let (dx, dy) = wrap(&x, &y);
        let mut previous = f64::INFINITY;
        for lambda in log_grid(1e-4, 1e3, 20) {
            let norm = ridge_fit(&dx, &dy, lambda, true).unwrap().coefficients().norm();
            prop_assert!(norm <= previous * (1.0 + 1e-12));
            previous = norm;
        }
    }

    #[test]
    fn pca_scores_are_decorrelated(seed in 0u64..10_000, m in 6usize..30, n in 2usize..12) {
        let x = DataMatrix::new(random_matrix(m, n, seed)).unwrap();
        let k = n.min(m - 1);
        let pca = pca_decompose(&x, k).unwrap();
        let gram = pca.scores.tr_mul(&pca.scores);
        for i in 0..k {
            for j in 0..k {
                if i != j {
                    prop_assert!(gram[(i, j)].abs() < 1e-8);
                }
            }
        }
        let ev = &pca.explained_variance;
        for i in 1..ev.len() {
            prop_assert!(ev[i] <= ev[i - 1] + 1e-15);
        }
    }

    #[test]
    fn standardize_round_trips(seed in 0u64..10_000, m in 2usize..20, n in 1usize..10) {
        let mut raw = random_matrix(m, n, seed) * 7.0;
        raw.column_mut(0).fill(3.5);
        let x = DataMatrix::new(raw).unwrap();
        let stats = compute_stats(&x).unwrap();
        prop_assert!(stats.degenerate[0]);
        let back = destandardize(&standardize(&x, &stats).unwrap(), &stats).unwrap();
        prop_assert!((back.as_matrix() - x.as_matrix()).amax() < 1e-10);
    }

    #[test]
    fn noise_is_shape_preserving_and_seeded(seed in 0u64..10_000, snr in 0.5f64..1e3) {
        let x = DataMatrix::new(random_matrix(7, 5, seed)).unwrap();
        let a = add_noise(&x, snr, seed).unwrap();
        let b = add_noise(&x, snr, seed).unwrap();
        prop_assert_eq!((a.nrows(), a.ncols()), (7, 5));
        prop_assert_eq!(a, b);
    }

    #[test]
    fn ols_training_loss_never_exceeds_ridge(seed in 0u64..10_000, lambda in 1e-4f64..100.0) {
        let (x, y) = instance(25, 6, seed);
        let (dx, dy) = wrap(&x, &y);
        let ols = ols_fit(&dx, &dy, true).unwrap().predict(&dx).unwrap();
        let ridge = ridge_fit(&dx, &dy, lambda, true).unwrap().predict(&dx).unwrap();
        let loss = |p: &latentlab_core::TargetVector| (p.as_vector() - &y).norm_squared();
        prop_assert!(loss(&ols) <= loss(&ridge) * (1.0 + 1e-12));
    }

    #[test]
    fn elastic_net_solutions_satisfy_kkt(seed in 0u64..10_000, lambda in 0.01f64..20.0, alpha in 0.05f64..1.0) {
        let (x, y) = instance(20, 8, seed);
        let (dx, dy) = wrap(&x, &y);
        let fit = elastic_net_fit(&dx, &dy, lambda, alpha, false).unwrap();
        let r = kkt_residual(&x, &y, fit.coefficients(), lambda * alpha, lambda * (1.0 - alpha) / 2.0);
        prop_assert!(r < 1e-6, "kkt residual {}", r);
    }

    #[test]
    fn grouped_splits_never_straddle(seed in any::<u64>(), sizes in prop::collection::vec(1usize..6, 3..9), mode in 0usize..4) {
        let mut groups = Vec::new();
        let mut targets = Vec::new();
        for (g, &s) in sizes.iter().enumerate() {
            for k in 0..s {
                groups.push(format!("g{g}"));
                targets.push(g as f64 * 1.5 + k as f64 * 0.01);
            }
        }
        let r = split_indices(&targets, &groups, &SplitSpec::new(MODES[mode], seed)).unwrap();
        check_split(&r, targets.len());
        if MODES[mode].is_grouped() {
            prop_assert_eq!(straddling_groups(&r, &groups), 0);
        }
        let again = split_indices(&targets, &groups, &SplitSpec::new(MODES[mode], seed)).unwrap();
        prop_assert_eq!(r, again);
    }
}
