use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use latentlab_core::datagen::{default_config, example_dataset};
use latentlab_core::datasets::{ftir_like, lfp_like, SplitMode, SplitSpec};
use latentlab_core::evaluation::{coefficient_stability, run_experiments, ExperimentConfig};
use latentlab_core::regression::{log_grid, regularization_path, Hyperparameters, Method};
use latentlab_core::Execution;

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn stability(c: &mut Criterion) {
    let ds = lfp_like();
    let cfg = ExperimentConfig::new(Method::Pls, Hyperparameters::with_components(4), false);
    let template = SplitSpec::new(SplitMode::GroupedRandom, 1);
    let mut group = c.benchmark_group("stability_lfp_pls4_x10");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| coefficient_stability(&ds, &template, &cfg, 10, exec).unwrap())
        });
    }
    group.finish();
}

fn lasso_path(c: &mut Criterion) {
    let ds = ftir_like();
    let grid = log_grid(1e-6, 1e-2, 20);
    let mut group = c.benchmark_group("lasso_path_ftir_20");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| regularization_path(Method::Lasso, ds.x(), ds.y(), &grid, true, exec))
        });
    }
    group.finish();
}

fn ridge_batch(c: &mut Criterion) {
    let ds = example_dataset(&default_config()).unwrap();
    let jobs: Vec<_> = (0..64)
        .map(|s| {
            (
                SplitSpec::new(SplitMode::Random, s),
                ExperimentConfig::new(Method::Ridge, Hyperparameters::with_lambda(1e-3), true),
            )
        })
        .collect();
    let mut group = c.benchmark_group("batch_example_ridge_x64");
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| b.iter(|| run_experiments(&ds, &jobs, exec)));
    }
    group.finish();
}

criterion_group!(benches, stability, lasso_path, ridge_batch);
criterion_main!(benches);
