use latentlab_core::datasets::{builtin_standins, ftir_like, load_csv, save_csv, SplitMode, SplitSpec};
use latentlab_core::evaluation::{run_experiment, ExperimentConfig};
use latentlab_core::regression::{Hyperparameters, Method};

fn pls7() -> ExperimentConfig {
    ExperimentConfig::new(Method::Pls, Hyperparameters::with_components(7), false)
}

#[test]
fn extrapolation_test_error_dwarfs_training_error() {
    let ds = ftir_like();
    for seed in 0..5 {
        let r = run_experiment(&ds, &SplitSpec::new(SplitMode::GroupedExtrapolation, seed), &pls7()).unwrap();
        assert!(r.rmse_test / r.rmse_train >= 5.0, "seed {seed}");
    }
}

#[test]
fn biased_group_is_held_out_when_forced() {
    let ds = ftir_like();
    let spec = SplitSpec::forced(vec!["C=0.014".into()], 0);
    let r = run_experiment(&ds, &spec, &pls7()).unwrap();
    assert!(r.test_indices.iter().filter(|&&i| ds.groups()[i] == "C=0.014").count() == 10);
    assert!(r.train_indices.iter().all(|&i| ds.groups()[i] != "C=0.014"));
}

#[test]
fn standins_round_trip_through_csv() {
    let dir = tempfile::tempdir().unwrap();
    for ds in builtin_standins() {
        let path = dir.path().join(format!("{}.csv", ds.name()));
        save_csv(&ds, &path).unwrap();
        let back = load_csv(&path, None).unwrap();
        assert_eq!(back.x(), ds.x());
        assert_eq!(back.y(), ds.y());
        assert_eq!(back.groups(), ds.groups());
        assert_eq!(back.feature_axis(), ds.feature_axis());
        assert_eq!(back.descriptor(), ds.descriptor());
    }
}
