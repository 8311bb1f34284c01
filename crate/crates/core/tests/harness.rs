use tinf_core::bounds::{theorem2_bounds, BoundInputs};
use tinf_core::env::GapProfile;
use tinf_core::harness::{run_experiment, verify_sqrt_condition, ExperimentConfig};

fn two_arm_run() -> tinf_core::harness::AggregateResult {
    let config = ExperimentConfig::from_json(
        r#"{
          "environment": { "regime": "stochastic", "means": [0.25, 0.75] },
          "horizon": 10000,
          "learner": { "estimator": "reduced_variance" },
          "master_seed": 11,
          "seeds": { "first": 0, "count": 50 },
          "checkpoints": [100, 1000, 10000],
          "weights_stride": 100,
          "output": { "regret_csv": "r.csv", "weights_csv": "w.csv" }
        }"#,
    )
    .unwrap();
    run_experiment(&config).unwrap()
}

#[test]
fn two_arm_regret_within_refined_bound_and_sqrt_condition() {
    let r = two_arm_run();
    let bound = theorem2_bounds(&BoundInputs::tsallis(
        GapProfile::new(vec![0.0, 0.5]).unwrap(),
        10_000,
        0.0,
    ))
    .self_bounding;
    assert!(bound.valid);
    assert!(
        r.mean_final_regret + 2.0 * r.stderr_final_regret <= bound.value,
        "{} vs {}",
        r.mean_final_regret,
        bound.value
    );

    let d = 0.75 * 2f64.sqrt() + 28.0 * 10_000f64.ln() + 15.0;
    let report = verify_sqrt_condition(&r, 1.25, d).unwrap();
    assert!(report.holds && report.holds_refined, "{report:?}");
    assert!(report.rhs >= d && report.rhs_refined >= d);
}

#[test]
fn mean_regret_grows_and_weights_stay_normalized() {
    let r = two_arm_run();
    assert!(r.mean_regret.windows(2).all(|w| w[0] <= w[1]));
    for t in [1, 500, 10_000] {
        let sum: f64 = r.mean_weights_at(t).iter().sum();
        assert!((sum - 1.0).abs() < 1e-9);
    }
}
