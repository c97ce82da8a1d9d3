use slope_core::experiments::{replicate_rng, run_benchmark, BenchmarkConfig};
use slope_core::{
    brute_force_argmin, compute_path, empirical_risk, fit, shape_known, shape_plugin, Interval, ModelScore,
    PartitionModel, RealFunction, TrueModelSpec,
};

#[test]
fn mallows_with_known_variance_matches_twice_minimal_penalty() {
    let truth = TrueModelSpec {
        noise_level: RealFunction::Constant { value: 0.7 },
        ..TrueModelSpec::sine_homoscedastic()
    };
    let n = 200;
    let models = PartitionModel::regular_family(&(1..=37).collect::<Vec<_>>(), Interval::UNIT).unwrap();
    let known = shape_known(&truth, &models, n).unwrap();
    let sigma2 = 0.49;
    for r in 0..50 {
        let sample = truth.generate_with(n, &mut replicate_rng(3, r)).unwrap();
        let mut by_shape = Vec::new();
        let mut by_dim = Vec::new();
        for (m, &g) in models.iter().zip(&known.values) {
            let fitted = fit(&sample, m).unwrap();
            if !fitted.admissible {
                continue;
            }
            let f = empirical_risk(&fitted, &sample).unwrap();
            by_shape.push(ModelScore::new(m.id().clone(), f, 0.5 * g, m.dim()).unwrap());
            by_dim.push(ModelScore::new(m.id().clone(), f, m.dim() as f64, m.dim()).unwrap());
        }
        let path = compute_path(&by_shape).unwrap();
        let mallows = brute_force_argmin(&by_dim, 2.0 * sigma2 / n as f64).unwrap();
        assert_eq!(path.model_at(2.0).model_id, mallows.model_id, "replicate {r}");
    }
}

#[test]
fn doubling_replicates_is_stable() {
    let small = run_benchmark(&BenchmarkConfig::sine_benchmark(150, 9)).unwrap();
    let large = run_benchmark(&BenchmarkConfig::sine_benchmark(300, 9)).unwrap();
    // the first 150 replicates are shared
    assert_eq!(small.records[..], large.records[..150]);
    for (a, b) in [
        (small.c_or_thresh, large.c_or_thresh),
        (small.c_or_maxjump, large.c_or_maxjump),
        (small.c_or_mallows, large.c_or_mallows),
    ] {
        let (a, b) = (a.unwrap(), b.unwrap());
        assert!(
            (a.value - b.value).abs() < 3.0 * a.std_error.max(b.std_error),
            "{a:?} vs {b:?}"
        );
    }
}

#[test]
fn plugin_shape_approaches_known_shape() {
    // sigma(x) = 0.5 + x; for fine partitions the within-cell variance of Y
    // is dominated by the noise
    let truth = TrueModelSpec {
        noise_level: RealFunction::Polynomial {
            coefficients: vec![0.5, 1.0],
        },
        ..TrueModelSpec::sine_homoscedastic()
    };
    let models = PartitionModel::regular_family(&[10, 15, 20, 25, 30], Interval::UNIT).unwrap();
    let mut errors = Vec::new();
    for (i, n) in [1_000usize, 10_000].into_iter().enumerate() {
        let known = shape_known(&truth, &models, n).unwrap();
        let mut worst: f64 = 0.0;
        for r in 0..5 {
            let sample = truth.generate_with(n, &mut replicate_rng(40 + i as u64, r)).unwrap();
            let plugin = shape_plugin(&sample, &models).unwrap();
            for (p, k) in plugin.values.iter().zip(&known.values) {
                worst = worst.max((p / k - 1.0).abs());
            }
        }
        errors.push(worst);
    }
    assert!(errors[1] < errors[0], "{errors:?}");
    assert!(errors[1] < 0.06, "{errors:?}");
}
