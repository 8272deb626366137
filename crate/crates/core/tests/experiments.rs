use permuton_core::experiments::*;

fn config(kind: ExperimentKind, p: f64, sizes: Vec<usize>, reps: usize) -> ExperimentConfig {
    ExperimentConfig {
        kind,
        p,
        sizes,
        eps_grid: (2..=8).map(|k| 0.5f64.powi(k)).collect(),
        reps,
        master_seed: 12345,
        threads: None,
    }
}

fn with_threads(mut c: ExperimentConfig, threads: usize) -> ExperimentConfig {
    c.threads = Some(threads);
    c
}

#[test]
fn reports_do_not_depend_on_thread_count() {
    let configs = [
        config(ExperimentKind::LisScaling, 0.3, vec![64, 128, 256], 40),
        config(ExperimentKind::Survival, 0.5, vec![512, 2048], 60),
        config(ExperimentKind::TwoPoint, 0.7, vec![1024], 60),
        config(ExperimentKind::CrossValidate, 0.5, vec![1024], 300),
    ];
    for c in configs {
        let one = run_experiment(&with_threads(c.clone(), 1)).unwrap();
        let many = run_experiment(&with_threads(c.clone(), 8)).unwrap();
        assert_eq!(one.threads, 1);
        assert_eq!(many.threads, 8);
        assert_eq!(one.to_json(), many.to_json(), "{}", c.kind);
        assert_eq!(one.to_csv(), many.to_csv());
        let again = run_experiment(&with_threads(c, 3)).unwrap();
        assert_eq!(one.to_json(), again.to_json());
    }
}

#[test]
fn seed_changes_the_sample() {
    let c = config(ExperimentKind::LisScaling, 0.5, vec![256], 50);
    let a = run_experiment(&c).unwrap();
    let b = run_experiment(&ExperimentConfig { master_seed: 1, ..c }).unwrap();
    assert_ne!(a.records[0].mean, b.records[0].mean);
}

#[test]
fn mean_lis_grows_with_n() {
    let sizes: Vec<usize> = (6..=12).map(|k| 1 << k).collect();
    let r = run_lis_scaling(&config(ExperimentKind::LisScaling, 0.5, sizes, 500)).unwrap();
    for w in r.records.windows(2) {
        let se = (w[0].sd.powi(2) / w[0].count as f64 + w[1].sd.powi(2) / w[1].count as f64).sqrt();
        assert!(w[1].mean >= w[0].mean - 3.0 * se, "{:?} then {:?}", w[0], w[1]);
    }
    let reference = r.reference.as_ref().unwrap();
    assert_eq!(reference.expected_slope, reference.alpha_star);
    assert!(r.to_json().contains("\"schema_version\": 1"));
}

#[test]
fn near_identity_scaling() {
    let sizes: Vec<usize> = (10..=14).map(|k| 1 << k).collect();
    let r = run_lis_scaling(&config(ExperimentKind::LisScaling, 0.99, sizes, 500)).unwrap();
    let slope = r.regression.slope().unwrap();
    assert!(slope > 0.95, "{slope}");
}

#[test]
fn survival_frequencies_are_ordered() {
    let single = run_survival_scaling(&config(ExperimentKind::Survival, 0.5, vec![1 << 14], 2000)).unwrap();
    let joint = run_two_point(&config(ExperimentKind::TwoPoint, 0.5, vec![1 << 14], 2000)).unwrap();
    assert!(single.records.windows(2).all(|w| w[1].mean <= w[0].mean));
    assert!(joint.records.windows(2).all(|w| w[1].mean <= w[0].mean));
    for (s, j) in single.records.iter().zip(&joint.records) {
        assert_eq!(s.eps, j.eps);
        let se = (s.sd.powi(2) / s.count as f64 + j.sd.powi(2) / j.count as f64).sqrt();
        assert!(j.mean <= s.mean + 3.0 * se, "eps {:?}", s.eps);
    }
    assert!(single.regression.slope().unwrap() > 0.0);
}

#[test]
fn near_all_minus_pattern_frequency() {
    let r = run_cross_validate(&config(ExperimentKind::CrossValidate, 0.9, vec![1 << 16], 100_000)).unwrap();
    let three = &r.patterns[0];
    assert_eq!(three.patterns[5], "321");
    assert!((three.exact[5] - 0.01).abs() < 1e-12);
    for counts in [&three.tree_counts, &three.excursion_counts] {
        let total: u64 = counts.iter().sum();
        let freq = counts[5] as f64 / total as f64;
        let sigma = (0.01 * 0.99 / total as f64).sqrt();
        assert!((freq - 0.01).abs() <= 3.0 * sigma, "{freq}");
    }
    assert!(three.tree_vs_excursion.p_value > 1e-3);
    let four = &r.patterns[1];
    assert_eq!(four.exact.len(), 24);
    assert_eq!(four.tree_counts[pattern_index(&[2, 4, 1, 3])], 0);
    assert_eq!(four.excursion_counts[pattern_index(&[3, 1, 4, 2])], 0);
}

#[test]
fn regression_on_a_known_line() {
    // samples of y = -0.323 + 0.815 x at x = k log 2
    let points: Vec<(f64, f64)> = (10..=18)
        .map(|k| {
            let x = k as f64 * std::f64::consts::LN_2;
            (x, -0.323 + 0.815 * x)
        })
        .collect();
    let fit = loglog_regression(&points).unwrap();
    assert!((fit.slope - 0.815).abs() < 1e-3);
    assert!((fit.intercept + 0.323).abs() < 1e-9);
    assert!(fit.stderr.unwrap() < 1e-12);
    let line: Vec<(f64, f64)> = (0..5).map(|x| (x as f64, 2.0 * x as f64 + 1.0)).collect();
    let fit = loglog_regression(&line).unwrap();
    assert!((fit.slope - 2.0).abs() < 1e-12 && (fit.intercept - 1.0).abs() < 1e-12);
    assert!(loglog_regression(&[(1.0, 2.0)]).is_err());
    assert!(loglog_regression(&[(1.0, 2.0), (1.0, 3.0)]).is_err());
}

#[test]
fn file_names_and_csv() {
    let c = config(ExperimentKind::TwoPoint, 0.25, vec![256], 10);
    assert_eq!(c.file_stem(), "two_point_p0.25_seed12345");
    let r = run_experiment(&c).unwrap();
    let csv = r.to_csv();
    let rows: Vec<&str> = csv.lines().collect();
    assert_eq!(rows[0], "kind,p,n_or_eps,mean,sd,count");
    assert_eq!(rows.len(), 1 + c.eps_grid.len());
    assert!(rows[1].starts_with("two_point,0.25,0.25,"));
    assert!(rows[1].ends_with(",10"));
}
