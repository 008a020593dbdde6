use std::f64::consts::PI;

use ergap::experiments::{
    intermediate_bounds_check, run_sweep, write_csv, write_json, SweepConfig,
};
use ergap::scan::expected_line_count;

#[test]
fn rows_carry_consistent_predictions_and_calibrated_counts() {
    let cfg = SweepConfig {
        n: 10_000,
        t_grid: vec![1.5, 2.5],
        trials_per_point: 16,
        master_seed: 314,
        ..SweepConfig::default()
    };
    let rows = run_sweep(&cfg).unwrap();
    assert_eq!(rows.len(), 32);
    for r in &rows {
        let t_star = r.t_star.unwrap();
        let line = 2.0 - 2.0 * (PI / (2 * t_star + 1) as f64).cos();
        assert!((r.first_order_prediction.unwrap() - line).abs() <= 1e-14);
        assert_eq!(r.status, "ok");
        assert!(r.lambda2_measured.unwrap() > 0.0);
    }
    for chunk in rows.chunks(cfg.trials_per_point) {
        let counts: Vec<f64> = chunk
            .iter()
            .map(|r| r.pendant_line_count.unwrap() as f64)
            .collect();
        let k = counts.len() as f64;
        let mean = counts.iter().sum::<f64>() / k;
        let sd = (counts.iter().map(|c| (c - mean).powi(2)).sum::<f64>() / (k - 1.0)).sqrt();
        let expected = expected_line_count(cfg.n, chunk[0].d, chunk[0].t_star.unwrap());
        assert!(
            (mean - expected).abs() <= 4.0 * sd / k.sqrt(),
            "t = {}: mean {mean}, expected {expected}",
            chunk[0].t
        );
    }
}

#[test]
fn csv_and_json_carry_the_same_rows() {
    let cfg = SweepConfig {
        n: 800,
        t_grid: vec![0.9, 2.0],
        trials_per_point: 2,
        ..SweepConfig::default()
    };
    let rows = run_sweep(&cfg).unwrap();
    let mut csv = Vec::new();
    write_csv(&rows, &mut csv).unwrap();
    let mut json = Vec::new();
    write_json(&rows, &mut json).unwrap();
    let parsed: Vec<serde_json::Value> = serde_json::from_slice(&json).unwrap();
    assert_eq!(parsed.len(), rows.len());
    let text = String::from_utf8(csv).unwrap();
    let header: Vec<&str> = text.lines().next().unwrap().split(',').collect();
    let keys: Vec<&str> = parsed[0].as_object().unwrap().keys().map(String::as_str).collect();
    let mut sorted_header = header.clone();
    sorted_header.sort_unstable();
    let mut sorted_keys = keys.clone();
    sorted_keys.sort_unstable();
    assert_eq!(sorted_header, sorted_keys);
    assert!(!header.contains(&"runtime_ms"));
}

#[test]
fn intermediate_report_is_a_fraction() {
    let n = 10_000;
    let d = (n as f64).ln() / 2.0;
    let r = intermediate_bounds_check(n, d, 2, 20, 77, 10.0).unwrap();
    assert!((0.0..=1.0).contains(&r.fraction));
    assert!(r.lambdas.iter().all(|&l| l > 0.0));
    assert_eq!(r.lambdas.len() + r.failed_trials, 20);
}
