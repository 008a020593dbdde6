//! Monte-Carlo sweeps over `d = ln n / t`.
//!
//! Every `(grid point, trial)` pair owns the random stream
//! `(master_seed, grid_index << 32 | trial)`, so trials are independent of
//! scheduling. Rows are gathered in key order and written by one writer,
//! which makes the main output byte-for-byte reproducible. Wall-clock
//! timings vary between runs and therefore go to a separate sidecar file.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{predict_second_order, predict_supercritical, regime_t_star};
use crate::gap::{lambda2, SolverOptions, DEFAULT_TOL};
use crate::graph::{generate_er, RngSeed};
use crate::scan::{expected_line_count, find_pendant_lines};
use crate::trees::line_gap;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

/// `t ∈ {1.0, 1.1, …, 3.2}`.
pub fn fig3_grid() -> Vec<f64> {
    (10..=32).map(|k| k as f64 / 10.0).collect()
}

/// `t ∈ {0.60, 0.65, …, 1.00}`.
pub fn fig4_grid() -> Vec<f64> {
    (12..=20).map(|k| k as f64 / 20.0).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepConfig {
    pub n: usize,
    /// Grid of `t`; each point samples at `d = ln n / t`.
    pub t_grid: Vec<f64>,
    pub trials_per_point: usize,
    pub master_seed: u64,
    /// Relative residual target of the gap solver.
    pub tol: f64,
    /// Agreement band is `kappa / d`.
    pub kappa: f64,
    /// Margin used to label rows by regime.
    pub epsilon: f64,
    pub output: PathBuf,
    pub format: OutputFormat,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            n: 10_000,
            t_grid: fig3_grid(),
            trials_per_point: 5,
            master_seed: 1,
            tol: DEFAULT_TOL,
            kappa: 10.0,
            epsilon: 0.1,
            output: PathBuf::from("sweep.csv"),
            format: OutputFormat::Csv,
        }
    }
}

impl SweepConfig {
    /// Reads a `key = value` (TOML) file; missing keys keep their defaults.
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_toml(&text)
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        if self.n < 2 {
            return bad(format!("n must be at least 2, got {}", self.n));
        }
        if self.t_grid.is_empty() || self.t_grid.iter().any(|&t| !(t > 0.0 && t.is_finite())) {
            return bad("t_grid must be a non-empty list of positive values".into());
        }
        if self.trials_per_point == 0 {
            return bad("trials_per_point must be at least 1".into());
        }
        if !(self.tol > 0.0) {
            return bad(format!("tol must be positive, got {}", self.tol));
        }
        if !(self.epsilon > 0.0 && self.epsilon < 1.0) {
            return bad(format!("epsilon must lie in (0, 1), got {}", self.epsilon));
        }
        let ln_n = (self.n as f64).ln();
        if let Some(t) = self.t_grid.iter().find(|&&t| ln_n / t > self.n as f64) {
            return bad(format!("t = {t} gives a mean degree above n"));
        }
        Ok(())
    }

    pub fn stream_index(grid_index: usize, trial: usize) -> u64 {
        ((grid_index as u64) << 32) | trial as u64
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub t: f64,
    pub d: f64,
    pub seed_index: u64,
    /// `⌊t⌋` when at least 1.
    pub t_star: Option<usize>,
    pub regime: String,
    pub lambda2_measured: Option<f64>,
    pub kernel_dim: usize,
    pub first_order_prediction: Option<f64>,
    pub second_order_prediction: Option<f64>,
    /// `Δ`, present iff `d ≥ ln n`.
    pub supercritical_first: Option<f64>,
    /// `Δ + d/(Δ − d)`, present iff `d ≥ ln n` and `Δ ≠ d`.
    pub supercritical_prediction: Option<f64>,
    pub pendant_line_count: Option<usize>,
    pub min_degree: usize,
    /// `ok`, or the solver failure for this trial.
    pub status: String,
    #[serde(skip)]
    pub runtime_ms: u128,
}

impl SweepRow {
    /// `|λ₂ − first order| ≤ kappa / d`, when both are present.
    pub fn within_band(&self, kappa: f64) -> Option<bool> {
        let (l, f) = (self.lambda2_measured?, self.first_order_prediction?);
        Some((l - f).abs() <= kappa / self.d)
    }
}

pub fn run_sweep(cfg: &SweepConfig) -> Result<Vec<SweepRow>> {
    cfg.validate()?;
    let tasks: Vec<(usize, usize)> = (0..cfg.t_grid.len())
        .flat_map(|g| (0..cfg.trials_per_point).map(move |k| (g, k)))
        .collect();
    tasks
        .par_iter()
        .map(|&(g, k)| run_trial(cfg, g, k))
        .collect()
}

fn run_trial(cfg: &SweepConfig, grid_index: usize, trial: usize) -> Result<SweepRow> {
    let start = Instant::now();
    let n = cfg.n;
    let t = cfg.t_grid[grid_index];
    let ln_n = (n as f64).ln();
    let d = ln_n / t;
    let seed_index = SweepConfig::stream_index(grid_index, trial);
    let g = generate_er(n, d, RngSeed::new(cfg.master_seed, seed_index))?;

    // Guard against 2.9999… from decimal grids.
    let floor = (t + 1e-9).floor() as usize;
    let t_star = (floor >= 1).then_some(floor);
    let regime = regime_t_star(n, d, cfg.epsilon);

    let opts = SolverOptions::default().with_tol(cfg.tol);
    let (lambda2_measured, kernel_dim, status) = match lambda2(&g, &opts) {
        Ok(r) => (Some(r.lambda2), r.kernel_dim, "ok".to_owned()),
        Err(Error::NoConvergence { iterations, .. }) => (
            None,
            g.component_count(),
            format!("no_convergence_after_{iterations}"),
        ),
        Err(Error::NoNonzeroSpectrum) => (None, g.component_count(), "edgeless".to_owned()),
        Err(e) => return Err(e),
    };

    let min_degree = g.min_degree();
    let supercritical = d >= ln_n;
    let (sup_first, sup_second) = if supercritical {
        let (a, b) = predict_supercritical(min_degree as f64, d);
        (Some(a), b)
    } else {
        (None, None)
    };

    Ok(SweepRow {
        t,
        d,
        seed_index,
        t_star,
        regime: regime.label().to_owned(),
        lambda2_measured,
        kernel_dim,
        first_order_prediction: t_star.map(line_gap),
        second_order_prediction: t_star.and_then(|s| predict_second_order(n, d, s).ok()),
        supercritical_first: sup_first,
        supercritical_prediction: sup_second,
        pendant_line_count: t_star.map(|s| find_pendant_lines(&g, s).len()),
        min_degree,
        status,
        runtime_ms: start.elapsed().as_millis(),
    })
}

pub fn write_csv<W: Write>(rows: &[SweepRow], w: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    for r in rows {
        out.serialize(r)?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_json<W: Write>(rows: &[SweepRow], mut w: W) -> Result<()> {
    serde_json::to_writer_pretty(&mut w, rows)?;
    w.write_all(b"\n")?;
    Ok(())
}

/// Per-row wall-clock times: `t,seed_index,runtime_ms`.
pub fn write_timing<W: Write>(rows: &[SweepRow], mut w: W) -> Result<()> {
    writeln!(w, "t,seed_index,runtime_ms")?;
    for r in rows {
        writeln!(w, "{},{},{}", r.t, r.seed_index, r.runtime_ms)?;
    }
    Ok(())
}

/// One whitespace-separated line per grid point, `NaN` for missing values:
/// `t d mean_lambda2 sd_lambda2 first second sup_first sup_second
/// mean_lines expected_lines ok_trials`.
pub fn write_gnuplot<W: Write>(rows: &[SweepRow], n: usize, mut w: W) -> Result<()> {
    writeln!(
        w,
        "# t d mean_lambda2 sd_lambda2 first_order second_order sup_first sup_second mean_lines expected_lines ok_trials"
    )?;
    let mut i = 0;
    while i < rows.len() {
        let j = rows[i..]
            .iter()
            .position(|r| r.t != rows[i].t)
            .map_or(rows.len(), |p| i + p);
        let group = &rows[i..j];
        let lambdas: Vec<f64> = group.iter().filter_map(|r| r.lambda2_measured).collect();
        let (mean, sd) = mean_sd(&lambdas);
        let opt_mean = |f: &dyn Fn(&SweepRow) -> Option<f64>| {
            let xs: Vec<f64> = group.iter().filter_map(f).collect();
            mean_sd(&xs).0
        };
        let first = &group[0];
        let lines = opt_mean(&|r| r.pendant_line_count.map(|c| c as f64));
        let expected = first
            .t_star
            .map_or(f64::NAN, |s| expected_line_count(n, first.d, s));
        writeln!(
            w,
            "{} {} {} {} {} {} {} {} {} {} {}",
            first.t,
            first.d,
            mean,
            sd,
            fmt_opt(first.first_order_prediction),
            fmt_opt(first.second_order_prediction),
            opt_mean(&|r| r.supercritical_first),
            opt_mean(&|r| r.supercritical_prediction),
            lines,
            expected,
            lambdas.len()
        )?;
        i = j;
    }
    Ok(())
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map_or("NaN".to_owned(), |v| v.to_string())
}

fn mean_sd(xs: &[f64]) -> (f64, f64) {
    if xs.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let m = xs.iter().sum::<f64>() / xs.len() as f64;
    if xs.len() < 2 {
        return (m, f64::NAN);
    }
    let var = xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (xs.len() - 1) as f64;
    (m, var.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(t_grid: Vec<f64>, trials: usize) -> SweepConfig {
        SweepConfig {
            n: 400,
            t_grid,
            trials_per_point: trials,
            master_seed: 99,
            ..SweepConfig::default()
        }
    }

    #[test]
    fn grids() {
        assert_eq!(fig3_grid().len(), 23);
        assert_eq!(fig3_grid()[0], 1.0);
        assert_eq!(*fig3_grid().last().unwrap(), 3.2);
        assert_eq!(fig4_grid().len(), 9);
        assert_eq!(fig4_grid()[1], 0.65);
        let cfg = SweepConfig::default();
        assert_eq!(cfg.t_grid.len() * cfg.trials_per_point, 115);
    }

    #[test]
    fn one_point_one_trial_gives_one_row() {
        let rows = run_sweep(&small(vec![2.5], 1)).unwrap();
        assert_eq!(rows.len(), 1);
        let mut buf = Vec::new();
        write_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 2);
        assert!(text.starts_with("t,d,seed_index,t_star,regime,lambda2_measured,kernel_dim,"));
    }

    #[test]
    fn predictions_follow_t_star() {
        let rows = run_sweep(&small(vec![0.8, 1.5, 2.5], 2)).unwrap();
        assert_eq!(rows.len(), 6);
        for r in &rows {
            match r.t_star {
                Some(s) => {
                    assert_eq!(r.first_order_prediction, Some(line_gap(s)));
                    assert!(r.pendant_line_count.is_some());
                }
                None => {
                    assert_eq!(r.first_order_prediction, None);
                    assert_eq!(r.regime, "supercritical");
                    assert!(r.supercritical_first.is_some());
                }
            }
            assert_eq!(r.status, "ok");
            assert!(r.lambda2_measured.unwrap() > 0.0);
        }
    }

    #[test]
    fn config_file_overrides_defaults() {
        let cfg = SweepConfig::from_toml("n = 500\nt_grid = [1.5, 2.5]\nmaster_seed = 4\n").unwrap();
        assert_eq!(cfg.n, 500);
        assert_eq!(cfg.t_grid, vec![1.5, 2.5]);
        assert_eq!(cfg.trials_per_point, 5);
        assert!(SweepConfig::from_toml("n = 1").is_err());
        assert!(SweepConfig::from_toml("trials_per_point = 0").is_err());
        assert!(SweepConfig::from_toml("t_grid = [-1.0]").is_err());
        assert!(SweepConfig::from_toml("bogus = 3").is_err());
    }

    #[test]
    fn gnuplot_groups_by_grid_point() {
        let cfg = small(vec![1.5, 2.5], 3);
        let rows = run_sweep(&cfg).unwrap();
        let mut buf = Vec::new();
        write_gnuplot(&rows, cfg.n, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let data: Vec<_> = text.lines().filter(|l| !l.starts_with('#')).collect();
        assert_eq!(data.len(), 2);
        assert_eq!(data[0].split_whitespace().count(), 11);
    }
}
