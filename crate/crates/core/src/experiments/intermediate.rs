//! Two-sided gap bounds near `d = ln n / t*`.

use rayon::prelude::*;
use serde::Serialize;

use crate::gap::{lambda2, SolverOptions};
use crate::graph::{generate_er, RngSeed};
use crate::trees::line_gap;
use crate::{Error, Result};

#[derive(Debug, Clone, Serialize)]
pub struct IntermediateReport {
    pub n: usize,
    pub d: f64,
    pub t_star: usize,
    pub kappa: f64,
    /// `κ / d`.
    pub band: f64,
    /// Line value for `t*`.
    pub lower: f64,
    /// Line value for `t* − 1`, i.e. `2 − 2cos(π/(2t*−1))`.
    pub upper: f64,
    /// Measured gaps of the trials whose solve succeeded.
    pub lambdas: Vec<f64>,
    pub failed_trials: usize,
    pub in_band: usize,
    /// `in_band / trials`; failed trials count as outside.
    pub fraction: f64,
}

/// Samples `trials` graphs at mean degree `d` and reports how many gaps
/// fall inside `[lower − κ/d, upper + κ/d]`.
pub fn intermediate_bounds_check(
    n: usize,
    d: f64,
    t_star: usize,
    trials: usize,
    master_seed: u64,
    kappa: f64,
) -> Result<IntermediateReport> {
    if t_star == 0 || trials == 0 {
        return Err(Error::InvalidParameter(
            "t_star and trials must be at least 1".into(),
        ));
    }
    if !(kappa >= 0.0) {
        return Err(Error::InvalidParameter(format!("kappa must be non-negative, got {kappa}")));
    }
    let lower = line_gap(t_star);
    let upper = 2.0 - 2.0 * (std::f64::consts::PI / (2 * t_star - 1) as f64).cos();
    let band = kappa / d;

    let outcomes: Vec<Option<f64>> = (0..trials as u64)
        .into_par_iter()
        .map(|trial| {
            let g = generate_er(n, d, RngSeed::new(master_seed, trial))?;
            Ok(lambda2(&g, &SolverOptions::default()).ok().map(|r| r.lambda2))
        })
        .collect::<Result<_>>()?;

    let lambdas: Vec<f64> = outcomes.iter().flatten().copied().collect();
    let in_band = lambdas
        .iter()
        .filter(|&&l| l >= lower - band && l <= upper + band)
        .count();
    Ok(IntermediateReport {
        n,
        d,
        t_star,
        kappa,
        band,
        lower,
        upper,
        failed_trials: trials - lambdas.len(),
        in_band,
        fraction: in_band as f64 / trials as f64,
        lambdas,
    })
}
