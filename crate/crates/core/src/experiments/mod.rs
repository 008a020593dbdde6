//! Closed-form predictions and the experiment drivers behind the CLI.

mod intermediate;
mod sweep;
mod verify;

pub use intermediate::{intermediate_bounds_check, IntermediateReport};
pub use sweep::{
    fig3_grid, fig4_grid, run_sweep, write_csv, write_gnuplot, write_json, write_timing,
    OutputFormat, SweepConfig, SweepRow,
};
pub use verify::{verify_propositions, CheckResult, VerifyOptions, VerifyReport};

use serde::Serialize;

use crate::trees::{line_gap, second_order_matrix, sym_eigen};
use crate::{Error, Result};

/// Leading-order gap `2 − 2cos(π/(2t*+1))`.
pub fn predict_first_order(t_star: usize) -> f64 {
    assert!(t_star >= 1, "t_star must be at least 1");
    line_gap(t_star)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "regime", rename_all = "lowercase")]
pub enum Regime {
    /// `(1+ε) ln n/(t*+1) < d < (1−ε) ln n/t*` for this `t_star`.
    Subcritical { t_star: usize },
    /// Between two subcritical windows, near `d = ln n / near`.
    Intermediate { near: usize },
    /// `d ≥ ln n`.
    Supercritical,
}

impl Regime {
    pub fn t_star(&self) -> Option<usize> {
        match *self {
            Regime::Subcritical { t_star } => Some(t_star),
            _ => None,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Regime::Subcritical { .. } => "subcritical",
            Regime::Intermediate { .. } => "intermediate",
            Regime::Supercritical => "supercritical",
        }
    }
}

/// Relative slack under which a window boundary counts as a tie.
const TIE_TOL: f64 = 1e-12;

/// Classifies `d` against the windows `(1+ε) ln n/(t+1) ≤ d ≤ (1−ε) ln n/t`.
///
/// Points on a window boundary are reported as intermediate.
pub fn regime_t_star(n: usize, d: f64, epsilon: f64) -> Regime {
    assert!(n >= 2 && d > 0.0, "need n >= 2 and d > 0");
    let ln_n = (n as f64).ln();
    if d >= ln_n {
        return Regime::Supercritical;
    }
    // s = ln n / d; the window for t* reads t*/(1−ε) ≤ s ≤ (t*+1)/(1+ε).
    let s = ln_n / d;
    let top = s.ceil() as usize + 1;
    for t in 1..=top {
        let lower = t as f64 / (1.0 - epsilon);
        let upper = (t + 1) as f64 / (1.0 + epsilon);
        if s > lower * (1.0 + TIE_TOL) && s < upper * (1.0 - TIE_TOL) {
            return Regime::Subcritical { t_star: t };
        }
    }
    Regime::Intermediate {
        near: (s.round() as usize).max(1),
    }
}

/// Solves `c ln c − c + 1 = ln n/d − t*` for `c ∈ (0, 1]` by bisection.
///
/// The left side decreases from 1 at `c → 0⁺` to 0 at `c = 1`; a
/// non-positive right side gives `c = 1`.
pub fn solve_anchor_degree_fraction(n: usize, d: f64, t_star: usize) -> Result<f64> {
    if !(d > 0.0) || n < 2 {
        return Err(Error::InvalidParameter(format!("need n >= 2 and d > 0, got n = {n}, d = {d}")));
    }
    let balance = (n as f64).ln() / d - t_star as f64;
    if balance <= 0.0 {
        return Ok(1.0);
    }
    if balance > 1.0 {
        return Err(Error::NoLineExpected { t_star, balance });
    }
    let rate = |c: f64| c * c.ln() - c + 1.0;
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    while hi - lo > 1e-15 {
        let mid = 0.5 * (lo + hi);
        if rate(mid) > balance {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// `λ₁(M(t*, c d, d · c d))` with `c` from [`solve_anchor_degree_fraction`].
pub fn predict_second_order(n: usize, d: f64, t_star: usize) -> Result<f64> {
    let c = solve_anchor_degree_fraction(n, d, t_star)?;
    let d_z = c * d;
    let m = second_order_matrix(t_star, d_z, d * d_z)?;
    Ok(sym_eigen(&m).eigenvalues[0])
}

/// `(Δ, Δ + d/(Δ − d))`; the second value is `None` when `Δ = d`.
pub fn predict_supercritical(min_degree: f64, d: f64) -> (f64, Option<f64>) {
    let second = (min_degree != d).then(|| min_degree + d / (min_degree - d));
    (min_degree, second)
}
