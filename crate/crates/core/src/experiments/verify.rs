//! Exact checks on small trees that back the large-graph predictions.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::trees::{
    enumerate_trees, line_gap, line_spectrum_closed_form, minimality_oracle_with_threshold,
    rayleigh_refine, sym_eigen, sym_eigenvalues, tree_adjacency_norm, weighted_laplacian,
    AnchoredTree, DenseSymMatrix, OracleReport, MAX_ENUMERATION_SIZE, MAX_ORACLE_SIZE,
};
use crate::{Error, Result};

/// Largest line whose closed-form spectrum is compared with a dense solve.
pub const CLOSED_FORM_MAX_T: usize = 50;
/// Per-eigenvalue agreement for the closed form.
pub const CLOSED_FORM_TOL: f64 = 1e-10;
/// Envelope constant `C` in `|refined − μ| ≤ C ε²/Δ`.
pub const REFINE_ENVELOPE: f64 = 10.0;
pub const REFINE_INSTANCES: usize = 100;

const REFINE_SEED: u64 = 0x005e_ede5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyOptions {
    /// Oracle sizes `1..=t_max`, at most 8.
    pub t_max: usize,
    pub multiplicity_cap: u32,
    /// Added to the line value before it is used as the oracle threshold.
    /// Non-zero values are fault injections and must make the run fail.
    pub threshold_shift: f64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            t_max: 6,
            multiplicity_cap: 2,
            threshold_shift: 0.0,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    /// Distance to the failing side of the check; negative on failure.
    pub worst_margin: f64,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub checks: Vec<CheckResult>,
    /// Minimiser per oracle size: `(t, canonical code, anchor, value)`.
    pub argmin_table: Vec<(usize, String, String, f64)>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

pub fn verify_propositions(opts: &VerifyOptions) -> Result<VerifyReport> {
    if !(1..=MAX_ORACLE_SIZE).contains(&opts.t_max) {
        return Err(Error::InvalidParameter(format!(
            "t_max must be in 1..={MAX_ORACLE_SIZE}, got {}",
            opts.t_max
        )));
    }
    let mut checks = Vec::new();
    let mut argmin_table = Vec::new();
    for t in 1..=opts.t_max {
        let threshold = line_gap(t) + opts.threshold_shift;
        let report = minimality_oracle_with_threshold(t, opts.multiplicity_cap, threshold)?;
        let row = report.argmin_row();
        argmin_table.push((
            t,
            row.tree_canonical_code.clone(),
            crate::trees::format_anchor(&row.anchor),
            row.min_nonzero_eigenvalue,
        ));
        checks.push(oracle_check(&report));
    }
    checks.push(closed_form_check());
    checks.push(tree_norm_check()?);
    checks.push(refine_envelope_check()?);
    Ok(VerifyReport {
        checks,
        argmin_table,
    })
}

fn oracle_check(report: &OracleReport) -> CheckResult {
    let detail = match report.violations.first() {
        None => format!(
            "{} anchored trees, line value {:.12}",
            report.rows.len(),
            report.threshold
        ),
        Some(v) => format!(
            "{} violations; first {:?} at tree {} anchor {} value {:.12} threshold {:.12}",
            report.violations.len(),
            v.kind,
            v.tree_canonical_code,
            v.anchor,
            v.value,
            v.threshold
        ),
    };
    let worst_margin = if report.passed() {
        report.worst_margin()
    } else {
        report
            .violations
            .iter()
            .map(|v| -(v.value - v.threshold).abs())
            .fold(0.0, f64::min)
    };
    CheckResult {
        name: format!("minimality t={}", report.t),
        passed: report.passed(),
        worst_margin,
        detail,
    }
}

fn closed_form_check() -> CheckResult {
    let mut worst = 0.0f64;
    let mut worst_t = 1;
    for t in 1..=CLOSED_FORM_MAX_T {
        let at = AnchoredTree::endpoint_line(t).expect("line is a tree");
        let numeric = sym_eigenvalues(&weighted_laplacian(&at));
        let exact = line_spectrum_closed_form(t);
        let err = numeric
            .iter()
            .zip(&exact)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        if err > worst {
            worst = err;
            worst_t = t;
        }
    }
    CheckResult {
        name: format!("line closed form t<={CLOSED_FORM_MAX_T}"),
        passed: worst <= CLOSED_FORM_TOL,
        worst_margin: CLOSED_FORM_TOL - worst,
        detail: format!("max eigenvalue error {worst:.3e} at t={worst_t}"),
    }
}

fn tree_norm_check() -> Result<CheckResult> {
    let mut worst = f64::INFINITY;
    let mut worst_tree = String::new();
    let mut count = 0;
    for t in 2..=MAX_ENUMERATION_SIZE {
        for tree in enumerate_trees(t)? {
            let norm = tree_adjacency_norm(&tree.edges)?;
            let margin = (2.0 * tree.max_degree() as f64).sqrt() - norm;
            count += 1;
            if margin < worst {
                worst = margin;
                worst_tree = tree.code.clone();
            }
        }
    }
    Ok(CheckResult {
        name: format!("adjacency norm <= sqrt(2M), t<={MAX_ENUMERATION_SIZE}"),
        passed: worst >= -1e-10,
        worst_margin: worst,
        detail: format!("{count} trees, tightest {worst_tree}"),
    })
}

fn refine_envelope_check() -> Result<CheckResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(REFINE_SEED);
    let mut worst = f64::INFINITY;
    let mut worst_detail = String::new();
    for instance in 0..REFINE_INSTANCES {
        let case = random_refine_case(&mut rng);
        let refined = rayleigh_refine(&case.m, case.lambda, &case.v, case.delta)?;
        let bound = REFINE_ENVELOPE * case.eps * case.eps / case.delta;
        let margin = bound - (refined - case.mu).abs();
        if margin < worst {
            worst = margin;
            worst_detail = format!(
                "instance {instance}: error {:.3e}, bound {bound:.3e}",
                (refined - case.mu).abs()
            );
        }
    }
    Ok(CheckResult {
        name: format!("refinement error <= {REFINE_ENVELOPE} eps^2/delta"),
        passed: worst >= 0.0,
        worst_margin: worst,
        detail: worst_detail,
    })
}

pub(crate) struct RefineCase {
    pub m: DenseSymMatrix,
    pub mu: f64,
    pub lambda: f64,
    pub v: Vec<f64>,
    pub eps: f64,
    pub delta: f64,
}

/// Random 5×5 symmetric matrix with a perturbed eigenpair satisfying the
/// refinement preconditions: exactly one eigenvalue within `Δ` of `λ` and
/// `5ε ≤ Δ`.
pub(crate) fn random_refine_case(rng: &mut ChaCha8Rng) -> RefineCase {
    const DIM: usize = 5;
    loop {
        let mut m = DenseSymMatrix::zeros(DIM);
        for i in 0..DIM {
            for j in i..DIM {
                m.set(i, j, rng.gen_range(-1.0..1.0));
            }
        }
        let spec = sym_eigen(&m);
        let k = rng.gen_range(0..DIM);
        let mu = spec.eigenvalues[k];
        let sep = spec
            .eigenvalues
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != k)
            .map(|(_, &x)| (x - mu).abs())
            .fold(f64::INFINITY, f64::min);
        if sep < 1e-3 {
            continue;
        }
        let delta = 0.5 * sep;
        let size = delta * 10f64.powf(rng.gen_range(-4.0..-1.0));
        let mut v = spec.eigenvectors[k].clone();
        for x in v.iter_mut() {
            *x += size * rng.gen_range(-1.0..1.0);
        }
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        v.iter_mut().for_each(|x| *x /= norm);
        let lambda = mu + size * rng.gen_range(-1.0..1.0);
        let eps = m.residual(lambda, &v);
        if 5.0 * eps > delta {
            continue;
        }
        return RefineCase {
            m,
            mu,
            lambda,
            v,
            eps,
            delta,
        };
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn passes_for_small_sizes() {
        let report = verify_propositions(&VerifyOptions {
            t_max: 4,
            ..VerifyOptions::default()
        })
        .unwrap();
        assert!(report.passed(), "{:?}", report.failures().collect::<Vec<_>>());
        assert_eq!(report.argmin_table.len(), 4);
        for (t, code, anchor, value) in &report.argmin_table {
            let line = enumerate_trees(*t).unwrap().into_iter().find(|x| x.is_line()).unwrap();
            assert_eq!(code, &line.code);
            let (x, k) = anchor.split_once(':').unwrap();
            assert_eq!(k, "1");
            assert!(line.degrees()[x.parse::<usize>().unwrap()] <= 1, "{anchor}");
            assert!((value - line_gap(*t)).abs() < 1e-10);
        }
    }

    #[test]
    fn single_vertex_gives_one() {
        let report = verify_propositions(&VerifyOptions {
            t_max: 1,
            ..VerifyOptions::default()
        })
        .unwrap();
        assert!(report.passed());
        assert_eq!(report.argmin_table[0].3, 1.0);
    }

    #[test]
    fn shifted_threshold_fails_with_violator() {
        for shift in [-0.01, 0.01] {
            let report = verify_propositions(&VerifyOptions {
                t_max: 3,
                threshold_shift: shift,
                ..VerifyOptions::default()
            })
            .unwrap();
            assert!(!report.passed());
            let failure = report.failures().next().unwrap();
            assert!(failure.name.starts_with("minimality"));
            assert!(failure.detail.contains("violations"));
            assert!(failure.worst_margin < 0.0);
        }
    }

    #[test]
    fn rejects_large_sizes() {
        let opts = VerifyOptions {
            t_max: 9,
            ..VerifyOptions::default()
        };
        assert!(verify_propositions(&opts).is_err());
    }
}
