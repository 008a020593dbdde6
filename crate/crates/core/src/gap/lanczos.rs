//! Lanczos iteration for the smallest eigenvalue of a symmetric operator
//! restricted to the orthogonal complement of a known subspace.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::tridiag::smallest_eigenpair;
use crate::{Error, Result};

const START_SEED: u64 = 0x1a2c_7e55;

/// Iterations without any movement of the Ritz value before giving up.
const STAGNATION_WINDOW: usize = 100;

/// Subspace that the iteration is kept orthogonal to: indicators of vertex
/// classes (orthogonal by disjointness) plus arbitrary orthonormal vectors.
pub(crate) struct Deflation<'a> {
    pub class_of: &'a [usize],
    pub class_sizes: &'a [usize],
    pub locked: Vec<Vec<f64>>,
}

impl Deflation<'_> {
    pub fn project(&self, w: &mut [f64]) {
        let mut sums = vec![0.0; self.class_sizes.len()];
        for (x, &c) in self.class_of.iter().enumerate() {
            sums[c] += w[x];
        }
        for (x, &c) in self.class_of.iter().enumerate() {
            w[x] -= sums[c] / self.class_sizes[c] as f64;
        }
        for q in &self.locked {
            let c = dot(w, q);
            axpy(-c, q, w);
        }
    }
}

pub(crate) struct Outcome {
    pub value: f64,
    pub vector: Vec<f64>,
    pub iterations: usize,
    pub residual: f64,
}

/// Smallest eigenpair of `op` on the complement of `deflation`, converged
/// when `‖op(y) − θy‖ ≤ tol · (1 + |θ|)`.
pub(crate) fn smallest<F>(
    n: usize,
    op: F,
    deflation: &Deflation<'_>,
    tol: f64,
    max_iter: usize,
) -> Result<Outcome>
where
    F: Fn(&[f64], &mut [f64]),
{
    let mut rng = ChaCha8Rng::seed_from_u64(START_SEED);
    let mut v: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    deflation.project(&mut v);
    let norm = dot(&v, &v).sqrt();
    if norm == 0.0 {
        return Err(Error::InvalidParameter(
            "deflated subspace has no complement".into(),
        ));
    }
    v.iter_mut().for_each(|x| *x /= norm);

    let mut basis = vec![v];
    let mut alpha: Vec<f64> = Vec::new();
    let mut beta: Vec<f64> = Vec::new();
    let mut w = vec![0.0; n];
    let mut scale = 0.0f64;
    let mut best = (f64::NAN, f64::INFINITY);
    let mut last_theta = f64::NAN;
    let mut still = 0;

    for j in 0..max_iter.max(1) {
        op(&basis[j], &mut w);
        deflation.project(&mut w);
        let a = dot(&w, &basis[j]);
        axpy(-a, &basis[j], &mut w);
        if j > 0 {
            axpy(-beta[j - 1], &basis[j - 1], &mut w);
        }
        for _ in 0..2 {
            for q in &basis {
                let c = dot(&w, q);
                axpy(-c, q, &mut w);
            }
            deflation.project(&mut w);
        }
        alpha.push(a);
        let b = dot(&w, &w).sqrt();
        scale = scale.max(a.abs() + b);
        let exhausted = b <= 1e-12 * scale.max(1.0);

        let (theta, s) = smallest_eigenpair(&alpha, &beta);
        let estimate = b * s.last().unwrap().abs();
        if estimate < best.1 {
            best = (theta, estimate);
        }
        if estimate <= tol * (1.0 + theta.abs()) || exhausted {
            let ritz = combine(&basis, &s);
            let (value, residual) = rayleigh(&op, &ritz, &mut w);
            if residual <= tol * (1.0 + value.abs()) || exhausted {
                return Ok(Outcome {
                    value,
                    vector: ritz,
                    iterations: j + 1,
                    residual,
                });
            }
        }
        if exhausted {
            break;
        }
        if (theta - last_theta).abs() <= f64::EPSILON * (1.0 + theta.abs()) {
            still += 1;
            if still >= STAGNATION_WINDOW {
                break;
            }
        } else {
            still = 0;
        }
        last_theta = theta;

        beta.push(b);
        basis.push(w.iter().map(|x| x / b).collect());
    }
    Err(Error::NoConvergence {
        iterations: alpha.len(),
        estimate: best.0,
        residual: best.1,
    })
}

fn combine(basis: &[Vec<f64>], s: &[f64]) -> Vec<f64> {
    let mut y = vec![0.0; basis[0].len()];
    for (q, &c) in basis.iter().zip(s) {
        axpy(c, q, &mut y);
    }
    let norm = dot(&y, &y).sqrt();
    y.iter_mut().for_each(|x| *x /= norm);
    y
}

/// Rayleigh quotient of the unit vector `y` and the residual norm.
fn rayleigh<F>(op: &F, y: &[f64], scratch: &mut [f64]) -> (f64, f64)
where
    F: Fn(&[f64], &mut [f64]),
{
    op(y, scratch);
    let value = dot(y, scratch);
    let residual = scratch
        .iter()
        .zip(y)
        .map(|(ly, yi)| (ly - value * yi).powi(2))
        .sum::<f64>()
        .sqrt();
    (value, residual)
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn axpy(a: f64, x: &[f64], y: &mut [f64]) {
    y.iter_mut().zip(x).for_each(|(yi, xi)| *yi += a * xi);
}
