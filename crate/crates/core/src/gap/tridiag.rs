//! Smallest eigenpair of a symmetric tridiagonal matrix.
//!
//! `alpha` is the diagonal, `beta` the off-diagonal (`beta.len() + 1 ==
//! alpha.len()`). Sturm-sequence bisection pins the eigenvalue, inverse
//! iteration with a pivoted tridiagonal LU gives the vector.

/// Number of eigenvalues strictly below `x`.
fn sturm_count(alpha: &[f64], beta: &[f64], x: f64) -> usize {
    let tiny = f64::MIN_POSITIVE.sqrt();
    // An exact zero pivot is nudged to the negative side, consistently for
    // the count and for the next step.
    let pivot = |q: f64| if q.abs() < tiny { -tiny } else { q };
    let mut q = pivot(alpha[0] - x);
    let mut count = usize::from(q < 0.0);
    for i in 1..alpha.len() {
        q = pivot(alpha[i] - x - beta[i - 1] * beta[i - 1] / q);
        count += usize::from(q < 0.0);
    }
    count
}

pub(crate) fn smallest_eigenvalue(alpha: &[f64], beta: &[f64]) -> f64 {
    let k = alpha.len();
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..k {
        let r = if i > 0 { beta[i - 1].abs() } else { 0.0 } + beta.get(i).map_or(0.0, |b| b.abs());
        lo = lo.min(alpha[i] - r);
        hi = hi.max(alpha[i] + r);
    }
    let scale = lo.abs().max(hi.abs()).max(f64::MIN_POSITIVE);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi || hi - lo <= 2.0 * f64::EPSILON * scale {
            break;
        }
        if sturm_count(alpha, beta, mid) >= 1 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Smallest eigenvalue and its unit eigenvector.
pub(crate) fn smallest_eigenpair(alpha: &[f64], beta: &[f64]) -> (f64, Vec<f64>) {
    let k = alpha.len();
    let theta = smallest_eigenvalue(alpha, beta);
    if k == 1 {
        return (theta, vec![1.0]);
    }
    let scale = alpha
        .iter()
        .map(|a| a.abs())
        .chain(beta.iter().map(|b| b.abs()))
        .fold(0.0, f64::max)
        .max(f64::MIN_POSITIVE);
    let lu = TridiagLu::new(alpha, beta, theta, scale);
    let mut y = vec![1.0; k];
    for _ in 0..3 {
        lu.solve(&mut y);
        let norm = y.iter().map(|x| x * x).sum::<f64>().sqrt();
        y.iter_mut().for_each(|x| *x /= norm);
    }
    (theta, y)
}

/// LU with partial pivoting of `T − θI`.
struct TridiagLu {
    dl: Vec<f64>,
    d: Vec<f64>,
    du: Vec<f64>,
    du2: Vec<f64>,
    swapped: Vec<bool>,
}

impl TridiagLu {
    fn new(alpha: &[f64], beta: &[f64], theta: f64, scale: f64) -> Self {
        let n = alpha.len();
        let mut dl = beta.to_vec();
        let mut d: Vec<f64> = alpha.iter().map(|a| a - theta).collect();
        let mut du = beta.to_vec();
        let mut du2 = vec![0.0; n.saturating_sub(2)];
        let mut swapped = vec![false; n.saturating_sub(1)];
        for i in 0..n - 1 {
            if d[i].abs() >= dl[i].abs() {
                if d[i] == 0.0 {
                    d[i] = f64::EPSILON * scale;
                }
                let fact = dl[i] / d[i];
                dl[i] = fact;
                d[i + 1] -= fact * du[i];
            } else {
                swapped[i] = true;
                let fact = d[i] / dl[i];
                d[i] = dl[i];
                dl[i] = fact;
                let temp = du[i];
                du[i] = d[i + 1];
                d[i + 1] = temp - fact * d[i + 1];
                if i + 2 < n {
                    du2[i] = du[i + 1];
                    du[i + 1] *= -fact;
                }
            }
        }
        if d[n - 1] == 0.0 {
            d[n - 1] = f64::EPSILON * scale;
        }
        Self { dl, d, du, du2, swapped }
    }

    fn solve(&self, b: &mut [f64]) {
        let n = self.d.len();
        for i in 0..n - 1 {
            if self.swapped[i] {
                let temp = b[i];
                b[i] = b[i + 1];
                b[i + 1] = temp - self.dl[i] * b[i];
            } else {
                b[i + 1] -= self.dl[i] * b[i];
            }
        }
        b[n - 1] /= self.d[n - 1];
        if n > 1 {
            b[n - 2] = (b[n - 2] - self.du[n - 2] * b[n - 1]) / self.d[n - 2];
        }
        for i in (0..n.saturating_sub(2)).rev() {
            b[i] = (b[i] - self.du[i] * b[i + 1] - self.du2[i] * b[i + 2]) / self.d[i];
        }
    }
}
