use super::dense::{dot, DenseSymMatrix};
use crate::{Error, Result};

/// Tridiagonal `(t*+2)`-dimensional correction matrix for a pendant line of
/// size `t_star` whose anchor has degree `d_z` and second sphere `s2`.
///
/// Diagonal `(1, 2, …, 2, d_z, s2/d_z)`, off-diagonal `−1` along the line and
/// into the anchor, `√d_z` between the anchor and the aggregated first
/// sphere.
pub fn second_order_matrix(t_star: usize, d_z: f64, s2: f64) -> Result<DenseSymMatrix> {
    if t_star == 0 {
        return Err(Error::InvalidParameter("t_star must be at least 1".into()));
    }
    if !(d_z > 0.0 && d_z.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "anchor degree must be positive, got {d_z}"
        )));
    }
    if !(s2 >= 0.0 && s2.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "second sphere size must be non-negative, got {s2}"
        )));
    }
    let dim = t_star + 2;
    let z = t_star;
    let mut m = DenseSymMatrix::zeros(dim);
    for i in 0..t_star {
        m.set(i, i, if i == 0 { 1.0 } else { 2.0 });
        m.set(i, i + 1, -1.0);
    }
    m.set(z, z, d_z);
    m.set(z, z + 1, d_z.sqrt());
    m.set(z + 1, z + 1, s2 / d_z);
    Ok(m)
}

/// First-order eigenvalue correction `λ + ⟨v, (M − λ) v⟩` for a unit vector
/// `v` with `‖(M − λ) v‖ = ε`.
///
/// When `M` has a single eigenvalue `μ` in `[λ − Δ, λ + Δ]` and `5ε ≤ Δ`,
/// the result is within `O(ε²/Δ)` of `μ`. Refuses when `5ε > Δ`.
pub fn rayleigh_refine(m: &DenseSymMatrix, lambda: f64, v: &[f64], delta: f64) -> Result<f64> {
    if v.len() != m.dim() {
        return Err(Error::LengthMismatch {
            expected: m.dim(),
            got: v.len(),
        });
    }
    let norm = dot(v, v).sqrt();
    if (norm - 1.0).abs() > 1e-10 {
        return Err(Error::InvalidParameter(format!(
            "vector must be normalised, has norm {norm}"
        )));
    }
    if !(delta > 0.0) {
        return Err(Error::InvalidParameter(format!("gap must be positive, got {delta}")));
    }
    let shifted: Vec<f64> = m
        .mul_vec(v)
        .iter()
        .zip(v)
        .map(|(mv, x)| mv - lambda * x)
        .collect();
    let epsilon = dot(&shifted, &shifted).sqrt();
    if 5.0 * epsilon > delta {
        return Err(Error::GapTooSmall { epsilon, delta });
    }
    Ok(lambda + dot(v, &shifted))
}
