//! Spectral gap `λ₂ = min(Spec(L) \ {0})` of large sparse graphs.
//!
//! The Laplacian kernel is spanned by the indicators of the connected
//! components, so it is removed exactly rather than resolved numerically.
//! What remains is a positive definite operator whose smallest eigenvalue is
//! `λ₂`; it is found by Lanczos with full reorthogonalisation, or by a dense
//! solve for small graphs.

mod lanczos;
mod tridiag;

use serde::{Deserialize, Serialize};

use crate::graph::Graph;
use crate::trees::{line_gap, sym_eigen, sym_eigenvalues, DenseSymMatrix};
use crate::{Error, Result};

pub const DEFAULT_TOL: f64 = 1e-8;
pub const DEFAULT_DENSE_LIMIT: usize = 2000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Dense,
    Iterative,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    /// Relative residual target.
    pub tol: f64,
    /// `None` means `20 √n`.
    pub max_iter: Option<usize>,
    /// `None` picks dense up to `dense_limit` vertices and iterative above.
    pub method: Option<Method>,
    pub dense_limit: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            tol: DEFAULT_TOL,
            max_iter: None,
            method: None,
            dense_limit: DEFAULT_DENSE_LIMIT,
        }
    }
}

impl SolverOptions {
    pub fn iterative() -> Self {
        Self {
            method: Some(Method::Iterative),
            ..Self::default()
        }
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpectralReport {
    pub lambda2: f64,
    /// Number of connected components.
    pub kernel_dim: usize,
    pub iterations: usize,
    /// `‖L v − λ₂ v‖` for the returned unit vector.
    pub residual: f64,
    pub method: Method,
    /// Unit eigenvector of `λ₂`, orthogonal to every component indicator.
    #[serde(skip)]
    pub vector: Vec<f64>,
}

pub fn lambda2(g: &Graph, opts: &SolverOptions) -> Result<SpectralReport> {
    if g.edge_count() == 0 {
        return Err(Error::NoNonzeroSpectrum);
    }
    let method = opts.method.unwrap_or(if g.n() <= opts.dense_limit {
        Method::Dense
    } else {
        Method::Iterative
    });
    match method {
        Method::Dense => dense_lambda2(g, opts),
        Method::Iterative => iterative_lambda2(g, opts),
    }
}

fn dense_lambda2(g: &Graph, opts: &SolverOptions) -> Result<SpectralReport> {
    if g.n() > opts.dense_limit {
        return Err(Error::TooLarge {
            n: g.n(),
            limit: opts.dense_limit,
        });
    }
    let k = g.component_count();
    let spec = sym_eigen(&DenseSymMatrix::from_row_major(g.n(), g.dense_laplacian())?);
    let value = spec.eigenvalues[k];
    let vector = spec.eigenvectors[k].clone();
    let lv = g.laplacian_apply(&vector)?;
    let residual = residual_norm(&lv, &vector, value);
    Ok(SpectralReport {
        lambda2: value,
        kernel_dim: k,
        iterations: 0,
        residual,
        method: Method::Dense,
        vector,
    })
}

fn iterative_lambda2(g: &Graph, opts: &SolverOptions) -> Result<SpectralReport> {
    let n = g.n();
    let k = g.component_count();
    let default_iter = (20.0 * (n as f64).sqrt()).ceil() as usize;
    let max_iter = opts.max_iter.unwrap_or(default_iter).min(n - k);
    let deflation = lanczos::Deflation {
        class_of: g.component_id(),
        class_sizes: g.component_sizes(),
        locked: Vec::new(),
    };
    let out = lanczos::smallest(
        n,
        |v, out| g.laplacian_apply_into(v, out),
        &deflation,
        opts.tol,
        max_iter,
    )?;
    Ok(SpectralReport {
        lambda2: out.value,
        kernel_dim: k,
        iterations: out.iterations,
        residual: out.residual,
        method: Method::Iterative,
        vector: out.vector,
    })
}

fn residual_norm(lv: &[f64], v: &[f64], value: f64) -> f64 {
    lv.iter()
        .zip(v)
        .map(|(a, b)| (a - value * b).powi(2))
        .sum::<f64>()
        .sqrt()
}

/// Full Laplacian spectrum, ascending, for graphs of at most
/// [`DEFAULT_DENSE_LIMIT`] vertices.
pub fn dense_spectrum(g: &Graph) -> Result<Vec<f64>> {
    if g.n() > DEFAULT_DENSE_LIMIT {
        return Err(Error::TooLarge {
            n: g.n(),
            limit: DEFAULT_DENSE_LIMIT,
        });
    }
    Ok(sym_eigenvalues(&DenseSymMatrix::from_row_major(
        g.n(),
        g.dense_laplacian(),
    )?))
}

/// Measured `λ₂` next to the line prediction `2 − 2cos(π/(2t*+1))`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GapComparison {
    pub lambda2: f64,
    pub kernel_dim: usize,
    pub t_star: usize,
    pub prediction: f64,
    pub deviation: f64,
    /// Empirical mean degree `2|E|/n`.
    pub mean_degree: f64,
}

pub fn gap_report(g: &Graph, t_star: usize, opts: &SolverOptions) -> Result<GapComparison> {
    if t_star == 0 {
        return Err(Error::InvalidParameter("t_star must be at least 1".into()));
    }
    let report = lambda2(g, opts)?;
    let prediction = line_gap(t_star);
    Ok(GapComparison {
        lambda2: report.lambda2,
        kernel_dim: report.kernel_dim,
        t_star,
        prediction,
        deviation: (report.lambda2 - prediction).abs(),
        mean_degree: g.mean_degree(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;

    fn both(g: &Graph) -> (SpectralReport, SpectralReport) {
        let d = lambda2(g, &SolverOptions::default()).unwrap();
        let i = lambda2(g, &SolverOptions::iterative()).unwrap();
        assert_eq!(d.method, Method::Dense);
        assert_eq!(i.method, Method::Iterative);
        (d, i)
    }

    #[test]
    fn single_edge() {
        let g = path(2);
        for r in <[_; 2]>::from(both(&g)) {
            assert!((r.lambda2 - 2.0).abs() < 1e-12);
            assert_eq!(r.kernel_dim, 1);
        }
    }

    #[test]
    fn triangle_gap_is_three() {
        for r in <[_; 2]>::from(both(&triangle())) {
            assert!((r.lambda2 - 3.0).abs() < 1e-12);
        }
    }

    #[test]
    fn two_disjoint_edges() {
        let g = Graph::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
        for r in <[_; 2]>::from(both(&g)) {
            assert!((r.lambda2 - 2.0).abs() < 1e-12);
            assert_eq!(r.kernel_dim, 2);
        }
    }

    #[test]
    fn edgeless_graph_has_no_gap() {
        let g = Graph::from_edges(3, &[]).unwrap();
        assert!(matches!(
            lambda2(&g, &SolverOptions::default()),
            Err(Error::NoNonzeroSpectrum)
        ));
        assert!(matches!(
            lambda2(&g, &SolverOptions::iterative()),
            Err(Error::NoNonzeroSpectrum)
        ));
    }

    #[test]
    fn dense_spectra() {
        let close = |a: &[f64], b: &[f64]| a.iter().zip(b).all(|(x, y)| (x - y).abs() < 1e-12);
        assert!(close(&dense_spectrum(&star(3)).unwrap(), &[0.0, 1.0, 1.0, 4.0]));
        assert!(close(&dense_spectrum(&path(3)).unwrap(), &[0.0, 1.0, 3.0]));
        assert_eq!(dense_spectrum(&Graph::from_edges(3, &[]).unwrap()).unwrap(), vec![0.0; 3]);
    }

    #[test]
    fn dense_limit_is_enforced() {
        let g = path(10);
        let opts = SolverOptions {
            method: Some(Method::Dense),
            dense_limit: 5,
            ..SolverOptions::default()
        };
        assert!(matches!(lambda2(&g, &opts), Err(Error::TooLarge { .. })));
    }

    #[test]
    fn iteration_budget_exhaustion_reports_best_estimate() {
        let g = path(200);
        let opts = SolverOptions {
            max_iter: Some(3),
            ..SolverOptions::iterative()
        };
        match lambda2(&g, &opts) {
            Err(Error::NoConvergence { iterations, estimate, .. }) => {
                assert_eq!(iterations, 3);
                assert!(estimate > 0.0);
            }
            other => panic!("expected non-convergence, got {other:?}"),
        }
    }

    #[test]
    fn pendant_vertex_on_clique_is_near_one() {
        let mut edges: Vec<_> = complete(20).edges().collect();
        edges.push((0, 20));
        let g = Graph::from_edges(21, &edges).unwrap();
        let cmp = gap_report(&g, 1, &SolverOptions::default()).unwrap();
        let exact = dense_spectrum(&g).unwrap()[1];
        assert!((cmp.lambda2 - exact).abs() < 1e-10);
        assert!(cmp.deviation < 0.1, "{cmp:?}");
        assert!(cmp.deviation >= 0.0);
    }

    #[test]
    fn pendant_two_line_on_clique() {
        let mut edges: Vec<_> = complete(20).edges().collect();
        edges.extend([(0, 20), (20, 21)]);
        let g = Graph::from_edges(22, &edges).unwrap();
        let cmp = gap_report(&g, 2, &SolverOptions::iterative()).unwrap();
        let exact = dense_spectrum(&g).unwrap()[1];
        assert!((cmp.lambda2 - exact).abs() < 1e-8);
        assert!(cmp.deviation < 2.0 / 20.0, "{cmp:?}");
    }

    #[test]
    fn report_serialises_listed_fields() {
        let r = lambda2(&triangle(), &SolverOptions::default()).unwrap();
        let v: serde_json::Value = serde_json::to_value(&r).unwrap();
        let keys: Vec<_> = v.as_object().unwrap().keys().cloned().collect();
        assert_eq!(keys, ["iterations", "kernel_dim", "lambda2", "method", "residual"]);
        assert_eq!(v["method"], "dense");
    }
}
