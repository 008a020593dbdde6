use std::collections::BTreeMap;
use std::f64::consts::PI;

use super::dense::{sym_eigen, DenseSymMatrix};
use crate::{Error, Result};

/// Multiset over vertices: vertex → multiplicity (always ≥ 1).
pub type Anchor = BTreeMap<usize, u32>;

/// A tree on `0..t` together with an anchor multiset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnchoredTree {
    t: usize,
    edges: Vec<(usize, usize)>,
    anchor: Anchor,
}

impl AnchoredTree {
    pub fn new(t: usize, edges: Vec<(usize, usize)>, anchor: Anchor) -> Result<Self> {
        check_tree(t, &edges)?;
        for (&x, &k) in &anchor {
            if x >= t {
                return Err(Error::InvalidParameter(format!(
                    "anchor vertex {x} outside tree of size {t}"
                )));
            }
            if k == 0 {
                return Err(Error::InvalidParameter(format!(
                    "anchor multiplicity of {x} must be at least 1"
                )));
            }
        }
        Ok(Self { t, edges, anchor })
    }

    /// The line `0 – 1 – … – (t−1)` anchored once at vertex 0.
    pub fn endpoint_line(t: usize) -> Result<Self> {
        Self::new(t, line_edges(t), Anchor::from([(0, 1)]))
    }

    pub fn size(&self) -> usize {
        self.t
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn anchor(&self) -> &Anchor {
        &self.anchor
    }
}

pub(crate) fn line_edges(t: usize) -> Vec<(usize, usize)> {
    (1..t).map(|i| (i - 1, i)).collect()
}

/// Checks that `edges` forms a spanning tree of `0..t`.
pub(crate) fn check_tree(t: usize, edges: &[(usize, usize)]) -> Result<()> {
    if t == 0 {
        return Err(Error::NotATree("empty vertex set".into()));
    }
    if edges.len() != t - 1 {
        return Err(Error::NotATree(format!(
            "{} edges on {t} vertices",
            edges.len()
        )));
    }
    let mut parent: Vec<usize> = (0..t).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for &(u, v) in edges {
        if u >= t || v >= t {
            return Err(Error::NotATree(format!("edge ({u}, {v}) out of range")));
        }
        let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
        if ru == rv {
            return Err(Error::NotATree(format!("edge ({u}, {v}) closes a cycle")));
        }
        parent[ru] = rv;
    }
    Ok(())
}

/// `L(T) + Σ_x m(x) 1_x 1_xᵀ`: the tree Laplacian with anchor multiplicities
/// added on the diagonal.
pub fn weighted_laplacian(at: &AnchoredTree) -> DenseSymMatrix {
    let mut m = DenseSymMatrix::zeros(at.t);
    for &(u, v) in &at.edges {
        m.set(u, v, -1.0);
        m.add_diag(u, 1.0);
        m.add_diag(v, 1.0);
    }
    for (&x, &k) in &at.anchor {
        m.add_diag(x, k as f64);
    }
    m
}

/// Spectrum of the endpoint-anchored line of size `t`, ascending:
/// `2 − 2cos(π(2k+1)/(2t+1))` for `0 ≤ k < t`.
pub fn line_spectrum_closed_form(t: usize) -> Vec<f64> {
    let denom = (2 * t + 1) as f64;
    (0..t)
        .map(|k| 2.0 - 2.0 * (PI * (2 * k + 1) as f64 / denom).cos())
        .collect()
}

/// Smallest eigenvalue of the endpoint-anchored line, `2 − 2cos(π/(2t+1))`.
pub fn line_gap(t: usize) -> f64 {
    2.0 - 2.0 * (PI / (2 * t + 1) as f64).cos()
}

/// Spectral norm of the adjacency matrix of a tree on `0..edges.len()+1`.
pub fn tree_adjacency_norm(edges: &[(usize, usize)]) -> Result<f64> {
    let t = edges.len() + 1;
    check_tree(t, edges)?;
    let mut a = DenseSymMatrix::zeros(t);
    for &(u, v) in edges {
        a.set(u, v, 1.0);
    }
    let spec = sym_eigen(&a);
    Ok(spec.eigenvalues.iter().fold(0.0, |acc: f64, x| acc.max(x.abs())))
}
