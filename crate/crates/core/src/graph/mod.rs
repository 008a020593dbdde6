//! Sparse undirected graphs and the primitives built on them.
//!
//! Vertices are `0..n`. A [`Graph`] is immutable once built: neighbour lists
//! are stored in CSR form and sorted ascending, degrees and connected
//! components are computed at construction.

mod io;
mod sample;

pub use io::{read_edge_list, write_edge_list};
pub use sample::{generate_er, RngSeed};

use std::collections::VecDeque;

use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    offsets: Vec<usize>,
    neighbors: Vec<usize>,
    component_id: Vec<usize>,
    component_sizes: Vec<usize>,
}

impl Graph {
    /// Builds a graph from an undirected edge list.
    ///
    /// Each pair may appear in either orientation but only once. Self-loops,
    /// duplicates and out-of-range endpoints are rejected.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut degree = vec![0usize; n];
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidParameter(format!(
                    "edge ({u}, {v}) out of range for {n} vertices"
                )));
            }
            if u == v {
                return Err(Error::InvalidParameter(format!("self-loop at {u}")));
            }
            degree[u] += 1;
            degree[v] += 1;
        }
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        for x in 0..n {
            offsets.push(offsets[x] + degree[x]);
        }
        let mut cursor = offsets[..n].to_vec();
        let mut neighbors = vec![0usize; offsets[n]];
        for &(u, v) in edges {
            neighbors[cursor[u]] = v;
            cursor[u] += 1;
            neighbors[cursor[v]] = u;
            cursor[v] += 1;
        }
        for x in 0..n {
            let list = &mut neighbors[offsets[x]..offsets[x + 1]];
            list.sort_unstable();
            if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
                return Err(Error::InvalidParameter(format!(
                    "duplicate edge ({}, {})",
                    x.min(w[0]),
                    x.max(w[0])
                )));
            }
        }
        Ok(Self::from_csr(offsets, neighbors))
    }

    /// Wraps already validated, sorted CSR arrays.
    pub(crate) fn from_csr(offsets: Vec<usize>, neighbors: Vec<usize>) -> Self {
        let n = offsets.len() - 1;
        let (component_id, component_sizes) = label_components(n, &offsets, &neighbors);
        Self {
            offsets,
            neighbors,
            component_id,
            component_sizes,
        }
    }

    pub fn n(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn edge_count(&self) -> usize {
        self.neighbors.len() / 2
    }

    pub fn neighbors(&self, x: usize) -> &[usize] {
        &self.neighbors[self.offsets[x]..self.offsets[x + 1]]
    }

    pub fn degree(&self, x: usize) -> usize {
        self.offsets[x + 1] - self.offsets[x]
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.n()).map(|x| self.degree(x)).collect()
    }

    pub fn min_degree(&self) -> usize {
        (0..self.n()).map(|x| self.degree(x)).min().unwrap_or(0)
    }

    /// Empirical mean degree `2|E| / n`.
    pub fn mean_degree(&self) -> f64 {
        if self.n() == 0 {
            0.0
        } else {
            self.neighbors.len() as f64 / self.n() as f64
        }
    }

    pub fn has_edge(&self, x: usize, y: usize) -> bool {
        self.neighbors(x).binary_search(&y).is_ok()
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n()).flat_map(move |u| {
            self.neighbors(u)
                .iter()
                .copied()
                .filter(move |&v| v > u)
                .map(move |v| (u, v))
        })
    }

    pub fn component_id(&self) -> &[usize] {
        &self.component_id
    }

    pub fn component_sizes(&self) -> &[usize] {
        &self.component_sizes
    }

    pub fn component_count(&self) -> usize {
        self.component_sizes.len()
    }

    /// `out = L v` where `L = D − A`, without materialising `L`.
    pub fn laplacian_apply(&self, v: &[f64]) -> Result<Vec<f64>> {
        if v.len() != self.n() {
            return Err(Error::LengthMismatch {
                expected: self.n(),
                got: v.len(),
            });
        }
        let mut out = vec![0.0; v.len()];
        self.laplacian_apply_into(v, &mut out);
        Ok(out)
    }

    /// Unchecked variant of [`Graph::laplacian_apply`] writing into `out`.
    pub fn laplacian_apply_into(&self, v: &[f64], out: &mut [f64]) {
        debug_assert_eq!(v.len(), self.n());
        debug_assert_eq!(out.len(), self.n());
        for (x, o) in out.iter_mut().enumerate() {
            let nb = self.neighbors(x);
            let s: f64 = nb.iter().map(|&y| v[y]).sum();
            *o = nb.len() as f64 * v[x] - s;
        }
    }

    /// Spheres `S_0(x), …, S_r(x)` of graph distance exactly `i` from `x`.
    ///
    /// Always returns `r + 1` sets, trailing ones empty when the ball stops
    /// growing. Each set is sorted ascending.
    pub fn ball(&self, x: usize, r: usize) -> Vec<Vec<usize>> {
        assert!(x < self.n(), "vertex {x} out of range");
        let mut seen = vec![false; self.n()];
        seen[x] = true;
        let mut spheres = vec![vec![x]];
        for _ in 0..r {
            let mut next = Vec::new();
            for &u in spheres.last().unwrap() {
                for &w in self.neighbors(u) {
                    if !seen[w] {
                        seen[w] = true;
                        next.push(w);
                    }
                }
            }
            next.sort_unstable();
            spheres.push(next);
        }
        spheres
    }

    /// Dense Laplacian, row-major. Only sensible for small graphs.
    pub fn dense_laplacian(&self) -> Vec<f64> {
        let n = self.n();
        let mut m = vec![0.0; n * n];
        for x in 0..n {
            m[x * n + x] = self.degree(x) as f64;
            for &y in self.neighbors(x) {
                m[x * n + y] = -1.0;
            }
        }
        m
    }

    /// Relabels vertices: vertex `x` becomes `perm[x]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.n() {
            return Err(Error::LengthMismatch {
                expected: self.n(),
                got: perm.len(),
            });
        }
        let edges: Vec<_> = self.edges().map(|(u, v)| (perm[u], perm[v])).collect();
        Self::from_edges(self.n(), &edges)
    }
}

/// Connected components of `g`: a label per vertex in `0..k` and the sizes.
///
/// Labels are assigned in order of each component's smallest vertex.
pub fn connected_components(g: &Graph) -> (Vec<usize>, Vec<usize>) {
    (g.component_id.clone(), g.component_sizes.clone())
}

fn label_components(n: usize, offsets: &[usize], neighbors: &[usize]) -> (Vec<usize>, Vec<usize>) {
    const UNSEEN: usize = usize::MAX;
    let mut id = vec![UNSEEN; n];
    let mut sizes = Vec::new();
    let mut queue = VecDeque::new();
    for s in 0..n {
        if id[s] != UNSEEN {
            continue;
        }
        let label = sizes.len();
        id[s] = label;
        queue.push_back(s);
        let mut size = 0;
        while let Some(u) = queue.pop_front() {
            size += 1;
            for &w in &neighbors[offsets[u]..offsets[u + 1]] {
                if id[w] == UNSEEN {
                    id[w] = label;
                    queue.push_back(w);
                }
            }
        }
        sizes.push(size);
    }
    (id, sizes)
}
