//! Structural objects inside a sampled graph: the low-degree set, the forest
//! it induces, anchor multisets and pendant lines.

use std::collections::VecDeque;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::graph::Graph;
use crate::trees::Anchor;
use crate::{Error, Result};

/// Grid step used by [`choose_tau`].
pub const TAU_GRID_STEP: f64 = 1e-4;

/// Margin used for the default low-degree threshold.
pub const DEFAULT_EPSILON: f64 = 0.2;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LowDegreeScan {
    pub tau: f64,
    /// `{x : deg(x) ≤ τd}`, ascending.
    pub vset: Vec<usize>,
    pub is_forest: bool,
    /// Connected components of the induced subgraph when it is a forest,
    /// ordered by smallest vertex; empty otherwise.
    pub trees: Vec<Vec<usize>>,
}

impl LowDegreeScan {
    pub fn max_tree_size(&self) -> usize {
        self.trees.iter().map(Vec::len).max().unwrap_or(0)
    }
}

pub fn low_degree_scan(g: &Graph, tau: f64, d: f64) -> LowDegreeScan {
    let cutoff = tau * d;
    let mut inside = vec![false; g.n()];
    let vset: Vec<usize> = (0..g.n()).filter(|&x| g.degree(x) as f64 <= cutoff).collect();
    for &x in &vset {
        inside[x] = true;
    }

    let mut comp = vec![usize::MAX; g.n()];
    let mut parts: Vec<Vec<usize>> = Vec::new();
    let mut induced_edges = 0usize;
    for &s in &vset {
        if comp[s] != usize::MAX {
            continue;
        }
        let label = parts.len();
        comp[s] = label;
        let mut part = vec![s];
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &w in g.neighbors(u) {
                if !inside[w] {
                    continue;
                }
                if w > u {
                    induced_edges += 1;
                }
                if comp[w] == usize::MAX {
                    comp[w] = label;
                    part.push(w);
                    queue.push_back(w);
                }
            }
        }
        part.sort_unstable();
        parts.push(part);
    }
    // A graph is a forest iff |E| = |V| − #components.
    let is_forest = induced_edges + parts.len() == vset.len();
    LowDegreeScan {
        tau,
        vset,
        is_forest,
        trees: if is_forest { parts } else { Vec::new() },
    }
}

/// Largest `τ` on the grid `k · 10⁻⁴` with `−τ ln τ + τ ≤ ε/2`.
///
/// `τ ↦ τ(1 − ln τ)` is increasing on `(0, 1)`, so a binary search over the
/// grid index suffices.
pub fn choose_tau(epsilon: f64) -> Result<f64> {
    if !(epsilon > 0.0 && epsilon < 0.25) {
        return Err(Error::InvalidParameter(format!(
            "epsilon must lie in (0, 1/4), got {epsilon}"
        )));
    }
    let steps = (1.0 / TAU_GRID_STEP).round() as u64;
    let ok = |k: u64| {
        let tau = k as f64 * TAU_GRID_STEP;
        tau * (1.0 - tau.ln()) <= epsilon / 2.0
    };
    if !ok(1) {
        return Err(Error::InvalidParameter(format!(
            "no grid point satisfies the threshold condition for epsilon = {epsilon}"
        )));
    }
    let (mut lo, mut hi) = (1u64, steps - 1);
    if ok(hi) {
        return Ok(hi as f64 * TAU_GRID_STEP);
    }
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        if ok(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo as f64 * TAU_GRID_STEP)
}

/// Outgoing degree of each vertex of `t_set`: the number of its edges that
/// leave the set. Vertices with no outgoing edge are omitted.
pub fn anchor_multiset(g: &Graph, t_set: &[usize]) -> Anchor {
    let mut member = vec![false; g.n()];
    for &x in t_set {
        member[x] = true;
    }
    t_set
        .iter()
        .filter_map(|&x| {
            let out = g.neighbors(x).iter().filter(|&&y| !member[y]).count() as u32;
            (out > 0).then_some((x, out))
        })
        .collect()
}

/// A set `y_1 … y_t` inducing a path and joined to the rest of the graph by
/// the single edge `(y_t, anchor)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LineDetection {
    /// Leaf first.
    pub path: Vec<usize>,
    pub anchor: usize,
    pub anchor_degree: usize,
    pub s2_size: usize,
}

/// All pendant lines of exactly `t` vertices.
///
/// Walks from every degree-1 vertex through degree-2 vertices; a walk of `t`
/// vertices qualifies when the set has exactly one outgoing edge, leaving
/// from the last vertex. Sorted by smallest vertex on the path.
pub fn find_pendant_lines(g: &Graph, t: usize) -> Vec<LineDetection> {
    assert!(t >= 1, "line length must be at least 1");
    let mut found = Vec::new();
    for leaf in (0..g.n()).filter(|&x| g.degree(x) == 1) {
        let mut path = vec![leaf];
        let mut prev = usize::MAX;
        let mut cur = leaf;
        let mut ok = true;
        while path.len() < t {
            let next = *g
                .neighbors(cur)
                .iter()
                .find(|&&w| w != prev)
                .expect("degree >= 1");
            if g.degree(next) != 2 {
                ok = false;
                break;
            }
            prev = cur;
            cur = next;
            path.push(cur);
        }
        if !ok {
            continue;
        }
        let Some(anchor) = g.neighbors(cur).iter().copied().find(|&w| w != prev) else {
            continue;
        };
        if !single_exit(g, &path, anchor) {
            continue;
        }
        found.push(LineDetection {
            anchor_degree: g.degree(anchor),
            s2_size: g.ball(anchor, 2)[2].len(),
            path,
            anchor,
        });
    }
    found.sort_by_key(|l| *l.path.iter().min().unwrap());
    found
}

/// Explicit recount: `t − 1` internal edges, consecutive along the path, and
/// one outgoing edge `(y_t, anchor)`.
fn single_exit(g: &Graph, path: &[usize], anchor: usize) -> bool {
    let mut internal = 0;
    let mut outgoing = Vec::new();
    for &x in path {
        for &y in g.neighbors(x) {
            if path.contains(&y) {
                internal += 1;
            } else {
                outgoing.push((x, y));
            }
        }
    }
    internal / 2 == path.len() - 1
        && path.windows(2).all(|w| g.has_edge(w[0], w[1]))
        && outgoing == [(*path.last().unwrap(), anchor)]
}

/// `n · d^t · e^{−t d}`: leading-order expected number of pendant `t`-lines.
pub fn expected_line_count(n: usize, d: f64, t: usize) -> f64 {
    let t = t as f64;
    n as f64 * (t * (d.ln() - d)).exp()
}

/// One JSON object per line.
pub fn write_detections_jsonl<W: Write>(lines: &[LineDetection], mut w: W) -> Result<()> {
    for l in lines {
        serde_json::to_writer(&mut w, l)?;
        w.write_all(b"\n")?;
    }
    w.flush()?;
    Ok(())
}
