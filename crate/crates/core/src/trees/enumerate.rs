//! Free trees up to isomorphism.
//!
//! A tree is identified by its centre-rooted AHU code: root the tree at each
//! of its (one or two) centres, encode every subtree as `(` + sorted child
//! codes + `)`, and keep the smaller string. Two trees are isomorphic iff
//! their codes are equal.

use std::collections::BTreeMap;

use super::anchored::check_tree;
use crate::{Error, Result};

pub const MAX_ENUMERATION_SIZE: usize = 10;

/// A representative of one isomorphism class, labelled in preorder of its
/// canonical code (vertex 0 is a centre).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct FreeTree {
    pub code: String,
    pub edges: Vec<(usize, usize)>,
}

impl FreeTree {
    pub fn size(&self) -> usize {
        self.edges.len() + 1
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.size()];
        for &(u, v) in &self.edges {
            deg[u] += 1;
            deg[v] += 1;
        }
        deg
    }

    pub fn max_degree(&self) -> usize {
        self.degrees().into_iter().max().unwrap_or(0)
    }

    pub fn is_line(&self) -> bool {
        self.max_degree() <= 2
    }
}

/// One tree per isomorphism class on `t` vertices, sorted by code.
///
/// Classes of size `s` are obtained by hanging a leaf on every vertex of
/// every class of size `s − 1` and deduplicating on the canonical code.
pub fn enumerate_trees(t: usize) -> Result<Vec<FreeTree>> {
    if !(1..=MAX_ENUMERATION_SIZE).contains(&t) {
        return Err(Error::InvalidParameter(format!(
            "tree size must be in 1..={MAX_ENUMERATION_SIZE}, got {t}"
        )));
    }
    let mut level = vec![FreeTree::from_code("()")];
    for s in 2..=t {
        let mut next = BTreeMap::new();
        for tree in &level {
            for x in 0..s - 1 {
                let mut edges = tree.edges.clone();
                edges.push((x, s - 1));
                let code = canonical_code(s, &edges)?;
                next.entry(code).or_insert(());
            }
        }
        level = next.into_keys().map(|c| FreeTree::from_code(&c)).collect();
    }
    Ok(level)
}

impl FreeTree {
    fn from_code(code: &str) -> Self {
        let mut edges = Vec::new();
        let mut stack: Vec<usize> = Vec::new();
        let mut next = 0;
        for ch in code.chars() {
            match ch {
                '(' => {
                    if let Some(&p) = stack.last() {
                        edges.push((p, next));
                    }
                    stack.push(next);
                    next += 1;
                }
                ')' => {
                    stack.pop();
                }
                _ => unreachable!("canonical codes only contain parentheses"),
            }
        }
        Self {
            code: code.to_owned(),
            edges,
        }
    }
}

/// Centre-rooted AHU code of the tree `edges` on `0..t`.
pub fn canonical_code(t: usize, edges: &[(usize, usize)]) -> Result<String> {
    check_tree(t, edges)?;
    let mut adj = vec![Vec::new(); t];
    for &(u, v) in edges {
        adj[u].push(v);
        adj[v].push(u);
    }
    Ok(centres(&adj)
        .into_iter()
        .map(|c| rooted_code(&adj, c, usize::MAX))
        .min()
        .expect("a tree has at least one centre"))
}

fn centres(adj: &[Vec<usize>]) -> Vec<usize> {
    let t = adj.len();
    if t <= 2 {
        return (0..t).collect();
    }
    let mut deg: Vec<usize> = adj.iter().map(Vec::len).collect();
    let mut leaves: Vec<usize> = (0..t).filter(|&x| deg[x] == 1).collect();
    let mut remaining = t;
    while remaining > 2 {
        remaining -= leaves.len();
        let mut next = Vec::new();
        for &leaf in &leaves {
            for &w in &adj[leaf] {
                deg[w] -= 1;
                if deg[w] == 1 {
                    next.push(w);
                }
            }
        }
        leaves = next;
    }
    leaves.sort_unstable();
    leaves
}

fn rooted_code(adj: &[Vec<usize>], u: usize, parent: usize) -> String {
    let mut children: Vec<String> = adj[u]
        .iter()
        .filter(|&&w| w != parent)
        .map(|&w| rooted_code(adj, w, u))
        .collect();
    children.sort_unstable();
    let mut s = String::with_capacity(2 + children.iter().map(String::len).sum::<usize>());
    s.push('(');
    children.iter().for_each(|c| s.push_str(c));
    s.push(')');
    s
}
