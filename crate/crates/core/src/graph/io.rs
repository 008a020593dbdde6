//! Plain-text edge lists.
//!
//! ```text
//! n m
//! u v      (m lines, 0-indexed, u < v)
//! ```

use std::io::{BufRead, Write};

use super::Graph;
use crate::{Error, Result};

pub fn write_edge_list<W: Write>(g: &Graph, mut w: W) -> Result<()> {
    writeln!(w, "{} {}", g.n(), g.edge_count())?;
    for (u, v) in g.edges() {
        writeln!(w, "{u} {v}")?;
    }
    w.flush()?;
    Ok(())
}

/// Reads an edge list. Pairs written as `v u` are accepted and normalised;
/// duplicates, self-loops, out-of-range vertices and a wrong edge count are
/// errors. Blank lines and lines starting with `#` are skipped.
pub fn read_edge_list<R: BufRead>(r: R) -> Result<Graph> {
    let mut header: Option<(usize, usize)> = None;
    let mut edges = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for (idx, line) in r.lines().enumerate() {
        let line = line?;
        let lineno = idx + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let (a, b) = parse_pair(trimmed, lineno)?;
        let Some((n, _)) = header else {
            header = Some((a, b));
            continue;
        };
        if a >= n || b >= n {
            return Err(parse_err(lineno, format!("vertex out of range 0..{n}")));
        }
        if a == b {
            return Err(parse_err(lineno, format!("self-loop at {a}")));
        }
        let pair = (a.min(b), a.max(b));
        if !seen.insert(pair) {
            return Err(parse_err(lineno, format!("duplicate edge {} {}", pair.0, pair.1)));
        }
        edges.push(pair);
    }
    let (n, m) = header.ok_or_else(|| parse_err(0, "missing `n m` header".into()))?;
    if edges.len() != m {
        return Err(parse_err(
            0,
            format!("header announces {m} edges, found {}", edges.len()),
        ));
    }
    Graph::from_edges(n, &edges)
}

fn parse_pair(line: &str, lineno: usize) -> Result<(usize, usize)> {
    let mut it = line.split_whitespace();
    let mut next = || -> Result<usize> {
        let tok = it
            .next()
            .ok_or_else(|| parse_err(lineno, "expected two integers".into()))?;
        tok.parse()
            .map_err(|_| parse_err(lineno, format!("not a vertex index: {tok:?}")))
    };
    let a = next()?;
    let b = next()?;
    if it.next().is_some() {
        return Err(parse_err(lineno, "trailing tokens".into()));
    }
    Ok((a, b))
}

fn parse_err(line: usize, reason: String) -> Error {
    Error::Parse { line, reason }
}
