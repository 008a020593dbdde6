use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::Graph;
use crate::{Error, Result};

/// Identifies one reproducible random stream.
///
/// The generator is ChaCha8 from `rand_chacha` 0.3.1 (pinned in the
/// manifest). The key is derived from `master_seed` through
/// `SeedableRng::seed_from_u64` and `stream_index` selects the ChaCha stream,
/// so distinct trials never share keystream and can run in any order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RngSeed {
    pub master_seed: u64,
    pub stream_index: u64,
}

impl RngSeed {
    pub fn new(master_seed: u64, stream_index: u64) -> Self {
        Self {
            master_seed,
            stream_index,
        }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.master_seed);
        rng.set_stream(self.stream_index);
        rng
    }
}

/// Samples `G(n, p)` with `p = d / n`.
///
/// Pairs `(u, v)`, `u < v`, are visited in the linear order
/// `(0,1), (0,2), (1,2), (0,3), …` and the gap to the next present pair is
/// drawn from a geometric law, so the cost is `O(n + |E|)`. `d = n` gives the
/// complete graph.
pub fn generate_er(n: usize, d: f64, seed: RngSeed) -> Result<Graph> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("need n >= 2, got {n}")));
    }
    if !(d > 0.0 && d <= n as f64) {
        return Err(Error::InvalidParameter(format!(
            "mean degree must satisfy 0 < d <= n, got d = {d} with n = {n}"
        )));
    }
    let p = d / n as f64;
    let mut edges = Vec::new();
    if p >= 1.0 {
        for v in 1..n {
            edges.extend((0..v).map(|u| (u, v)));
        }
        return Graph::from_edges(n, &edges);
    }

    let mut rng = seed.rng();
    let log_q = (-p).ln_1p();
    let n = n as i64;
    let mut v: i64 = 1;
    let mut w: i64 = -1;
    while v < n {
        // 1 - U lies in (0, 1], so the logarithm is finite.
        let u: f64 = 1.0 - rng.gen::<f64>();
        let skip = (u.ln() / log_q).floor();
        let skip = if skip >= i64::MAX as f64 { i64::MAX } else { skip as i64 };
        w = w.saturating_add(1).saturating_add(skip);
        while w >= v && v < n {
            w -= v;
            v += 1;
        }
        if v < n {
            edges.push((w as usize, v as usize));
        }
    }
    Graph::from_edges(n as usize, &edges)
}
