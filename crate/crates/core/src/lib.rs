//! Spectral laboratory for the Laplacian of sparse Erdős–Rényi graphs.
//!
//! The crate is organised around the objects that control the smallest
//! non-zero Laplacian eigenvalue of a sparse random graph:
//!
//! - [`graph`]: reproducible sampling of `G(n, d/n)`, CSR storage, components,
//!   BFS spheres and the matrix-free Laplacian action.
//! - [`scan`]: the low-degree set, anchor multisets and pendant lines hanging
//!   off the rest of the graph by a single edge.
//! - [`trees`]: exact spectra of anchored tree Laplacians, free-tree
//!   enumeration, the line-minimality oracle and the second-order matrix.
//! - [`gap`]: `λ₂` of large sparse graphs through a kernel-deflated Lanczos
//!   iteration, with a dense fallback.
//! - [`experiments`]: closed-form predictions, Monte-Carlo sweeps and the
//!   verification runs behind the `ergap` command-line tool.
//!
//! ```
//! use ergap::graph::{generate_er, RngSeed};
//! use ergap::gap::{lambda2, SolverOptions};
//!
//! let g = generate_er(300, 8.0, RngSeed::new(7, 0)).unwrap();
//! let report = lambda2(&g, &SolverOptions::default()).unwrap();
//! assert_eq!(report.kernel_dim, g.component_count());
//! assert!(report.lambda2 > 0.0);
//! ```

pub mod error;
pub mod experiments;
pub mod gap;
pub mod graph;
pub mod scan;
pub mod trees;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/sampling.md")]
    mod sampling {}
    #[doc = include_str!("../../../book/src/spectral-gap.md")]
    mod spectral_gap {}
    #[doc = include_str!("../../../book/src/pendant-lines.md")]
    mod pendant_lines {}
    #[doc = include_str!("../../../book/src/anchored-trees.md")]
    mod anchored_trees {}
    #[doc = include_str!("../../../book/src/second-order.md")]
    mod second_order {}
    #[doc = include_str!("../../../book/src/experiments.md")]
    mod experiments {}
}
