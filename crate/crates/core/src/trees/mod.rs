//! Exact spectra of small anchored trees.
//!
//! Everything here works with dense matrices of dimension at most a few
//! dozen, except when [`sym_eigen`] is reused as a dense oracle for whole
//! graphs.

mod anchored;
mod dense;
mod enumerate;
mod oracle;
mod second_order;

pub use anchored::{
    line_gap, line_spectrum_closed_form, tree_adjacency_norm, weighted_laplacian, Anchor,
    AnchoredTree,
};
pub use dense::{sym_eigen, sym_eigenvalues, DenseSymMatrix, SpectrumResult, JACOBI_MAX_DIM};
pub use enumerate::{canonical_code, enumerate_trees, FreeTree, MAX_ENUMERATION_SIZE};
pub use oracle::{
    format_anchor, minimality_oracle, minimality_oracle_with_threshold, OracleReport, OracleRow,
    Violation, ViolationKind, EQUALITY_TOL, MAX_ORACLE_SIZE, ZERO_TOL_PER_DIM,
};
pub use second_order::{rayleigh_refine, second_order_matrix};
