//! Spectral approximation algorithms for Max Cut and Max CutGain.
//!
//! Everything here runs on eigenvector computations alone — no semidefinite
//! programming. The main entry points are:
//!
//! * [`bipartite::spectral_partition`] — find a set `S` and a bipartition
//!   `(L, R)` of `S` such that almost every edge incident on `S` crosses
//!   between `L` and `R` (a Cheeger-type rounding for the smallest
//!   eigenvalue of the normalized adjacency matrix).
//! * [`maxcut::recursive_spectral_cut`] — iterate the partitioning step,
//!   peel off `(L, R)`, and recurse on the untouched subgraph; falls back
//!   to a greedy cut when the spectral step is weak.
//! * [`certify::best_certificate`] — a feasible dual solution of the
//!   Goemans–Williamson relaxation certifying an upper bound on the
//!   optimum, so each run reports a per-instance approximation ratio.
//! * [`gain::four_threshold_spectral_cut`] — derandomized threshold
//!   rounding for Max CutGain on graphs with (possibly negative) weights.
//! * [`sparsify::sparsify`] and [`reduce::reduce`] — cut-preserving edge
//!   sampling and the bounded-degree reduction, so running times depend on
//!   the number of vertices rather than edges.
//!
//! Exact brute-force oracles (`bipartite::beta_exact`, `gain::gamma_exact`)
//! and a small-graph corpus generator ([`generators`]) back the test suite.

pub mod bipartite;
pub mod certify;
pub mod dense;
pub mod eigen;
mod enumerate;
pub mod gain;
pub mod generators;
pub mod graph;
pub mod maxcut;
pub mod reduce;
pub mod sparsify;

pub use graph::{Cut, GraphFormat, PartitionStats, SignedVector, WeightMode, WeightedGraph};

use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("self-loop at line {line}")]
    SelfLoop { line: usize },

    #[error("negative weight at line {line} (not allowed in max-cut mode)")]
    NegativeWeight { line: usize },

    #[error("graph has no edges")]
    NoEdges,

    #[error("vector is zero (or zero on every vertex of positive degree)")]
    ZeroVector,

    #[error("zero denominator: sign vector has empty support")]
    ZeroDenominator,

    #[error("n = {n} too large for exact enumeration (limit {limit})")]
    TooLarge { n: usize, limit: usize },

    #[error("graph has no positive gain certificate (smallest eigenvalue is non-negative)")]
    NoGainCertificate,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
