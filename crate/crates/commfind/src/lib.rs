//! Planted overlapping-community networks and sampling-based recovery.
//!
//! This crate generates networks with planted, possibly overlapping
//! communities (cliques, dense subgraphs, heterogeneous-affinity subgraphs,
//! and sparse communities), and recovers them with a family of detectors
//! that sample inside node neighborhoods and certify every candidate before
//! emitting it. Brute-force oracles, an assumption validator, and a
//! ground-truth evaluator make the whole pipeline checkable end to end.
//!
//! The main entry points:
//!
//! - [`graph`]: immutable adjacency-set graph, node sets, the
//!   `(alpha, alpha_out)`-set certifier, and seeded sampling primitives.
//! - [`generator`]: planted-instance generation with full ground truth.
//! - [`detector`]: the detection algorithms (`clique_find`, `dense_find`,
//!   `robust_dense_find`, `any_size_dense_find`, `any_size_clique_find`,
//!   the two gap-relaxed variants, and the `sparse_pipeline` built on the
//!   common-neighbor `square_transform`).
//! - [`validator`]: per-assumption checks of a (graph, truth, params) triple.
//! - [`oracle`]: exhaustive baselines for small instances.
//! - [`evaluation`]: ground-truth matching and seeded recovery-rate runs.
//! - [`io`] and [`cli`]: the text file formats and the command-line surface.
//!
//! Every randomized component is driven by [`rng::RngStream`], so a fixed
//! `(params, seed)` pair reproduces results bit for bit, independent of
//! worker count.
//!
//! See the `examples/` directory for one runnable example per capability.

pub mod cli;
pub mod detector;
pub mod error;
pub mod evaluation;
pub mod generator;
pub mod graph;
pub mod io;
pub mod oracle;
pub mod params;
pub mod rng;
pub mod validator;

mod thresh;

pub use error::Error;
pub use graph::{Graph, NodeSet};
pub use rng::RngStream;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
