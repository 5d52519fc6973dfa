//! The detection algorithms and their shared plumbing.
//!
//! Each algorithm repeatedly samples inside a node neighborhood (or an
//! enumerated seed set's neighborhood), extends what it finds to a candidate
//! community, certifies the candidate, and emits it. Emitted candidates are
//! deduplicated by exact member-set equality and reported in canonical
//! order, so a fixed `(graph, params, seed)` triple yields an identical
//! [`DetectionResult`] regardless of worker count or scheduling: every trial
//! owns a derived random stream and the merge is order-insensitive.

mod any_size;
mod clique;
mod dense;
mod engine;
mod robust;
mod sparse;

pub use any_size::{any_size_clique_find, any_size_dense_find};
pub use clique::{clique_find, gap_relaxed_clique_find};
pub use dense::dense_find;
pub use robust::{gap_relaxed_dense_find, robust_dense_find};
pub use sparse::{sparse_pipeline, square_transform};

use crate::error::Error;
use crate::graph::{Graph, NodeSet};
use crate::params::DetectorParams;
use crate::Result;
use serde::Serialize;

/// Which detector produced a candidate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum AlgorithmKind {
    Clique,
    Dense,
    Robust,
    AnySizeDense,
    AnySizeClique,
    GapClique,
    GapDense,
    Sparse,
}

impl AlgorithmKind {
    pub fn parse(name: &str) -> Result<Self> {
        Ok(match name {
            "clique" => AlgorithmKind::Clique,
            "dense" => AlgorithmKind::Dense,
            "robust" => AlgorithmKind::Robust,
            "anysize-dense" => AlgorithmKind::AnySizeDense,
            "anysize-clique" => AlgorithmKind::AnySizeClique,
            "gap-clique" => AlgorithmKind::GapClique,
            "gap-dense" => AlgorithmKind::GapDense,
            "sparse" => AlgorithmKind::Sparse,
            other => {
                return Err(Error::InvalidParams(format!("unknown algorithm `{other}`")))
            }
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            AlgorithmKind::Clique => "clique",
            AlgorithmKind::Dense => "dense",
            AlgorithmKind::Robust => "robust",
            AlgorithmKind::AnySizeDense => "anysize-dense",
            AlgorithmKind::AnySizeClique => "anysize-clique",
            AlgorithmKind::GapClique => "gap-clique",
            AlgorithmKind::GapDense => "gap-dense",
            AlgorithmKind::Sparse => "sparse",
        }
    }
}

/// One emitted community with its provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct CandidateSet {
    pub members: NodeSet,
    pub algorithm: AlgorithmKind,
    pub starting_node: Option<u32>,
    pub seed_set: Option<NodeSet>,
    /// Density level the emitting check used, where the algorithm has one.
    pub alpha_used: Option<f64>,
    pub trial_index: u64,
}

/// Counts of sampling trials across a run.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct TrialStats {
    pub trials_run: u64,
    /// Trials abandoned by the three-times-expectation guard or because a
    /// neighborhood was too small to seed.
    pub trials_skipped: u64,
}

/// Deduplicated candidates plus run metadata.
#[derive(Debug, Clone)]
pub struct DetectionResult {
    pub algorithm: AlgorithmKind,
    pub seed: u64,
    pub params: DetectorParams,
    /// Effective values of the formula-driven quantities, for the record.
    pub resolved: Vec<(String, f64)>,
    pub candidates: Vec<CandidateSet>,
    pub stats: TrialStats,
    pub wall_time_ms: u64,
}

impl DetectionResult {
    pub fn member_sets(&self) -> Vec<NodeSet> {
        self.candidates.iter().map(|c| c.members.clone()).collect()
    }
}

/// Sort candidates lexicographically by member list and drop exact
/// duplicates, keeping the earliest trial. Order of the input is
/// irrelevant, which is what makes parallel schedules invisible.
pub(crate) fn merge_candidates(mut all: Vec<CandidateSet>) -> Vec<CandidateSet> {
    all.sort_by(|a, b| {
        a.members
            .cmp(&b.members)
            .then(a.trial_index.cmp(&b.trial_index))
    });
    all.dedup_by(|later, first| later.members == first.members);
    all
}

/// Audit record for one candidate, recomputed from scratch.
#[derive(Debug, Clone, Serialize)]
pub struct Certificate {
    pub is_clique: bool,
    /// Minimum over members of `|G(v) n C| / |C|`.
    pub min_internal_density: f64,
    /// Maximum over outside nodes of `|G(w) n C| / |C|`.
    pub max_outside_fraction: f64,
    /// `(alpha - eps/8, alpha - 7eps/8)` verdict, when an alpha applies.
    pub alpha_eps_pass: Option<bool>,
}

/// Re-run the final checks for a candidate independently of the detector
/// that emitted it.
pub fn certify_candidate(
    g: &Graph,
    candidate: &CandidateSet,
    params: &DetectorParams,
) -> Certificate {
    let c = &candidate.members;
    let is_clique = !c.is_empty() && g.is_clique(c);
    let min_internal_density = c
        .iter()
        .map(|v| g.open_adjacency_count(v, c) as f64 / c.len() as f64)
        .fold(f64::INFINITY, f64::min)
        .min(1.0);
    let max_outside_fraction = (0..g.node_count() as u32)
        .filter(|&w| !c.contains(w))
        .map(|w| g.open_adjacency_count(w, c) as f64 / c.len() as f64)
        .fold(0.0, f64::max);
    let alpha = candidate.alpha_used.or(params.alpha);
    let alpha_eps_pass = match (alpha, params.epsilon) {
        (Some(alpha), Some(eps)) if !c.is_empty() => Some(crate::graph::alpha_eps_holds(
            g,
            c,
            alpha - eps / 8.0,
            alpha - 7.0 * eps / 8.0,
        )),
        _ => None,
    };
    Certificate { is_clique, min_internal_density, max_outside_fraction, alpha_eps_pass }
}

/// Run any detector by tag.
pub fn detect(
    algorithm: AlgorithmKind,
    g: &Graph,
    params: &DetectorParams,
    seed: u64,
    threads: usize,
) -> Result<DetectionResult> {
    let started = std::time::Instant::now();
    let mut result = match algorithm {
        AlgorithmKind::Clique => clique::run(g, params, seed, threads, false),
        AlgorithmKind::GapClique => clique::run(g, params, seed, threads, true),
        AlgorithmKind::Dense => dense::run(g, params, seed, threads),
        AlgorithmKind::Robust => robust::run(g, params, seed, threads, false),
        AlgorithmKind::GapDense => robust::run(g, params, seed, threads, true),
        AlgorithmKind::AnySizeDense => any_size::run_dense(g, params, threads, seed),
        AlgorithmKind::AnySizeClique => any_size::run_clique(g, params, seed, threads),
        AlgorithmKind::Sparse => sparse::run(g, params, seed, threads),
    }?;
    result.wall_time_ms = started.elapsed().as_millis() as u64;
    Ok(result)
}
