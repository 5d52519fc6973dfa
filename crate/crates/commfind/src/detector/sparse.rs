//! Sparse communities via the common-neighbor square transform.
//!
//! When pair probabilities inside a community are only `b/sqrt(k)`, the
//! community is far too thin for fraction thresholds, but any two of its
//! members still share about `b^2` length-2 paths while outsiders share far
//! fewer. Thresholding common-neighbor counts at `ceil(b^2/2)` therefore
//! produces a graph whose communities are dense: the pipeline squares the
//! graph and runs the robust dense detector with the fixed parameter tuple
//! `(alpha, delta, eps, gamma) = (0.9, 1, 0.6, 1/(3d))`.

use crate::detector::{robust, AlgorithmKind, DetectionResult};
use crate::graph::{sorted_intersection_count, Graph};
use crate::params::DetectorParams;
use crate::thresh::ceil_count;
use crate::Result;

/// Graph on the same nodes whose edges mark pairs with at least
/// `ceil(b^2 / 2)` common neighbors.
pub fn square_transform(g: &Graph, b: f64) -> Graph {
    let threshold = ceil_count(b * b / 2.0).max(1);
    let n = g.node_count();
    let mut edges = Vec::new();
    for u in 0..n as u32 {
        for v in (u + 1)..n as u32 {
            if sorted_intersection_count(g.neighbors(u), g.neighbors(v)) >= threshold {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, &edges).expect("thresholded pairs are valid edges")
}

/// Square the graph, then run the robust dense detector on the result with
/// the sparse-model parameter tuple. Candidates come back against the
/// original node ids (the transform preserves them).
pub fn sparse_pipeline(g: &Graph, params: &DetectorParams, seed: u64) -> Result<DetectionResult> {
    run(g, params, seed, 1)
}

pub(crate) fn run(
    g: &Graph,
    params: &DetectorParams,
    seed: u64,
    threads: usize,
) -> Result<DetectionResult> {
    let b = params.req_f64("b", params.b)?;
    let d = params.req_usize("d", params.d.map(|d| d as usize))?;
    params.req_usize("k", params.k)?;
    let squared = square_transform(g, b);
    let inner = DetectorParams {
        alpha: Some(0.9),
        delta: Some(1.0),
        epsilon: Some(0.6),
        gamma: Some(1.0 / (3.0 * d as f64)),
        ..params.clone()
    };
    let mut result =
        robust::run_tagged(&squared, &inner, seed, threads, false, AlgorithmKind::Sparse)?;
    result.params = params.clone();
    result.resolved.push(("square_threshold".to_string(), ceil_count(b * b / 2.0).max(1) as f64));
    Ok(result)
}
