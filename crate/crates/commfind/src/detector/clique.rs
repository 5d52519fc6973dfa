//! Similar-size clique detection and its gap-relaxed variant.
//!
//! For each sampled starting node `v`, subsample the neighborhood, walk the
//! cliques `U` of the sample (all of them, or only maximal ones with the
//! adjusted sampling probability), collect the nodes adjacent to all of
//! `U`, and either degree-filter and certify that set (strict mode) or trim
//! it by density until every survivor clears `1 - eps` (relaxed mode).

use crate::detector::engine::{
    closed_neighborhood, common_neighbors_in_scope, draw_starting_nodes,
    for_each_clique_with_common, guarded_sample, maximal_cliques_capped, outside_gap_holds,
    run_trials, PipelineCache, TrialOutput,
};
use crate::detector::{AlgorithmKind, CandidateSet, DetectionResult, TrialStats};
use crate::error::Error;
use crate::graph::{Graph, NodeSet};
use crate::params::DetectorParams;
use crate::rng::RngStream;
use crate::thresh::{at_least_fraction, ceil_count, floor_count};
use crate::Result;

/// Strict similar-size clique detection.
pub fn clique_find(g: &Graph, params: &DetectorParams, seed: u64) -> Result<DetectionResult> {
    run(g, params, seed, 1, false)
}

/// Gap-relaxed variant: substitutes the derived `epsilon'` into the strict
/// machinery and emits density-trimmed neighborhood cores instead of
/// degree-filtered cliques.
pub fn gap_relaxed_clique_find(
    g: &Graph,
    params: &DetectorParams,
    seed: u64,
) -> Result<DetectionResult> {
    run(g, params, seed, 1, true)
}

pub(crate) fn run(
    g: &Graph,
    params: &DetectorParams,
    seed: u64,
    threads: usize,
    relaxed: bool,
) -> Result<DetectionResult> {
    let algorithm = if relaxed { AlgorithmKind::GapClique } else { AlgorithmKind::Clique };
    let k = params.req_usize("k", params.k)?;
    let d = params.req_usize("d", params.d.map(|d| d as usize))? as f64;
    let delta = params.req_f64("delta", params.delta)?;
    let epsilon = params.req_f64("epsilon", params.epsilon)?;
    let gamma = params.req_f64("gamma", params.gamma)?;
    if delta * (k as f64) < 2.0 {
        return Err(Error::InvalidParams(format!(
            "clique detection needs delta * k >= 2, got {}",
            delta * k as f64
        )));
    }
    if !(0.0 < epsilon && epsilon < 1.0) {
        return Err(Error::InvalidParams(format!("epsilon must be in (0, 1), got {epsilon}")));
    }

    // Relaxed mode runs the strict machinery at eps'.
    let eps_run = if relaxed { params.epsilon_prime_clique()? } else { epsilon };

    let p = if params.use_maximal_cliques {
        let inner = d / (eps_run * delta * gamma);
        if inner <= 1.0 {
            return Err(Error::InvalidParams(format!(
                "maximal-clique sampling probability ln(24 d ln(d/(eps delta gamma)) / \
                 (eps delta gamma)) / (delta eps k) needs d/(eps delta gamma) > 1, got {inner}"
            )));
        }
        (24.0 * d * inner.ln() / (eps_run * delta * gamma)).ln() / (delta * eps_run * k as f64)
    } else {
        (12.0 * d / (eps_run * delta * gamma)).ln() / (delta * eps_run * k as f64)
    } * params.sample_prob_scale;
    if !(0.0 < p && p <= 1.0) {
        return Err(Error::InvalidParams(format!(
            "sampling probability ln(12d/(eps delta gamma))/(delta eps k) evaluates to {p}, \
             outside (0, 1]; adjust sample_prob_scale"
        )));
    }

    let n = g.node_count();
    let cap = floor_count(2.0 * p * k as f64);
    let trial_count = ceil_count(9.0 * n as f64 / (delta * k as f64) * params.trial_count_scale);
    let resolved = vec![
        ("p".to_string(), p),
        ("clique_size_cap".to_string(), cap as f64),
        ("starting_nodes".to_string(), trial_count as f64),
        ("epsilon_run".to_string(), eps_run),
    ];

    if n == 0 {
        return Ok(DetectionResult {
            algorithm,
            seed,
            params: params.clone(),
            resolved,
            candidates: Vec::new(),
            stats: TrialStats::default(),
            wall_time_ms: 0,
        });
    }

    let starting =
        draw_starting_nodes(n, trial_count, &mut RngStream::new(seed, 0).rng());
    let cache = PipelineCache::new();
    let emit = |v_prime: &[u32]| -> Option<NodeSet> {
        cache.get_or_compute(v_prime, || {
            if relaxed {
                trim_relaxed(g, v_prime, epsilon)
            } else {
                strict_emission(g, v_prime, delta * k as f64, eps_run)
            }
        })
    };

    let (candidates, stats) = run_trials(&starting, threads, |trial_index, &v| {
        let mut rng = RngStream::new(seed, 1 + trial_index).rng();
        let neighborhood = NodeSet::from_sorted(g.neighbors(v).to_vec());
        let Some(sample) = guarded_sample(&neighborhood, p, &mut rng) else {
            return Ok(TrialOutput::skipped());
        };
        let scope = closed_neighborhood(g, v);
        let mut found = Vec::new();
        let mut consider = |members: NodeSet| {
            found.push(CandidateSet {
                members,
                algorithm,
                starting_node: Some(v),
                seed_set: None,
                alpha_used: None,
                trial_index,
            });
        };
        if params.use_maximal_cliques {
            let cliques =
                maximal_cliques_capped(g, sample.as_slice(), cap, params.subset_budget)?;
            for u in cliques {
                let v_prime = common_neighbors_in_scope(g, scope.as_slice(), &u);
                if let Some(members) = emit(&v_prime) {
                    consider(members);
                }
            }
        } else {
            for_each_clique_with_common(
                g,
                sample.as_slice(),
                cap,
                scope.as_slice(),
                params.subset_budget,
                &mut |_u, v_prime| {
                    if let Some(members) = emit(v_prime) {
                        consider(members);
                    }
                    Ok(())
                },
            )?;
        }
        Ok(TrialOutput { candidates: found, ran: true })
    })?;

    Ok(DetectionResult {
        algorithm,
        seed,
        params: params.clone(),
        resolved,
        candidates,
        stats,
        wall_time_ms: 0,
    })
}

/// Strict emission: keep the high-degree core of `V'` iff it is a clique of
/// size at least `delta k` with every outside node at or below `1 - eps`.
fn strict_emission(g: &Graph, v_prime: &[u32], min_size: f64, epsilon: f64) -> Option<NodeSet> {
    if v_prime.is_empty() {
        return None;
    }
    let v_set = NodeSet::from_sorted(v_prime.to_vec());
    let u_prime: Vec<u32> = v_prime
        .iter()
        .copied()
        .filter(|&w| {
            at_least_fraction(g.closed_adjacency_count(w, &v_set), v_set.len(), 1.0 - epsilon / 2.0)
        })
        .collect();
    if u_prime.is_empty() || (u_prime.len() as f64) < min_size - crate::thresh::NUDGE {
        return None;
    }
    let u_prime = NodeSet::from_sorted(u_prime);
    if !g.is_clique(&u_prime) {
        return None;
    }
    outside_gap_holds(g, &u_prime, epsilon).then_some(u_prime)
}

/// Relaxed emission: remove nodes of density below `1 - eps/2` until every
/// survivor reaches `1 - eps`.
fn trim_relaxed(g: &Graph, v_prime: &[u32], epsilon: f64) -> Option<NodeSet> {
    crate::detector::engine::trim_by_density(g, v_prime, 1.0 - epsilon / 2.0, 1.0 - epsilon)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::enumerate_maximal_cliques;

    fn clique_params(k: usize, epsilon: f64) -> DetectorParams {
        DetectorParams {
            k: Some(k),
            d: Some(1),
            delta: Some(1.0),
            epsilon: Some(epsilon),
            gamma: Some(1.0),
            // The textbook probability exceeds 1 below k ~ 7; keep desk-scale
            // tests inside (0, 1].
            sample_prob_scale: 0.5,
            ..DetectorParams::default()
        }
    }

    #[test]
    fn edgeless_graph_yields_nothing() {
        let g = Graph::empty(20);
        let result = clique_find(&g, &clique_params(5, 0.5), 1).unwrap();
        assert!(result.candidates.is_empty());
    }

    #[test]
    fn empty_graph_yields_empty_result() {
        let g = Graph::empty(0);
        let result = clique_find(&g, &clique_params(5, 0.5), 1).unwrap();
        assert!(result.candidates.is_empty());
        assert_eq!(result.stats, TrialStats::default());
    }

    #[test]
    fn probability_above_one_is_rejected() {
        let g = Graph::complete(6);
        // Tiny k and epsilon drive p over 1.
        let params = DetectorParams {
            k: Some(3),
            d: Some(1),
            delta: Some(1.0),
            epsilon: Some(0.3),
            gamma: Some(0.2),
            ..DetectorParams::default()
        };
        let err = clique_find(&g, &params, 1).unwrap_err();
        assert_eq!(err.exit_code(), 4);
        assert!(err.to_string().contains("sampling probability"));
    }

    #[test]
    fn isolated_k30_recovered_on_most_seeds() {
        let g = Graph::complete(30);
        let params = clique_params(30, 0.5);
        let target = NodeSet::from_ids(0..30);
        let mut hits = 0;
        for seed in 0..100u64 {
            let result = clique_find(&g, &params, seed).unwrap();
            // Every emitted candidate must be a maximal clique of the graph.
            let oracle = enumerate_maximal_cliques(&g, 1).unwrap();
            for c in &result.candidates {
                assert!(oracle.contains(&c.members));
            }
            if result.candidates.iter().any(|c| c.members == target) {
                hits += 1;
            }
        }
        assert!(hits >= 90, "recovered {hits}/100");
    }

    #[test]
    fn relaxed_equals_strict_on_strict_instances() {
        // Isolated K12: no gap nodes, so trimming removes nothing and the
        // relaxed output matches the strict one.
        let g = Graph::complete(12);
        let mut params = clique_params(12, 0.5);
        params.epsilon_prime = Some(0.5);
        for seed in 0..10u64 {
            let strict = clique_find(&g, &params, seed).unwrap();
            let relaxed = gap_relaxed_clique_find(&g, &params, seed).unwrap();
            assert_eq!(strict.member_sets(), relaxed.member_sets());
        }
    }

    #[test]
    fn deterministic_across_threads() {
        let g = Graph::complete(25);
        let params = clique_params(25, 0.5);
        let a = run(&g, &params, 7, 1, false).unwrap();
        let b = run(&g, &params, 7, 8, false).unwrap();
        assert_eq!(a.member_sets(), b.member_sets());
        assert_eq!(a.stats, b.stats);
    }
}
