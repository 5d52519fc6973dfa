//! Uniform-density community detection.
//!
//! Like the clique detector, but the sample's subsets are extended by
//! adjacency *fraction* rather than full adjacency: `V'` collects the
//! neighborhood nodes adjacent to at least an `alpha - eps/2` fraction of
//! the subset, and the emitted set must certify as an
//! `(alpha - eps/8, alpha - 7eps/8)` set.

use crate::detector::engine::{
    closed_neighborhood, dense_pipeline, draw_starting_nodes, for_each_subset, guarded_sample,
    mask_count, run_trials, sample_masks, BitAdjacency, TrialOutput,
};
use crate::detector::{AlgorithmKind, CandidateSet, DetectionResult, TrialStats};
use crate::error::Error;
use crate::graph::{Graph, NodeSet};
use crate::params::DetectorParams;
use crate::rng::RngStream;
use crate::thresh::{at_least_fraction, ceil_count, floor_count};
use crate::Result;

pub fn dense_find(g: &Graph, params: &DetectorParams, seed: u64) -> Result<DetectionResult> {
    run(g, params, seed, 1)
}

pub(crate) fn run(
    g: &Graph,
    params: &DetectorParams,
    seed: u64,
    threads: usize,
) -> Result<DetectionResult> {
    let k = params.req_usize("k", params.k)?;
    let d = params.req_usize("d", params.d.map(|d| d as usize))? as f64;
    let delta = params.req_f64("delta", params.delta)?;
    let epsilon = params.req_f64("epsilon", params.epsilon)?;
    let gamma = params.req_f64("gamma", params.gamma)?;
    let alpha = params.req_f64("alpha", params.alpha)?;
    if !(0.0 < alpha && alpha <= 1.0) || epsilon >= alpha || epsilon <= 0.0 {
        return Err(Error::InvalidParams(format!(
            "dense detection needs 0 < epsilon < alpha <= 1, got alpha = {alpha}, epsilon = {epsilon}"
        )));
    }

    let p = 2.0 * (30.0 * d / (alpha * epsilon * delta * gamma)).ln()
        / (alpha * alpha * delta * epsilon * epsilon * k as f64)
        * params.sample_prob_scale;
    if !(0.0 < p && p <= 1.0) {
        return Err(Error::InvalidParams(format!(
            "sampling probability 2 ln(30d/(alpha eps delta gamma))/(alpha^2 delta eps^2 k) \
             evaluates to {p}, outside (0, 1]; adjust sample_prob_scale"
        )));
    }

    let n = g.node_count();
    let cap = floor_count(2.0 * p * k as f64).min(64);
    let trial_count = ceil_count(100.0 * n as f64 / (delta * k as f64) * params.trial_count_scale);
    let resolved = vec![
        ("p".to_string(), p),
        ("subset_size_cap".to_string(), cap as f64),
        ("starting_nodes".to_string(), trial_count as f64),
    ];

    if n == 0 {
        return Ok(DetectionResult {
            algorithm: AlgorithmKind::Dense,
            seed,
            params: params.clone(),
            resolved,
            candidates: Vec::new(),
            stats: TrialStats::default(),
            wall_time_ms: 0,
        });
    }

    let starting = draw_starting_nodes(n, trial_count, &mut RngStream::new(seed, 0).rng());
    let bits = BitAdjacency::new(g);
    let v_threshold = alpha - epsilon / 2.0;

    let (candidates, stats) = run_trials(&starting, threads, |trial_index, &v| {
        let mut rng = RngStream::new(seed, 1 + trial_index).rng();
        // The ego graph includes the starting node itself.
        let scope = closed_neighborhood(g, v);
        let Some(sample) = guarded_sample(&scope, p, &mut rng) else {
            return Ok(TrialOutput::skipped());
        };
        if sample.len() > 64 {
            return Err(Error::BudgetExceeded(format!(
                "sample of {} nodes is too large to enumerate; lower sample_prob_scale",
                sample.len()
            )));
        }
        let masks = sample_masks(g, scope.as_slice(), sample.as_slice());
        let mut found = Vec::new();
        let mut v_prime = vec![0u64; bits.words()];
        // The V' -> candidate map is pure; deduplicate within the trial.
        let mut local: std::collections::HashMap<Vec<u64>, Option<NodeSet>> =
            std::collections::HashMap::new();
        for_each_subset(sample.len(), cap, params.subset_budget, |subset_mask, subset_size| {
            v_prime.fill(0);
            for (w, &mask) in scope.iter().zip(&masks) {
                if at_least_fraction(mask_count(mask, subset_mask), subset_size, v_threshold) {
                    v_prime[w as usize / 64] |= 1 << (w % 64);
                }
            }
            let members = local
                .entry(v_prime.clone())
                .or_insert_with(|| dense_pipeline(g, &bits, &v_prime, alpha, epsilon))
                .clone();
            if let Some(members) = members {
                found.push(CandidateSet {
                    members,
                    algorithm: AlgorithmKind::Dense,
                    starting_node: Some(v),
                    seed_set: None,
                    alpha_used: Some(alpha),
                    trial_index,
                });
            }
            Ok(())
        })?;
        Ok(TrialOutput { candidates: found, ran: true })
    })?;

    Ok(DetectionResult {
        algorithm: AlgorithmKind::Dense,
        seed,
        params: params.clone(),
        resolved,
        candidates,
        stats,
        wall_time_ms: 0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{is_alpha_epsilon_set, NodeSet};

    fn dense_params(k: usize, alpha: f64, epsilon: f64, scale: f64) -> DetectorParams {
        DetectorParams {
            k: Some(k),
            d: Some(1),
            delta: Some(1.0),
            epsilon: Some(epsilon),
            gamma: Some(1.0),
            alpha: Some(alpha),
            sample_prob_scale: scale,
            ..DetectorParams::default()
        }
    }

    #[test]
    fn emitted_sets_always_pass_the_certifier() {
        // Mixed random graphs: anything emitted must satisfy the final check.
        for seed in 0..20u64 {
            let mut rng = RngStream::new(seed, 9).rng();
            let mut edges = Vec::new();
            for u in 0..12u32 {
                for v in (u + 1)..12 {
                    if rand::Rng::random_bool(&mut rng, 0.5) {
                        edges.push((u, v));
                    }
                }
            }
            let g = Graph::from_edges(12, &edges).unwrap();
            let params = dense_params(8, 0.6, 0.4, 0.03);
            let result = dense_find(&g, &params, seed).unwrap();
            for c in &result.candidates {
                assert!(
                    is_alpha_epsilon_set(&g, &c.members, 0.6 - 0.4 / 8.0, 0.6 - 7.0 * 0.4 / 8.0)
                        .unwrap(),
                    "candidate {:?} fails certification at seed {seed}",
                    c.members
                );
            }
        }
    }

    #[test]
    fn alpha_one_matches_clique_certification() {
        // With alpha = 1 the thresholds collapse to the clique-like case and
        // an isolated clique is recovered exactly.
        let g = Graph::complete(16);
        let params = dense_params(16, 1.0, 0.5, 0.4);
        let result = dense_find(&g, &params, 3).unwrap();
        let target = NodeSet::from_ids(0..16);
        assert!(result.candidates.iter().any(|c| c.members == target));
        for c in &result.candidates {
            assert!(is_alpha_epsilon_set(&g, &c.members, 1.0, 0.5).unwrap());
        }
    }

    #[test]
    fn epsilon_must_stay_below_alpha() {
        let g = Graph::complete(8);
        let err = dense_find(&g, &dense_params(8, 0.5, 0.6, 1.0), 0).unwrap_err();
        assert_eq!(err.exit_code(), 4);
    }
}
