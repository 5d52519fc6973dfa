//! Scoring detection output against ground truth, and seeded recovery-rate
//! estimation.
//!
//! Matching is greedy best-Jaccard per planted community, with exact-match
//! and relaxed-match flags on top. The relaxed flag encodes the
//! gap-relaxation contract: the candidate covers a `1 - eps` fraction of
//! the planted set and every candidate member keeps a `1 - eps` internal
//! adjacency fraction (self-inclusive).

use crate::detector::{detect, AlgorithmKind, DetectionResult};
use crate::generator::{generate, AmbientSpec};
use crate::graph::{Graph, NodeSet};
use crate::params::{DetectorParams, ModelKind, ModelParams};
use crate::thresh::at_least_fraction;
use crate::Result;
use serde::Serialize;

/// Outcome for one planted community.
#[derive(Debug, Clone, Serialize)]
pub struct CommunityMatch {
    pub truth_index: usize,
    pub truth_size: usize,
    /// Index into the candidate list of the best-Jaccard candidate.
    pub best_candidate: Option<usize>,
    pub jaccard: f64,
    pub exact: bool,
    /// Present only when a graph and epsilon were supplied.
    pub relaxed: Option<bool>,
}

/// Full match report.
#[derive(Debug, Clone, Serialize)]
pub struct MatchReport {
    pub per_community: Vec<CommunityMatch>,
    pub exact_recovery_rate: f64,
    pub mean_best_jaccard: f64,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub jaccard_threshold: f64,
    /// Set when `found` was empty and precision defaulted to 1.
    pub empty_found_warning: bool,
}

pub fn jaccard(a: &NodeSet, b: &NodeSet) -> f64 {
    if a.is_empty() && b.is_empty() {
        return 1.0;
    }
    let inter = a.intersection_count(b);
    let union = a.len() + b.len() - inter;
    inter as f64 / union as f64
}

/// Relaxed-recovery contract: `|candidate n truth| >= (1 - eps) |truth|`
/// and every candidate member adjacent (self-inclusively) to at least a
/// `1 - eps` fraction of the candidate.
pub fn relaxed_match(candidate: &NodeSet, truth: &NodeSet, g: &Graph, epsilon: f64) -> bool {
    if candidate.is_empty() || truth.is_empty() {
        return false;
    }
    let covered = candidate.intersection_count(truth);
    if !at_least_fraction(covered, truth.len(), 1.0 - epsilon) {
        return false;
    }
    candidate.iter().all(|v| {
        at_least_fraction(g.closed_adjacency_count(v, candidate), candidate.len(), 1.0 - epsilon)
    })
}

/// Greedy best-match by Jaccard. Each planted community is matched to its
/// argmax candidate (ties keep the lexicographically smaller candidate,
/// which is the earlier index in the canonically sorted list). Precision is
/// the fraction of candidates that are some community's best match at or
/// above the threshold; recall the fraction of communities matched.
pub fn match_communities(
    found: &[NodeSet],
    truth: &[NodeSet],
    jaccard_threshold: f64,
    relaxed_context: Option<(&Graph, f64)>,
) -> MatchReport {
    let mut per_community = Vec::with_capacity(truth.len());
    let mut matched_candidates = vec![false; found.len()];
    for (ti, t) in truth.iter().enumerate() {
        let mut best: Option<usize> = None;
        let mut best_j = -1.0f64;
        for (fi, f) in found.iter().enumerate() {
            let j = jaccard(f, t);
            if j > best_j {
                best_j = j;
                best = Some(fi);
            }
        }
        let best_j = best_j.max(0.0);
        if let Some(fi) = best {
            if best_j >= jaccard_threshold {
                matched_candidates[fi] = true;
            }
        }
        let exact = best.map(|fi| found[fi] == *t).unwrap_or(false);
        let relaxed =
            relaxed_context.map(|(g, eps)| found.iter().any(|f| relaxed_match(f, t, g, eps)));
        per_community.push(CommunityMatch {
            truth_index: ti,
            truth_size: t.len(),
            best_candidate: best,
            jaccard: best_j,
            exact,
            relaxed,
        });
    }

    let exact_count = per_community.iter().filter(|m| m.exact).count();
    let matched_truths = per_community.iter().filter(|m| m.jaccard >= jaccard_threshold).count();
    let empty_found_warning = found.is_empty();
    let precision = if found.is_empty() {
        1.0
    } else {
        matched_candidates.iter().filter(|&&m| m).count() as f64 / found.len() as f64
    };
    let recall =
        if truth.is_empty() { 1.0 } else { matched_truths as f64 / truth.len() as f64 };
    let f1 = if precision + recall == 0.0 {
        0.0
    } else {
        2.0 * precision * recall / (precision + recall)
    };
    MatchReport {
        exact_recovery_rate: if truth.is_empty() {
            1.0
        } else {
            exact_count as f64 / truth.len() as f64
        },
        mean_best_jaccard: if truth.is_empty() {
            1.0
        } else {
            per_community.iter().map(|m| m.jaccard).sum::<f64>() / truth.len() as f64
        },
        per_community,
        precision,
        recall,
        f1,
        jaccard_threshold,
        empty_found_warning,
    }
}

/// Everything needed to regenerate an instance and run one detector on it.
#[derive(Debug, Clone)]
pub struct RecoverySpec {
    pub model: ModelKind,
    pub model_params: ModelParams,
    pub ambient: AmbientSpec,
    pub algorithm: AlgorithmKind,
    pub detector_params: DetectorParams,
}

/// Per-community recovery frequencies over seeded trials.
#[derive(Debug, Clone, Serialize)]
pub struct RecoveryRow {
    pub community_index: usize,
    pub trials: u64,
    pub exact_hits: u64,
    pub relaxed_hits: u64,
    pub exact_rate: f64,
    pub relaxed_rate: f64,
    /// Wilson 95% interval for the exact rate.
    pub exact_wilson_low: f64,
    pub exact_wilson_high: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct RecoveryTable {
    pub algorithm: &'static str,
    pub model: &'static str,
    pub trials: u64,
    pub base_seed: u64,
    pub rows: Vec<RecoveryRow>,
    /// Per trial, per community: exact hit. A deterministic detector yields
    /// identical rows.
    pub trial_outcomes: Vec<Vec<bool>>,
    pub mean_exact_rate: f64,
    pub mean_wall_time_ms: f64,
}

/// Wilson 95% score interval.
pub fn wilson_interval(hits: u64, trials: u64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let z = 1.959964f64;
    let n = trials as f64;
    let p = hits as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = p + z2 / (2.0 * n);
    let spread = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    (((center - spread) / denom).max(0.0), ((center + spread) / denom).min(1.0))
}

/// Estimate each planted community's recovery probability over the
/// detector's randomness: regenerate the instance once from `base_seed`,
/// then rerun the detector with seeds `base_seed .. base_seed + trials`.
/// Deterministic in `(spec, base_seed, trials)`; a deterministic detector
/// produces identical per-trial outcomes.
pub fn recovery_rate(
    spec: &RecoverySpec,
    trials: u64,
    base_seed: u64,
    threads: usize,
) -> Result<RecoveryTable> {
    let epsilon = spec.detector_params.epsilon.unwrap_or(spec.model_params.epsilon);
    let mut exact_hits = vec![0u64; spec.model_params.community_count];
    let mut relaxed_hits = vec![0u64; spec.model_params.community_count];
    let mut trial_outcomes = Vec::with_capacity(trials as usize);
    let mut wall_total = 0u64;
    let (g, truth, _) = generate(&spec.model_params, spec.model, &spec.ambient, base_seed)?;
    for t in 0..trials {
        let seed = base_seed + t;
        let result: DetectionResult =
            detect(spec.algorithm, &g, &spec.detector_params, seed, threads)?;
        wall_total += result.wall_time_ms;
        let sets = result.member_sets();
        let mut outcome = Vec::with_capacity(truth.communities.len());
        for (ci, c) in truth.communities.iter().enumerate() {
            let exact = sets.iter().any(|s| s == c);
            outcome.push(exact);
            if exact {
                exact_hits[ci] += 1;
            }
            if sets.iter().any(|s| relaxed_match(s, c, &g, epsilon)) {
                relaxed_hits[ci] += 1;
            }
        }
        trial_outcomes.push(outcome);
    }
    let rows: Vec<RecoveryRow> = (0..spec.model_params.community_count)
        .map(|ci| {
            let (lo, hi) = wilson_interval(exact_hits[ci], trials);
            RecoveryRow {
                community_index: ci,
                trials,
                exact_hits: exact_hits[ci],
                relaxed_hits: relaxed_hits[ci],
                exact_rate: exact_hits[ci] as f64 / trials.max(1) as f64,
                relaxed_rate: relaxed_hits[ci] as f64 / trials.max(1) as f64,
                exact_wilson_low: lo,
                exact_wilson_high: hi,
            }
        })
        .collect();
    let mean_exact_rate = if rows.is_empty() {
        0.0
    } else {
        rows.iter().map(|r| r.exact_rate).sum::<f64>() / rows.len() as f64
    };
    Ok(RecoveryTable {
        algorithm: spec.algorithm.name(),
        model: spec.model.name(),
        trials,
        base_seed,
        rows,
        trial_outcomes,
        mean_exact_rate,
        mean_wall_time_ms: wall_total as f64 / trials.max(1) as f64,
    })
}
