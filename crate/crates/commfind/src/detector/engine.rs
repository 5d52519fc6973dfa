//! Shared trial machinery: deterministic worker partitioning, sampling with
//! the three-times-expectation guard, subset and clique enumeration under a
//! budget, and the threshold pipelines the detectors assemble.

use crate::detector::{merge_candidates, CandidateSet, TrialStats};
use crate::error::Error;
use crate::graph::{Graph, NodeSet};
use crate::thresh::{at_least_fraction, at_most_fraction, more_than_fraction, NUDGE};
use crate::Result;
use rand::Rng;
use std::collections::HashMap;
use std::sync::Mutex;

/// Output of one trial.
pub(crate) struct TrialOutput {
    pub candidates: Vec<CandidateSet>,
    /// False when the trial was abandoned before enumeration.
    pub ran: bool,
}

impl TrialOutput {
    pub fn skipped() -> Self {
        TrialOutput { candidates: Vec::new(), ran: false }
    }
}

/// Run one closure per job across `threads` workers and merge the results.
/// Jobs are split into contiguous index ranges, every worker reports in
/// range order, and candidate merging is order-insensitive, so the outcome
/// does not depend on the worker count. The reported error, if any, is the
/// one from the lowest-indexed failing job.
pub(crate) fn run_jobs<T, F>(
    jobs: &[T],
    threads: usize,
    f: F,
) -> Result<(Vec<CandidateSet>, TrialStats)>
where
    T: Sync,
    F: Fn(u64, &T) -> Result<(Vec<CandidateSet>, TrialStats)> + Sync,
{
    let threads = threads.max(1);
    let run_range = |range: std::ops::Range<usize>| -> Result<(Vec<CandidateSet>, TrialStats)> {
        let mut candidates = Vec::new();
        let mut stats = TrialStats::default();
        for idx in range {
            let (c, s) = f(idx as u64, &jobs[idx])?;
            stats.trials_run += s.trials_run;
            stats.trials_skipped += s.trials_skipped;
            candidates.extend(c);
        }
        Ok((candidates, stats))
    };

    let outcomes: Vec<Result<(Vec<CandidateSet>, TrialStats)>> =
        if threads == 1 || jobs.len() <= 1 {
            vec![run_range(0..jobs.len())]
        } else {
            let chunk = jobs.len().div_ceil(threads);
            std::thread::scope(|scope| {
                let handles: Vec<_> = (0..threads)
                    .map(|w| {
                        let lo = (w * chunk).min(jobs.len());
                        let hi = ((w + 1) * chunk).min(jobs.len());
                        let run_range = &run_range;
                        scope.spawn(move || run_range(lo..hi))
                    })
                    .collect();
                handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
            })
        };

    let mut candidates = Vec::new();
    let mut stats = TrialStats::default();
    for outcome in outcomes {
        let (c, s) = outcome?;
        candidates.extend(c);
        stats.trials_run += s.trials_run;
        stats.trials_skipped += s.trials_skipped;
    }
    Ok((merge_candidates(candidates), stats))
}

/// [`run_jobs`] specialized to one sampling trial per item.
pub(crate) fn run_trials<T, F>(
    trials: &[T],
    threads: usize,
    f: F,
) -> Result<(Vec<CandidateSet>, TrialStats)>
where
    T: Sync,
    F: Fn(u64, &T) -> Result<TrialOutput> + Sync,
{
    run_jobs(trials, threads, |idx, item| {
        let out = f(idx, item)?;
        let stats = if out.ran {
            TrialStats { trials_run: 1, trials_skipped: 0 }
        } else {
            TrialStats { trials_run: 0, trials_skipped: 1 }
        };
        Ok((out.candidates, stats))
    })
}

/// Uniform starting nodes, drawn with replacement.
pub(crate) fn draw_starting_nodes(n: usize, count: usize, rng: &mut impl Rng) -> Vec<u32> {
    (0..count).map(|_| rng.random_range(0..n as u32)).collect()
}

/// Bernoulli(p) sample of `universe`; `None` when the guard fires because
/// the sample exceeds three times its expectation.
pub(crate) fn guarded_sample(
    universe: &NodeSet,
    p: f64,
    rng: &mut impl Rng,
) -> Option<NodeSet> {
    let sample = crate::graph::bernoulli_subsample(universe, p, rng);
    let expectation = universe.len() as f64 * p;
    if sample.len() as f64 > 3.0 * expectation + NUDGE {
        None
    } else {
        Some(sample)
    }
}

/// min(C(n, k), cap) without overflow.
pub(crate) fn binomial_capped(n: u64, k: u64, cap: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u64 = 1;
    for i in 0..k {
        acc = match acc.checked_mul(n - i) {
            Some(x) => x / (i + 1),
            None => return cap,
        };
        if acc >= cap {
            return cap;
        }
    }
    acc
}

/// Number of nonempty subsets of an `n`-element set with size at most
/// `max_size`, saturating at `cap`.
pub(crate) fn subset_count_capped(n: u64, max_size: u64, cap: u64) -> u64 {
    let mut total = 0u64;
    for t in 1..=max_size.min(n) {
        total = total.saturating_add(binomial_capped(n, t, cap));
        if total >= cap {
            return cap;
        }
    }
    total
}

/// Advance `idx` to the next ascending `t`-combination below `n`.
pub(crate) fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let t = idx.len();
    let mut i = t;
    while i > 0 {
        i -= 1;
        if idx[i] < n - t + i {
            idx[i] += 1;
            for j in i + 1..t {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Per-node adjacency bitmask over a sample of at most 64 nodes; bit `i`
/// covers `sample[i]`, with the node's own bit set (self-inclusion).
pub(crate) fn sample_masks(g: &Graph, scope: &[u32], sample: &[u32]) -> Vec<u64> {
    debug_assert!(sample.len() <= 64);
    scope
        .iter()
        .map(|&w| {
            let mut mask = 0u64;
            for (i, &s) in sample.iter().enumerate() {
                if w == s || g.has_edge(w, s) {
                    mask |= 1 << i;
                }
            }
            mask
        })
        .collect()
}

/// Enumerate every nonempty subset `U` of `sample` with `|U| <= cap`,
/// passing the subset's bitmask and size to `f`. Errors out if the subset
/// count would exceed `budget`.
pub(crate) fn for_each_subset(
    sample_len: usize,
    cap: usize,
    budget: u64,
    mut f: impl FnMut(u64, usize) -> Result<()>,
) -> Result<()> {
    if cap == 0 || sample_len == 0 {
        return Ok(());
    }
    let count = subset_count_capped(sample_len as u64, cap as u64, budget.saturating_add(1));
    if count > budget {
        return Err(Error::BudgetExceeded(format!(
            "a trial would enumerate more than {budget} subsets of a {sample_len}-node sample \
             (cap {cap}); lower sample_prob_scale or raise subset_budget"
        )));
    }
    for t in 1..=cap.min(sample_len) {
        let mut idx: Vec<usize> = (0..t).collect();
        loop {
            let mut mask = 0u64;
            for &i in &idx {
                mask |= 1 << i;
            }
            f(mask, t)?;
            if !next_combination(&mut idx, sample_len) {
                break;
            }
        }
    }
    Ok(())
}

/// Depth-first enumeration of every nonempty clique of the sample graph up
/// to `cap` members, maintaining incrementally the set of scope nodes
/// adjacent (or equal) to every clique member. Calls `f(clique, common)`.
pub(crate) fn for_each_clique_with_common(
    g: &Graph,
    sample: &[u32],
    cap: usize,
    scope: &[u32],
    budget: u64,
    f: &mut impl FnMut(&[u32], &[u32]) -> Result<()>,
) -> Result<()> {
    if cap == 0 || sample.is_empty() {
        return Ok(());
    }
    let mut visited = 0u64;
    let mut clique = Vec::with_capacity(cap);
    dfs_cliques(g, sample, cap, scope, budget, &mut visited, &mut clique, f)
}

#[allow(clippy::too_many_arguments)]
fn dfs_cliques(
    g: &Graph,
    ext: &[u32],
    cap: usize,
    common: &[u32],
    budget: u64,
    visited: &mut u64,
    clique: &mut Vec<u32>,
    f: &mut impl FnMut(&[u32], &[u32]) -> Result<()>,
) -> Result<()> {
    for (i, &v) in ext.iter().enumerate() {
        *visited += 1;
        if *visited > budget {
            return Err(Error::BudgetExceeded(format!(
                "a trial would enumerate more than {budget} cliques; lower sample_prob_scale \
                 or raise subset_budget"
            )));
        }
        clique.push(v);
        let next_common: Vec<u32> = common
            .iter()
            .copied()
            .filter(|&w| w == v || g.has_edge(w, v))
            .collect();
        f(clique, &next_common)?;
        if clique.len() < cap {
            let next_ext: Vec<u32> =
                ext[i + 1..].iter().copied().filter(|&w| g.has_edge(w, v)).collect();
            dfs_cliques(g, &next_ext, cap, &next_common, budget, visited, clique, f)?;
        }
        clique.pop();
    }
    Ok(())
}

/// Maximal cliques of the subgraph induced on `nodes`, each of size at most
/// `cap` (larger maximal cliques are dropped, not truncated).
pub(crate) fn maximal_cliques_capped(
    g: &Graph,
    nodes: &[u32],
    cap: usize,
    budget: u64,
) -> Result<Vec<Vec<u32>>> {
    let (sub, map) = crate::graph::induced_subgraph(g, &NodeSet::from_sorted(nodes.to_vec()));
    let cliques = crate::oracle::enumerate_maximal_cliques_budgeted(&sub, 1, budget)?;
    Ok(cliques
        .into_iter()
        .filter(|c| c.len() <= cap)
        .map(|c| c.iter().map(|v| map[v as usize]).collect())
        .collect())
}

/// Scope nodes adjacent (or equal) to every member of `u`.
pub(crate) fn common_neighbors_in_scope(g: &Graph, scope: &[u32], u: &[u32]) -> Vec<u32> {
    scope
        .iter()
        .copied()
        .filter(|&w| u.iter().all(|&x| x == w || g.has_edge(w, x)))
        .collect()
}

/// Memoized map from a fully determined input set to an optional candidate.
/// The computations cached here are pure functions of their key, so sharing
/// the cache across workers cannot change results.
pub(crate) struct PipelineCache<T> {
    map: Mutex<HashMap<Vec<T>, Option<NodeSet>>>,
}

impl<T: Copy + Eq + std::hash::Hash> PipelineCache<T> {
    pub fn new() -> Self {
        PipelineCache { map: Mutex::new(HashMap::new()) }
    }

    pub fn get_or_compute(
        &self,
        key: &[T],
        compute: impl FnOnce() -> Option<NodeSet>,
    ) -> Option<NodeSet> {
        if let Some(hit) = self.map.lock().unwrap().get(key) {
            return hit.clone();
        }
        let value = compute();
        self.map.lock().unwrap().insert(key.to_vec(), value.clone());
        value
    }
}

/// Whole-graph closed-adjacency rows as bitsets: row `v` has bit `v` set
/// plus one bit per neighbor, so `popcount(row(v) & S)` is exactly the
/// self-inclusive adjacency count `|({v} u G(v)) n S|`. This is a faster
/// route to the same integers the sorted-slice counting produces; the
/// fraction detectors evaluate millions of such counts.
pub(crate) struct BitAdjacency {
    words: usize,
    rows: Vec<u64>,
}

impl BitAdjacency {
    pub fn new(g: &Graph) -> Self {
        let n = g.node_count();
        let words = n.div_ceil(64).max(1);
        let mut rows = vec![0u64; n * words];
        for v in 0..n {
            let row = &mut rows[v * words..(v + 1) * words];
            row[v / 64] |= 1 << (v % 64);
            for &u in g.neighbors(v as u32) {
                row[u as usize / 64] |= 1 << (u % 64);
            }
        }
        BitAdjacency { words, rows }
    }

    pub fn words(&self) -> usize {
        self.words
    }

    fn row(&self, v: u32) -> &[u64] {
        &self.rows[v as usize * self.words..(v as usize + 1) * self.words]
    }

    /// `|({v} u G(v)) n S|` for a bitset-encoded `S`.
    pub fn closed_count(&self, v: u32, set: &[u64]) -> usize {
        self.row(v)
            .iter()
            .zip(set)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }
}

fn bits_to_nodeset(words: &[u64]) -> NodeSet {
    let mut ids = Vec::new();
    for (wi, &w) in words.iter().enumerate() {
        let mut w = w;
        while w != 0 {
            let b = w.trailing_zeros();
            ids.push((wi * 64) as u32 + b);
            w &= w - 1;
        }
    }
    NodeSet::from_sorted(ids)
}

/// The dense extension pipeline shared by `dense_find` and
/// `robust_dense_find`: degree-filter `V'` at `alpha - eps/2`, re-collect
/// over the whole graph at the same threshold, and keep the result only if
/// it is an `(alpha - eps/8, alpha - 7eps/8)` set. `v_prime` is a bitset
/// over all nodes.
pub(crate) fn dense_pipeline(
    g: &Graph,
    bits: &BitAdjacency,
    v_prime: &[u64],
    alpha: f64,
    epsilon: f64,
) -> Option<NodeSet> {
    let v_len: usize = v_prime.iter().map(|w| w.count_ones() as usize).sum();
    if v_len == 0 {
        return None;
    }
    let threshold = alpha - epsilon / 2.0;
    let n = g.node_count() as u32;

    let mut u_prime = vec![0u64; bits.words()];
    let mut u_len = 0usize;
    for v in iter_bits(v_prime) {
        if at_least_fraction(bits.closed_count(v, v_prime), v_len, threshold) {
            u_prime[v as usize / 64] |= 1 << (v % 64);
            u_len += 1;
        }
    }
    if u_len == 0 {
        return None;
    }

    let mut u_second = vec![0u64; bits.words()];
    let mut s_len = 0usize;
    for w in 0..n {
        if more_than_fraction(bits.closed_count(w, &u_prime), u_len, threshold) {
            u_second[w as usize / 64] |= 1 << (w % 64);
            s_len += 1;
        }
    }
    if s_len == 0 {
        return None;
    }

    let lo = alpha - epsilon / 8.0;
    let hi = alpha - 7.0 * epsilon / 8.0;
    for w in 0..n {
        let count = bits.closed_count(w, &u_second);
        let inside = u_second[w as usize / 64] >> (w % 64) & 1 == 1;
        if inside {
            if !at_least_fraction(count, s_len, lo) {
                return None;
            }
        } else if !at_most_fraction(count, s_len, hi) {
            return None;
        }
    }
    Some(bits_to_nodeset(&u_second))
}

pub(crate) fn iter_bits(words: &[u64]) -> impl Iterator<Item = u32> + '_ {
    words.iter().enumerate().flat_map(|(wi, &w)| {
        std::iter::successors((w != 0).then_some(w), |&w| {
            let next = w & (w - 1);
            (next != 0).then_some(next)
        })
        .map(move |w| (wi * 64) as u32 + w.trailing_zeros())
    })
}

/// Repeatedly remove every node whose density `|G(v) n V'| / |V'|` falls
/// below `removal`, until all remaining densities reach `floor` (or nothing
/// is left). Returns the surviving set.
pub(crate) fn trim_by_density(g: &Graph, v_prime: &[u32], removal: f64, floor: f64) -> Option<NodeSet> {
    let mut current = NodeSet::from_sorted(v_prime.to_vec());
    for _pass in 0..=v_prime.len() {
        if current.is_empty() {
            return None;
        }
        let densities: Vec<usize> =
            current.iter().map(|w| g.open_adjacency_count(w, &current)).collect();
        let total = current.len();
        if densities.iter().all(|&d| at_least_fraction(d, total, floor)) {
            return Some(current);
        }
        let survivors: Vec<u32> = current
            .iter()
            .zip(&densities)
            .filter(|&(_, &d)| at_least_fraction(d, total, removal))
            .map(|(w, _)| w)
            .collect();
        if survivors.len() == current.len() {
            // All nodes clear the removal bar yet some miss the floor; the
            // caller's floor is below the removal threshold, so this cannot
            // happen, but bail rather than loop.
            return Some(current);
        }
        current = NodeSet::from_sorted(survivors);
    }
    None
}

/// [`trim_by_density`] over a bitset-encoded `V'`. The open density of a
/// member is its closed count minus the self bit.
pub(crate) fn trim_by_density_bits(
    bits: &BitAdjacency,
    v_prime: &[u64],
    removal: f64,
    floor: f64,
) -> Option<NodeSet> {
    let mut current = v_prime.to_vec();
    let mut len: usize = current.iter().map(|w| w.count_ones() as usize).sum();
    let max_passes = len + 1;
    for _pass in 0..max_passes {
        if len == 0 {
            return None;
        }
        let members: Vec<u32> = iter_bits(&current).collect();
        let densities: Vec<usize> =
            members.iter().map(|&w| bits.closed_count(w, &current) - 1).collect();
        if densities.iter().all(|&d| at_least_fraction(d, len, floor)) {
            return Some(bits_to_nodeset(&current));
        }
        let mut removed = 0usize;
        for (&w, &d) in members.iter().zip(&densities) {
            if !at_least_fraction(d, len, removal) {
                current[w as usize / 64] &= !(1 << (w % 64));
                removed += 1;
            }
        }
        if removed == 0 {
            return Some(bits_to_nodeset(&current));
        }
        len -= removed;
    }
    None
}

/// Outside-gap test shared by the clique emitters: every non-member may be
/// adjacent to at most a `1 - eps` fraction of the set.
pub(crate) fn outside_gap_holds(g: &Graph, s: &NodeSet, epsilon: f64) -> bool {
    (0..g.node_count() as u32)
        .filter(|&w| !s.contains(w))
        .all(|w| at_most_fraction(g.open_adjacency_count(w, s), s.len(), 1.0 - epsilon))
}

/// `|({w} u G(w)) n U|` for a mask-encoded `U` over `sample`.
pub(crate) fn mask_count(node_mask: u64, subset_mask: u64) -> usize {
    (node_mask & subset_mask).count_ones() as usize
}

/// Sorted closed neighborhood (the node and its neighbors).
pub(crate) fn closed_neighborhood(g: &Graph, v: u32) -> NodeSet {
    let mut ids = Vec::with_capacity(g.degree(v) + 1);
    let pos = g.neighbors(v).partition_point(|&u| u < v);
    ids.extend_from_slice(&g.neighbors(v)[..pos]);
    ids.push(v);
    ids.extend_from_slice(&g.neighbors(v)[pos..]);
    NodeSet::from_sorted(ids)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn combination_counts() {
        assert_eq!(binomial_capped(10, 3, u64::MAX), 120);
        assert_eq!(binomial_capped(5, 0, u64::MAX), 1);
        assert_eq!(binomial_capped(5, 9, u64::MAX), 0);
        assert_eq!(binomial_capped(100, 50, 1000), 1000);
        assert_eq!(subset_count_capped(4, 4, u64::MAX), 15);
        assert_eq!(subset_count_capped(4, 2, u64::MAX), 10);
    }

    #[test]
    fn combinations_enumerate_in_order() {
        let mut idx = vec![0, 1];
        let mut seen = vec![idx.clone()];
        while next_combination(&mut idx, 4) {
            seen.push(idx.clone());
        }
        assert_eq!(seen, vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]);
    }

    #[test]
    fn subset_enumeration_respects_cap_and_budget() {
        let mut masks = Vec::new();
        for_each_subset(4, 2, 1000, |mask, size| {
            masks.push((mask, size));
            Ok(())
        })
        .unwrap();
        assert_eq!(masks.len(), 10);
        assert!(masks.iter().all(|&(m, s)| (m as u64).count_ones() as usize == s));
        let err = for_each_subset(30, 20, 100, |_, _| Ok(())).unwrap_err();
        assert_eq!(err.exit_code(), 5);
    }

    #[test]
    fn clique_dfs_finds_all_cliques_with_common_sets() {
        // Triangle 0-1-2 plus pendant 3 attached to 2.
        let g = Graph::from_edges(4, &[(0, 1), (0, 2), (1, 2), (2, 3)]).unwrap();
        let sample = [0u32, 1, 2, 3];
        let scope = [0u32, 1, 2, 3];
        let mut seen = Vec::new();
        for_each_clique_with_common(&g, &sample, 3, &scope, 10_000, &mut |u, common| {
            seen.push((u.to_vec(), common.to_vec()));
            Ok(())
        })
        .unwrap();
        assert!(seen.contains(&(vec![0, 1, 2], vec![0, 1, 2])));
        assert!(seen.contains(&(vec![2, 3], vec![2, 3])));
        assert!(seen.contains(&(vec![0], vec![0, 1, 2])));
        // Non-cliques never appear.
        assert!(seen.iter().all(|(u, _)| g.is_clique(&NodeSet::from_ids(u.iter().copied()))));
    }

    #[test]
    fn trim_keeps_dense_core() {
        // K12 plus a hanger adjacent to five members: the hanger's density
        // 5/13 falls below the removal bar, every clique node stays above it.
        let mut edges: Vec<(u32, u32)> = Graph::complete(12).edges().collect();
        edges.extend([(12, 0), (12, 1), (12, 2), (12, 3), (12, 4)]);
        let g = Graph::from_edges(13, &edges).unwrap();
        let all: Vec<u32> = (0..13).collect();
        let trimmed = trim_by_density(&g, &all, 0.8, 0.6).unwrap();
        assert_eq!(trimmed, NodeSet::from_ids(0..12));
        // Already-dense input is untouched.
        let core: Vec<u32> = (0..12).collect();
        assert_eq!(trim_by_density(&g, &core, 0.8, 0.6).unwrap(), NodeSet::from_ids(0..12));
    }

    #[test]
    fn run_trials_matches_across_worker_counts() {
        let trials: Vec<u32> = (0..37).collect();
        let g = Graph::complete(4);
        let run = |threads| {
            run_trials(&trials, threads, |idx, &t| {
                let _ = &g;
                if t % 3 == 0 {
                    return Ok(TrialOutput::skipped());
                }
                Ok(TrialOutput {
                    candidates: vec![CandidateSet {
                        members: NodeSet::from_ids([t % 5, t % 7 + 5]),
                        algorithm: crate::detector::AlgorithmKind::Clique,
                        starting_node: Some(t),
                        seed_set: None,
                        alpha_used: None,
                        trial_index: idx,
                    }],
                    ran: true,
                })
            })
            .unwrap()
        };
        let (c1, s1) = run(1);
        let (c8, s8) = run(8);
        assert_eq!(s1, s8);
        assert_eq!(c1, c8);
    }

    #[test]
    fn run_trials_reports_first_error() {
        let trials: Vec<u32> = (0..100).collect();
        let err = run_trials(&trials, 4, |idx, _| {
            if idx >= 10 {
                Err(Error::BudgetExceeded(format!("trial {idx}")))
            } else {
                Ok(TrialOutput::skipped())
            }
        })
        .unwrap_err();
        assert!(err.to_string().contains("trial 10"), "{err}");
    }
}
