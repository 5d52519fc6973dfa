//! Immutable undirected graph with sorted adjacency sets, plus the
//! neighborhood, sampling, and set-certification primitives every detector
//! is built from.
//!
//! Node ids are dense `0..n`. Adjacency is stored as one sorted neighbor
//! array per node with binary-search membership; the detectors are dominated
//! by set intersection and fraction counting, which this layout serves well.
//!
//! A node counts as adjacent to itself wherever a fraction "of a set" is
//! measured for one of the set's own members: `adjacency_fraction(v, s)` is
//! `|({v} u G(v)) n s| / |s|`. Under this convention every member of a
//! clique attains fraction exactly 1, so cliques are exactly the sets that
//! pass an `alpha = 1` membership check. Outside nodes never gain from the
//! rule.

use crate::error::Error;
use crate::thresh::{at_least_fraction, at_most_fraction};
use crate::Result;
use rand::Rng;

/// Immutable undirected simple graph (no self-loops, no parallel edges).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<u32>>,
    edge_count: usize,
}

impl Graph {
    /// Graph on `n` nodes with no edges.
    pub fn empty(n: usize) -> Self {
        Graph { adj: vec![Vec::new(); n], edge_count: 0 }
    }

    /// Build from an edge list. Rejects self-loops, duplicates, and
    /// out-of-range endpoints.
    pub fn from_edges(n: usize, edges: &[(u32, u32)]) -> Result<Self> {
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in edges {
            if u == v {
                return Err(Error::InvalidInput(format!("self-loop at node {u}")));
            }
            if u as usize >= n || v as usize >= n {
                return Err(Error::InvalidInput(format!(
                    "edge ({u}, {v}) out of range for n = {n}"
                )));
            }
            adj[u as usize].push(v);
            adj[v as usize].push(u);
        }
        for (v, list) in adj.iter_mut().enumerate() {
            list.sort_unstable();
            if list.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::InvalidInput(format!("duplicate edge at node {v}")));
            }
        }
        Ok(Graph { adj, edge_count: edges.len() })
    }

    /// Complete graph on `n` nodes (test and example helper).
    pub fn complete(n: usize) -> Self {
        let mut edges = Vec::new();
        for u in 0..n as u32 {
            for v in (u + 1)..n as u32 {
                edges.push((u, v));
            }
        }
        Graph::from_edges(n, &edges).expect("complete graph is always valid")
    }

    pub fn node_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    /// Sorted open neighborhood of `v`.
    pub fn neighbors(&self, v: u32) -> &[u32] {
        &self.adj[v as usize]
    }

    pub fn degree(&self, v: u32) -> usize {
        self.adj[v as usize].len()
    }

    pub fn has_edge(&self, u: u32, v: u32) -> bool {
        self.adj[u as usize].binary_search(&v).is_ok()
    }

    /// All edges as `(u, v)` with `u < v`, ascending lexicographic.
    pub fn edges(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.adj.iter().enumerate().flat_map(|(u, list)| {
            let u = u as u32;
            list.iter().copied().filter(move |&v| u < v).map(move |v| (u, v))
        })
    }

    /// `|G(v) n s|`, self excluded.
    pub fn open_adjacency_count(&self, v: u32, s: &NodeSet) -> usize {
        sorted_intersection_count(self.neighbors(v), s.as_slice())
    }

    /// `|({v} u G(v)) n s|`: the open count plus one when `v` itself is a
    /// member of `s`.
    pub fn closed_adjacency_count(&self, v: u32, s: &NodeSet) -> usize {
        let self_hit = usize::from(s.contains(v));
        self.open_adjacency_count(v, s) + self_hit
    }

    /// True when every pair of members is adjacent.
    pub fn is_clique(&self, s: &NodeSet) -> bool {
        s.iter().all(|v| self.open_adjacency_count(v, s) == s.len() - 1)
    }
}

/// Sorted, duplicate-free set of node ids.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeSet {
    ids: Vec<u32>,
}

impl NodeSet {
    pub fn new() -> Self {
        NodeSet { ids: Vec::new() }
    }

    /// From arbitrary ids; sorts and deduplicates.
    pub fn from_ids(ids: impl IntoIterator<Item = u32>) -> Self {
        let mut ids: Vec<u32> = ids.into_iter().collect();
        ids.sort_unstable();
        ids.dedup();
        NodeSet { ids }
    }

    /// From a vector already sorted and duplicate-free.
    pub fn from_sorted(ids: Vec<u32>) -> Self {
        debug_assert!(ids.windows(2).all(|w| w[0] < w[1]));
        NodeSet { ids }
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn contains(&self, v: u32) -> bool {
        self.ids.binary_search(&v).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        self.ids.iter().copied()
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.ids
    }

    pub fn into_vec(self) -> Vec<u32> {
        self.ids
    }

    pub fn union(&self, other: &NodeSet) -> NodeSet {
        let mut out = Vec::with_capacity(self.len() + other.len());
        let (a, b) = (self.as_slice(), other.as_slice());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push(a[i]);
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        NodeSet { ids: out }
    }

    pub fn intersection_count(&self, other: &NodeSet) -> usize {
        sorted_intersection_count(self.as_slice(), other.as_slice())
    }

    pub fn intersection(&self, other: &NodeSet) -> NodeSet {
        let ids = self
            .as_slice()
            .iter()
            .copied()
            .filter(|&v| other.contains(v))
            .collect();
        NodeSet { ids }
    }
}

impl Default for NodeSet {
    fn default() -> Self {
        NodeSet::new()
    }
}

impl FromIterator<u32> for NodeSet {
    fn from_iter<T: IntoIterator<Item = u32>>(iter: T) -> Self {
        NodeSet::from_ids(iter)
    }
}

/// Count of common elements of two sorted slices.
pub(crate) fn sorted_intersection_count(a: &[u32], b: &[u32]) -> usize {
    // Binary-search the smaller side when the sizes are lopsided.
    let (small, large) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    if small.len() * 16 < large.len() {
        return small.iter().filter(|x| large.binary_search(x).is_ok()).count();
    }
    let (mut i, mut j, mut count) = (0, 0, 0);
    while i < small.len() && j < large.len() {
        match small[i].cmp(&large[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                count += 1;
                i += 1;
                j += 1;
            }
        }
    }
    count
}

/// Open neighborhood of `v` as a set, `v` itself excluded.
pub fn neighborhood(g: &Graph, v: u32) -> Result<NodeSet> {
    if v as usize >= g.node_count() {
        return Err(Error::InvalidInput(format!(
            "node {v} out of range for n = {}",
            g.node_count()
        )));
    }
    Ok(NodeSet::from_sorted(g.neighbors(v).to_vec()))
}

/// Node set of the induced graph of `s` and its neighbors: the union of the
/// members' neighborhoods joined with `s` itself.
pub fn neighborhood_of_set(g: &Graph, s: &NodeSet) -> Result<NodeSet> {
    if s.is_empty() {
        return Err(Error::InvalidInput("neighborhood of empty set".into()));
    }
    let mut out = s.clone();
    for v in s.iter() {
        if v as usize >= g.node_count() {
            return Err(Error::InvalidInput(format!(
                "node {v} out of range for n = {}",
                g.node_count()
            )));
        }
        out = out.union(&NodeSet::from_sorted(g.neighbors(v).to_vec()));
    }
    Ok(out)
}

/// Number of common neighbors `|G(u) n G(v)|` (length-2 paths between the
/// pair; neither endpoint can be a midpoint since there are no self-loops).
pub fn common_neighbor_count(g: &Graph, u: u32, v: u32) -> Result<usize> {
    if u == v {
        return Err(Error::InvalidInput(format!("common neighbors of {u} with itself")));
    }
    Ok(sorted_intersection_count(g.neighbors(u), g.neighbors(v)))
}

/// Fraction of `s` adjacent to `v`, self-inclusive for members of `s`.
pub fn adjacency_fraction(g: &Graph, v: u32, s: &NodeSet) -> Result<f64> {
    if s.is_empty() {
        return Err(Error::InvalidInput("adjacency fraction of empty set".into()));
    }
    Ok(g.closed_adjacency_count(v, s) as f64 / s.len() as f64)
}

/// True when every member of `s` is adjacent to at least an `alpha` fraction
/// of `s` and every outside node to at most an `alpha_out` fraction.
pub fn is_alpha_epsilon_set(g: &Graph, s: &NodeSet, alpha: f64, alpha_out: f64) -> Result<bool> {
    if !(0.0..=1.0).contains(&alpha_out) || !(0.0..=1.0).contains(&alpha) || alpha_out > alpha {
        return Err(Error::InvalidInput(format!(
            "thresholds must satisfy 0 <= alpha_out <= alpha <= 1, got ({alpha}, {alpha_out})"
        )));
    }
    if s.is_empty() {
        return Err(Error::InvalidInput("empty candidate set".into()));
    }
    Ok(alpha_eps_holds(g, s, alpha, alpha_out))
}

/// Unvalidated core of [`is_alpha_epsilon_set`], for internal hot paths
/// where `s` is known nonempty.
pub(crate) fn alpha_eps_holds(g: &Graph, s: &NodeSet, alpha: f64, alpha_out: f64) -> bool {
    for v in 0..g.node_count() as u32 {
        let count = g.closed_adjacency_count(v, s);
        if s.contains(v) {
            if !at_least_fraction(count, s.len(), alpha) {
                return false;
            }
        } else if !at_most_fraction(count, s.len(), alpha_out) {
            return false;
        }
    }
    true
}

/// Independent Bernoulli(p) subsample of `s`, drawn in ascending id order so
/// results are platform- and schedule-independent for a fixed stream.
pub fn bernoulli_subsample(s: &NodeSet, p: f64, rng: &mut impl Rng) -> NodeSet {
    debug_assert!((0.0..=1.0).contains(&p));
    let ids = s.iter().filter(|_| rng.random_bool(p.clamp(0.0, 1.0))).collect();
    NodeSet { ids }
}

/// Subgraph induced on `s` with dense relabeled ids, plus the map from new
/// ids back to the parent graph's ids.
pub fn induced_subgraph(g: &Graph, s: &NodeSet) -> (Graph, Vec<u32>) {
    let mapping: Vec<u32> = s.iter().collect();
    let mut adj = Vec::with_capacity(mapping.len());
    let mut edge_count = 0;
    for (new_u, &old_u) in mapping.iter().enumerate() {
        let row: Vec<u32> = g
            .neighbors(old_u)
            .iter()
            .filter_map(|&old_v| s.as_slice().binary_search(&old_v).ok())
            .map(|idx| idx as u32)
            .collect();
        edge_count += row.iter().filter(|&&v| (new_u as u32) < v).count();
        adj.push(row);
    }
    (Graph { adj, edge_count }, mapping)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::RngStream;
    use proptest::prelude::*;

    fn triangle() -> Graph {
        Graph::from_edges(3, &[(0, 1), (1, 2), (0, 2)]).unwrap()
    }

    #[test]
    fn neighborhood_reads_adjacency() {
        let g = triangle();
        assert_eq!(neighborhood(&g, 0).unwrap(), NodeSet::from_ids([1, 2]));
        let lonely = Graph::empty(1);
        assert!(neighborhood(&lonely, 0).unwrap().is_empty());
        let k5 = Graph::complete(5);
        assert_eq!(neighborhood(&k5, 3).unwrap(), NodeSet::from_ids([0, 1, 2, 4]));
        assert!(neighborhood(&g, 9).is_err());
    }

    #[test]
    fn neighborhood_of_set_joins_members() {
        let path = Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        let s0 = NodeSet::from_ids([0]);
        assert_eq!(neighborhood_of_set(&path, &s0).unwrap(), NodeSet::from_ids([0, 1]));
        let s02 = NodeSet::from_ids([0, 2]);
        assert_eq!(
            neighborhood_of_set(&path, &s02).unwrap(),
            NodeSet::from_ids([0, 1, 2])
        );
        // Two disjoint triangles, one seed in each.
        let two = Graph::from_edges(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]).unwrap();
        let s = NodeSet::from_ids([0, 3]);
        assert_eq!(
            neighborhood_of_set(&two, &s).unwrap(),
            NodeSet::from_ids([0, 1, 2, 3, 4, 5])
        );
        assert!(neighborhood_of_set(&path, &NodeSet::new()).is_err());
    }

    #[test]
    fn common_neighbors() {
        let g = triangle();
        assert_eq!(common_neighbor_count(&g, 0, 1).unwrap(), 1);
        // Star K_{1,4}: two leaves share only the hub.
        let star = Graph::from_edges(5, &[(0, 1), (0, 2), (0, 3), (0, 4)]).unwrap();
        assert_eq!(common_neighbor_count(&star, 1, 2).unwrap(), 1);
        // K_{2,6}: the two left nodes share all six right nodes.
        let mut edges = Vec::new();
        for left in 0..2u32 {
            for right in 2..8u32 {
                edges.push((left, right));
            }
        }
        let biclique = Graph::from_edges(8, &edges).unwrap();
        assert_eq!(common_neighbor_count(&biclique, 0, 1).unwrap(), 6);
        assert!(common_neighbor_count(&g, 1, 1).is_err());
    }

    #[test]
    fn adjacency_fraction_self_inclusive() {
        let k5 = Graph::complete(5);
        let s = NodeSet::from_ids(0..5);
        assert_eq!(adjacency_fraction(&k5, 0, &s).unwrap(), 1.0);
        // Outside node adjacent to two members of a K5.
        let g = Graph::from_edges(
            6,
            &[
                (0, 1), (0, 2), (0, 3), (0, 4), (1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4),
                (5, 0), (5, 1),
            ],
        )
        .unwrap();
        assert_eq!(adjacency_fraction(&g, 5, &s).unwrap(), 2.0 / 5.0);
        let singleton = NodeSet::from_ids([2]);
        assert_eq!(adjacency_fraction(&k5, 2, &singleton).unwrap(), 1.0);
    }

    #[test]
    fn alpha_epsilon_set_checks_both_sides() {
        let k5 = Graph::complete(5);
        let s = NodeSet::from_ids(0..5);
        assert!(is_alpha_epsilon_set(&k5, &s, 1.0, 0.5).unwrap());

        // K5 plus an outsider adjacent to three members: 3/5 > 0.5.
        let mut edges: Vec<(u32, u32)> = Graph::complete(5).edges().collect();
        edges.extend_from_slice(&[(5, 0), (5, 1), (5, 2)]);
        let g3 = Graph::from_edges(6, &edges).unwrap();
        assert!(!is_alpha_epsilon_set(&g3, &s, 1.0, 0.5).unwrap());

        // Adjacent to only two members: 2/5 <= 0.5.
        let mut edges: Vec<(u32, u32)> = Graph::complete(5).edges().collect();
        edges.extend_from_slice(&[(5, 0), (5, 1)]);
        let g2 = Graph::from_edges(6, &edges).unwrap();
        assert!(is_alpha_epsilon_set(&g2, &s, 1.0, 0.5).unwrap());

        assert!(is_alpha_epsilon_set(&k5, &s, 0.5, 0.9).is_err());
        assert!(is_alpha_epsilon_set(&k5, &NodeSet::new(), 1.0, 0.5).is_err());
    }

    #[test]
    fn subsample_extremes() {
        let s = NodeSet::from_ids(0..100);
        let mut rng = RngStream::new(1, 0).rng();
        assert!(bernoulli_subsample(&s, 0.0, &mut rng).is_empty());
        let mut rng = RngStream::new(1, 0).rng();
        assert_eq!(bernoulli_subsample(&s, 1.0, &mut rng), s);
    }

    #[test]
    fn subsample_monte_carlo_mean() {
        // |s| = 1000, p = 0.1: the mean over 500 seeds stays within three
        // binomial standard deviations of 100.
        let s = NodeSet::from_ids(0..1000);
        let total: usize = (0..500)
            .map(|seed| {
                let mut rng = RngStream::new(seed, 0).rng();
                bernoulli_subsample(&s, 0.1, &mut rng).len()
            })
            .sum();
        let mean = total as f64 / 500.0;
        let band = 3.0 * (1000.0_f64 * 0.1 * 0.9).sqrt();
        assert!(
            (mean - 100.0).abs() <= band,
            "mean {mean} outside 100 +/- {band}"
        );
    }

    #[test]
    fn induced_subgraph_examples() {
        let k5 = Graph::complete(5);
        let (sub, map) = induced_subgraph(&k5, &NodeSet::from_ids([1, 3, 4]));
        assert_eq!(sub, Graph::complete(3));
        assert_eq!(map, vec![1, 3, 4]);

        let (empty, map) = induced_subgraph(&k5, &NodeSet::new());
        assert_eq!(empty.node_count(), 0);
        assert!(map.is_empty());

        let path = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        let (sub, map) = induced_subgraph(&path, &NodeSet::from_ids([0, 2, 3]));
        assert_eq!(sub.edge_count(), 1);
        assert!(sub.has_edge(1, 2));
        assert_eq!(map, vec![0, 2, 3]);
    }

    #[test]
    fn strict_alpha_one_epsilon_zero_is_isolated_clique() {
        let k4 = Graph::complete(4);
        let s = NodeSet::from_ids(0..4);
        assert!(is_alpha_epsilon_set(&k4, &s, 1.0, 0.0).unwrap());
        let mut edges: Vec<(u32, u32)> = k4.edges().collect();
        edges.push((4, 0));
        let touched = Graph::from_edges(5, &edges).unwrap();
        assert!(!is_alpha_epsilon_set(&touched, &s, 1.0, 0.0).unwrap());
    }

    proptest! {
        #[test]
        fn subsample_is_replayable(seed in any::<u64>(), p in 0.0f64..=1.0) {
            let s = NodeSet::from_ids(0..64);
            let a = bernoulli_subsample(&s, p, &mut RngStream::new(seed, 5).rng());
            let b = bernoulli_subsample(&s, p, &mut RngStream::new(seed, 5).rng());
            prop_assert_eq!(a, b);
        }

        #[test]
        fn induced_subgraph_round_trips(edges in proptest::collection::vec((0u32..12, 0u32..12), 0..40)) {
            let edges: Vec<(u32, u32)> = edges
                .into_iter()
                .filter(|&(u, v)| u != v)
                .map(|(u, v)| (u.min(v), u.max(v)))
                .collect::<std::collections::BTreeSet<_>>()
                .into_iter()
                .collect();
            let g = Graph::from_edges(12, &edges).unwrap();
            let s = NodeSet::from_ids([0, 2, 3, 7, 11]);
            let (sub, map) = induced_subgraph(&g, &s);
            // Mapping back reproduces the member set and exactly the internal edges.
            prop_assert_eq!(NodeSet::from_ids(map.iter().copied()), s.clone());
            let back: Vec<(u32, u32)> = sub
                .edges()
                .map(|(u, v)| {
                    let (a, b) = (map[u as usize], map[v as usize]);
                    (a.min(b), a.max(b))
                })
                .collect();
            let expected: Vec<(u32, u32)> = g
                .edges()
                .filter(|&(u, v)| s.contains(u) && s.contains(v))
                .collect();
            let mut back_sorted = back;
            back_sorted.sort_unstable();
            prop_assert_eq!(back_sorted, expected);
        }

        #[test]
        fn fraction_is_one_inside_closed_neighborhood(edges in proptest::collection::vec((0u32..10, 0u32..10), 0..30)) {
            let edges: Vec<(u32, u32)> = edges
                .into_iter()
                .filter(|&(u, v)| u != v)
                .map(|(u, v)| (u.min(v), u.max(v)))
                .collect::<std::collections::BTreeSet<_>>()
                .into_iter()
                .collect();
            let g = Graph::from_edges(10, &edges).unwrap();
            for v in 0..10u32 {
                let mut ids: Vec<u32> = g.neighbors(v).to_vec();
                ids.push(v);
                let s = NodeSet::from_ids(ids);
                let f = adjacency_fraction(&g, v, &s).unwrap();
                prop_assert!((f - 1.0).abs() < 1e-12);
                for w in 0..10u32 {
                    let f = adjacency_fraction(&g, w, &s).unwrap();
                    prop_assert!((0.0..=1.0).contains(&f));
                }
            }
        }
    }
}
