//! Brute-force baselines for small instances.
//!
//! These are the reference answers detector output is tested against. They
//! are deliberately implemented on different code paths than the detectors:
//! clique enumeration is pivoted recursion over candidate sets, the
//! `(alpha, alpha_out)`-set list is a full subset scan, and the length-2
//! path table is a direct wedge count that never touches the sorted
//! set-intersection helpers.
//!
//! Every enumeration carries a hard budget and fails loudly instead of
//! truncating.

use crate::error::Error;
use crate::graph::{is_alpha_epsilon_set, Graph, NodeSet};
use crate::Result;

/// Default cap on visited recursion nodes / subsets.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

/// All maximal cliques of size at least `min_size`, canonically sorted.
pub fn enumerate_maximal_cliques(g: &Graph, min_size: usize) -> Result<Vec<NodeSet>> {
    enumerate_maximal_cliques_budgeted(g, min_size, DEFAULT_BUDGET)
}

pub fn enumerate_maximal_cliques_budgeted(
    g: &Graph,
    min_size: usize,
    budget: u64,
) -> Result<Vec<NodeSet>> {
    let mut out = Vec::new();
    let mut visited = 0u64;
    let p: Vec<u32> = (0..g.node_count() as u32).collect();
    bron_kerbosch(g, &mut Vec::new(), p, Vec::new(), &mut out, &mut visited, budget)?;
    let mut out: Vec<NodeSet> = out.into_iter().filter(|c| c.len() >= min_size).collect();
    out.sort();
    Ok(out)
}

/// Bron-Kerbosch with max-degree pivoting. `r` is the clique under
/// construction, `p` the candidates, `x` the excluded set (all sorted).
fn bron_kerbosch(
    g: &Graph,
    r: &mut Vec<u32>,
    p: Vec<u32>,
    x: Vec<u32>,
    out: &mut Vec<NodeSet>,
    visited: &mut u64,
    budget: u64,
) -> Result<()> {
    *visited += 1;
    if *visited > budget {
        return Err(Error::BudgetExceeded(format!(
            "maximal-clique enumeration exceeded {budget} recursion nodes"
        )));
    }
    if p.is_empty() && x.is_empty() {
        out.push(NodeSet::from_sorted(r.clone()));
        return Ok(());
    }
    let pivot = p
        .iter()
        .chain(x.iter())
        .copied()
        .max_by_key(|&u| g.degree(u))
        .expect("p or x nonempty");
    let todo: Vec<u32> = p.iter().copied().filter(|&v| !g.has_edge(pivot, v)).collect();
    let mut p = p;
    let mut x = x;
    for v in todo {
        let keep = |w: &&u32| g.has_edge(v, **w);
        let next_p: Vec<u32> = p.iter().filter(keep).copied().collect();
        let next_x: Vec<u32> = x.iter().filter(keep).copied().collect();
        let pos = r.partition_point(|&u| u < v);
        r.insert(pos, v);
        bron_kerbosch(g, r, next_p, next_x, out, visited, budget)?;
        r.remove(pos);
        p.retain(|&u| u != v);
        let pos = x.partition_point(|&u| u < v);
        x.insert(pos, v);
    }
    Ok(())
}

/// Every node subset of size at least `min_size` that passes
/// `is_alpha_epsilon_set(alpha, alpha_out)`, by full subset scan.
pub fn enumerate_alpha_epsilon_sets(
    g: &Graph,
    alpha: f64,
    alpha_out: f64,
    min_size: usize,
) -> Result<Vec<NodeSet>> {
    enumerate_alpha_epsilon_sets_budgeted(g, alpha, alpha_out, min_size, DEFAULT_BUDGET)
}

pub fn enumerate_alpha_epsilon_sets_budgeted(
    g: &Graph,
    alpha: f64,
    alpha_out: f64,
    min_size: usize,
    budget: u64,
) -> Result<Vec<NodeSet>> {
    let n = g.node_count();
    if n >= 64 || (n < 64 && (1u64 << n) > budget) {
        return Err(Error::BudgetExceeded(format!(
            "subset scan over n = {n} nodes exceeds the budget of {budget} subsets"
        )));
    }
    let mut out = Vec::new();
    for mask in 1u64..(1u64 << n) {
        if (mask.count_ones() as usize) < min_size {
            continue;
        }
        let s = NodeSet::from_sorted((0..n as u32).filter(|&v| mask >> v & 1 == 1).collect());
        if is_alpha_epsilon_set(g, &s, alpha, alpha_out)? {
            out.push(s);
        }
    }
    out.sort();
    Ok(out)
}

/// Exact `|G(u) n G(v)|` for all pairs, by direct wedge counting: every node
/// `w` contributes one length-2 path to each pair of its neighbors.
pub fn count_length2_paths_matrix(g: &Graph) -> Result<Vec<Vec<u32>>> {
    let n = g.node_count();
    if n > 2000 {
        return Err(Error::BudgetExceeded(format!(
            "length-2 path table limited to n <= 2000, got {n}"
        )));
    }
    let mut counts = vec![vec![0u32; n]; n];
    for w in 0..n as u32 {
        let nbrs = g.neighbors(w);
        for (i, &u) in nbrs.iter().enumerate() {
            for &v in &nbrs[i + 1..] {
                counts[u as usize][v as usize] += 1;
                counts[v as usize][u as usize] += 1;
            }
        }
    }
    Ok(counts)
}
