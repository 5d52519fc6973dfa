//! Planted-instance generation with full ground truth.
//!
//! A generated instance consists of a list of planted communities (node
//! sets with per-member affinities), the realized graph, and a record of
//! every resolved parameter. Community edges follow the expected degree
//! model: a pair sharing at least one community is connected with
//! probability equal to the maximum of `p_u * p_v` over the shared
//! communities. Ambient edges connect only pairs sharing no community.
//!
//! Generation is deterministic in `(params, model, ambient, seed)`: the
//! skeleton, affinities, community edges, and ambient edges each consume
//! their own derived random stream in a fixed order.

use crate::error::Error;
use crate::graph::{Graph, NodeSet};
use crate::params::{Config, ModelKind, ModelParams};
use crate::rng::RngStream;
use crate::thresh::floor_count;
use crate::Result;
use rand::Rng;
use serde::Serialize;
use std::collections::BTreeMap;

/// How many times the planter retries before declaring infeasibility.
const PLANT_ATTEMPTS: usize = 100;

/// Safety factors applied when auto-tuning the uniform ambient probability
/// down to respect the gamma and gap constraints.
const GAMMA_SAFETY: f64 = 0.5;
const GAP_SAFETY: f64 = 0.35;

/// Ambient-edge strategy for pairs sharing no community.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum AmbientSpec {
    /// No ambient edges at all.
    None,
    /// Each non-sharing pair independently with probability `q` (tuned
    /// down automatically to respect gamma and the gap).
    Uniform { q: f64 },
    /// `count` membership-free nodes, each wired to exactly
    /// `floor((alpha_C - eps/2) |C|)` members of community 0: inside the
    /// gap, for exercising the relaxed detectors.
    GapStress { count: usize },
}

impl AmbientSpec {
    pub fn parse(name: &str, cfg: &Config) -> Result<Self> {
        match name {
            "none" => Ok(AmbientSpec::None),
            "uniform" => {
                let q = cfg.ambient_q.ok_or_else(|| {
                    Error::InvalidParams("ambient `uniform` requires `ambient_q`".into())
                })?;
                if !(0.0..=1.0).contains(&q) {
                    return Err(Error::InvalidParams(format!(
                        "ambient_q must be in [0, 1], got {q}"
                    )));
                }
                Ok(AmbientSpec::Uniform { q })
            }
            "gap-stress" => {
                let count = cfg.stress_count.ok_or_else(|| {
                    Error::InvalidParams("ambient `gap-stress` requires `stress_count`".into())
                })?;
                Ok(AmbientSpec::GapStress { count })
            }
            other => Err(Error::InvalidParams(format!("unknown ambient strategy `{other}`"))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            AmbientSpec::None => "none",
            AmbientSpec::Uniform { .. } => "uniform",
            AmbientSpec::GapStress { .. } => "gap-stress",
        }
    }
}

/// The planted communities, their affinities, and the realized ambient edges.
#[derive(Debug, Clone)]
pub struct GroundTruth {
    pub communities: Vec<NodeSet>,
    /// Per community, affinities parallel to the sorted member list.
    pub affinities: Vec<Vec<f64>>,
    pub ambient_edges: Vec<(u32, u32)>,
}

impl GroundTruth {
    pub fn affinity(&self, community: usize, node: u32) -> Option<f64> {
        let idx = self.communities[community].as_slice().binary_search(&node).ok()?;
        Some(self.affinities[community][idx])
    }

    /// Community indices containing each node.
    pub fn memberships(&self, n: usize) -> Vec<Vec<u32>> {
        let mut member_of = vec![Vec::new(); n];
        for (ci, c) in self.communities.iter().enumerate() {
            for v in c.iter() {
                member_of[v as usize].push(ci as u32);
            }
        }
        member_of
    }

    /// Whether two nodes share at least one community.
    pub fn share_community(member_of: &[Vec<u32>], u: u32, v: u32) -> bool {
        let (a, b) = (&member_of[u as usize], &member_of[v as usize]);
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => return true,
            }
        }
        false
    }

    /// Declared density floor of a community: the minimum squared affinity.
    pub fn community_floor(&self, community: usize) -> f64 {
        self.affinities[community]
            .iter()
            .fold(f64::INFINITY, |acc, &p| acc.min(p * p))
    }
}

/// Echo of everything that produced an instance.
#[derive(Debug, Clone, Serialize)]
pub struct GenRecord {
    pub model: &'static str,
    pub ambient: &'static str,
    pub seed: u64,
    pub params: ModelParams,
    /// Uniform ambient probability actually applied after auto-tuning.
    pub ambient_q_effective: Option<f64>,
    /// Nodes injected by the gap-stress strategy.
    pub stress_nodes: Vec<u32>,
    pub stress_target: Option<usize>,
    /// Members of the target community each stress node touches.
    pub stress_adjacency: Option<usize>,
}

/// Draw community node sets honoring the membership cap and size bands.
pub fn plant_memberships(
    params: &ModelParams,
    model: ModelKind,
    rng: &mut impl Rng,
) -> Result<Vec<NodeSet>> {
    params.validate(model)?;
    let inter_cap = (model == ModelKind::Sparse)
        .then(|| floor_count(params.k as f64 / (20.0 * (params.d as f64).powi(2))));
    'attempt: for attempt in 0..PLANT_ATTEMPTS {
        let _ = attempt;
        let mut capacity = vec![params.d; params.n];
        let mut communities: Vec<NodeSet> = Vec::with_capacity(params.community_count);
        for _ in 0..params.community_count {
            let size = draw_size(params, model, rng);
            let mut eligible: Vec<u32> =
                (0..params.n as u32).filter(|&v| capacity[v as usize] > 0).collect();
            shuffle(&mut eligible, rng);
            // Scan the shuffled pool, skipping nodes whose membership would
            // push a pairwise intersection past the sparse cap.
            let mut inter = vec![0usize; communities.len()];
            let mut members = Vec::with_capacity(size);
            for &v in &eligible {
                if members.len() == size {
                    break;
                }
                if let Some(cap) = inter_cap {
                    let blocked = communities
                        .iter()
                        .enumerate()
                        .any(|(j, c)| c.contains(v) && inter[j] >= cap);
                    if blocked {
                        continue;
                    }
                    for (j, c) in communities.iter().enumerate() {
                        if c.contains(v) {
                            inter[j] += 1;
                        }
                    }
                }
                members.push(v);
            }
            if members.len() < size {
                continue 'attempt;
            }
            for &v in &members {
                capacity[v as usize] -= 1;
            }
            communities.push(NodeSet::from_ids(members));
        }
        return Ok(communities);
    }
    Err(Error::GenerationInfeasible(format!(
        "could not place {} communities within n = {}, d = {} after {PLANT_ATTEMPTS} attempts",
        params.community_count, params.n, params.d
    )))
}

fn draw_size(params: &ModelParams, model: ModelKind, rng: &mut impl Rng) -> usize {
    if model == ModelKind::Sparse {
        return params.k;
    }
    if model.is_any_size() {
        // Log-uniform in [m, k].
        let (lo, hi) = (params.m as f64, params.k as f64);
        if params.m == params.k {
            return params.k;
        }
        let x = (rng.random::<f64>() * (hi.ln() - lo.ln()) + lo.ln()).exp();
        (x.round() as usize).clamp(params.m, params.k)
    } else {
        let lo = (params.delta * params.k as f64).ceil() as usize;
        rng.random_range(lo..=params.k)
    }
}

/// `count` distinct elements of `pool`, via partial Fisher-Yates.
fn sample_distinct(pool: &[u32], count: usize, rng: &mut impl Rng) -> NodeSet {
    let mut pool = pool.to_vec();
    for i in 0..count {
        let j = rng.random_range(i..pool.len());
        pool.swap(i, j);
    }
    pool.truncate(count);
    NodeSet::from_ids(pool)
}

fn shuffle(pool: &mut [u32], rng: &mut impl Rng) {
    for i in 0..pool.len().saturating_sub(1) {
        let j = rng.random_range(i..pool.len());
        pool.swap(i, j);
    }
}

fn draw_affinities(
    communities: &[NodeSet],
    params: &ModelParams,
    model: ModelKind,
    rng: &mut impl Rng,
) -> Vec<Vec<f64>> {
    communities
        .iter()
        .map(|c| {
            c.iter()
                .map(|_| match model {
                    ModelKind::CliqueSimilar | ModelKind::AnySizeClique => 1.0,
                    ModelKind::DenseSimilar => params.alpha.sqrt(),
                    ModelKind::AffinitySimilar => {
                        let lo = params.alpha.sqrt();
                        rng.random::<f64>() * (1.0 - lo) + lo
                    }
                    ModelKind::AnySizeDense => {
                        let lo = params.alpha_min.sqrt();
                        rng.random::<f64>() * (1.0 - lo) + lo
                    }
                    // Pair probability b/sqrt(k), clamped: desk-scale k may
                    // sit below b^2 where the formula exceeds 1.
                    ModelKind::Sparse => (params.b / (params.k as f64).sqrt()).sqrt().min(1.0),
                })
                .collect()
        })
        .collect()
}

/// Realize the edge set of a planted skeleton.
///
/// Community pairs are drawn with probability `max(p_u p_v)` over shared
/// communities (the minimal choice compliant with "at least the maximum").
/// Ambient edges are then added on non-sharing pairs per `ambient`.
pub fn realize_graph(
    truth_skeleton: (&[NodeSet], &[Vec<f64>]),
    params: &ModelParams,
    model: ModelKind,
    ambient: &AmbientSpec,
    edge_rng: &mut impl Rng,
    ambient_rng: &mut impl Rng,
) -> Result<(Graph, Vec<(u32, u32)>, GenRecord)> {
    let (communities, affinities) = truth_skeleton;
    if model == ModelKind::Sparse && *ambient != AmbientSpec::None {
        return Err(Error::InvalidParams(
            "the sparse model admits no ambient edges; use --ambient none".into(),
        ));
    }

    // Max of p_u p_v across shared communities, keyed by ordered pair.
    let mut pair_prob: BTreeMap<(u32, u32), f64> = BTreeMap::new();
    for (ci, c) in communities.iter().enumerate() {
        let members = c.as_slice();
        for (i, &u) in members.iter().enumerate() {
            for (j, &v) in members.iter().enumerate().skip(i + 1) {
                let prob = affinities[ci][i] * affinities[ci][j];
                let entry = pair_prob.entry((u, v)).or_insert(0.0);
                if prob > *entry {
                    *entry = prob;
                }
            }
        }
    }

    let mut edges: Vec<(u32, u32)> = Vec::new();
    for (&(u, v), &prob) in &pair_prob {
        if edge_rng.random_bool(prob.clamp(0.0, 1.0)) {
            edges.push((u, v));
        }
    }

    let member_of = {
        let mut member_of = vec![Vec::new(); params.n];
        for (ci, c) in communities.iter().enumerate() {
            for v in c.iter() {
                member_of[v as usize].push(ci as u32);
            }
        }
        member_of
    };

    let mut ambient_edges = Vec::new();
    let mut record = GenRecord {
        model: model.name(),
        ambient: ambient.name(),
        seed: 0,
        params: params.clone(),
        ambient_q_effective: None,
        stress_nodes: Vec::new(),
        stress_target: None,
        stress_adjacency: None,
    };

    match ambient {
        AmbientSpec::None => {}
        AmbientSpec::Uniform { q } => {
            let q_eff = tune_uniform_q(*q, communities, affinities, params);
            record.ambient_q_effective = Some(q_eff);
            for u in 0..params.n as u32 {
                for v in (u + 1)..params.n as u32 {
                    if GroundTruth::share_community(&member_of, u, v) {
                        continue;
                    }
                    if ambient_rng.random_bool(q_eff) {
                        ambient_edges.push((u, v));
                    }
                }
            }
        }
        AmbientSpec::GapStress { count } => {
            if communities.is_empty() {
                return Err(Error::InvalidParams("gap-stress needs at least one community".into()));
            }
            let target = 0usize;
            let community = &communities[target];
            let floor_alpha = affinities[target]
                .iter()
                .fold(f64::INFINITY, |acc, &p| acc.min(p * p));
            let touched =
                floor_count((floor_alpha - params.epsilon / 2.0) * community.len() as f64);
            let free: Vec<u32> = (0..params.n as u32)
                .filter(|&v| member_of[v as usize].is_empty())
                .collect();
            if free.len() < *count {
                return Err(Error::GenerationInfeasible(format!(
                    "gap-stress needs {count} membership-free nodes, only {} available",
                    free.len()
                )));
            }
            let stress = sample_distinct(&free, *count, ambient_rng);
            for w in stress.iter() {
                let members = sample_distinct(community.as_slice(), touched, ambient_rng);
                for u in members.iter() {
                    ambient_edges.push((u.min(w), u.max(w)));
                }
            }
            record.stress_nodes = stress.into_vec();
            record.stress_target = Some(target);
            record.stress_adjacency = Some(touched);
        }
    }

    edges.extend(ambient_edges.iter().copied());
    let graph = Graph::from_edges(params.n, &edges)?;
    Ok((graph, ambient_edges, record))
}

/// Cap the uniform ambient probability so that gamma and the gap hold with
/// margin. Never raises `q`.
fn tune_uniform_q(
    q: f64,
    communities: &[NodeSet],
    affinities: &[Vec<f64>],
    params: &ModelParams,
) -> f64 {
    let mut expected_internal = vec![0.0f64; params.n];
    let mut min_floor = f64::INFINITY;
    for (ci, c) in communities.iter().enumerate() {
        let sum: f64 = affinities[ci].iter().sum();
        for (i, v) in c.iter().enumerate() {
            let p = affinities[ci][i];
            expected_internal[v as usize] += p * (sum - p);
        }
        min_floor = min_floor.min(
            affinities[ci].iter().fold(f64::INFINITY, |acc, &p| acc.min(p * p)),
        );
    }
    let min_internal = expected_internal
        .iter()
        .filter(|&&e| e > 0.0)
        .fold(f64::INFINITY, |acc, &e| acc.min(e));
    let mut q_eff = q;
    if min_internal.is_finite() && params.n > 1 {
        let q_gamma =
            GAMMA_SAFETY * (1.0 / params.gamma - 1.0) * min_internal / (params.n - 1) as f64;
        q_eff = q_eff.min(q_gamma);
    }
    if min_floor.is_finite() {
        let q_gap = GAP_SAFETY * (min_floor - params.epsilon).max(0.0);
        q_eff = q_eff.min(q_gap);
    }
    q_eff.clamp(0.0, 1.0)
}

/// Generate a full instance: skeleton, affinities, realized graph.
///
/// Deterministic in all arguments; the returned record embeds every
/// resolved input.
pub fn generate(
    params: &ModelParams,
    model: ModelKind,
    ambient: &AmbientSpec,
    seed: u64,
) -> Result<(Graph, GroundTruth, GenRecord)> {
    let root = RngStream::new(seed, 0);
    let mut plant_rng = root.child(0).rng();
    let mut affinity_rng = root.child(1).rng();
    let mut edge_rng = root.child(2).rng();
    let mut ambient_rng = root.child(3).rng();

    let communities = plant_memberships(params, model, &mut plant_rng)?;
    let affinities = draw_affinities(&communities, params, model, &mut affinity_rng);
    let (graph, ambient_edges, mut record) = realize_graph(
        (&communities, &affinities),
        params,
        model,
        ambient,
        &mut edge_rng,
        &mut ambient_rng,
    )?;
    record.seed = seed;
    let truth = GroundTruth { communities, affinities, ambient_edges };
    Ok((graph, truth, record))
}
