//! Text file formats and the result JSON layout.
//!
//! Graph file: UTF-8 text, first line `n m`, then `m` lines `u v` with
//! `0 <= u < v < n` in ascending lexicographic order, single spaces, LF
//! endings, no comments. The loader enforces the format strictly, so
//! loading and re-serializing a file reproduces it byte for byte.
//!
//! Communities file: one community per line as ascending space-separated
//! ids; the generator appends ` | a=<affinity list>` (parallel to the
//! member list), which consumers other than the validator ignore.
//!
//! Config file: flat `key = value` lines, `#` starts a comment line, keys
//! are exactly the parameter field names in lower_snake_case, unknown keys
//! are errors.

use crate::detector::DetectionResult;
use crate::error::Error;
use crate::graph::{Graph, NodeSet};
use crate::params::Config;
use crate::Result;
use serde::Serialize;
use std::fmt::Write as _;
use std::path::Path;

/// Serialize a graph in the edge-list format.
pub fn graph_to_string(g: &Graph) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{} {}", g.node_count(), g.edge_count());
    for (u, v) in g.edges() {
        let _ = writeln!(out, "{u} {v}");
    }
    out
}

/// Parse a graph, enforcing the format exactly.
pub fn graph_from_str(text: &str) -> Result<Graph> {
    let mut lines = text.split('\n');
    let header = lines
        .next()
        .ok_or_else(|| Error::Io("graph file: missing header line".into()))?;
    let (n, m) = parse_pair(header, usize::MAX)
        .ok_or_else(|| Error::Io(format!("graph file: malformed header `{header}`")))?;
    let mut edges: Vec<(u32, u32)> = Vec::with_capacity(m);
    let mut prev: Option<(usize, usize)> = None;
    for (i, line) in lines.by_ref().take(m).enumerate() {
        let (u, v) = parse_pair(line, n.saturating_sub(1)).ok_or_else(|| {
            Error::Io(format!("graph file: malformed edge line {}: `{line}`", i + 2))
        })?;
        if u >= v {
            return Err(Error::Io(format!(
                "graph file: edge line {} must satisfy u < v, got `{line}`",
                i + 2
            )));
        }
        if let Some(p) = prev {
            if (u, v) <= p {
                return Err(Error::Io(format!(
                    "graph file: edges must be strictly ascending (duplicate or disorder at \
                     line {})",
                    i + 2
                )));
            }
        }
        prev = Some((u, v));
        edges.push((u as u32, v as u32));
    }
    if edges.len() != m {
        return Err(Error::Io(format!(
            "graph file: header promises {m} edges, found {}",
            edges.len()
        )));
    }
    for rest in lines {
        if !rest.is_empty() {
            return Err(Error::Io(format!("graph file: trailing content `{rest}`")));
        }
    }
    Graph::from_edges(n, &edges).map_err(|e| Error::Io(format!("graph file: {e}")))
}

/// Two space-separated integers, each at most `max`, nothing else.
fn parse_pair(line: &str, max: usize) -> Option<(usize, usize)> {
    let (a, b) = line.split_once(' ')?;
    if b.contains(' ') || a.is_empty() || b.is_empty() {
        return None;
    }
    let a: usize = a.parse().ok()?;
    let b: usize = b.parse().ok()?;
    (a <= max && b <= max).then_some((a, b))
}

/// Serialize communities (with optional parallel affinity lists).
pub fn communities_to_string(communities: &[NodeSet], affinities: Option<&[Vec<f64>]>) -> String {
    let mut out = String::new();
    for (i, c) in communities.iter().enumerate() {
        let ids: Vec<String> = c.iter().map(|v| v.to_string()).collect();
        out.push_str(&ids.join(" "));
        if let Some(aff) = affinities {
            let vals: Vec<String> = aff[i].iter().map(|p| p.to_string()).collect();
            out.push_str(" | a=");
            out.push_str(&vals.join(" "));
        }
        out.push('\n');
    }
    out
}

/// Parse a communities file; affinity suffixes are returned when present on
/// every line, otherwise ignored.
pub fn communities_from_str(text: &str) -> Result<(Vec<NodeSet>, Option<Vec<Vec<f64>>>)> {
    let mut communities = Vec::new();
    let mut affinities: Vec<Vec<f64>> = Vec::new();
    let mut affinity_lines = 0usize;
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let (ids_part, aff_part) = match line.split_once('|') {
            Some((ids, aff)) => (ids, Some(aff)),
            None => (line, None),
        };
        let mut ids = Vec::new();
        for tok in ids_part.split_whitespace() {
            let v: u32 = tok.parse().map_err(|_| {
                Error::Io(format!("communities file line {}: bad node id `{tok}`", i + 1))
            })?;
            ids.push(v);
        }
        if ids.is_empty() {
            return Err(Error::Io(format!("communities file line {}: empty community", i + 1)));
        }
        if ids.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Io(format!(
                "communities file line {}: ids must be ascending and distinct",
                i + 1
            )));
        }
        let mut parsed_aff = Vec::new();
        if let Some(aff) = aff_part {
            let aff = aff.trim();
            let body = aff.strip_prefix("a=").ok_or_else(|| {
                Error::Io(format!("communities file line {}: expected `| a=...`", i + 1))
            })?;
            for tok in body.split_whitespace() {
                let p: f64 = tok.parse().map_err(|_| {
                    Error::Io(format!("communities file line {}: bad affinity `{tok}`", i + 1))
                })?;
                parsed_aff.push(p);
            }
            if parsed_aff.len() != ids.len() {
                return Err(Error::Io(format!(
                    "communities file line {}: {} affinities for {} members",
                    i + 1,
                    parsed_aff.len(),
                    ids.len()
                )));
            }
            affinity_lines += 1;
        }
        communities.push(NodeSet::from_sorted(ids));
        affinities.push(parsed_aff);
    }
    let affinities =
        (affinity_lines == communities.len() && !communities.is_empty()).then_some(affinities);
    Ok((communities, affinities))
}

/// Parse a flat `key = value` config.
pub fn config_from_str(text: &str) -> Result<Config> {
    let mut cfg = Config::default();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            Error::InvalidParams(format!("config line {}: expected `key = value`", i + 1))
        })?;
        cfg.set(key.trim(), value.trim())?;
    }
    Ok(cfg)
}

/// Result JSON: `algorithm`, `seed`, `params` (the echo plus resolved
/// formula values), `candidates` as sorted id arrays in lexicographic
/// order, and `stats`. `wall_time_ms` inside `stats` is the only
/// nondeterministic field.
#[derive(Serialize)]
struct ResultJson<'a> {
    algorithm: &'a str,
    seed: u64,
    params: ParamsEcho<'a>,
    candidates: Vec<&'a [u32]>,
    stats: StatsJson,
}

#[derive(Serialize)]
struct ParamsEcho<'a> {
    #[serde(flatten)]
    params: &'a crate::params::DetectorParams,
    resolved: std::collections::BTreeMap<&'a str, f64>,
}

#[derive(Serialize)]
struct StatsJson {
    trials_run: u64,
    trials_skipped: u64,
    wall_time_ms: u64,
}

pub fn result_to_json(result: &DetectionResult) -> String {
    let json = ResultJson {
        algorithm: result.algorithm.name(),
        seed: result.seed,
        params: ParamsEcho {
            params: &result.params,
            resolved: result.resolved.iter().map(|(k, v)| (k.as_str(), *v)).collect(),
        },
        candidates: result.candidates.iter().map(|c| c.members.as_slice()).collect(),
        stats: StatsJson {
            trials_run: result.stats.trials_run,
            trials_skipped: result.stats.trials_skipped,
            wall_time_ms: result.wall_time_ms,
        },
    };
    let mut out = serde_json::to_string_pretty(&json).expect("result serialization");
    out.push('\n');
    out
}

/// Candidate member lists from a result JSON document.
pub fn candidates_from_json(text: &str) -> Result<Vec<NodeSet>> {
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| Error::Io(format!("result json: {e}")))?;
    let arrays = value
        .get("candidates")
        .and_then(|c| c.as_array())
        .ok_or_else(|| Error::Io("result json: missing `candidates` array".into()))?;
    let mut out = Vec::with_capacity(arrays.len());
    for entry in arrays {
        let ids = entry
            .as_array()
            .ok_or_else(|| Error::Io("result json: candidate must be an id array".into()))?
            .iter()
            .map(|v| {
                v.as_u64()
                    .map(|x| x as u32)
                    .ok_or_else(|| Error::Io("result json: non-integer node id".into()))
            })
            .collect::<Result<Vec<u32>>>()?;
        out.push(NodeSet::from_ids(ids));
    }
    Ok(out)
}

pub fn read_to_string(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

pub fn write_string(path: &Path, content: &str) -> Result<()> {
    std::fs::write(path, content).map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn graph_round_trip_is_byte_exact() {
        let g = Graph::from_edges(5, &[(0, 1), (0, 4), (2, 3)]).unwrap();
        let text = graph_to_string(&g);
        assert_eq!(text, "5 3\n0 1\n0 4\n2 3\n");
        let back = graph_from_str(&text).unwrap();
        assert_eq!(graph_to_string(&back), text);
    }

    #[test]
    fn malformed_graphs_are_rejected() {
        for bad in [
            "",
            "3\n",
            "3 1\n0 0\n",
            "3 1\n1 0\n",
            "3 2\n0 1\n0 1\n",
            "3 2\n0 2\n0 1\n",
            "3 1\n0 5\n",
            "3 2\n0 1\n",
            "3 1\n0  1\n",
            "3 1\n0 1\nbogus\n",
        ] {
            assert!(graph_from_str(bad).is_err(), "accepted: {bad:?}");
        }
    }

    #[test]
    fn communities_round_trip_with_affinities() {
        let communities = vec![NodeSet::from_ids([0, 2, 5]), NodeSet::from_ids([1, 3])];
        let affinities = vec![vec![1.0, 0.5, 0.75], vec![1.0, 1.0]];
        let text = communities_to_string(&communities, Some(&affinities));
        let (back, aff) = communities_from_str(&text).unwrap();
        assert_eq!(back, communities);
        assert_eq!(aff.unwrap(), affinities);

        // Plain form without affinities parses too.
        let plain = communities_to_string(&communities, None);
        let (back, aff) = communities_from_str(&plain).unwrap();
        assert_eq!(back, communities);
        assert!(aff.is_none());
    }

    #[test]
    fn config_parsing_and_unknown_keys() {
        let cfg = config_from_str("# instance\nn = 30\nk = 10\nepsilon = 0.4\n\nd = 2\n").unwrap();
        assert_eq!(cfg.n, Some(30));
        assert_eq!(cfg.d, Some(2));
        assert_eq!(cfg.epsilon, Some(0.4));
        assert!(config_from_str("unknown_key = 1\n").is_err());
        assert!(config_from_str("n 30\n").is_err());
    }

    #[test]
    fn result_json_has_the_contract_fields() {
        use crate::detector::{clique_find, DetectionResult};
        let g = Graph::complete(8);
        let params = crate::params::DetectorParams {
            k: Some(8),
            d: Some(1),
            delta: Some(1.0),
            epsilon: Some(0.5),
            gamma: Some(1.0),
            sample_prob_scale: 0.5,
            ..Default::default()
        };
        let result: DetectionResult = clique_find(&g, &params, 5).unwrap();
        let json = result_to_json(&result);
        let value: serde_json::Value = serde_json::from_str(&json).unwrap();
        for field in ["algorithm", "seed", "params", "candidates", "stats"] {
            assert!(value.get(field).is_some(), "missing {field}");
        }
        for field in ["trials_run", "trials_skipped", "wall_time_ms"] {
            assert!(value["stats"].get(field).is_some(), "missing stats.{field}");
        }
        let candidates = candidates_from_json(&json).unwrap();
        assert_eq!(candidates, result.member_sets());
    }

    proptest! {
        #[test]
        fn arbitrary_graphs_round_trip(edges in proptest::collection::vec((0u32..20, 0u32..20), 0..60)) {
            let edges: Vec<(u32, u32)> = edges
                .into_iter()
                .filter(|&(u, v)| u != v)
                .map(|(u, v)| (u.min(v), u.max(v)))
                .collect::<std::collections::BTreeSet<_>>()
                .into_iter()
                .collect();
            let g = Graph::from_edges(20, &edges).unwrap();
            let text = graph_to_string(&g);
            let back = graph_from_str(&text).unwrap();
            prop_assert_eq!(graph_to_string(&back), text);
        }
    }
}
