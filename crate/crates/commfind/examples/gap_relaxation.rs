//! When outsiders fall inside the gap, exact recovery is off the table; the
//! relaxed detectors trim candidate neighborhoods by density instead and
//! promise a set close to the community with high internal density.
//!
//! ```bash
//! cargo run --release --example gap_relaxation
//! ```

use commfind::detector::{clique_find, gap_relaxed_clique_find};
use commfind::generator::{generate, AmbientSpec};
use commfind::params::{DetectorParams, ModelKind, ModelParams};
use commfind::validator::check_gap;

fn main() -> Result<(), commfind::Error> {
    // K40 plus three stress nodes, each wired to floor((1 - eps/2) * 40)
    // = 32 members: inside the gap by construction.
    let model = ModelParams {
        n: 60,
        k: 40,
        m: 40,
        d: 1,
        delta: 1.0,
        epsilon: 0.4,
        gamma: 0.5,
        alpha: 1.0,
        alpha_min: 1.0,
        beta: 1.0,
        b: 0.0,
        community_count: 1,
    };
    let seed = 3;
    let (graph, truth, record) =
        generate(&model, ModelKind::CliqueSimilar, &AmbientSpec::GapStress { count: 3 }, seed)?;
    let community = &truth.communities[0];
    println!(
        "planted K40 with stress nodes {:?}, each adjacent to {} members",
        record.stress_nodes,
        record.stress_adjacency.unwrap()
    );
    let gap = check_gap(&graph, &truth, &model);
    println!(
        "gap check fails as intended, witnesses: {:?}",
        gap.witnesses.iter().map(|w| w.node).collect::<Vec<_>>()
    );

    let params = DetectorParams {
        k: Some(40),
        d: Some(1),
        delta: Some(1.0),
        epsilon: Some(0.4),
        gamma: Some(0.5),
        epsilon_prime: Some(0.2),
        sample_prob_scale: 0.25,
        ..DetectorParams::default()
    };

    let strict = clique_find(&graph, &params, seed)?;
    println!("\nstrict detector: {} candidates", strict.candidates.len());

    let relaxed = gap_relaxed_clique_find(&graph, &params, seed)?;
    println!("relaxed detector: {} candidates", relaxed.candidates.len());
    for c in &relaxed.candidates {
        let covered = c.members.intersection_count(community);
        let min_density = c
            .members
            .iter()
            .map(|v| graph.open_adjacency_count(v, &c.members) as f64 / c.members.len() as f64)
            .fold(f64::INFINITY, f64::min);
        println!(
            "  {} members, |C' n C| = {covered} (need >= 24), min density {min_density:.3} \
             (need >= 0.6)",
            c.members.len()
        );
    }
    Ok(())
}
