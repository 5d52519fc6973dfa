//! The exhaustive baselines the detectors are audited against.
//!
//! ```bash
//! cargo run --release --example oracle_baselines
//! ```

use commfind::graph::Graph;
use commfind::oracle::{
    count_length2_paths_matrix, enumerate_alpha_epsilon_sets, enumerate_maximal_cliques,
};

fn main() -> Result<(), commfind::Error> {
    // Two K4s sharing an edge.
    let edges = [
        (0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3),
        (0, 4), (0, 5), (1, 4), (1, 5), (4, 5),
    ];
    let g = Graph::from_edges(6, &edges)?;
    println!("maximal cliques of two K4s sharing an edge:");
    for c in enumerate_maximal_cliques(&g, 2)? {
        println!("  {:?}", c.as_slice());
    }

    println!("\n(1.0, 0.5)-sets of size >= 3 in the same graph:");
    for s in enumerate_alpha_epsilon_sets(&g, 1.0, 0.5, 3)? {
        println!("  {:?}", s.as_slice());
    }

    println!("\nlength-2 path counts (nonzero pairs):");
    let table = count_length2_paths_matrix(&g)?;
    for u in 0..6 {
        for v in (u + 1)..6 {
            if table[u][v] > 0 {
                println!("  {u} {v}: {}", table[u][v]);
            }
        }
    }
    Ok(())
}
