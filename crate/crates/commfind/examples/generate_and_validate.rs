//! Generate a planted instance and check it against the model assumptions.
//!
//! ```bash
//! cargo run --release --example generate_and_validate
//! ```

use commfind::generator::{generate, AmbientSpec};
use commfind::io;
use commfind::params::{ModelKind, ModelParams};
use commfind::validator::validate;

fn main() -> Result<(), commfind::Error> {
    let cfg = io::config_from_str(include_str!("../configs/clique.conf"))?;
    let kind = ModelKind::parse(cfg.model.as_deref().unwrap())?;
    let params = ModelParams::from_config(&cfg, kind)?;
    let ambient = AmbientSpec::parse(cfg.ambient.as_deref().unwrap(), &cfg)?;

    let seed = 7;
    let (graph, truth, record) = generate(&params, kind, &ambient, seed)?;
    println!(
        "generated a {} instance: {} nodes, {} edges, {} communities (seed {seed})",
        record.model,
        graph.node_count(),
        graph.edge_count(),
        truth.communities.len()
    );
    for (i, c) in truth.communities.iter().enumerate() {
        println!("  community {i}: {} members", c.len());
    }
    if let Some(q) = record.ambient_q_effective {
        println!("  uniform ambient probability after tuning: {q:.4}");
    }

    let report = validate(&graph, &truth, &params, kind);
    println!("\nassumption checks:");
    for entry in &report.entries {
        println!(
            "  {:<18} {}  (witnesses: {})",
            entry.name,
            if entry.pass { "pass" } else { "FAIL" },
            entry.witnesses.len()
        );
    }
    println!("\nall checks pass: {}", report.all_pass);
    Ok(())
}
