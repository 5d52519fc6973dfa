//! Command-line surface binding generation, detection, validation,
//! evaluation, oracles, and recovery benchmarks into reproducible runs.
//!
//! Exit codes: 0 success, 2 usage, 3 I/O, 4 invalid params, 5 budget
//! exceeded, 6 generation infeasible.

use crate::detector::{detect, AlgorithmKind};
use crate::error::Error;
use crate::evaluation::{match_communities, recovery_rate, RecoverySpec};
use crate::generator::{generate, AmbientSpec, GroundTruth};
use crate::graph::NodeSet;
use crate::io;
use crate::oracle;
use crate::params::{DetectorParams, ModelKind, ModelParams};
use crate::validator::validate;
use crate::Result;
use clap::{Parser, Subcommand};
use std::fmt::Write as _;
use std::path::PathBuf;

#[derive(Parser)]
#[command(
    name = "commfind",
    version,
    about = "Generate planted overlapping-community networks and recover them \
             with sampling-based detectors"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a planted instance and write the graph and truth files.
    Generate {
        /// clique | dense | affinity | anysize-clique | anysize-dense | sparse
        #[arg(long)]
        model: String,
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out_graph: PathBuf,
        #[arg(long)]
        out_truth: PathBuf,
        /// none | uniform | gap-stress
        #[arg(long, default_value = "none")]
        ambient: String,
    },
    /// Run a detector over a graph file and write the result JSON.
    Detect {
        /// clique | dense | robust | anysize-dense | anysize-clique |
        /// gap-clique | gap-dense | sparse
        #[arg(long)]
        algo: String,
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        /// Worker count; never changes the output content.
        #[arg(long, default_value_t = 1)]
        threads: usize,
    },
    /// Check a (graph, truth, params) triple against the model assumptions.
    Validate {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        truth: PathBuf,
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Score detected communities against ground truth.
    Evaluate {
        /// Detection result JSON or a communities text file.
        #[arg(long)]
        found: PathBuf,
        #[arg(long)]
        truth: PathBuf,
        /// Needed for the relaxed-match flags.
        #[arg(long)]
        graph: Option<PathBuf>,
        #[arg(long)]
        epsilon: f64,
        #[arg(long, default_value_t = 0.95)]
        jaccard_threshold: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exhaustive baselines for small graphs.
    Oracle {
        #[arg(long)]
        graph: PathBuf,
        /// cliques | alpha-sets | paths2
        #[arg(long)]
        mode: String,
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long)]
        alpha_out: Option<f64>,
        #[arg(long, default_value_t = 1)]
        min_size: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Recovery-rate estimation: one instance from the base seed, the
    /// detector rerun once per trial seed.
    Bench {
        /// Config with model, ambient, algo, and all parameters.
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        algo: String,
        #[arg(long)]
        trials: u64,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        threads: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Parse arguments and dispatch; returns the process exit code. Usage
/// errors exit through clap with code 2.
pub fn main() -> i32 {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Generate { model, config, seed, out_graph, out_truth, ambient } => {
            let cfg = io::config_from_str(&io::read_to_string(&config)?)?;
            let kind = ModelKind::parse(&model)?;
            let params = ModelParams::from_config(&cfg, kind)?;
            let ambient = AmbientSpec::parse(&ambient, &cfg)?;
            let (graph, truth, record) = generate(&params, kind, &ambient, seed)?;
            io::write_string(&out_graph, &io::graph_to_string(&graph))?;
            io::write_string(
                &out_truth,
                &io::communities_to_string(&truth.communities, Some(&truth.affinities)),
            )?;
            let mut echo = serde_json::to_string_pretty(&record).expect("record serialization");
            echo.push('\n');
            print!("{echo}");
            Ok(())
        }
        Command::Detect { algo, graph, config, seed, out, threads } => {
            let algorithm = AlgorithmKind::parse(&algo)?;
            let g = io::graph_from_str(&io::read_to_string(&graph)?)?;
            let cfg = io::config_from_str(&io::read_to_string(&config)?)?;
            let params = DetectorParams::from_config(&cfg)?;
            let result = detect(algorithm, &g, &params, seed, threads)?;
            io::write_string(&out, &io::result_to_json(&result))?;
            Ok(())
        }
        Command::Validate { graph, truth, config, out } => {
            let g = io::graph_from_str(&io::read_to_string(&graph)?)?;
            let cfg = io::config_from_str(&io::read_to_string(&config)?)?;
            let model_name = cfg.model.clone().ok_or_else(|| {
                Error::InvalidParams("validate needs a `model` key in the config".into())
            })?;
            let kind = ModelKind::parse(&model_name)?;
            let params = ModelParams::from_config(&cfg, kind)?;
            let (communities, affinities) =
                io::communities_from_str(&io::read_to_string(&truth)?)?;
            let affinities = affinities
                .unwrap_or_else(|| communities.iter().map(|c| vec![1.0; c.len()]).collect());
            let truth = GroundTruth { communities, affinities, ambient_edges: Vec::new() };
            let report = validate(&g, &truth, &params, kind);
            emit_json(&report, out.as_deref())
        }
        Command::Evaluate { found, truth, graph, epsilon, jaccard_threshold, out } => {
            let found_text = io::read_to_string(&found)?;
            let found_sets: Vec<NodeSet> = if found_text.trim_start().starts_with('{') {
                io::candidates_from_json(&found_text)?
            } else {
                io::communities_from_str(&found_text)?.0
            };
            let (truth_sets, _) = io::communities_from_str(&io::read_to_string(&truth)?)?;
            let g = match &graph {
                Some(path) => Some(io::graph_from_str(&io::read_to_string(path)?)?),
                None => None,
            };
            let report = match_communities(
                &found_sets,
                &truth_sets,
                jaccard_threshold,
                g.as_ref().map(|g| (g, epsilon)),
            );
            emit_json(&report, out.as_deref())
        }
        Command::Oracle { graph, mode, alpha, alpha_out, min_size, out } => {
            let g = io::graph_from_str(&io::read_to_string(&graph)?)?;
            let text = match mode.as_str() {
                "cliques" => {
                    let cliques = oracle::enumerate_maximal_cliques(&g, min_size)?;
                    io::communities_to_string(&cliques, None)
                }
                "alpha-sets" => {
                    let alpha = alpha.ok_or_else(|| {
                        Error::InvalidParams("oracle alpha-sets needs --alpha".into())
                    })?;
                    let alpha_out = alpha_out.ok_or_else(|| {
                        Error::InvalidParams("oracle alpha-sets needs --alpha-out".into())
                    })?;
                    let sets =
                        oracle::enumerate_alpha_epsilon_sets(&g, alpha, alpha_out, min_size)?;
                    io::communities_to_string(&sets, None)
                }
                "paths2" => {
                    let table = oracle::count_length2_paths_matrix(&g)?;
                    let mut text = String::new();
                    for u in 0..g.node_count() {
                        for v in (u + 1)..g.node_count() {
                            if table[u][v] > 0 {
                                let _ = writeln!(text, "{u} {v} {}", table[u][v]);
                            }
                        }
                    }
                    text
                }
                other => {
                    return Err(Error::InvalidParams(format!("unknown oracle mode `{other}`")))
                }
            };
            match out {
                Some(path) => io::write_string(&path, &text)?,
                None => print!("{text}"),
            }
            Ok(())
        }
        Command::Bench { spec, algo, trials, seed, threads, out } => {
            let cfg = io::config_from_str(&io::read_to_string(&spec)?)?;
            let algorithm = AlgorithmKind::parse(&algo)?;
            let model_name = cfg.model.clone().ok_or_else(|| {
                Error::InvalidParams("bench spec needs a `model` key".into())
            })?;
            let kind = ModelKind::parse(&model_name)?;
            let model_params = ModelParams::from_config(&cfg, kind)?;
            let ambient =
                AmbientSpec::parse(cfg.ambient.as_deref().unwrap_or("none"), &cfg)?;
            let detector_params = DetectorParams::from_config(&cfg)?;
            let spec = RecoverySpec {
                model: kind,
                model_params,
                ambient,
                algorithm,
                detector_params,
            };
            let table = recovery_rate(&spec, trials, seed, threads)?;
            print!("{}", render_recovery_table(&table));
            if let Some(path) = out {
                let mut json =
                    serde_json::to_string_pretty(&table).expect("table serialization");
                json.push('\n');
                io::write_string(&path, &json)?;
            }
            Ok(())
        }
    }
}

fn emit_json<T: serde::Serialize>(value: &T, out: Option<&std::path::Path>) -> Result<()> {
    let mut json = serde_json::to_string_pretty(value).expect("report serialization");
    json.push('\n');
    match out {
        Some(path) => io::write_string(path, &json),
        None => {
            print!("{json}");
            Ok(())
        }
    }
}

/// Aligned-text rendering of a recovery table.
pub fn render_recovery_table(table: &crate::evaluation::RecoveryTable) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "algorithm {}  model {}  trials {}  base seed {}",
        table.algorithm, table.model, table.trials, table.base_seed
    );
    let _ = writeln!(
        out,
        "{:>9}  {:>6}  {:>7}  {:>7}  {:>12}  {:>7}",
        "community", "exact", "rate", "relaxed", "wilson95", "r-rate"
    );
    for row in &table.rows {
        let _ = writeln!(
            out,
            "{:>9}  {:>6}  {:>7.3}  {:>7}  [{:.3},{:.3}]  {:>7.3}",
            row.community_index,
            row.exact_hits,
            row.exact_rate,
            row.relaxed_hits,
            row.exact_wilson_low,
            row.exact_wilson_high,
            row.relaxed_rate,
        );
    }
    for (t, outcome) in table.trial_outcomes.iter().enumerate() {
        let marks: String =
            outcome.iter().map(|&hit| if hit { '+' } else { '.' }).collect();
        let _ = writeln!(out, "trial {:>4}  {}", table.base_seed + t as u64, marks);
    }
    let _ = writeln!(out, "mean exact rate {:.3}", table.mean_exact_rate);
    out
}
