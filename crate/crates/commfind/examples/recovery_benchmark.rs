//! Seeded recovery-rate estimation: regenerate an instance per seed, rerun
//! the detector, and tabulate per-community hit rates with Wilson intervals.
//!
//! ```bash
//! cargo run --release --example recovery_benchmark
//! ```

use commfind::cli::render_recovery_table;
use commfind::detector::AlgorithmKind;
use commfind::evaluation::{recovery_rate, RecoverySpec};
use commfind::generator::AmbientSpec;
use commfind::io;
use commfind::params::{DetectorParams, ModelKind, ModelParams};

fn main() -> Result<(), commfind::Error> {
    let cfg = io::config_from_str(include_str!("../configs/clique.conf"))?;
    let kind = ModelKind::parse(cfg.model.as_deref().unwrap())?;
    let spec = RecoverySpec {
        model: kind,
        model_params: ModelParams::from_config(&cfg, kind)?,
        ambient: AmbientSpec::parse(cfg.ambient.as_deref().unwrap(), &cfg)?,
        algorithm: AlgorithmKind::Clique,
        detector_params: DetectorParams::from_config(&cfg)?,
    };
    let table = recovery_rate(&spec, 20, 100, 1)?;
    print!("{}", render_recovery_table(&table));
    Ok(())
}
