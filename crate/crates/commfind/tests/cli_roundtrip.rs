//! End-to-end tests of the binary: flows, file formats, determinism, and
//! exit codes.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn binary() -> PathBuf {
    // target/debug/commfind, resolved relative to the test executable.
    let mut path = std::env::current_exe().unwrap();
    path.pop();
    if path.ends_with("deps") {
        path.pop();
    }
    path.join(format!("commfind{}", std::env::consts::EXE_SUFFIX))
}

fn run(args: &[&str]) -> Output {
    Command::new(binary()).args(args).output().expect("binary runs")
}

fn write(path: &Path, content: &str) {
    std::fs::write(path, content).unwrap();
}

fn tmp_dir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("commfind-test-{tag}-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

const CLIQUE_CONF: &str = "\
n = 80\n\
k = 16\n\
community_count = 2\n\
d = 1\n\
delta = 1.0\n\
epsilon = 0.5\n\
gamma = 0.5\n\
ambient_q = 0.02\n\
sample_prob_scale = 0.5\n\
";

#[test]
fn generate_detect_evaluate_flow() {
    let dir = tmp_dir("flow");
    let conf = dir.join("clique.conf");
    write(&conf, CLIQUE_CONF);
    let graph = dir.join("g.edges");
    let truth = dir.join("truth.txt");

    let out = run(&[
        "generate",
        "--model", "clique",
        "--config", conf.to_str().unwrap(),
        "--seed", "5",
        "--out-graph", graph.to_str().unwrap(),
        "--out-truth", truth.to_str().unwrap(),
        "--ambient", "uniform",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let echo: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(echo["seed"], 5);

    // Same flags and seed twice: byte-identical outputs.
    let graph2 = dir.join("g2.edges");
    let truth2 = dir.join("truth2.txt");
    let out = run(&[
        "generate",
        "--model", "clique",
        "--config", conf.to_str().unwrap(),
        "--seed", "5",
        "--out-graph", graph2.to_str().unwrap(),
        "--out-truth", truth2.to_str().unwrap(),
        "--ambient", "uniform",
    ]);
    assert!(out.status.success());
    assert_eq!(std::fs::read(&graph).unwrap(), std::fs::read(&graph2).unwrap());
    assert_eq!(std::fs::read(&truth).unwrap(), std::fs::read(&truth2).unwrap());

    // Round-trip: load and re-serialize reproduces the file byte for byte.
    let text = std::fs::read_to_string(&graph).unwrap();
    let g = commfind::io::graph_from_str(&text).unwrap();
    assert_eq!(commfind::io::graph_to_string(&g), text);

    let result = dir.join("result.json");
    let out = run(&[
        "detect",
        "--algo", "clique",
        "--graph", graph.to_str().unwrap(),
        "--config", conf.to_str().unwrap(),
        "--seed", "9",
        "--out", result.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    let out = run(&[
        "evaluate",
        "--found", result.to_str().unwrap(),
        "--truth", truth.to_str().unwrap(),
        "--graph", graph.to_str().unwrap(),
        "--epsilon", "0.5",
    ]);
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["f1"], 1.0, "report: {report}");

    // Evaluating the truth against itself scores perfectly too.
    let out = run(&[
        "evaluate",
        "--found", truth.to_str().unwrap(),
        "--truth", truth.to_str().unwrap(),
        "--epsilon", "0.5",
    ]);
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["f1"], 1.0);
    assert_eq!(report["exact_recovery_rate"], 1.0);
}

#[test]
fn threads_do_not_change_result_json() {
    let dir = tmp_dir("threads");
    let conf = dir.join("clique.conf");
    write(&conf, CLIQUE_CONF);
    let graph = dir.join("g.edges");
    let truth = dir.join("t.txt");
    assert!(run(&[
        "generate",
        "--model", "clique",
        "--config", conf.to_str().unwrap(),
        "--seed", "1",
        "--out-graph", graph.to_str().unwrap(),
        "--out-truth", truth.to_str().unwrap(),
        "--ambient", "uniform",
    ])
    .status
    .success());

    let mut outputs = Vec::new();
    for threads in ["1", "8"] {
        let result = dir.join(format!("r{threads}.json"));
        assert!(run(&[
            "detect",
            "--algo", "clique",
            "--graph", graph.to_str().unwrap(),
            "--config", conf.to_str().unwrap(),
            "--seed", "3",
            "--out", result.to_str().unwrap(),
            "--threads", threads,
        ])
        .status
        .success());
        let mut value: serde_json::Value =
            serde_json::from_str(&std::fs::read_to_string(&result).unwrap()).unwrap();
        value["stats"]["wall_time_ms"] = 0.into();
        outputs.push(serde_json::to_string(&value).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
}

#[test]
fn validate_and_oracle_commands() {
    let dir = tmp_dir("validate");
    let conf = dir.join("clique.conf");
    write(&conf, &format!("model = clique\n{CLIQUE_CONF}"));
    let graph = dir.join("g.edges");
    let truth = dir.join("t.txt");
    assert!(run(&[
        "generate",
        "--model", "clique",
        "--config", conf.to_str().unwrap(),
        "--seed", "2",
        "--out-graph", graph.to_str().unwrap(),
        "--out-truth", truth.to_str().unwrap(),
        "--ambient", "uniform",
    ])
    .status
    .success());

    let out = run(&[
        "validate",
        "--graph", graph.to_str().unwrap(),
        "--truth", truth.to_str().unwrap(),
        "--config", conf.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["all_pass"], true, "{report}");

    // Oracle cliques on a K5 file: one line, five ids.
    let k5 = dir.join("k5.edges");
    write(&k5, &commfind::io::graph_to_string(&commfind::graph::Graph::complete(5)));
    let out = run(&["oracle", "--graph", k5.to_str().unwrap(), "--mode", "cliques"]);
    assert!(out.status.success());
    assert_eq!(String::from_utf8_lossy(&out.stdout), "0 1 2 3 4\n");

    let out = run(&[
        "oracle",
        "--graph", k5.to_str().unwrap(),
        "--mode", "alpha-sets",
        "--alpha", "1.0",
        "--alpha-out", "0.5",
        "--min-size", "3",
    ]);
    assert!(out.status.success());
    assert_eq!(String::from_utf8_lossy(&out.stdout), "0 1 2 3 4\n");

    let out = run(&["oracle", "--graph", k5.to_str().unwrap(), "--mode", "paths2"]);
    assert!(out.status.success());
    // Every pair of a K5 has exactly three common neighbors.
    assert!(String::from_utf8_lossy(&out.stdout).lines().all(|l| l.ends_with(" 3")));
}

#[test]
fn bench_renders_a_table() {
    let dir = tmp_dir("bench");
    let conf = dir.join("spec.conf");
    write(&conf, &format!("model = clique\nambient = uniform\n{CLIQUE_CONF}"));
    let json = dir.join("bench.json");
    let out = run(&[
        "bench",
        "--spec", conf.to_str().unwrap(),
        "--algo", "clique",
        "--trials", "3",
        "--seed", "11",
        "--out", json.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("mean exact rate"), "table: {text}");
    let value: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(value["trials"], 3);
    assert_eq!(value["rows"].as_array().unwrap().len(), 2);
}

#[test]
fn bench_on_deterministic_algorithm_repeats_rows() {
    let dir = tmp_dir("bench-det");
    let conf = dir.join("spec.conf");
    // Small exhaustive instance: the detector consumes no randomness, so
    // all five per-trial rows are identical.
    write(
        &conf,
        "model = anysize-clique\nambient = none\nn = 20\nk = 8\nm = 5\ncommunity_count = 2\n\
         d = 1\nepsilon = 0.4\ngamma = 1.0\nalpha_min = 1.0\nt_override = 3\n",
    );
    let out = run(&[
        "bench",
        "--spec", conf.to_str().unwrap(),
        "--algo", "anysize-dense",
        "--trials", "5",
        "--seed", "4",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8_lossy(&out.stdout);
    let rows: Vec<&str> = text
        .lines()
        .filter(|l| l.starts_with("trial"))
        .map(|l| l.rsplit_once("  ").unwrap().1)
        .collect();
    assert_eq!(rows.len(), 5);
    assert!(rows.iter().all(|r| r == &rows[0]), "trial rows differ: {text}");
}

#[test]
fn exit_codes_match_the_contract() {
    let dir = tmp_dir("exits");
    let conf = dir.join("c.conf");
    write(&conf, CLIQUE_CONF);

    // Usage error: missing required flag.
    let out = run(&["generate", "--model", "clique"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());

    // I/O error: unreadable graph file.
    let out = run(&[
        "detect",
        "--algo", "clique",
        "--graph", dir.join("missing.edges").to_str().unwrap(),
        "--config", conf.to_str().unwrap(),
        "--seed", "1",
        "--out", dir.join("r.json").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(3));

    // Invalid params: probability formula above 1.
    let graph = dir.join("g.edges");
    write(&graph, &commfind::io::graph_to_string(&commfind::graph::Graph::complete(8)));
    let bad = dir.join("bad.conf");
    write(&bad, "n = 8\nk = 3\nd = 1\ndelta = 1.0\nepsilon = 0.3\ngamma = 0.2\n");
    let out = run(&[
        "detect",
        "--algo", "clique",
        "--graph", graph.to_str().unwrap(),
        "--config", bad.to_str().unwrap(),
        "--seed", "1",
        "--out", dir.join("r.json").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&out.stderr).contains("sampling probability"));

    // Budget exceeded: any-size dense with an oversized seed-set space.
    let big = dir.join("big.conf");
    write(&big, "n = 8\nk = 8\nd = 1\nepsilon = 0.3\ngamma = 1.0\nalpha_min = 0.6\nt_override = 4\nsubset_budget = 10\n");
    let out = run(&[
        "detect",
        "--algo", "anysize-dense",
        "--graph", graph.to_str().unwrap(),
        "--config", big.to_str().unwrap(),
        "--seed", "1",
        "--out", dir.join("r.json").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(5));

    // Generation infeasible: a community larger than the node pool.
    let infeasible = dir.join("inf.conf");
    write(&infeasible, "n = 10\nk = 20\ncommunity_count = 1\nd = 1\nepsilon = 0.3\n");
    let out = run(&[
        "generate",
        "--model", "clique",
        "--config", infeasible.to_str().unwrap(),
        "--seed", "1",
        "--out-graph", dir.join("g2.edges").to_str().unwrap(),
        "--out-truth", dir.join("t2.txt").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(6));

    // Sparse model refuses ambient edges.
    let sparse = dir.join("sparse.conf");
    write(&sparse, "n = 100\nk = 50\ncommunity_count = 2\nd = 1\nb = 12\nepsilon = 0.4\nambient_q = 0.05\n");
    let out = run(&[
        "generate",
        "--model", "sparse",
        "--config", sparse.to_str().unwrap(),
        "--seed", "1",
        "--out-graph", dir.join("g3.edges").to_str().unwrap(),
        "--out-truth", dir.join("t3.txt").to_str().unwrap(),
        "--ambient", "uniform",
    ]);
    assert_eq!(out.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&out.stderr).contains("ambient"));

    // Unknown config key.
    let unknown = dir.join("u.conf");
    write(&unknown, "n = 8\nwibble = 3\n");
    let out = run(&[
        "detect",
        "--algo", "clique",
        "--graph", graph.to_str().unwrap(),
        "--config", unknown.to_str().unwrap(),
        "--seed", "1",
        "--out", dir.join("r.json").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&out.stderr).contains("wibble"));
}
