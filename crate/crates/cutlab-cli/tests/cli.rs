//! End-to-end tests of the `cutlab` binary: representative invocations,
//! determinism, exit codes and help snapshots.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_cutlab"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_of(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).expect("utf-8 output")
}

fn exit_code(args: &[&str]) -> i32 {
    run(args).status.code().expect("exit code")
}

fn write_c5() -> (tempfile::TempDir, PathBuf) {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c5.edges");
    std::fs::write(&path, "5 5\n0 1\n1 2\n2 3\n3 4\n0 4\n").unwrap();
    (dir, path)
}

#[test]
fn maxcut_of_a_pentagon_prints_four() {
    let (_dir, c5) = write_c5();
    assert_eq!(
        stdout_of(&["maxcut", "--graph", c5.to_str().unwrap(), "--r", "2"]),
        "4\n"
    );
    // The exhaustive reference engine agrees.
    assert_eq!(
        stdout_of(&[
            "maxcut",
            "--graph",
            c5.to_str().unwrap(),
            "--engine",
            "naive"
        ]),
        "4\n"
    );
    let json: serde_json::Value = serde_json::from_str(&stdout_of(&[
        "maxcut",
        "--graph",
        c5.to_str().unwrap(),
        "--format",
        "json",
    ]))
    .unwrap();
    assert_eq!(json["max_cut_size"], 4);
    assert_eq!(json["m"], 5);
}

#[test]
fn pattern_constants_match_the_documented_values() {
    let json: serde_json::Value =
        serde_json::from_str(&stdout_of(&["hconst", "--pattern", "K3"])).unwrap();
    assert_eq!(json["m2"], "2/1");
    assert_eq!(json["pi"], "1/1");
    assert!((json["theta"].as_f64().unwrap() - 1.7320508).abs() < 1e-6);

    let json: serde_json::Value =
        serde_json::from_str(&stdout_of(&["hconst", "--pattern", "K4"])).unwrap();
    assert_eq!(json["m2"], "5/2");
    assert_eq!(json["pi"], "1/1");
}

#[test]
fn generation_is_deterministic_per_seed_and_stream() {
    let args = [
        "gen", "--model", "gnm", "--n", "5", "--m", "4", "--seed", "1",
    ];
    assert_eq!(stdout_of(&args), stdout_of(&args));

    let gnp = [
        "gen", "--model", "gnp", "--n", "12", "--p", "0.4", "--seed", "9",
    ];
    assert_eq!(stdout_of(&gnp), stdout_of(&gnp));

    let other_stream = stdout_of(&[
        "gen", "--model", "gnm", "--n", "5", "--m", "4", "--seed", "1", "--stream", "1",
    ]);
    assert_ne!(stdout_of(&args), other_stream);

    // Edge-list output parses back through the graph-reading subcommands.
    let edges = stdout_of(&[
        "gen", "--model", "gnm", "--n", "6", "--m", "7", "--seed", "3", "--format", "edges",
    ]);
    assert!(edges.starts_with("6 7\n"));
    assert_eq!(edges.lines().count(), 8);
}

#[test]
fn graph6_output_round_trips_through_graph_input() {
    let dir = tempfile::tempdir().unwrap();
    let g6_path = dir.path().join("g.g6");
    let g6 = stdout_of(&[
        "gen", "--model", "gnm", "--n", "8", "--m", "12", "--seed", "4",
    ]);
    std::fs::write(&g6_path, &g6).unwrap();
    let json: serde_json::Value = serde_json::from_str(&stdout_of(&[
        "maxcut",
        "--graph",
        g6_path.to_str().unwrap(),
        "--format",
        "json",
    ]))
    .unwrap();
    assert_eq!(json["n"], 8);
    assert_eq!(json["m"], 12);
}

#[test]
fn equivalence_and_core_agree_on_a_pentagon() {
    let (_dir, c5) = write_c5();
    let eq: serde_json::Value =
        serde_json::from_str(&stdout_of(&["eq", "--graph", c5.to_str().unwrap()])).unwrap();
    // C5 has five maximum cuts; no vertex pair is equivalent under all.
    assert_eq!(eq["pair_count"], 0);
    assert_eq!(eq["x_r"], 5);
    assert_eq!(eq["components"].as_array().unwrap().len(), 5);
    assert!(eq["core"].is_null());

    let core: serde_json::Value = serde_json::from_str(&stdout_of(&[
        "core",
        "--graph",
        c5.to_str().unwrap(),
        "--alpha",
        "0.3",
    ]))
    .unwrap();
    assert_eq!(core["in_core_class"], false);

    // At d = -1 only the canonical maximum cut constrains pairs.
    let eq1: serde_json::Value = serde_json::from_str(&stdout_of(&[
        "eq",
        "--graph",
        c5.to_str().unwrap(),
        "--d",
        "-1",
    ]))
    .unwrap();
    assert_eq!(eq1["pair_count"], 4);
}

#[test]
fn cut_listing_is_complete_and_critical_edges_empty_for_a_pentagon() {
    let (_dir, c5) = write_c5();
    let jsonl = stdout_of(&["cuts", "--graph", c5.to_str().unwrap()]);
    assert_eq!(jsonl.lines().count(), 5);
    for line in jsonl.lines() {
        let cut: serde_json::Value = serde_json::from_str(line).unwrap();
        assert_eq!(cut["size"], 4);
        assert_eq!(cut["deficit"], 0);
    }
    let json: serde_json::Value = serde_json::from_str(&stdout_of(&[
        "cuts",
        "--graph",
        c5.to_str().unwrap(),
        "--format",
        "json",
    ]))
    .unwrap();
    assert_eq!(json["count"], 5);
    assert_eq!(json["max_size"], 4);

    assert_eq!(stdout_of(&["crit", "--graph", c5.to_str().unwrap()]), "");
    let crit: serde_json::Value = serde_json::from_str(&stdout_of(&[
        "crit",
        "--graph",
        c5.to_str().unwrap(),
        "--format",
        "json",
    ]))
    .unwrap();
    assert_eq!(crit["count"], 0);
}

#[test]
fn pattern_free_search_and_simonovits_verdicts() {
    let (_dir, c5) = write_c5();
    let json: serde_json::Value = serde_json::from_str(&stdout_of(&[
        "hfree",
        "--graph",
        c5.to_str().unwrap(),
        "--pattern",
        "K3",
        "--witnesses",
    ]))
    .unwrap();
    assert_eq!(json["max_edges"], 5);
    assert_eq!(json["witness_count"], 1);
    assert_eq!(json["witnesses"][0].as_array().unwrap().len(), 5);

    assert_eq!(
        stdout_of(&[
            "simonovits",
            "--graph",
            c5.to_str().unwrap(),
            "--pattern",
            "K3"
        ]),
        "false\n"
    );
}

#[test]
fn janson_sums_match_hand_values() {
    let json: serde_json::Value = serde_json::from_str(&stdout_of(&[
        "janson",
        "--pattern",
        "K3",
        "--n",
        "5",
        "--p",
        "0.5",
    ]))
    .unwrap();
    // Ten triangles in K5, each with three edges: mu = 10/8.
    assert_eq!(json["members"], 10);
    assert_eq!(json["mu"], 1.25);

    // Copies through one edge, that edge removed: three disjoint cherries.
    let json: serde_json::Value = serde_json::from_str(&stdout_of(&[
        "janson",
        "--pattern",
        "K3",
        "--n",
        "5",
        "--p",
        "0.5",
        "--edge",
        "0,1",
    ]))
    .unwrap();
    assert_eq!(json["members"], 3);
    assert_eq!(json["mu"], 0.75);
    assert_eq!(json["delta"], 0.0);
}

#[test]
fn experiment_runs_are_reproducible_and_thread_independent() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("exp.cfg");
    std::fs::write(
        &cfg,
        "kind = maxcut_second_order\nn = 10\nm = 22\ntrials = 6\nseed = 7\n",
    )
    .unwrap();
    let base = ["experiment", "--config", cfg.to_str().unwrap()];
    let first = stdout_of(&base);
    assert_eq!(first, stdout_of(&base));
    assert!(first.starts_with("n,m,p,trials,"));

    let mut one = base.to_vec();
    one.extend(["--threads", "1"]);
    let mut eight = base.to_vec();
    eight.extend(["--threads", "8"]);
    assert_eq!(stdout_of(&one), stdout_of(&eight));

    // Overrides change the run; files receive the other encodings.
    let mut small = base.to_vec();
    small.extend(["--set", "trials=3"]);
    assert_ne!(stdout_of(&small), first);

    let csv = dir.path().join("out.csv");
    let json = dir.path().join("out.json");
    let jsonl = dir.path().join("out.jsonl");
    let mut filed = base.to_vec();
    let csv_s = csv.to_str().unwrap().to_string();
    let json_s = json.to_str().unwrap().to_string();
    let jsonl_s = jsonl.to_str().unwrap().to_string();
    filed.extend(["--csv", &csv_s, "--json", &json_s, "--jsonl", &jsonl_s]);
    assert_eq!(stdout_of(&filed), "");
    assert_eq!(std::fs::read_to_string(&csv).unwrap(), first);
    let doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(doc["kind"], "maxcut_second_order");
    assert_eq!(
        std::fs::read_to_string(&jsonl).unwrap().lines().count(),
        6,
        "one record per trial"
    );
}

#[test]
fn failure_modes_map_to_documented_exit_codes() {
    let (_dir, c5) = write_c5();
    let c5 = c5.to_str().unwrap();
    // Usage problems: exit 2.
    assert_eq!(
        exit_code(&["gen", "--model", "gnm", "--n", "5", "--m", "4"]),
        2
    ); // no seed
    assert_eq!(
        exit_code(&["gen", "--model", "gnm", "--n", "5", "--seed", "1"]),
        2
    ); // no m
    assert_eq!(
        exit_code(&["gen", "--model", "gnp", "--n", "5", "--m", "3", "--seed", "1"]),
        2
    ); // wrong density flag
    assert_eq!(exit_code(&["hconst", "--pattern", "K9"]), 2);
    assert_eq!(exit_code(&["maxcut", "--graph", "/nonexistent/file"]), 2);
    assert_eq!(exit_code(&["maxcut", "--graph", c5, "--bogus-flag"]), 2);
    assert_eq!(exit_code(&["not-a-command"]), 2);
    assert_eq!(
        exit_code(&[
            "janson",
            "--pattern",
            "K3",
            "--n",
            "5",
            "--p",
            "0.5",
            "--edge",
            "x"
        ]),
        2
    );
    assert_eq!(
        exit_code(&["janson", "--pattern", "K3", "--n", "5", "--p", "1.5"]),
        2
    );

    // Desk-scale cap: exit 3.
    assert_eq!(exit_code(&["maxcut", "--graph", c5, "--budget", "1"]), 3);
    assert_eq!(exit_code(&["cuts", "--graph", c5, "--budget", "1"]), 3);

    // Success: exit 0.
    assert_eq!(exit_code(&["maxcut", "--graph", c5]), 0);
}

#[test]
fn help_output_matches_the_committed_snapshots() {
    let snapshot_dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/snapshots");
    let mut cases = vec![("help.txt".to_string(), vec!["--help"])];
    for sub in [
        "gen",
        "maxcut",
        "cuts",
        "eq",
        "core",
        "crit",
        "hconst",
        "hfree",
        "simonovits",
        "janson",
        "experiment",
    ] {
        cases.push((format!("help_{sub}.txt"), vec![sub, "--help"]));
    }
    for (file, args) in cases {
        let expected = std::fs::read_to_string(snapshot_dir.join(&file))
            .unwrap_or_else(|_| panic!("missing snapshot {file}"));
        let actual = stdout_of(&args);
        assert_eq!(actual, expected, "help text drifted from snapshot {file}");
    }
}
