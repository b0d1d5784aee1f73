use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_bottleneck-arena"));
    c.env_remove("BOTTLENECK_ARENA_BUDGET");
    c
}

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "fixtures", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn ok_json(args: &[&str]) -> Value {
    let out = run(args);
    assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

/// Runs a command expected to fail with a domain error and returns its code.
fn error_code(cmd: &mut Command) -> String {
    let out = cmd.output().unwrap();
    assert_eq!(out.status.code(), Some(1), "stdout: {}", String::from_utf8_lossy(&out.stdout));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert!(v["error"]["message"].is_string());
    v["error"]["code"].as_str().unwrap().to_string()
}

fn err(args: &[&str]) -> String {
    error_code(bin().args(args))
}

#[test]
fn report_envelope() {
    let v = ok_json(&["optimal", &fixture("parallel3.json")]);
    assert_eq!(v["format_version"], 1);
    assert_eq!(v["command"][0], "optimal");
    assert_eq!(v["instance_digest"].as_str().unwrap().len(), 64);
    assert!(v["seed"].is_null());
    assert!(v.get("timing").is_none());
    assert_eq!(v["payload"]["c_star"], 2);
    let timed = ok_json(&["optimal", &fixture("parallel3.json"), "--timing"]);
    assert!(timed["timing"]["elapsed_ms"].is_u64());
}

#[test]
fn counterexample_linear_poa_row() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("k4.json");
    let csv = dir.path().join("k4.csv");
    let inst_s = inst.to_str().unwrap();
    let out = run(&["generate", "--family", "counterexample", "--k", "4", "--model", "linear", "--out", inst_s]);
    assert_eq!(out.status.code(), Some(0));
    let v = ok_json(&["poa", inst_s, "--csv", csv.to_str().unwrap()]);
    assert!(v["payload"]["poa"]["value"].as_f64().unwrap() >= 4.0);
    let mut rd = csv::Reader::from_path(&csv).unwrap();
    let headers = rd.headers().unwrap().clone();
    let row = rd.records().next().unwrap().unwrap();
    let poa: f64 = row[headers.iter().position(|h| h == "poa").unwrap()].parse().unwrap();
    assert!(poa >= 4.0);
}

#[test]
fn brd_from_all_on_e_under_expsum() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("trace.csv");
    let v = ok_json(&[
        "brd",
        &fixture("counterexample4_linear.json"),
        "--model",
        "expsum",
        "--csv",
        csv.to_str().unwrap(),
    ]);
    let trace = &v["payload"]["trace"];
    assert_eq!(trace["converged"], true);
    assert!(trace["step_count"].as_u64().unwrap() >= 1);
    let start: Vec<Vec<u64>> = serde_json::from_value(v["payload"]["start"].clone()).unwrap();
    assert!(start.iter().all(|p| p == &[0]));
    let mut rd = csv::Reader::from_path(&csv).unwrap();
    let col = rd.headers().unwrap().iter().position(|h| h == "potential_after").unwrap();
    let pots: Vec<u128> = rd.records().map(|r| r.unwrap()[col].parse().unwrap()).collect();
    assert!(!pots.is_empty());
    assert!(pots.windows(2).all(|w| w[1] < w[0]));
    let initial: u128 = trace["initial_potential"].as_str().unwrap().parse().unwrap();
    assert!(pots[0] < initial);
}

#[test]
fn sweep_columns_and_values() {
    let out = run(&["sweep", "--family", "counterexample", "--k", "3..6", "--models", "linear,expsum"]);
    assert_eq!(out.status.code(), Some(0));
    let mut rd = csv::Reader::from_reader(out.stdout.as_slice());
    let headers: Vec<String> = rd.headers().unwrap().iter().map(String::from).collect();
    assert_eq!(
        headers,
        "family,k,model,L,E,c_star,worst_nash,best_nash,poa,pos,bound_value,bound_ratio,truncated".split(',').collect::<Vec<_>>()
    );
    let rows: Vec<csv::StringRecord> = rd.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 8);
    for row in rows {
        let k: f64 = row[1].parse().unwrap();
        let poa: f64 = row[8].parse().unwrap();
        match &row[2] {
            "linear_sum" => assert_eq!(poa, k),
            "exp_sum" => assert!(poa <= (2.0 * k).log2().floor()),
            other => panic!("model {other}"),
        }
    }
}

#[test]
fn verify_and_chain_with_routing_files() {
    let inst = fixture("parallel3.json");
    let v = ok_json(&["verify", &inst, "--routing", &fixture("routing_ok.json")]);
    assert_eq!(v["payload"]["is_nash"], true);
    let v = ok_json(&["verify", &inst, "--routing", &fixture("routing_not_nash.json")]);
    assert_eq!(v["payload"]["is_nash"], false);
    assert_eq!(v["payload"]["improving"].as_array().unwrap().len(), 3);

    let v = ok_json(&["chain", &inst, "--routing", &fixture("routing_ok.json"), "--root", "0,2", "--support", "exact"]);
    assert_eq!(v["payload"]["chain"]["root"], serde_json::json!([0, 2]));
    let v = ok_json(&["classify", &inst, "--routing", &fixture("routing_ok.json")]);
    assert_eq!(v["payload"]["classification"]["players"].as_array().unwrap().len(), 3);
    let v = ok_json(&["enumerate", &inst]);
    assert_eq!(v["payload"]["nash_count"], 6);
    let v = ok_json(&["enumerate", &inst, "--profile-cap", "3"]);
    assert_eq!(v["payload"]["truncated"], true);
}

#[test]
fn seeded_runs_echo_seed() {
    let grid = fixture("grid3x3.json");
    let a = run(&["brd", &grid, "--start", "random:42", "--schedule", "random:9"]);
    let b = run(&["brd", &grid, "--start", "random:42", "--schedule", "random:9"]);
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["seed"], 42);
    let v = ok_json(&["validate", &grid]);
    assert_eq!(v["payload"]["valid"], true);
}

#[test]
fn file_errors() {
    assert_eq!(err(&["validate", &fixture("bad_version.json")]), "format.version");
    assert_eq!(err(&["validate", &fixture("unknown_key.json")]), "format.unknown_key");
    assert_eq!(err(&["validate", &fixture("bad_path.json")]), "path.invalid");
    assert_eq!(err(&["validate", &fixture("self_loop.json")]), "graph.invalid");
    assert_eq!(err(&["validate", &fixture("bad_player.json")]), "player.invalid");
    assert_eq!(err(&["validate", &fixture("malformed.json")]), "format.parse");
    assert_eq!(err(&["validate", &fixture("does_not_exist.json")]), "io");
    let inst = fixture("parallel3.json");
    assert_eq!(err(&["verify", &inst, "--routing", &fixture("routing_bad_edge.json")]), "routing.invalid");
    assert_eq!(err(&["verify", &inst, "--routing", &fixture("routing_short.json")]), "routing.invalid");
    assert_eq!(err(&["verify", &inst, "--routing", &inst]), "format.unknown_key");
}

#[test]
fn domain_errors() {
    let inst = fixture("parallel3.json");
    let linear = fixture("counterexample4_linear.json");
    assert_eq!(err(&["generate", "--family", "counterexample", "--k", "1"]), "parameter.invalid");
    assert_eq!(err(&["generate", "--family", "grid", "--rows", "3"]), "parameter.invalid");
    assert_eq!(
        err(&["generate", "--family", "random", "--nodes", "6", "--edges", "1", "--players", "1"]),
        "generator.rejection_failure"
    );
    assert_eq!(err(&["brd", &inst, "--model", "cubic"]), "parameter.invalid");
    assert_eq!(err(&["brd", &inst, "--schedule", "sideways"]), "parameter.invalid");
    assert_eq!(err(&["brd", &inst, "--max-steps", "0"]), "parameter.invalid");
    assert_eq!(err(&["chain", &inst, "--routing", &fixture("routing_not_nash.json")]), "precondition.violated");
    assert_eq!(err(&["chain", &inst, "--root", "7"]), "precondition.violated");
    assert_eq!(err(&["chain", &inst, "--root", "x"]), "parameter.invalid");
    assert_eq!(err(&["classify", &linear]), "precondition.violated");
    assert_eq!(err(&["enumerate", &inst, "--profile-cap", "0"]), "parameter.invalid");
    assert_eq!(err(&["sweep", "--family", "grid", "--k", "3"]), "parameter.invalid");
    assert_eq!(err(&["sweep", "--family", "counterexample", "--k", "5..3"]), "parameter.invalid");
}

#[test]
fn budget_errors() {
    let grid = fixture("grid3x3.json");
    let with = |spec: &str, args: &[&str]| {
        let mut c = bin();
        c.env("BOTTLENECK_ARENA_BUDGET", spec).args(args);
        error_code(&mut c)
    };
    assert_eq!(with("paths=1", &["enumerate", &grid]), "paths.too_large");
    assert_eq!(with("nodes=1", &["optimal", &grid]), "search.budget_exceeded");
    assert_eq!(with("paths=zero", &["optimal", &grid]), "parameter.invalid");
    assert_eq!(with("widgets=3", &["optimal", &grid]), "parameter.invalid");
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        vec![],
        vec!["bogus"],
        vec!["optimal"],
        vec!["brd", "x.json", "--frobnicate"],
        vec!["chain", "x.json", "--support", "sometimes"],
        vec!["generate", "--family", "hexagon"],
    ] {
        let out = run(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(out.stdout.is_empty());
    }
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["--version"]).status.code(), Some(0));
    let help = String::from_utf8(run(&["brd", "--help"]).stdout).unwrap();
    for flag in ["--schedule", "--max-steps", "--start", "--model", "--csv", "--out", "--timing"] {
        assert!(help.contains(flag), "{flag}");
    }
}
