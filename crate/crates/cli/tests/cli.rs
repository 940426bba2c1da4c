use std::process::Command;

use rainbow_cli::{generated_instance, run, EXIT_CAPABILITY, EXIT_INCONCLUSIVE, EXIT_INPUT, EXIT_NEGATIVE, EXIT_OK};
use rainbow_core::experiments::{run_sweep_detailed, ExperimentConfig};
use rainbow_core::output::{to_csv, to_json};
use rainbow_core::stacking::{count_rainbow_stackings, is_rainbow_stacking};
use rainbow_core::{build_collision_graph, Perm, PermTuple, SearchBudget, StackingInstance};
use serde_json::Value;

fn call(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("rainbow").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json(args: &[&str]) -> (i32, Value) {
    let (code, out, err) = call(args);
    let v = serde_json::from_str(&out).unwrap_or_else(|e| panic!("{e}: {out} {err}"));
    (code, v)
}

fn field<'a>(out: &'a str, key: &str) -> &'a str {
    out.lines()
        .find_map(|l| l.strip_prefix(key).map(str::trim))
        .unwrap_or_else(|| panic!("no {key} in {out}"))
}

const SOLVABLE: &str = "4 2 3\n0 1 2 2 0 1\n1 0 2 0 2 1\n";

fn instance_file(body: &str) -> tempfile::NamedTempFile {
    let f = tempfile::NamedTempFile::new().unwrap();
    std::fs::write(f.path(), body).unwrap();
    f
}

#[test]
fn thresholds_example() {
    let (code, out, _) = call(&["thresholds", "--n", "12", "--m", "2", "--omega", "0"]);
    assert_eq!(code, EXIT_OK);
    let r_star: f64 = field(&out, "r_star").parse().unwrap();
    assert!((r_star - 3.302).abs() < 1e-3);
    let (_, v) = json(&["thresholds", "--n", "12", "--omega", "-1.5", "--json"]);
    assert!(v["r_lower"].as_f64().unwrap() > r_star);
}

#[test]
fn cayley_reports_verified_absence() {
    let (code, out, _) = call(&["verify-cayley", "--k", "3"]);
    assert_eq!(code, EXIT_NEGATIVE);
    assert!(out.starts_with("no rainbow stacking (exhaustive)"));
    let (code, v) = json(&["verify-cayley", "--k", "2", "--json"]);
    assert_eq!(code, EXIT_NEGATIVE);
    assert_eq!(v["status"], "no_stacking");
    assert_eq!(call(&["verify-cayley", "--k", "4"]).0, EXIT_CAPABILITY);
    assert_eq!(call(&["verify-cayley", "--k", "3", "--max-nodes", "3"]).0, EXIT_NEGATIVE);
    assert_eq!(
        call(&["verify-cayley", "--k", "4", "--override-guards", "--max-nodes", "3"]).0,
        EXIT_INCONCLUSIVE
    );
}

#[test]
fn find_prints_a_valid_witness() {
    let f = instance_file(SOLVABLE);
    let path = f.path().to_str().unwrap();
    let (code, out, _) = call(&["find", "--instance", path, "--max-nodes", "1e7"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(field(&out, "status"), "found");
    let perms: Vec<Perm> = out
        .lines()
        .filter_map(|l| l.strip_prefix("sigma_"))
        .map(|l| l.split_once(' ').unwrap().1.parse().unwrap())
        .collect();
    let inst: StackingInstance = SOLVABLE.parse().unwrap();
    assert!(is_rainbow_stacking(&inst, &PermTuple::new(perms).unwrap()).unwrap());

    let (code, v) = json(&["find", "--instance", path, "--json", "--most-constrained"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["witness"].as_array().unwrap().len(), 2);
}

#[test]
fn find_exit_codes() {
    assert_eq!(call(&["find", "--n", "5", "--r", "1", "--seed", "4"]).0, EXIT_NEGATIVE);
    let (code, out, _) = call(&["find", "--n", "9", "--r", "3", "--seed", "1", "--max-nodes", "5"]);
    assert_eq!(code, EXIT_INCONCLUSIVE);
    assert_eq!(field(&out, "status"), "budget_exceeded");
    assert_eq!(field(&out, "nodes"), "5");
    assert_eq!(call(&["find", "--n", "5", "--r", "3"]).0, EXIT_INPUT);
    assert_eq!(call(&["find", "--n", "5", "--r", "3", "--seed", "1", "--max-nodes", "0"]).0, EXIT_INPUT);
    assert_eq!(call(&["find", "--n", "5", "--r", "3", "--seed", "1", "--max-nodes", "1.5"]).0, EXIT_INPUT);
    let bad = instance_file("4 2 3\n0 1 2\n");
    assert_eq!(call(&["find", "--instance", bad.path().to_str().unwrap()]).0, EXIT_INPUT);
    assert_eq!(call(&["find", "--instance", "/nonexistent/x.inst"]).0, EXIT_INPUT);
}

#[test]
fn count_matches_library_and_flags_zero() {
    let inst = generated_instance(5, 2, 4, 11).unwrap();
    let want = count_rainbow_stackings(&inst).unwrap();
    let (code, v) = json(&["count", "--n", "5", "--r", "4", "--seed", "11", "--json"]);
    assert_eq!(v["total"], want.total.to_string());
    assert_eq!(code, if want.total == 0u32.into() { EXIT_NEGATIVE } else { EXIT_OK });

    let (code, out, _) = call(&["count", "--n", "4", "--m", "3", "--r", "2", "--seed", "1"]);
    assert_eq!(code, EXIT_NEGATIVE);
    assert_eq!(field(&out, "total"), "0");
    assert_eq!(call(&["count", "--n", "9", "--r", "3", "--seed", "1"]).0, EXIT_CAPABILITY);
}

#[test]
fn sweep_is_a_thin_adapter() {
    let config = ExperimentConfig {
        n: 7,
        m: 2,
        r_values: vec![2, 4, 6],
        trials_per_r: 30,
        master_seed: 5,
        budget: SearchBudget { max_nodes: Some(100_000), max_millis: None },
        omega: 0.25,
    };
    let (table, _) = run_sweep_detailed(&config, 1).unwrap();
    let base = [
        "sweep", "--n", "7", "--r-min", "2", "--r-max", "6", "--r-step", "2", "--trials", "30", "--seed", "5",
        "--omega", "0.25", "--max-nodes", "1e5",
    ];
    let (code, out, _) = call(&base);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out, to_csv(&table));
    let threaded: Vec<&str> = base.iter().copied().chain(["--threads", "3"]).collect();
    assert_eq!(call(&threaded).1, out);
    let with_json: Vec<&str> = base.iter().copied().chain(["--json"]).collect();
    assert_eq!(call(&with_json).1, to_json(&table, &config));

    let dir = tempfile::tempdir().unwrap();
    let stem = dir.path().join("run");
    let with_out: Vec<&str> = base.iter().copied().chain(["--out", stem.to_str().unwrap()]).collect();
    assert_eq!(call(&with_out).0, EXIT_OK);
    assert_eq!(std::fs::read_to_string(stem.with_extension("csv")).unwrap(), out);
    assert!(stem.with_extension("json").exists() && stem.with_extension("dat").exists());
}

#[test]
fn sweep_requires_a_seed_and_sane_ranges() {
    let (code, _, err) = call(&["sweep", "--n", "6", "--r-min", "2", "--r-max", "4"]);
    assert_eq!(code, EXIT_INPUT);
    assert!(err.contains("--seed"));
    assert_eq!(call(&["sweep", "--n", "6", "--r-min", "5", "--r-max", "4", "--seed", "1"]).0, EXIT_INPUT);
    assert_eq!(call(&["sweep", "--n", "6", "--r-min", "2", "--r-max", "4", "--r-step", "0", "--seed", "1"]).0, EXIT_INPUT);
}

#[test]
fn gpi_reports_graph_and_counts() {
    let (code, v) = json(&["gpi", "--pi", "0,1,2,3;0,1,3,2", "--r", "3", "--json"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["vertices"], 12);
    assert_eq!(v["edges"], 10);
    assert_eq!(v["weight"], 2);
    assert_eq!(v["proper_colorings"], "11664");
    assert_eq!(v["m2_closed_form"], "11664");

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.adj");
    assert_eq!(call(&["gpi", "--pi", "1,0,2;2,1,0;0,2,1", "--out", path.to_str().unwrap()]).0, EXIT_OK);
    let pi: PermTuple = "1,0,2;2,1,0;0,2,1".parse().unwrap();
    let want = build_collision_graph(&pi).unwrap().to_adjacency_list();
    assert_eq!(std::fs::read_to_string(&path).unwrap(), want);

    assert_eq!(call(&["gpi", "--pi", "0,1,2"]).0, EXIT_INPUT);
    assert_eq!(call(&["gpi", "--pi", "0,0,2;0,1,2"]).0, EXIT_INPUT);
}

#[test]
fn moments_and_exact_probability() {
    let (code, v) = json(&["moments", "--n", "3", "--r", "3", "--json"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(v["e_nmr_exact"], "8/27");
    assert_eq!(v["expected_z_exact"], "32/3");
    let (_, v) = json(&["moments", "--n", "4", "--m", "3", "--r", "2", "--json"]);
    assert_eq!(v["ln_e_nmr"], Value::Null);

    let (code, out, _) = call(&["exact-prob", "--n", "3", "--r", "2"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.starts_with("probability 5/16"));
    assert_eq!(call(&["exact-prob", "--n", "6", "--r", "3"]).0, EXIT_CAPABILITY);
}

#[test]
fn odd_verification_exit_codes() {
    let (code, out, _) = call(&["verify-odd", "--n", "3"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.starts_with("all pairs admit stackings"));
    assert_eq!(call(&["verify-odd", "--n", "4"]).0, EXIT_INPUT);
    assert_eq!(call(&["verify-odd", "--n", "7"]).0, EXIT_CAPABILITY);
}

#[test]
fn lemma_checks_report_failures_as_negative() {
    let (code, out, _) = call(&["lemma-checks", "--k", "30", "--f-max", "300", "--q", "0"]);
    assert_eq!(code, EXIT_OK, "{out}");
    let (code, v) = json(&["lemma-checks", "--k", "30", "--f-max", "300", "--q", "0,0.1", "--json"]);
    assert_eq!(code, EXIT_NEGATIVE);
    assert_eq!(v["phi"][1]["first_concavity_violation"], 10);
    assert_eq!(call(&["lemma-checks", "--q=-1"]).0, EXIT_INPUT);
}

#[test]
fn usage_errors() {
    assert_eq!(call(&[]).0, EXIT_INPUT);
    assert_eq!(call(&["bogus"]).0, EXIT_INPUT);
    assert_eq!(call(&["thresholds", "--n", "12", "--frobnicate"]).0, EXIT_INPUT);
    assert_eq!(call(&["thresholds", "--n", "1"]).0, EXIT_INPUT);
    let (code, out, _) = call(&["--help"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("verify-cayley"));
}

#[test]
fn binary_exit_status() {
    let bin = env!("CARGO_BIN_EXE_rainbow");
    let out = Command::new(bin).args(["verify-cayley", "--k", "3"]).output().unwrap();
    assert_eq!(out.status.code(), Some(EXIT_NEGATIVE));
    assert!(String::from_utf8_lossy(&out.stdout).contains("no rainbow stacking (exhaustive)"));
    let out = Command::new(bin).args(["sweep", "--n", "5"]).output().unwrap();
    assert_eq!(out.status.code(), Some(EXIT_INPUT));
}
