//! End-to-end tests of the binary: output shapes, verdicts, exit codes
//! and determinism.

use std::fs;
use std::path::PathBuf;
use std::process::Command;

struct Output {
    code: i32,
    stdout: String,
    stderr: String,
}

fn run(args: &[&str]) -> Output {
    let out = Command::new(env!("CARGO_BIN_EXE_vdg"))
        .args(args)
        .output()
        .expect("binary runs");
    Output {
        code: out.status.code().expect("no signal"),
        stdout: String::from_utf8(out.stdout).expect("utf-8 stdout"),
        stderr: String::from_utf8(out.stderr).expect("utf-8 stderr"),
    }
}

fn fixture(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("vdg-cli-tests-{}", std::process::id()));
    fs::create_dir_all(&dir).expect("tempdir");
    let path = dir.join(name);
    fs::write(&path, contents).expect("fixture written");
    path
}

#[test]
fn closed_stdout_pipe_is_quiet() {
    use std::io::Read;
    use std::process::Stdio;
    // the JSON dump for n=6 far exceeds the pipe buffer, so closing the
    // read end early must kill the writer without a panic on stderr
    let mut child = Command::new(env!("CARGO_BIN_EXE_vdg"))
        .args(["build", "type-a", "--n", "6", "--json"])
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    let mut head = [0u8; 16];
    child
        .stdout
        .take()
        .expect("stdout piped")
        .read_exact(&mut head)
        .expect("some output");
    let out = child.wait_with_output().expect("child reaped");
    assert!(
        out.stderr.is_empty(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
}

#[test]
fn build_prints_rank_summary() {
    let out = run(&["build", "type-a", "--n", "3"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert!(out.stdout.contains("elements: 6"));
    assert!(out.stdout.contains("rank 1: 2"));

    let out = run(&["build", "flag", "--r", "2", "--n", "2"]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.contains("elements: 8"));
}

#[test]
fn build_reads_raw_digraph_files() {
    let path = fixture("chain.vdg", "vdg 2\nvertex 0 1 x\nvertex 1 0 y\narc 0 1\n");
    let out = run(&["build", "raw", "--file", path.to_str().unwrap()]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert!(out.stdout.contains("elements: 3"));
}

#[test]
fn build_json_is_deterministic() {
    let first = run(&["build", "type-a", "--n", "4", "--json"]);
    let second = run(&["build", "type-a", "--n", "4", "--json"]);
    assert_eq!(first.code, 0);
    assert_eq!(first.stdout, second.stdout);
    let v: serde_json::Value = serde_json::from_str(&first.stdout).expect("valid json");
    assert_eq!(v["elements"].as_array().unwrap().len(), 24);
    assert_eq!(v["moebius"][0], 1);
}

#[test]
fn dot_export_ranks_the_hexagon() {
    let out = run(&["build", "type-a", "--n", "3", "--dot"]);
    assert_eq!(out.code, 0);
    assert_eq!(out.stdout.matches("label=").count(), 6);
    assert!(out.stdout.contains("rankdir=BT"));
    let direct = run(&["export-dot", "type-a", "--n", "3"]);
    assert_eq!(direct.stdout, out.stdout);
}

#[test]
fn missing_arguments_exit_with_usage_code() {
    let out = run(&["build", "type-a"]);
    assert_eq!(out.code, 1);
    assert!(out.stderr.contains("--n"));

    let out = run(&["build", "nonsense"]);
    assert_eq!(out.code, 1);
}

#[test]
fn element_cap_exits_with_resource_code() {
    let out = run(&["build", "type-a", "--n", "4", "--cap", "10"]);
    assert_eq!(out.code, 3);
    assert!(out.stderr.contains("cap"));
}

#[test]
fn moebius_csv_agrees_with_recursion() {
    let out = run(&["moebius", "type-a", "--n", "3", "--all", "--verify"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let lines: Vec<&str> = out.stdout.lines().collect();
    assert_eq!(lines[0], "rank,element,mu,mu_oracle");
    assert_eq!(lines[1], "0,\"{}\",1,1");
    assert!(lines[2].ends_with("-1,-1"));
    assert_eq!(lines.len(), 7);

    let single = run(&["moebius", "type-a", "--n", "3", "--element", "0"]);
    assert!(single.stdout.contains("1,\"{(1,2)}\",-1"));
}

#[test]
fn meet_and_join_print_label_sets() {
    let met = run(&["meet", "type-a", "--n", "3", "--a", "0", "--b", "1"]);
    assert_eq!(met.code, 0);
    assert_eq!(met.stdout.trim(), "{}");

    let joined = run(&["join", "type-a", "--n", "3", "--a", "0", "--b", "1"]);
    assert_eq!(joined.code, 0);
    assert_eq!(joined.stdout.trim(), "{(1,2),(2,3),(1,3)}");
}

#[test]
fn non_sections_are_rejected_as_usage_errors() {
    // {(1,3)} misses both hooks below it
    let out = run(&["moebius", "type-a", "--n", "3", "--element", "2"]);
    assert_eq!(out.code, 1);
    assert!(out.stderr.contains("not an initial section"));

    let out = run(&["meet", "type-a", "--n", "3", "--a", "zero", "--b", "1"]);
    assert_eq!(out.code, 1);
}

#[test]
fn chain_counts_match_reduced_word_counts() {
    let out = run(&["chains", "type-a", "--n", "3"]);
    assert_eq!(out.stdout.trim(), "2");
    let out = run(&["chains", "type-a", "--n", "4"]);
    assert_eq!(out.stdout.trim(), "16");
}

#[test]
fn symfun_type_a_matches_oracle() {
    let out = run(&[
        "symfun", "type-a", "--perm", "3,2,1", "--m", "2", "--method", "both",
    ]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert_eq!(
        out.stdout,
        "gamma: x1^2*x2 + x1*x2^2\noracle: x1^2*x2 + x1*x2^2\nEQUAL\n"
    );

    let identity = run(&["symfun", "type-a", "--perm", "1,2,3"]);
    assert_eq!(identity.stdout.trim(), "1");
}

#[test]
fn symfun_affine_matches_oracle() {
    let out = run(&[
        "symfun", "affine-a", "--perm", "2,1,3", "--m", "2", "--method", "both",
    ]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert!(out.stdout.contains("EQUAL"));

    let out = run(&["symfun", "affine-a", "--perm", "3,1,2", "--m", "2"]);
    assert_eq!(out.stdout.trim(), "x1^2 + x1*x2 + x2^2");
}

#[test]
fn symfun_json_reports_equality() {
    let out = run(&[
        "symfun", "type-a", "--perm", "3,1,2", "--m", "3", "--method", "both", "--json",
    ]);
    assert_eq!(out.code, 0);
    let v: serde_json::Value = serde_json::from_str(&out.stdout).expect("valid json");
    assert_eq!(v["equal"], true);
    assert_eq!(v["m"], 3);
    assert_eq!(v["gamma"], v["oracle"]);
}

#[test]
fn symfun_refuses_families_without_canonical_columns() {
    let out = run(&["symfun", "type-b", "--n", "2", "--perm", "-1,2", "--m", "2"]);
    assert_eq!(out.code, 1);
    assert!(out.stderr.contains("--columns"));

    let cols = fixture("b1.cols", "cols 0 0\n");
    let out = run(&[
        "symfun",
        "type-b",
        "--n",
        "1",
        "--perm",
        "-1",
        "--m",
        "2",
        "--columns",
        cols.to_str().unwrap(),
    ]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert_eq!(out.stdout.trim(), "x1 + x2");
}

#[test]
fn symfun_downset_labeling_routes_agree() {
    let poset = fixture("chain2.poset", "poset 2\nrel 0 1\n");
    let out = run(&[
        "symfun",
        "downset",
        "--file",
        poset.to_str().unwrap(),
        "--covers",
        "--labeling",
        "2,1",
        "--m",
        "3",
        "--method",
        "both",
    ]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert!(out.stdout.contains("EQUAL"));
    assert!(out.stdout.contains("x1*x2 + x1*x3 + x2*x3"));
}

#[test]
fn verify_iso_passes_across_families() {
    let cases: Vec<Vec<&str>> = vec![
        vec!["verify-iso", "type-a", "--n", "4"],
        vec!["verify-iso", "type-b", "--n", "2"],
        vec!["verify-iso", "affine-a", "--n", "3", "--max-rank", "4"],
        vec!["verify-iso", "flag", "--r", "2", "--n", "2"],
        vec!["verify-iso", "downset", "--n", "5", "--seed", "3"],
        vec!["verify-iso", "upset", "--n", "5", "--seed", "3"],
    ];
    for args in cases {
        let out = run(&args);
        assert_eq!(out.code, 0, "{:?}: {}{}", args, out.stdout, out.stderr);
        assert!(
            out.stdout.lines().all(|l| l.starts_with("ok: ")),
            "{:?}",
            args
        );
    }
}

#[test]
fn golden_running_example_builds_and_counts_chains() {
    let path =
        PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../vdg/tests/data/running_example.vdg");
    let out = run(&["build", "raw", "--file", path.to_str().unwrap()]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert!(out.stdout.contains("elements: 6"));

    let chains = run(&["chains", "raw", "--file", path.to_str().unwrap()]);
    assert_eq!(chains.stdout.trim(), "2");
}
