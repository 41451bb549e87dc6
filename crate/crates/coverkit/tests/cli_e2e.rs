//! End-to-end checks through the compiled binary: exit codes, report text,
//! and the JSON-lines trace schema.

use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use coverkit::cli::{ideal_from_json, natvec_from_json};
use coverkit::ideal::{DownSet, OmegaNat, OmegaVec};

const HALVING: &str = "vas\ndim 2\naction -2 1\ntarget 0 5\nsource 10 0\n";

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_coverkit"))
}

fn temp_path(name: &str) -> PathBuf {
    std::env::temp_dir().join(format!("coverkit-e2e-{}-{name}", std::process::id()))
}

fn write_instance(name: &str, content: &str) -> PathBuf {
    let path = temp_path(name);
    fs::write(&path, content).unwrap();
    path
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn ov(spec: &str) -> OmegaVec {
    OmegaVec::new(
        spec.split_whitespace()
            .map(|t| if t == "w" { OmegaNat::Omega } else { OmegaNat::Fin(t.parse().unwrap()) })
            .collect(),
    )
}

#[test]
fn exit_codes_follow_the_verdict() {
    let path = write_instance("codes.txt", HALVING);
    let out = run(&["check", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2), "coverable exits 2");
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("verdict: coverable"), "stdout was: {stdout}");
    assert!(stdout.contains("strict steps: 5"));
    assert!(stdout.contains("(9,0)"), "D* decomposition is printed");

    let no = HALVING.replace("source 10 0", "source 9 0");
    let path_no = write_instance("codes-no.txt", &no);
    assert_eq!(run(&["check", path_no.to_str().unwrap()]).status.code(), Some(3));

    let missing = temp_path("does-not-exist.txt");
    assert_eq!(run(&["check", missing.to_str().unwrap()]).status.code(), Some(1));

    let capped = run(&["dual", path.to_str().unwrap(), "--max-iters", "2"]);
    assert_eq!(capped.status.code(), Some(4));

    for p in [path, path_no] {
        let _ = fs::remove_file(p);
    }
}

#[test]
fn dual_trace_reproduces_the_decompositions() {
    let path = write_instance("trace.txt", HALVING);
    let trace = temp_path("trace.jsonl");
    let out = run(&[
        "dual",
        path.to_str().unwrap(),
        "--trace",
        trace.to_str().unwrap(),
        "--control-step",
        "1",
        "--control-n0",
        "4",
    ]);
    assert_eq!(out.status.code(), Some(2));

    let expected: Vec<Vec<OmegaVec>> = vec![
        vec![ov("w 4")],
        vec![ov("1 4"), ov("w 3")],
        vec![ov("1 4"), ov("3 3"), ov("w 2")],
        vec![ov("1 4"), ov("3 3"), ov("5 2"), ov("w 1")],
        vec![ov("1 4"), ov("3 3"), ov("5 2"), ov("7 1"), ov("w 0")],
        vec![ov("1 4"), ov("3 3"), ov("5 2"), ov("7 1"), ov("9 0")],
    ];
    let text = fs::read_to_string(&trace).unwrap();
    let records: Vec<serde_json::Value> =
        text.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(records.len(), 6);
    for (k, record) in records.iter().enumerate() {
        assert_eq!(record["step"], k);
        let decoded: Vec<OmegaVec> = record["downset"]
            .as_array()
            .unwrap()
            .iter()
            .map(|v| ideal_from_json(v).unwrap())
            .collect();
        let got = DownSet::from_ideals(2, decoded.clone()).unwrap();
        assert_eq!(got.ideals(), &decoded[..], "trace decompositions are canonical");
        let want = DownSet::from_ideals(2, expected[k].clone()).unwrap();
        assert_eq!(got, want, "step {k}");
        assert_eq!(record["controlled"], true);
        assert_eq!(record["thin_ok"], true);
        assert!(record["basis"].as_array().unwrap().len() == k + 1);
        let first = natvec_from_json(&record["basis"][0]).unwrap();
        assert_eq!(first.to_string(), "(0,5)");
    }
    let _ = fs::remove_file(path);
    let _ = fs::remove_file(trace);
}

#[test]
fn witness_and_monitor_reports() {
    let path = write_instance("witness.txt", HALVING);
    let out = run(&["witness", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("pseudo-witness (5 steps): (0,5) -> (2,4) -> (4,3) -> (6,2) -> (8,1) -> (10,0)"));
    assert!(stdout.contains("execution (5 steps): (10,0) -> (8,1) -> (6,2) -> (4,3) -> (2,4) -> (0,5)"));

    let out = run(&["monitor", path.to_str().unwrap(), "--control-step", "2", "--control-n0", "5"]);
    assert_eq!(out.status.code(), Some(2), "monitor follows the verdict for scripting");
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("controlled:         ok"));
    assert!(stdout.contains("omega-monotone:     ok"));
    assert!(stdout.contains("length bound L_2 + 1 = 657"));
    let _ = fs::remove_file(path);
}

#[test]
fn classify_and_bounds_output() {
    let net2 = "affine\ndim 2\ntrans\na 0 0\nA 1 1 ; 0 0\nb 0 0\ntarget 0 1\n";
    let path = write_instance("net2.txt", net2);
    let out = run(&["classify", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("transfer:            yes"));
    assert!(stdout.contains("invertible:          no"));
    assert!(stdout.contains("det = 0"));
    let _ = fs::remove_file(path);

    let out = run(&["bounds", "--d", "2", "--step", "2", "--n0", "2", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let json: serde_json::Value =
        serde_json::from_slice(&out.stdout).expect("bounds --json emits JSON");
    assert_eq!(json["N"], serde_json::json!(["2", "4", "24"]));
    assert_eq!(json["L"], serde_json::json!(["0", "10", "260"]));
    assert_eq!(json["thin_ideal_bound"], "261");
}

#[test]
fn oracle_subcommand_agrees_with_engine() {
    let path = write_instance("oracle.txt", HALVING);
    assert_eq!(run(&["oracle", path.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(
        run(&["oracle", path.to_str().unwrap(), "--method", "bfs", "--depth", "16"])
            .status
            .code(),
        Some(2)
    );
    let no = HALVING.replace("source 10 0", "source 9 0");
    let path_no = write_instance("oracle-no.txt", &no);
    assert_eq!(run(&["oracle", path_no.to_str().unwrap()]).status.code(), Some(3));
    let net3 = "affine\ndim 2\ntrans\na 0 0\nA 1 1 ; 2 0\nb 0 0\ntarget 0 1\nsource 1 0\n";
    let path_net3 = write_instance("oracle-net3.txt", net3);
    assert_eq!(
        run(&["oracle", path_net3.to_str().unwrap(), "--method", "km"]).status.code(),
        Some(1),
        "the Karp-Miller oracle rejects affine nets"
    );
    let _ = fs::remove_file(path_net3);
    // truncated forward search reports "unknown" distinctly
    let grow = "vas\ndim 2\naction 1 0\ntarget 0 1\nsource 0 0\n";
    let path_grow = write_instance("oracle-grow.txt", grow);
    assert_eq!(
        run(&["oracle", path_grow.to_str().unwrap(), "--method", "bfs", "--depth", "4"])
            .status
            .code(),
        Some(4)
    );
    for p in [path, path_no, path_grow] {
        let _ = fs::remove_file(p);
    }
}
