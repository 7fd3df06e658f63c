use std::path::Path;
use std::process::{Command, Output};

use ptorsion::cli::Document;

fn ptorsion(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ptorsion"))
        .args(args)
        .env_remove("PTF_SEED")
        .output()
        .expect("binary runs")
}

fn document(out: &Output) -> Document {
    serde_json::from_slice(&out.stdout).expect("JSON document on stdout")
}

#[test]
fn exit_codes() {
    assert_eq!(ptorsion(&["igusa", "--p", "13"]).status.code(), Some(0));
    assert_eq!(ptorsion(&["igusa", "--p", "13", "--frobnicate"]).status.code(), Some(2));
    assert_eq!(ptorsion(&["construct", "a4", "--p", "5", "--g", "6"]).status.code(), Some(2));
    assert_eq!(ptorsion(&["construct", "with-q", "--p", "7", "--g", "4"]).status.code(), Some(2));
    assert_eq!(ptorsion(&["probe", "rexact", "--p", "5"]).status.code(), Some(2));
    let miss = ptorsion(&[
        "construct", "prank", "--p", "3", "--g", "2", "--f", "0", "--a", "2", "--budget", "100", "--tower-cap", "3",
    ]);
    assert_eq!(miss.status.code(), Some(1));
    assert_eq!(document(&miss).result["success"], false);
}

#[test]
fn igusa_output() {
    let out = ptorsion(&["igusa", "--p", "13"]);
    let doc = document(&out);
    assert_eq!(doc.result["count"], 6);
    assert_eq!(doc.result["squarefree"], true);
    assert_eq!(doc.manifest.command, "igusa");
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("wall-clock"));
}

#[test]
fn invariants_output() {
    let doc = document(&ptorsion(&["invariants", "--p", "5", "--branch", "0,1,2,inf"]));
    assert_eq!(doc.result["genus"], 1);
    assert_eq!(doc.result["p_rank"], 1);
}

#[test]
fn replay_is_byte_identical() {
    let runs: [&[&str]; 5] = [
        &["igusa", "--p", "11"],
        &["roots", "--p", "5", "--k", "2", "--branch", "0,1,0:1,1:1"],
        &["construct", "a2", "--p", "7", "--g", "5", "--seed", "42"],
        &["construct", "with-n", "--p", "5", "--g", "4", "--budget", "10000", "--tower-cap", "4"],
        &["probe", "ordinary-completion", "--p", "5", "--branch", "0,1"],
    ];
    for args in runs {
        let first = ptorsion(args);
        assert_eq!(first.status.code(), Some(0), "{args:?}");
        let doc = document(&first);
        let argv: Vec<&str> = doc.manifest.argv.iter().map(String::as_str).collect();
        let again = ptorsion(&argv);
        assert_eq!(first.stdout, again.stdout, "{args:?}");
    }
}

#[test]
fn seed_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_ptorsion"))
        .args(["construct", "a2", "--p", "5", "--g", "3"])
        .env("PTF_SEED", "7")
        .output()
        .unwrap();
    let doc = document(&out);
    assert_eq!(doc.manifest.seed, 7);
    assert!(doc.manifest.argv.ends_with(&["--seed".to_string(), "7".to_string()]));
    let replay = ptorsion(&doc.manifest.argv.iter().map(String::as_str).collect::<Vec<_>>());
    assert_eq!(out.stdout, replay.stdout);
}

fn construct_and_verify(dir: &Path, p: &str, g: &str) -> serde_json::Value {
    let path = dir.join(format!("a2-{p}-{g}.json"));
    let path_s = path.to_str().unwrap();
    let c = ptorsion(&["construct", "a2", "--p", p, "--g", g, "--seed", "42", "--out", path_s]);
    assert_eq!(c.status.code(), Some(0));
    let v = ptorsion(&["verify", "--input", path_s]);
    assert_eq!(v.status.code(), Some(0));
    document(&v).result
}

#[test]
fn verify_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    for (p, g) in [("5", "2"), ("5", "3"), ("7", "2"), ("7", "3")] {
        let r = construct_and_verify(dir.path(), p, g);
        assert_eq!(r["status"], "pass", "p = {p}, g = {g}");
        assert_eq!(r["L_product_match"], true);
        assert_eq!(r["p_rank_zeta"], r["p_rank_sum"]);
    }
    // F_{7^4} and genus 5: beyond brute-force counting, reported as skipped
    let r = construct_and_verify(dir.path(), "7", "5");
    assert_eq!(r["status"], "skipped");
}

#[test]
fn verify_rejects_missing_input() {
    assert_eq!(ptorsion(&["verify", "--input", "/nonexistent/x.json"]).status.code(), Some(2));
}

#[test]
fn corpus_runner() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("corpus.json");
    std::fs::write(
        &corpus,
        r#"[{"name": "igusa7", "args": ["igusa", "--p", "7"]},
            {"name": "ell", "args": ["invariants", "--p", "7", "--branch", "0,1,6,inf"]},
            {"name": "a2", "args": ["construct", "a2", "--p", "5", "--g", "2"]}]"#,
    )
    .unwrap();
    let out_dir = dir.path().join("out");
    let out = ptorsion(&["corpus", "--input", corpus.to_str().unwrap(), "--out", out_dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let csv = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "name,exit_code,result_digest");
    assert_eq!(lines.len(), 4);
    assert!(lines[1..].iter().all(|l| l.split(',').nth(1) == Some("0")));
    for name in ["igusa7", "ell", "a2"] {
        let text = std::fs::read_to_string(out_dir.join(format!("{name}.json"))).unwrap();
        let doc: Document = serde_json::from_str(&text).unwrap();
        assert!(csv.contains(&doc.manifest.result_digest));
    }
    assert!(out_dir.join("summary.csv").exists());
}
