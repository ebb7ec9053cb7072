use std::path::Path;
use std::process::{Command, Output};

use hgverify::config::RunConfig;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn hgverify(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hgverify")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

const CASE: &str = r#"{
  "hypergraph": {"source": "union_jack", "cells": 1},
  "cover": {"method": "generator"},
  "protocol": {"kind": "case_study", "k": 1},
  "prover": {"kind": "single_bad_copy", "bad": {"kind": "z_error", "qubits": [0, 1, 4]}},
  "correctable": {"mode": "zero"},
  "trials": 300,
  "seed": 7
}"#;

const VERIFY: &str = r#"{
  "hypergraph": {"source": "inline", "n": 4, "edges": [[0, 1, 2], [1, 2, 3]]},
  "cover": {"method": "exact"},
  "protocol": {"kind": "verification", "params": {"qubits_per_register": 4, "gamma": 3, "upsilon": 3,
    "group_sizes": [8], "discard": 2, "epsilon": 0.5, "r": 2.0}},
  "prover": {"kind": "honest"},
  "trials": 40,
  "seed": 3
}"#;

#[test]
fn params_command_prints_exact_values() {
    let o = hgverify(&["--format", "csv", "params", "--n", "4", "--gamma", "3", "--r", "4", "--k", "2"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.starts_with("name,exact,approx\n"), "{text}");
    assert!(text.contains("upsilon,3,"), "{text}");
    assert!(text.contains("k_j,131072,"), "{text}");
    assert!(text.contains("d_ceil,198693734,"), "{text}");
    assert!(text.contains("epsilon,1/64,"), "{text}");
}

#[test]
fn color_command_reports_three_classes() {
    let o = hgverify(&["color", "union-jack:2", "--exact"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["stats"]["gamma"], 3);
    let o = hgverify(&["--format", "csv", "color", "union-jack:1"]);
    assert_eq!(stdout(&o).lines().count(), 6);
}

#[test]
fn state_command_dumps_amplitudes() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.txt");
    std::fs::write(&path, "# pair\n2\n0 1\n").unwrap();
    let o = hgverify(&["--format", "csv", "state", path.to_str().unwrap()]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(text.lines().next(), Some("basis,re,im"));
    assert!(text.lines().last().unwrap().starts_with("11,-0.5"), "{text}");
}

#[test]
fn test_command_matches_analytic_value() {
    let o = hgverify(&[
        "--trials", "2000", "--seed", "5", "test", "union-jack:1", "--class", "0",
        "--state", r#"{"kind": "z_error", "qubits": [0]}"#,
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["passes"], 0);
    assert_eq!(v["analytic"], 0.0);
    let o = hgverify(&["--trials", "500", "test", "union-jack:1", "--class", "1", "--mixed"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!((v["analytic"].as_f64().unwrap() - 0.25).abs() < 1e-12);
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_owned()
}

#[test]
fn protocol_outputs_are_reproducible_and_consistent() {
    let dir = tempfile::tempdir().unwrap();
    for (name, text, rows) in [("case.json", CASE, 300), ("verify.json", VERIFY, 40)] {
        let cfg = write(dir.path(), name, text);
        let mut seen = Vec::new();
        for run in 0..2 {
            let out = dir.path().join(format!("{name}-{run}"));
            let o = hgverify(&["protocol", &cfg, "--out", out.to_str().unwrap()]);
            assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
            let t = std::fs::read_to_string(out.join("transcripts.jsonl")).unwrap();
            let s = std::fs::read_to_string(out.join("summary.csv")).unwrap();
            let agg: serde_json::Value =
                serde_json::from_str(&std::fs::read_to_string(out.join("aggregate.json")).unwrap()).unwrap();
            assert_eq!(t.lines().count(), rows);
            assert_eq!(s.lines().count(), rows + 1);
            assert_eq!(agg["acceptance"]["trials"], rows);
            let accepted = s.lines().skip(1).filter(|l| l.split(',').nth(1) == Some("accept")).count();
            assert_eq!(agg["acceptance"]["successes"], accepted);
            seen.push((t, s));
        }
        assert_eq!(seen[0], seen[1]);
    }
    // A different seed changes the transcripts.
    let cfg = write(dir.path(), "case.json", CASE);
    let out = dir.path().join("reseeded");
    assert!(hgverify(&["--seed", "8", "protocol", &cfg, "--out", out.to_str().unwrap()]).status.success());
    let t = std::fs::read_to_string(out.join("transcripts.jsonl")).unwrap();
    assert_ne!(t, std::fs::read_to_string(dir.path().join("case.json-0/transcripts.jsonl")).unwrap());
}

#[test]
fn summary_header_names_counters() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "v.json", VERIFY);
    let out = dir.path().join("o");
    assert!(hgverify(&["protocol", &cfg, "--out", out.to_str().unwrap(), "--summary-only"]).status.success());
    let s = std::fs::read_to_string(out.join("summary.csv")).unwrap();
    let header = s.lines().next().unwrap();
    assert!(header.starts_with("trial,decision,K_0_0,"), "{header}");
    assert!(header.ends_with(",target_fidelity"));
    assert!(!out.join("transcripts.jsonl").exists());
}

#[test]
fn exit_codes() {
    assert_eq!(hgverify(&["selftest"]).status.code(), Some(0));
    assert_eq!(hgverify(&["--help"]).status.code(), Some(0));
    assert_eq!(hgverify(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(hgverify(&["color", "/no/such/file"]).status.code(), Some(1));
    let o = hgverify(&["params", "--n", "4", "--gamma", "1", "--r", "1", "--k", "1"]);
    assert_eq!(o.status.code(), Some(1));
    // Full-scale registers are refused rather than attempted.
    let dir = tempfile::tempdir().unwrap();
    let huge = VERIFY.replace(r#""group_sizes": [8]"#, r#""group_sizes": [1000000000]"#);
    let cfg = write(dir.path(), "huge.json", &huge);
    let o = hgverify(&["protocol", &cfg, "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("desk"), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn unknown_config_keys_are_rejected_with_their_path() {
    let dir = tempfile::tempdir().unwrap();
    let bad = CASE.replace(r#""mode": "zero""#, r#""mode": "zero", "t": 1"#);
    let cfg = write(dir.path(), "bad.json", &bad);
    let o = hgverify(&["protocol", &cfg, "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("correctable"), "{err}");
}

/// Random byte-level and token-level edits never crash the loader.
#[test]
fn config_mutations_never_panic() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let tokens = ["{", "}", "[", "]", ",", ":", "\"", "0", "-1", "1e309", "null", "true", "\"kind\"", "\"x\""];
    let mut accepted = 0;
    for i in 0..1000 {
        let base = if i % 2 == 0 { CASE } else { VERIFY };
        let mut text: Vec<char> = base.chars().collect();
        for _ in 0..rng.gen_range(1..4) {
            let at = rng.gen_range(0..text.len());
            match rng.gen_range(0..3) {
                0 => {
                    text.remove(at);
                }
                1 => {
                    let tok = tokens[rng.gen_range(0..tokens.len())];
                    for (k, c) in tok.chars().enumerate() {
                        text.insert(at + k, c);
                    }
                }
                _ => {
                    let other = rng.gen_range(0..text.len());
                    text.swap(at, other);
                }
            }
        }
        let text: String = text.into_iter().collect();
        let result = std::panic::catch_unwind(|| {
            RunConfig::from_json(&text).and_then(|c| c.resolve(Path::new(".")).map(|_| ()))
        });
        match result {
            Ok(Ok(())) => accepted += 1,
            Ok(Err(e)) => assert!(!e.to_string().is_empty()),
            Err(_) => panic!("loader panicked on mutation {i}:\n{text}"),
        }
    }
    assert!(accepted < 1000);
}
