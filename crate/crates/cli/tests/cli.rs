//! End-to-end checks of the binary: exit codes, output formats,
//! manifest emission, config merging and rerun determinism.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_cgsieve"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).expect("utf8")
}

fn tmp(name: &str) -> PathBuf {
    let mut p = std::env::temp_dir();
    p.push(format!("cgsieve-test-{}-{name}", std::process::id()));
    p
}

#[test]
fn chartable_csv_matches_s3() {
    let text = stdout(&["chartable", "--n", "3", "--format", "csv"]);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 4);
    assert_eq!(lines[1], "\"3\",1,1,1");
    assert_eq!(lines[2], "\"2,1\",2,0,-1");
    assert_eq!(lines[3], "\"1,1,1\",1,-1,1");
}

#[test]
fn exit_codes() {
    // Usage error: n = 0 fails validation.
    let usage = run(&["chartable", "--n", "0"]);
    assert_eq!(usage.status.code(), Some(2));
    // Missing required flag is also usage.
    let missing = run(&["chartable"]);
    assert_eq!(missing.status.code(), Some(2));
    // Capability: n too large for exact tables.
    let cap = run(&["chartable", "--n", "15"]);
    assert_eq!(cap.status.code(), Some(3));
    // Data: malformed forest file.
    let forest = tmp("bad-forest.json");
    std::fs::write(&forest, "{\"leaves\":1,\"nodes\":[]}").unwrap();
    let data = run(&[
        "sieve",
        "exact",
        "--group",
        "sym:2",
        "--forest",
        forest.to_str().unwrap(),
    ]);
    assert_eq!(data.status.code(), Some(4));
    std::fs::remove_file(&forest).ok();
    // Success exits 0.
    let ok = run(&["dist", "plancherel", "--n", "3"]);
    assert_eq!(ok.status.code(), Some(0));
}

#[test]
fn exact_forest_example_quarter() {
    let forest = tmp("z2-forest.json");
    std::fs::write(
        &forest,
        r#"{"leaves":2,"nodes":[
            {"id":0,"children":null,"label":"2"},
            {"id":1,"children":null,"label":"2"},
            {"id":2,"children":[0,1],"label":"2"}]}"#,
    )
    .unwrap();
    let text = stdout(&[
        "sieve",
        "exact",
        "--group",
        "sym:2",
        "--forest",
        forest.to_str().unwrap(),
    ]);
    assert!(text.contains("\"1/4\""), "{text}");
    std::fs::remove_file(&forest).ok();
}

#[test]
fn audit_reports_zero_violations() {
    let text = stdout(&["sieve", "audit", "--base", "sym:2", "--max-k", "3"]);
    assert!(text.contains("\"violations: 0\""), "{text}");
}

#[test]
fn reruns_are_byte_identical_across_thread_counts() {
    let cases: Vec<Vec<&str>> = vec![
        vec!["sieve", "run", "--group", "dih:4", "--leaves", "4", "--runs", "200", "--seed", "42"],
        vec!["sieve", "hit", "--n", "3", "--leaves", "3", "--runs", "500", "--seed", "9"],
        vec![
            "trends",
            "typicality",
            "--grid",
            "16,25",
            "--samples",
            "300",
            "--format",
            "csv",
            "--seed",
            "11",
        ],
        vec!["dist", "natural", "--n", "4", "--lambda", "3,1", "--mu", "2,2"],
    ];
    for case in cases {
        let a = stdout(&case);
        let b = stdout(&case);
        assert_eq!(a, b, "rerun differs for {case:?}");
        let mut threaded: Vec<&str> = case.clone();
        threaded.extend_from_slice(&["--threads", "2"]);
        let mut single: Vec<&str> = case.clone();
        single.extend_from_slice(&["--threads", "1"]);
        let c = stdout(&threaded);
        let d = stdout(&single);
        assert_eq!(a, c, "thread count changed bytes for {case:?}");
        assert_eq!(c, d, "thread count changed bytes for {case:?}");
    }
}

#[test]
fn manifest_written_next_to_output() {
    let out = tmp("manifest-out.json");
    let _ = stdout(&[
        "dist",
        "plancherel",
        "--n",
        "4",
        "--out",
        out.to_str().unwrap(),
        "--manifest",
    ]);
    let manifest_path = format!("{}.manifest.json", out.display());
    let manifest = std::fs::read_to_string(&manifest_path).expect("manifest exists");
    assert!(manifest.contains("\"Plancherel\""));
    assert!(manifest.contains("\"seed\": 0"));
    // Manifest requires --out.
    let err = run(&["dist", "plancherel", "--n", "4", "--manifest"]);
    assert_eq!(err.status.code(), Some(2));
    std::fs::remove_file(&out).ok();
    std::fs::remove_file(&manifest_path).ok();
}

#[test]
fn config_file_supplies_defaults_flags_win() {
    let cfg = tmp("config.json");
    std::fs::write(&cfg, r#"{"n": 3, "format": "csv"}"#).unwrap();
    // n comes from the config.
    let text = stdout(&["chartable", "--config", cfg.to_str().unwrap()]);
    assert!(text.starts_with("irrep\\class"));
    // Explicit flag beats the config.
    let json_text = stdout(&[
        "chartable",
        "--config",
        cfg.to_str().unwrap(),
        "--format",
        "json",
    ]);
    assert!(json_text.trim_start().starts_with('{'));
    // Malformed config is a data error.
    std::fs::write(&cfg, "not json").unwrap();
    let err = run(&["chartable", "--n", "3", "--config", cfg.to_str().unwrap()]);
    assert_eq!(err.status.code(), Some(4));
    std::fs::remove_file(&cfg).ok();
}

#[test]
fn float_precision_mode() {
    let text = stdout(&[
        "dist",
        "coset",
        "--group",
        "sym:3",
        "--involution",
        "perm:2,1,3",
        "--precision",
        "float",
    ]);
    assert!(text.contains("0.6666666666666666"), "{text}");
}

#[test]
fn wreath_commands() {
    let text = stdout(&["wreath", "irreps", "--base", "sym:3"]);
    assert!(text.contains("\"count\": 9"));
    assert!(text.contains("\"order\": \"72\""));
    let nat = stdout(&[
        "wreath",
        "natural",
        "--base",
        "sym:2",
        "--sigma1",
        "inhom:2|1,1",
        "--sigma2",
        "inhom:2|1,1",
    ]);
    assert!(nat.contains("\"mass\": \"1\""), "{nat}");
    let planch = stdout(&["wreath", "plancherel", "--base", "sym:3"]);
    assert!(planch.contains("\"homogeneous_mass\": \"1/2\""));
}

#[test]
fn dihedral_float_group_exact_output() {
    // D_5 has irrational characters but coset probabilities stay rational.
    let text = stdout(&[
        "dist",
        "coset",
        "--group",
        "dih:5",
        "--involution",
        "reflection:2",
    ]);
    assert!(text.contains("\"p\": \"1/5\""), "{text}");
    assert!(text.contains("\"p\": \"0\""), "{text}");
}
