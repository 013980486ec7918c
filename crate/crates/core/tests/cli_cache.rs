use std::collections::HashMap;

use cyclic_hw::cli::run_args;

fn run(args: &[&str], env: &HashMap<String, String>) -> String {
    let mut v = vec!["cyclic-hw"];
    v.extend_from_slice(args);
    run_args(v, env).unwrap_or_else(|e| panic!("{args:?}: {e:?}"))
}

const COMMANDS: &[&[&str]] = &[
    &["census", "7:4:3,1,1,2", "-p", "29", "--seed", "1", "-o", "json"],
    &["census", "7:4:3,1,1,2", "-p", "13", "--seed", "1", "-o", "csv"],
    &["hw", "h1", "7:4:3,1,1,2", "-p", "113", "--factor", "--seed", "5", "-o", "json"],
    &["witness", "7:4:3,1,1,2", "-p", "29", "--seed", "3", "-o", "json"],
    &["survey", "7:4:3,1,1,2", "--class", "1", "--count", "12", "-o", "json"],
    &["mu-ord", "7:4:3,1,1,2", "-p", "11", "-o", "json"],
];

#[test]
fn identical_runs_are_byte_identical() {
    let env = HashMap::new();
    for c in COMMANDS {
        assert_eq!(run(c, &env), run(c, &env), "{c:?}");
    }
}

#[test]
fn cache_hit_and_miss_agree() {
    let dir = tempfile::tempdir().unwrap();
    let cold = HashMap::new();
    let mut warm = HashMap::new();
    warm.insert("CYCLIC_HW_CACHE_DIR".to_string(), dir.path().to_string_lossy().into_owned());
    for c in COMMANDS {
        let plain = run(c, &cold);
        let miss = run(c, &warm);
        let hit = run(c, &warm);
        assert_eq!(plain, miss, "{c:?}");
        assert_eq!(miss, hit, "{c:?}");
    }
    let lines = std::fs::read_to_string(dir.path().join("cache.jsonl")).unwrap();
    assert!(lines.lines().count() >= 2);
}

#[test]
fn cache_flag_and_workers_do_not_change_survey() {
    let dir = tempfile::tempdir().unwrap();
    let env = HashMap::new();
    let base = ["survey", "7:4:3,1,1,2", "--class", "1", "--count", "20"];
    let one = run(&[&base[..], &["--workers", "1"]].concat(), &env);
    let four = run(&[&base[..], &["--workers", "4"]].concat(), &env);
    let cached = run(&[&base[..], &["--cache-dir", dir.path().to_str().unwrap()]].concat(), &env);
    assert_eq!(one, four);
    assert_eq!(one, cached);
}

#[test]
fn errors_carry_codes() {
    let env = HashMap::new();
    let e = run_args(["cyclic-hw", "census", "7:4:3,1,1,2", "-p", "14"], &env).unwrap_err();
    assert_eq!(e.0, 4);
    let v: serde_json::Value = serde_json::from_str(&e.1).unwrap();
    assert_eq!(v["error"], "not_prime");
    let e = run_args(["cyclic-hw", "datum", "validate", "7:4:0,1,1,2"], &env).unwrap_err();
    assert_eq!(e.0, 4);
}

#[test]
fn binary_exit_status() {
    let bin = env!("CARGO_BIN_EXE_cyclic-hw");
    let out = std::process::Command::new(bin).args(["datum", "signature", "7:4:3,1,1,2"]).output().unwrap();
    assert!(out.status.success());
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "2,1,1,1,1,0");
    let out = std::process::Command::new(bin)
        .args(["hw", "h0", "7:4:3,1,1,2", "-p", "29", "--term-budget", "5"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}
