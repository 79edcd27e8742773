use std::fs;
use std::path::Path;
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_bessel-exp");

fn shipped(name: &str) -> String {
    fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("configs").join(format!("{name}.toml"))).unwrap()
}

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("binary runs")
}

#[test]
fn list_names_every_scenario() {
    let out = run(&["--list"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    for name in ["power-sweep", "sparse-scaling", "commutator-bound", "endpoint", "counterexample", "bmo-equivalence"] {
        assert!(text.lines().any(|l| l.starts_with(name)), "{name} missing from:\n{text}");
    }
}

#[test]
fn same_seed_gives_identical_csv() {
    let dirs = [tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap()];
    for d in &dirs {
        let out = run(&["sparse-scaling", "--seed", "5", "--out", d.path().to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    }
    for file in ["sparse_scaling.csv", "level_sets.csv"] {
        let a = fs::read(dirs[0].path().join("sparse-scaling").join(file)).unwrap();
        let b = fs::read(dirs[1].path().join("sparse-scaling").join(file)).unwrap();
        assert!(!a.is_empty());
        assert_eq!(a, b, "{file} differs between runs");
    }
}

#[test]
fn csv_starts_with_anchor_line() {
    let d = tempfile::tempdir().unwrap();
    let out = run(&["power-sweep", "--out", d.path().to_str().unwrap()]);
    assert!(out.status.code().is_some());
    let text = fs::read_to_string(d.path().join("power-sweep").join("duality.csv")).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("# "));
    assert!(lines.next().unwrap().contains(','));
}

#[test]
fn failing_check_exits_with_two() {
    let d = tempfile::tempdir().unwrap();
    let cfg = d.path().join("strict.toml");
    let text = shipped("sparse-scaling").replace("slope_slack = 0.1", "slope_slack = -5");
    fs::write(&cfg, text).unwrap();
    let out = run(&["sparse-scaling", "--config", cfg.to_str().unwrap(), "--out", d.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stdout).unwrap().contains("FAIL"));
}

#[test]
fn errors_exit_with_one() {
    let d = tempfile::tempdir().unwrap();
    let missing = d.path().join("absent.toml");
    assert_eq!(run(&["endpoint", "--config", missing.to_str().unwrap()]).status.code(), Some(1));

    // A config for another scenario is rejected.
    let cfg = d.path().join("other.toml");
    fs::write(&cfg, shipped("sparse-scaling")).unwrap();
    assert_eq!(run(&["endpoint", "--config", cfg.to_str().unwrap(), "--out", d.path().to_str().unwrap()]).status.code(), Some(1));

    assert_eq!(run(&["all", "--config", cfg.to_str().unwrap()]).status.code(), Some(1));
    assert_eq!(run(&[]).status.code(), Some(1));
}
