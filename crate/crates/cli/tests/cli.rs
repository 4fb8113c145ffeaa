use std::path::Path;
use std::process::{Command, Output};

use lipbo_cli::{parse_config, report, ConfigError};

fn lipbo(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lipbo")).args(args).output().unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

const FAST: &str = "candidate_count = 200\nmc_count = 200\nn_runs = 2\n";

#[test]
fn single_run_with_budget_one() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "s.cfg", "benchmark = hartman3\nbudget = 1\n");
    let out = dir.path().join("single.csv");
    let result = lipbo(&["single", &cfg, "--out", out.to_str().unwrap()]);
    assert!(result.status.success());
    let text = std::fs::read_to_string(out).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], report::SINGLE_HEADER);
    assert_eq!(lines.len(), 2);
    let fields: Vec<&str> = lines[1].split(',').collect();
    assert_eq!(fields[0], "hartman3");
    assert_eq!(fields[3], "1");
    let regret: f64 = fields[4].parse().unwrap();
    assert!((0.0..=1.0).contains(&regret));
}

#[test]
fn random_exploration_sweep_shape() {
    let dir = tempfile::tempdir().unwrap();
    for (extra, rows) in [("", 14), ("include_endpoint = true\n", 15)] {
        let cfg = write(dir.path(), "f.cfg", &format!("benchmark = cosines\n{FAST}{extra}"));
        let out = dir.path().join("fig1.csv");
        assert!(lipbo(&["fig1", &cfg, "--out", out.to_str().unwrap()]).status.success());
        let text = std::fs::read_to_string(&out).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some(report::SWEEP_HEADER));
        let body: Vec<&str> = lines.collect();
        assert_eq!(body.len(), rows);
        for (k, line) in body.iter().enumerate() {
            let f: Vec<&str> = line.split(',').collect();
            assert_eq!(f[..3], ["cosines", "RANDOM_THEN_EI", &(k + 1).to_string()[..]]);
        }
    }
}

#[test]
fn table_and_width_sweep_schemas() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "t.cfg",
        &format!("benchmark = rosenbrock\nbudget = 4\nwidths = 0.1, 0.5\n{FAST}"),
    );
    let table = dir.path().join("t.csv");
    assert!(
        lipbo(&["table2", &cfg, "--out", table.to_str().unwrap(), "--runs", "3"])
            .status
            .success()
    );
    let text = std::fs::read_to_string(&table).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], report::TABLE_HEADER);
    assert_eq!(lines.len(), 5);
    assert!(lines[1..].iter().all(|l| l.split(',').nth(2) == Some("3")));

    let widths = dir.path().join("w.csv");
    assert!(lipbo(&["width-sweep", &cfg, "--out", widths.to_str().unwrap()])
        .status
        .success());
    let text = std::fs::read_to_string(&widths).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], report::WIDTH_HEADER);
    assert_eq!(lines[1].split(',').nth(2), Some("0.1"));
    assert_eq!(lines[2].split(',').nth(2), Some("0.5"));
}

#[test]
fn seed_override_changes_output() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "s.cfg", &format!("benchmark = cosines\nbudget = 3\n{FAST}"));
    let run = |seed: &str| {
        let out = dir.path().join(format!("s{seed}.csv"));
        assert!(lipbo(&["single", &cfg, "--seed", seed, "--out", out.to_str().unwrap()])
            .status
            .success());
        std::fs::read_to_string(out).unwrap()
    };
    assert_eq!(run("1"), run("1"));
    assert_ne!(run("1"), run("2"));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.cfg", "benchmark = cosines\nbudget = 0\n");
    let result = lipbo(&["single", &bad]);
    assert_eq!(result.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&result.stderr).contains("budget"));

    let unknown = write(dir.path(), "unknown.cfg", "benchmark = cosines\nkernel = matern\n");
    assert_eq!(lipbo(&["single", &unknown]).status.code(), Some(1));

    let good = write(dir.path(), "good.cfg", "benchmark = cosines\nbudget = 1\n");
    let unwritable = dir.path().join("missing").join("out.csv");
    let result = lipbo(&["single", &good, "--out", unwritable.to_str().unwrap()]);
    assert_eq!(result.status.code(), Some(2));
}

#[test]
fn documented_defaults() {
    let cfg = parse_config("benchmark = cosines").unwrap();
    let resolved = cfg.resolve("cosines").unwrap();
    assert_eq!(resolved.budget, 15);
    assert_eq!(resolved.lipschitz.lipschitz, 6.0);
    assert_eq!(resolved.lipschitz.max, 1.0);
    assert!(matches!(
        parse_config("benchmark = cosines\n\n# note\nbudget = 0"),
        Err(ConfigError::Value { line: 4, .. })
    ));
}
