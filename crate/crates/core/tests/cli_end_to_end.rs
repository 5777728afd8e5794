use std::fs;
use std::path::Path;
use std::process::{Command, Output};
use std::time::Instant;

use coadea::cli::frontier_svg;
use coadea::pareto::{dominates, reference_front};
use coadea::problem::builtin;

fn coadea(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_coadea"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn files_in(dir: &Path) -> Vec<String> {
    let mut names: Vec<String> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
        .collect();
    names.sort();
    names
}

fn parse_csv(text: &str) -> (Vec<String>, Vec<Vec<f64>>) {
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect();
    (header, rows)
}

#[test]
fn single_seed_run_writes_four_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let start = Instant::now();
    let res = coadea(&["run", "--problem", "1", "--seed", "42", "--out", out]);
    let elapsed = start.elapsed();
    assert!(res.status.success(), "{}", String::from_utf8_lossy(&res.stderr));
    assert!(elapsed.as_secs_f64() < 5.0, "took {elapsed:?}");
    assert_eq!(
        files_in(dir.path()),
        [
            "front_problem1_42.svg",
            "frontier_problem1_42.csv",
            "history_problem1_42.csv",
            "metrics_problem1_42.csv"
        ]
    );

    // Summary line carries the same numbers as the metrics file.
    let stdout = String::from_utf8(res.stdout).unwrap();
    assert_eq!(stdout.lines().count(), 1);
    let metrics = fs::read_to_string(dir.path().join("metrics_problem1_42.csv")).unwrap();
    let row = metrics.lines().nth(1).unwrap();
    for field in row.split(',') {
        assert!(stdout.contains(field), "`{field}` not in `{stdout}`");
    }

    // Every frontier row is feasible and efficient.
    let problem = builtin(1).unwrap();
    let (header, rows) = parse_csv(&fs::read_to_string(dir.path().join("frontier_problem1_42.csv")).unwrap());
    assert_eq!(header, ["x1", "x2", "f1", "f2", "efficiency", "iteration"]);
    assert!(!rows.is_empty());
    for r in &rows {
        assert!(problem.is_feasible(&r[0..2]).feasible);
        assert!(r[4] >= 1.0 - 1e-6 && r[4] <= 1.0);
    }
    let svg = fs::read_to_string(dir.path().join("front_problem1_42.svg")).unwrap();
    let doc = roxmltree::Document::parse(&svg).unwrap();
    let circles = doc.descendants().filter(|n| n.has_tag_name("circle")).count();
    assert_eq!(circles, rows.len());
    assert_eq!(doc.descendants().filter(|n| n.has_tag_name("polyline")).count(), 1);
}

#[test]
fn two_seeds_write_eight_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let res = coadea(&["run", "--problem", "4", "--seed", "1,2", "--out", out]);
    assert!(res.status.success());
    assert_eq!(files_in(dir.path()).len(), 8);
    let stdout = String::from_utf8(res.stdout).unwrap();
    let lines: Vec<&str> = stdout.lines().collect();
    assert!(lines[0].starts_with("problem4 seed=1 ") && lines[1].starts_with("problem4 seed=2 "));
    for seed in [1, 2] {
        let text = fs::read_to_string(dir.path().join(format!("frontier_problem4_{seed}.csv"))).unwrap();
        let f: Vec<Vec<f64>> = parse_csv(&text).1.iter().map(|r| r[2..4].to_vec()).collect();
        for a in &f {
            for b in &f {
                assert!(!dominates(a, b).unwrap());
            }
        }
    }
}

#[test]
fn identical_runs_are_byte_identical() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for d in [&a, &b] {
        let res = coadea(&["run", "--problem", "3", "--seed", "7", "--iters", "12", "--out", d.path().to_str().unwrap()]);
        assert!(res.status.success());
    }
    for name in files_in(a.path()) {
        assert_eq!(
            fs::read(a.path().join(&name)).unwrap(),
            fs::read(b.path().join(&name)).unwrap(),
            "{name} differs"
        );
    }
}

#[test]
fn unknown_builtin_fails() {
    let dir = tempfile::tempdir().unwrap();
    let res = coadea(&["run", "--problem", "9", "--out", dir.path().to_str().unwrap()]);
    assert!(!res.status.success());
    assert!(String::from_utf8_lossy(&res.stderr).contains("unknown builtin problem"));
    assert!(files_in(dir.path()).is_empty());
}

#[test]
fn unwritable_output_fails_without_files() {
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("not-a-dir");
    fs::write(&blocker, "x").unwrap();
    let res = coadea(&["run", "--problem", "2", "--iters", "2", "--out", blocker.join("out").to_str().unwrap()]);
    assert!(!res.status.success());
    assert_eq!(files_in(dir.path()), ["not-a-dir"]);
}

#[test]
fn config_file_with_custom_problem() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("exp.cfg");
    fs::write(
        &cfg,
        format!(
            "name = bowl\nobjective = x1^2 + x2^2\nobjective = (x1 − 1)^2 + x2^2\nconstraint = x1 + x2 >= 0.2\n\
             lower = -1, -1\nupper = 2, 2\nseed = 5\niters = 15\nout = {}\n",
            dir.path().join("out").display()
        ),
    )
    .unwrap();
    let res = coadea(&["run", "--config", cfg.to_str().unwrap(), "--formats", "csv"]);
    assert!(res.status.success(), "{}", String::from_utf8_lossy(&res.stderr));
    assert_eq!(
        files_in(&dir.path().join("out")),
        ["frontier_bowl_5.csv", "history_bowl_5.csv", "metrics_bowl_5.csv"]
    );
    let history = fs::read_to_string(dir.path().join("out/history_bowl_5.csv")).unwrap();
    assert_eq!(history.lines().count(), 1 + 16);
}

#[test]
fn malformed_config_fails() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.cfg");
    fs::write(&cfg, "problem = 1\ncolour = blue\n").unwrap();
    let res = coadea(&["run", "--config", cfg.to_str().unwrap()]);
    assert!(!res.status.success());
    assert!(String::from_utf8_lossy(&res.stderr).contains("unknown key"));
}

#[test]
fn svg_examples() {
    let reference = reference_front(&builtin(1).unwrap(), 200).unwrap();
    let svg = frontier_svg("problem1", &[vec![0.0, 50.0]], &reference).unwrap();
    roxmltree::Document::parse(&svg).unwrap();
    assert_eq!(svg, frontier_svg("problem1", &[vec![0.0, 50.0]], &reference).unwrap());

    let only = frontier_svg("markers", &[vec![0.0, 50.0], vec![1.0, 2.0]], &[]).unwrap();
    let doc = roxmltree::Document::parse(&only).unwrap();
    assert_eq!(doc.descendants().filter(|n| n.has_tag_name("circle")).count(), 2);
    assert_eq!(doc.descendants().filter(|n| n.has_tag_name("polyline")).count(), 0);
}
