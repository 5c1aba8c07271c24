use std::fs;
use std::process::{Command, Output};

use tempfile::TempDir;

fn multislice(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_multislice"))
        .args(args)
        .env_remove("CONC_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

const DEGENERATE: &str = r#"
[spec]
kappa = [3, 2]
values = [0.0, 1.0]

[statistic]
id = "sample-mean"
n = 5

[bound]
id = "serfling"

[run]
t_grid = [0.05, 0.1, 0.5]
samples = 2000
seed = 4
workers = 2
centering = "exact-expectation"
"#;

#[test]
fn unknown_subcommand_fails() {
    assert!(!multislice(&["frobnicate"]).status.success());
    assert!(!multislice(&[]).status.success());
}

#[test]
fn enumerate_and_sample() {
    let o = multislice(&["enumerate", "--kappa", "2,1"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "[0.0,0.0,1.0]\n[0.0,1.0,0.0]\n[1.0,0.0,0.0]\n");
    let o = multislice(&["enumerate", "--kappa", "2,1,1", "--count"]);
    assert_eq!(stdout(&o).trim(), "12");
    let o = multislice(&["enumerate", "--kappa", "10,10", "--cap", "100"]);
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("too large"));

    let a = multislice(&["sample", "--kappa", "3,3", "--values", "-1,1", "--count", "5", "--seed", "8"]);
    let b = multislice(&["sample", "--kappa", "3,3", "--values", "-1,1", "--count", "5", "--seed", "8"]);
    assert!(a.status.success());
    assert_eq!(stdout(&a), stdout(&b));
    assert_eq!(stdout(&a).lines().count(), 5);
    let p = multislice(&["sample", "--kappa", "3,3", "--count", "3", "--n", "2"]);
    assert!(stdout(&p).lines().all(|l| l.matches(',').count() == 1));
}

#[test]
fn degenerate_tail_exits_zero_and_is_worker_invariant() {
    let dir = TempDir::new().unwrap();
    let cfg = dir.path().join("run.toml");
    fs::write(&cfg, DEGENERATE).unwrap();
    let meta = dir.path().join("meta.jsonl");
    let o = multislice(&["tail", "--config", cfg.to_str().unwrap(), "--metadata", meta.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = stdout(&o);
    assert!(csv.starts_with("t,p_hat,ci_lo,ci_hi,bound,verdict\n"));
    assert!(csv.lines().skip(1).all(|l| l.ends_with(",DOMINATED") && l.split(',').nth(1) == Some("0")));
    let line: serde_json::Value = serde_json::from_str(fs::read_to_string(&meta).unwrap().trim()).unwrap();
    assert_eq!(line["seed"], 4);
    assert_eq!(line["workers"], 2);

    let single = Command::new(env!("CARGO_BIN_EXE_multislice"))
        .args(["tail", "--config", cfg.to_str().unwrap()])
        .env("CONC_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(stdout(&single), csv);

    let report = multislice(&["report", meta.to_str().unwrap()]);
    assert!(report.status.success());
}

#[test]
fn malformed_configs_are_rejected_with_a_diagnostic() {
    let dir = TempDir::new().unwrap();
    let cases = [
        ("missing.toml", DEGENERATE.replace("[run]", "[runs]")),
        ("samples.toml", DEGENERATE.replace("samples = 2000", "samples = 5")),
        ("stat.toml", DEGENERATE.replace("\"sample-mean\"", "\"median\"")),
        ("syntax.toml", "[spec\nkappa = ".to_string()),
    ];
    for (name, text) in cases {
        let p = dir.path().join(name);
        fs::write(&p, text).unwrap();
        let o = multislice(&["tail", "--config", p.to_str().unwrap()]);
        assert!(!o.status.success(), "{name} accepted");
        assert!(String::from_utf8_lossy(&o.stderr).contains("error"), "{name}");
    }
    let o = multislice(&["tail", "--config", "/nonexistent/run.toml"]);
    assert!(!o.status.success());
}

#[test]
fn verify_fi_small_corpus() {
    let dir = TempDir::new().unwrap();
    let cfg = dir.path().join("fi.toml");
    fs::write(
        &cfg,
        "specs = [{ kappa = [2, 1], values = [0.0, 1.0] }, { kappa = [2, 2], values = [-1.0, 2.0] }]\n\
         [suite]\nfunctions = 5\npolynomials = 3\n",
    )
    .unwrap();
    let out = dir.path().join("fi.jsonl");
    let o = multislice(&["verify-fi", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = fs::read_to_string(&out).unwrap();
    assert!(text.lines().count() > 50);
    assert!(text.lines().all(|l| l.contains("\"PASS\"")));
    assert!(multislice(&["report", out.to_str().unwrap()]).status.success());
}

#[test]
fn verify_fi_default_corpus() {
    let o = multislice(&["verify-fi", "--functions", "3"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn cdist_norms_bound_and_talagrand() {
    let dir = TempDir::new().unwrap();
    let set = dir.path().join("set.jsonl");
    let pts = dir.path().join("pts.jsonl");
    fs::write(&set, "[0,1,0]\n[1,0,0]\n").unwrap();
    fs::write(&pts, "[0,0,1]\n[1,0,0]\n").unwrap();
    let o = multislice(&["cdist", "--set", set.to_str().unwrap(), "--points", pts.to_str().unwrap()]);
    assert!(o.status.success());
    let rows: Vec<Vec<String>> = stdout(&o).lines().skip(1).map(|l| l.split(',').map(String::from).collect()).collect();
    assert!((rows[0][1].parse::<f64>().unwrap() - 1.224_744_871).abs() < 1e-8);
    assert_eq!(rows[1][1], "0");

    let tensor = dir.path().join("t.jsonl");
    fs::write(&tensor, "{\"index\":[0,0],\"value\":3}\n{\"index\":[1,1],\"value\":4}\n").unwrap();
    let o = multislice(&["norms", "--tensor", tensor.to_str().unwrap()]);
    assert!(o.status.success());
    let csv = stdout(&o);
    assert!(csv.contains("\"{1,2}\",5,"), "{csv}");
    let op: f64 = csv.lines().find(|l| l.starts_with("{1}{2},")).unwrap().split(',').nth(1).unwrap().parse().unwrap();
    assert!((op - 4.0).abs() < 1e-8, "{csv}");

    let bound = dir.path().join("b.toml");
    fs::write(&bound, "[bound]\nid = \"kolmogorov\"\nn = 5\ntotal = 20\n").unwrap();
    let o = multislice(&["bound", "--config", bound.to_str().unwrap(), "--t", "0,1"]);
    assert!(o.status.success());
    let lines: Vec<String> = stdout(&o).lines().map(String::from).collect();
    assert_eq!(lines[0], "t,bound");
    assert_eq!(lines[1], "0,2");
    let expected = 2.0 * (-1.0f64 / 3.0).exp();
    assert!((lines[2][2..].parse::<f64>().unwrap() - expected).abs() < 1e-15);

    let o = multislice(&["talagrand", "--kappa", "2,1", "--all"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("\"trials\":7"));
}
