use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use holderopt::experiment::{parse_trace_csv, TRACE_HEADER};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_holderopt"))
}

fn write_config(dir: &Path, name: &str, body: &str) -> std::path::PathBuf {
    let trace = dir.join(format!("{name}.csv"));
    let summary = dir.join(format!("{name}.json"));
    let text = format!("{body}\noutput.trace_path={}\noutput.summary_path={}\n", trace.display(), summary.display());
    let path = dir.join(format!("{name}.cfg"));
    fs::write(&path, text).unwrap();
    path
}

fn run(cfg: &Path) -> Output {
    bin().arg("run").arg("--config").arg(cfg).output().unwrap()
}

const MINIMAL: &str = "algorithm=o2b_convex_universal\nproblem.family=quadratic\nproblem.center=0.5\nproblem.eigenvalues=2\nbudget=16";

#[test]
fn run_writes_trace_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "minimal", MINIMAL);
    let out = run(&cfg);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    let csv = fs::read_to_string(dir.path().join("minimal.csv")).unwrap();
    assert_eq!(csv.lines().next().unwrap(), TRACE_HEADER);
    let records = parse_trace_csv(&csv).unwrap();
    assert!(!records.is_empty() && records.len() <= 16);
    assert!(records.iter().all(|r| r.queries <= 16));

    let summary: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("minimal.json")).unwrap()).unwrap();
    assert_eq!(summary["total_queries"], 15);
    assert!(summary["final_subopt"].as_f64().unwrap() >= 0.0);
    assert!(summary["wall_time_seconds"].as_f64().is_some());
    assert_eq!(summary["config"]["budget"], "16");
    // no temp files left behind
    assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 3);
}

#[test]
fn repeated_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let body = "algorithm=o2b_convex_universal\nproblem.family=quadratic\nproblem.dimension=3\nproblem.center=0.3\nbudget=200\noracle.mode=stochastic\noracle.sigma=0.5\noracle.seed=42";
    let cfg = write_config(dir.path(), "noisy", body);
    assert!(run(&cfg).status.success());
    let first = fs::read(dir.path().join("noisy.csv")).unwrap();
    assert!(run(&cfg).status.success());
    assert_eq!(first, fs::read(dir.path().join("noisy.csv")).unwrap());
}

#[test]
fn config_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    for (name, body) in [
        ("unknown_key", format!("{MINIMAL}\nproblem.colour=blue")),
        ("bad_budget", "problem.family=quadratic\nbudget=zero".to_string()),
        ("needs_lambda", "problem.family=quadratic\nproblem.eigenvalues=0\nalgorithm=alg2_thm4\nbudget=10".to_string()),
    ] {
        let cfg = write_config(dir.path(), name, &body);
        let out = run(&cfg);
        assert_eq!(out.status.code(), Some(2), "{name}");
        let err = String::from_utf8_lossy(&out.stderr);
        assert!(err.starts_with("config_error: "), "{name}: {err}");
        assert_eq!(err.trim_end().lines().count(), 1);
    }
    let out = bin().args(["run", "--config", "/nonexistent/file.cfg"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = bin().args(["suite", "no_such_suite"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn holder_checks_suite_passes() {
    let out = bin().args(["suite", "holder_checks"]).output().unwrap();
    assert!(out.status.success());
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert_eq!(stdout.lines().filter(|l| l.starts_with("PASS")).count(), 5);
}

#[test]
fn sweep_is_independent_of_thread_count() {
    let body = "algorithm=o2b_convex_universal\nproblem.family=quadratic\nproblem.dimension=5\nproblem.center=0.3\nproblem.eigenvalues=1,3,5,7,10\nproblem.domain.radius=2\nbudget=32";
    let mut outputs = Vec::new();
    for threads in ["1", "4"] {
        let dir = tempfile::tempdir().unwrap();
        let cfg = write_config(dir.path(), "sweep", body);
        let out = bin()
            .args(["sweep", "--config"])
            .arg(&cfg)
            .args(["--budgets", "32,64,128,256"])
            .env("HOLDEROPT_THREADS", threads)
            .output()
            .unwrap();
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        let stdout = String::from_utf8_lossy(&out.stdout).to_string();
        assert!(stdout.contains("slope="));
        let csvs: Vec<Vec<u8>> =
            [32, 64, 128, 256].iter().map(|b| fs::read(dir.path().join(format!("sweep.T{b}.csv"))).unwrap()).collect();
        let agg: serde_json::Value =
            serde_json::from_str(&fs::read_to_string(dir.path().join("sweep.sweep.json")).unwrap()).unwrap();
        assert_eq!(agg["entries"].as_array().unwrap().len(), 4);
        assert!(agg["slope"].as_f64().unwrap() < -1.0);
        outputs.push(csvs);
    }
    assert_eq!(outputs[0], outputs[1]);

    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "bad_threads", body);
    let out = bin()
        .args(["sweep", "--config"])
        .arg(&cfg)
        .args(["--budgets", "32,64"])
        .env("HOLDEROPT_THREADS", "many")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}
