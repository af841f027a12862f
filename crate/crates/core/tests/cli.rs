use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_entropyflow"))
}

fn config(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("configs").join(name)
}

fn run_config(path: &Path, out: &Path, extra: &[&str]) -> Output {
    bin().arg("run").arg(path).arg("--out").arg(out).args(extra).output().unwrap()
}

#[test]
fn bundled_configs_pass_and_repeat_byte_for_byte() {
    let names = [
        "classical_diffusion.json",
        "box_flow.json",
        "aggregation.json",
        "bell_maximal.json",
        "partial_decoherence.json",
        "hilbert_decoherence.json",
        "hilbert_incoherent.json",
        "partial_trace_diffusion.json",
    ];
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for name in names {
        for dir in [a.path(), b.path()] {
            let out = run_config(&config(name), dir, &[]);
            assert_eq!(out.status.code(), Some(0), "{name}: {}", String::from_utf8_lossy(&out.stderr));
        }
        let stem = name.trim_end_matches(".json");
        for ext in ["csv", "json"] {
            let file = format!("{stem}.{ext}");
            let x = std::fs::read(a.path().join(&file)).unwrap();
            let y = std::fs::read(b.path().join(&file)).unwrap();
            assert_eq!(x, y, "{file} differs between runs");
        }
        let csv = std::fs::read_to_string(a.path().join(format!("{stem}.csv"))).unwrap();
        entropyflow::experiments::revalidate_csv(&csv).unwrap();
    }
}

#[test]
fn bell_curve_ends_at_ln4() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_config(&config("bell_maximal.json"), dir.path(), &["--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(!dir.path().join("bell_maximal.json").exists());
    let csv = std::fs::read_to_string(dir.path().join("bell_maximal.csv")).unwrap();
    let last: Vec<f64> = csv.lines().last().unwrap().split(',').take(2).map(|v| v.parse().unwrap()).collect();
    assert_eq!(last[0], 1.0);
    assert!((last[1] - 4f64.ln()).abs() < 1e-12);
}

#[test]
fn spike_diffusion_entropy_strictly_increases() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_config(&config("classical_diffusion.json"), dir.path(), &["--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let csv = std::fs::read_to_string(dir.path().join("classical_diffusion.csv")).unwrap();
    let entropy: Vec<f64> = csv.lines().skip(1).map(|l| l.split(',').nth(2).unwrap().parse().unwrap()).collect();
    assert_eq!(entropy.len(), 1001);
    assert!(entropy.windows(2).all(|w| w[1] > w[0]));
}

#[test]
fn timing_is_opt_in() {
    let dir = tempfile::tempdir().unwrap();
    run_config(&config("bell_maximal.json"), dir.path(), &["--format", "json"]);
    let plain: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("bell_maximal.json")).unwrap()).unwrap();
    assert!(plain.get("wallTime").is_none());
    assert_eq!(plain["monotone"], true);
    assert_eq!(plain["boundsHold"], true);
    assert_eq!(plain["config"]["kind"], "quantumFamilyCurve");
    run_config(&config("bell_maximal.json"), dir.path(), &["--format", "json", "--timing"]);
    let timed: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("bell_maximal.json")).unwrap()).unwrap();
    assert!(timed["wallTime"].as_f64().unwrap() >= 0.0);
}

fn write_config(dir: &Path, text: &str) -> PathBuf {
    let p = dir.join("cfg.json");
    std::fs::write(&p, text).unwrap();
    p
}

#[test]
fn config_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = [
        r#"{"version": 2, "kind": "aggregationSweep", "seed": 1, "initialState": {"type": "probabilityVector", "random": 4}, "parameters": {"mode": "naive", "rounds": 3}}"#,
        r#"{"version": 1, "kind": "aggregationSweep", "initialState": {"type": "probabilityVector", "random": 4}, "parameters": {"mode": "naive", "rounds": 3}}"#,
        r#"{"version": 1, "kind": "aggregationSweep", "seed": 1, "extra": 0, "initialState": {"type": "probabilityVector", "random": 4}, "parameters": {"mode": "naive", "rounds": 3}}"#,
        r#"{"version": 1, "kind": "aggregationSweep", "seed": 1, "initialState": {"type": "probabilityVector", "random": 4}, "parameters": {"mode": "naive", "rounds": 3, "lambda": 0.5}}"#,
        r#"{"version": 1, "kind": "noSuchKind", "seed": 1}"#,
        "not json",
    ];
    for text in bad {
        let out = run_config(&write_config(dir.path(), text), dir.path(), &[]);
        assert_eq!(out.status.code(), Some(2), "{text}");
    }
    let out = bin().args(["run", "/nonexistent/config.json"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = bin().args(["describe", "nope"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = bin().args(["audit", "--max-dim", "17"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = bin().args(["audit"]).env("ENTROPYFLOW_THREADS", "zero").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = bin().args(["run", "x.json", "--format", "xml"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn numerical_failure_exits_3() {
    // A diffusion step above the stability bound.
    let dir = tempfile::tempdir().unwrap();
    let text = r#"{"version": 1, "kind": "classicalDiffusion", "seed": 0,
        "initialState": {"type": "grid", "generator": "spike", "shape": [11]},
        "parameters": {"sigma": 1.0, "step": 1.0, "steps": 3}}"#;
    let out = run_config(&write_config(dir.path(), text), dir.path(), &[]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn describe_prints_every_schema() {
    for kind in [
        "classicalDiffusion",
        "classicalBoxFlow",
        "aggregationSweep",
        "quantumFamilyCurve",
        "hilbertDiffusion",
        "partialTraceDiffusion",
        "auditAll",
    ] {
        let out = bin().args(["describe", kind]).output().unwrap();
        assert_eq!(out.status.code(), Some(0));
        let text = String::from_utf8(out.stdout).unwrap();
        assert!(text.starts_with(kind));
        for c in entropyflow::experiments::column_names(kind.parse().unwrap()) {
            assert!(text.contains(c), "{kind} schema missing {c}");
        }
    }
}

#[test]
fn audit_is_thread_count_independent() {
    let one = bin().args(["audit", "--seed", "9", "--max-dim", "4"]).env("ENTROPYFLOW_THREADS", "1").output().unwrap();
    let four = bin().args(["audit", "--seed", "9", "--max-dim", "4"]).env("ENTROPYFLOW_THREADS", "4").output().unwrap();
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, four.stdout);
}

#[test]
fn injected_fault_names_the_inequality() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin()
        .args(["audit", "--seed", "42", "--inject-fault", "--max-dim", "4", "--out"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["passed"], false);
    let suite = report["suites"].as_array().unwrap().iter().find(|s| s["name"] == "channelMonotone").unwrap();
    assert_eq!(suite["passed"], false);
    let ce = &suite["counterexample"];
    assert_eq!(ce["channel"], "injectedReplacement");
    assert_eq!(ce["violated"], "S($ rho) >= S(rho)");
    assert!(ce["entropyAfter"].as_f64().unwrap() < ce["entropyBefore"].as_f64().unwrap());
    let csv = std::fs::read_to_string(dir.path().join("auditAll.csv")).unwrap();
    assert!(csv.lines().any(|l| l.starts_with("channelMonotone,") && l.ends_with(",false")));
    assert!(String::from_utf8_lossy(&out.stderr).contains("channelMonotone"));
}

#[test]
fn audit_config_matches_audit_command() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_config(&config("audit.json"), dir.path(), &[]);
    assert_eq!(out.status.code(), Some(0));
    let summary: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("audit.json")).unwrap()).unwrap();
    let direct = bin().args(["audit", "--seed", "42", "--max-dim", "8"]).output().unwrap();
    let report: serde_json::Value = serde_json::from_slice(&direct.stdout).unwrap();
    assert_eq!(summary["audit"], report);
}
