use std::path::Path;
use std::process::Command;

use qmeasure::cli::RunManifest;

fn qmeasure(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_qmeasure"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn run_in(dir: &Path, args: &[&str]) -> std::process::Output {
    let mut all = args.to_vec();
    all.extend(["--out", dir.to_str().unwrap()]);
    qmeasure(&all)
}

fn read_json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn uup_suite_is_byte_stable_per_seed() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for dir in [&a, &b] {
        let out = run_in(
            dir.path(),
            &["uup-suite", "--count", "300", "--seed", "7", "--jobs", "2"],
        );
        assert_eq!(
            out.status.code(),
            Some(0),
            "{}",
            String::from_utf8_lossy(&out.stderr)
        );
    }
    let ra = std::fs::read(a.path().join("uup_suite.json")).unwrap();
    let rb = std::fs::read(b.path().join("uup_suite.json")).unwrap();
    assert_eq!(ra, rb);
    let report = read_json(&a.path().join("uup_suite.json"));
    assert_eq!(report["pass"], 300);
    assert_eq!(report["fail"], 0);

    let ma: RunManifest =
        serde_json::from_value(read_json(&a.path().join("uup_suite.manifest.json"))).unwrap();
    let mb: RunManifest =
        serde_json::from_value(read_json(&b.path().join("uup_suite.manifest.json"))).unwrap();
    assert_eq!(ma.config_digest, mb.config_digest);
    assert_eq!(ma.seed, 7);
}

#[test]
fn different_seed_changes_digest() {
    let dir = tempfile::tempdir().unwrap();
    run_in(dir.path(), &["uup-suite", "--count", "5", "--seed", "1"]);
    let m1 = read_json(&dir.path().join("uup_suite.manifest.json"));
    run_in(dir.path(), &["uup-suite", "--count", "5", "--seed", "2"]);
    let m2 = read_json(&dir.path().join("uup_suite.manifest.json"));
    assert_ne!(m1["config_digest"], m2["config_digest"]);
}

#[test]
fn zero_count_exits_with_usage_code() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(dir.path(), &["uup-suite", "--count", "0"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!dir.path().join("uup_suite.json").exists());
}

#[test]
fn malformed_config_is_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.json");
    std::fs::write(&cfg, r#"{"count": "many"}"#).unwrap();
    let out = run_in(
        dir.path(),
        &["way-suite", "--config", cfg.to_str().unwrap()],
    );
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn way_suite_rejects_yanase_violation_without_failing() {
    let dir = tempfile::tempdir().unwrap();
    // Identity coupling, meter S_x, apparatus charge S_z: [M, L2] ≠ 0.
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let half = |v: f64| serde_json::json!([v, 0.0]);
    let zero = serde_json::json!([0.0, 0.0]);
    let one = serde_json::json!([1.0, 0.0]);
    let sz = serde_json::json!({"dim": 2, "entries": [half(0.5), zero, zero, half(-0.5)]});
    let sx = serde_json::json!({"dim": 2, "entries": [zero, half(0.5), half(0.5), zero]});
    let mut id4 = vec![zero.clone(); 16];
    for k in 0..4 {
        id4[5 * k] = one.clone();
    }
    let config = serde_json::json!({
        "count": 40,
        "seed": 3,
        "extra_cases": [{
            "model": {
                "object_dim": 2,
                "apparatus_dim": 2,
                "apparatus_state": {"kind": "pure", "dim": 2, "entries": [one, zero]},
                "interaction": {"dim": 4, "entries": id4},
                "meter": sx,
            },
            "a": sz,
            "charge": {"l1": sz, "l2": sz},
            "psi": {"kind": "pure", "dim": 2, "entries": [[r, 0.0], [0.0, r]]},
        }],
    });
    let cfg = dir.path().join("way.json");
    std::fs::write(&cfg, config.to_string()).unwrap();
    let out = run_in(
        dir.path(),
        &["way-suite", "--config", cfg.to_str().unwrap()],
    );
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let report = read_json(&dir.path().join("way_suite.json"));
    assert_eq!(report["pass"], 40);
    assert_eq!(report["fail"], 0);
    assert_eq!(report["rejected"], 1);
    assert!(report["min_slack"].as_f64().unwrap() >= -1e-9);
}

#[test]
fn hadamard_bounds_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("spec.json");
    std::fs::write(
        &cfg,
        r#"{"coherent_mean_n": [0, 1, 4], "number_states": [0], "entangled_spins": [], "separable_spins": [1, 2, 3, 4]}"#,
    )
    .unwrap();
    let out = run_in(
        dir.path(),
        &["hadamard-bounds", "--config", cfg.to_str().unwrap()],
    );
    assert_eq!(out.status.code(), Some(0));
    let csv = std::fs::read_to_string(dir.path().join("hadamard_bounds.csv")).unwrap();
    let bounds: Vec<f64> = csv
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(2).unwrap().parse().unwrap())
        .collect();
    let want = [
        0.25,
        0.25,
        1.0 / 20.0,
        1.0 / 68.0,
        1.0 / 8.0,
        1.0 / 12.0,
        1.0 / 16.0,
        1.0 / 20.0,
    ];
    assert_eq!(bounds.len(), want.len());
    for (b, w) in bounds.iter().zip(want) {
        assert!((b - w).abs() < 1e-12, "{b} vs {w}");
    }
}

#[test]
fn hadamard_bounds_invalid_spec_is_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("spec.json");
    std::fs::write(&cfg, r#"{"coherent_mean_n": [-1]}"#).unwrap();
    let out = run_in(
        dir.path(),
        &["hadamard-bounds", "--config", cfg.to_str().unwrap()],
    );
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn hadamard_bounds_with_optimizer_fills_achieved() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("spec.json");
    std::fs::write(
        &cfg,
        r#"{"coherent_mean_n": [], "number_states": [0], "entangled_spins": [1], "separable_spins": [1],
            "optimize": {"starts": 2}}"#,
    )
    .unwrap();
    let out = run_in(
        dir.path(),
        &["hadamard-bounds", "--config", cfg.to_str().unwrap()],
    );
    assert_eq!(out.status.code(), Some(0));
    let csv = std::fs::read_to_string(dir.path().join("hadamard_bounds.csv")).unwrap();
    for line in csv.lines().skip(1) {
        let cols: Vec<&str> = line.split(',').collect();
        let slack: f64 = cols[4].parse().unwrap();
        assert!(slack >= -1e-9, "{line}");
    }
}

fn optimize_with(
    dir: &Path,
    scenario: serde_json::Value,
) -> (std::process::Output, serde_json::Value) {
    let cfg = dir.join("scenario.json");
    std::fs::write(&cfg, scenario.to_string()).unwrap();
    let out = run_in(dir, &["optimize", "--config", cfg.to_str().unwrap()]);
    let report = if dir.join("optimize.json").exists() {
        read_json(&dir.join("optimize.json"))
    } else {
        serde_json::Value::Null
    };
    (out, report)
}

#[test]
fn optimize_single_spin_respects_bound() {
    let dir = tempfile::tempdir().unwrap();
    let (out, report) = optimize_with(
        dir.path(),
        serde_json::json!({"ancilla": {"kind": "spins", "n": 1, "state": "product"}, "optimizer": {"starts": 4}}),
    );
    assert_eq!(out.status.code(), Some(0));
    assert!(report["slack"].as_f64().unwrap() >= -1e-6);
    assert!(report["result"]["converged"].as_bool().unwrap());
    assert!(dir.path().join("optimize.manifest.json").exists());
}

#[test]
fn unconstrained_control_reaches_zero() {
    let dir = tempfile::tempdir().unwrap();
    let (out, report) = optimize_with(
        dir.path(),
        serde_json::json!({"ancilla": {"kind": "none"}, "optimizer": {"starts": 2, "conservation": "none"}}),
    );
    assert_eq!(out.status.code(), Some(0));
    assert!(report["error_probability"].as_f64().unwrap() <= 1e-10);
}

#[test]
fn one_iteration_budget_reports_not_converged() {
    let dir = tempfile::tempdir().unwrap();
    let (out, report) = optimize_with(
        dir.path(),
        serde_json::json!({"ancilla": {"kind": "spins", "n": 2, "state": "product"},
                           "optimizer": {"starts": 2, "max_iters": 1}}),
    );
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report["result"]["converged"], false);
    assert!(String::from_utf8_lossy(&out.stdout).contains("not converged"));
}

#[test]
fn optimize_is_deterministic() {
    let scenario = serde_json::json!({"ancilla": {"kind": "number_state", "k": 1}, "optimizer": {"starts": 3, "seed": 4}});
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    optimize_with(a.path(), scenario.clone());
    optimize_with(b.path(), scenario);
    assert_eq!(
        std::fs::read(a.path().join("optimize.json")).unwrap(),
        std::fs::read(b.path().join("optimize.json")).unwrap()
    );
}

#[test]
fn non_conserving_operator_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let h = serde_json::json!({"dim": 2, "entries": [[r, 0.0], [r, 0.0], [r, 0.0], [-r, 0.0]]});
    let (out, _) = optimize_with(
        dir.path(),
        serde_json::json!({"ancilla": {"kind": "none"}, "implementation": {"operator": h}}),
    );
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn exhibit_violation_prepends_stored_case() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(
        dir.path(),
        &["exhibit-violation", "--count", "2000", "--seed", "1"],
    );
    assert_eq!(out.status.code(), Some(0));
    let report = read_json(&dir.path().join("exhibit_violation.json"));
    let exhibits = report["exhibits"].as_array().unwrap();
    assert_eq!(exhibits[0]["family"], "stored");
    assert!(report["found"].as_u64().unwrap() > 0);
    assert_eq!(exhibits.len() as u64, report["found"].as_u64().unwrap() + 1);
    for e in exhibits {
        assert_eq!(e["uup"]["holds"], true);
        assert_eq!(e["heisenberg"]["holds"], false);
    }
}

#[test]
fn help_exits_cleanly() {
    assert_eq!(qmeasure(&["--help"]).status.code(), Some(0));
    assert_eq!(qmeasure(&["--version"]).status.code(), Some(0));
    assert_eq!(qmeasure(&[]).status.code(), Some(2));
}
