use std::path::PathBuf;
use std::process::{Command, Output};

fn bilax(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bilax"))
        .args(args)
        .env_remove("BILAX_THREADS")
        .output()
        .expect("run bilax")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn tmp(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn verify_passes_for_both_families() {
    for model in ["bcn", "dn"] {
        let o = bilax(&["verify", "--model", model, "--N", "2"]);
        let out = String::from_utf8_lossy(&o.stdout);
        assert_eq!(code(&o), 0, "{model}: {out}");
        assert!(out.lines().count() >= 9);
        assert!(out.lines().all(|l| l.starts_with("PASS")), "{out}");
    }
}

#[test]
fn verify_json_lists_reports() {
    let o = bilax(&["verify", "--model", "bcn", "--N", "1", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let reports = v.as_array().unwrap();
    assert!(reports.iter().all(|r| r["holds"] == true));
}

#[test]
fn config_errors_exit_2() {
    for args in [
        &["verify", "--model", "bcn", "--N", "0"][..],
        &["verify", "--model", "dn", "--N", "1"],
        &["verify", "--model", "bcn"],
        &["verify", "--model", "bcn", "--N", "2", "--params", "{\"c_0\": 1}"],
        &["verify", "--model", "bcn", "--N", "2", "--params", "{not json"],
        &["simulate", "--model", "bcn", "--N", "2", "--dt=-0.1"],
        &["simulate", "--model", "bcn", "--N", "2", "--mu-samples", "0"],
        &["simulate", "--model", "tree", "--N", "2"],
    ] {
        assert_eq!(code(&bilax(args)), 2, "{args:?}");
    }
}

#[test]
fn derive_matches_closed_forms() {
    for model in ["bcn", "dn"] {
        let o = bilax(&["derive", "--model", model, "--N", "2"]);
        assert_eq!(code(&o), 0);
        let out = String::from_utf8_lossy(&o.stdout);
        assert!(out.contains("H = "));
        assert_eq!(out.matches(": MATCH").count(), 4, "{out}");
    }
}

#[test]
fn simulate_csv_columns() {
    let o = bilax(&["simulate", "--model", "dn", "--N", "2", "--steps", "50"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let text = String::from_utf8(o.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "t,x_1,x_2,X_1,X_2,E,F,H,H_drift,casimir_drift,zc_residual"
    );
    assert_eq!(lines.count(), 51);
}

#[test]
fn simulate_is_deterministic() {
    let a = tmp("det_a.csv");
    let b = tmp("det_b.csv");
    let run = |p: &PathBuf| {
        let o = bilax(&[
            "simulate", "--model", "bcn", "--N", "3", "--steps", "200", "--seed", "7",
            "--output", p.to_str().unwrap(),
        ]);
        assert_eq!(code(&o), 0);
    };
    run(&a);
    run(&b);
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());

    let c = tmp("det_c.csv");
    let o = bilax(&[
        "simulate", "--model", "bcn", "--N", "3", "--steps", "200", "--seed", "8",
        "--output", c.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    assert_ne!(std::fs::read(&a).unwrap(), std::fs::read(&c).unwrap());
}

#[test]
fn simulate_formats_from_extension() {
    let svg = tmp("plot.svg");
    let o = bilax(&["simulate", "--model", "bcn", "--N", "2", "--steps", "20", "--output", svg.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert!(std::fs::read_to_string(&svg).unwrap().starts_with("<svg"));

    let o = bilax(&["simulate", "--model", "bcn", "--N", "2", "--steps", "20", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["times"].as_array().unwrap().len(), 21);
}

#[test]
fn params_file_with_full_config() {
    let cfg = tmp("model.json");
    std::fs::write(&cfg, r#"{"model": "bcn", "N": 2, "params": {"beta_1": "3/2", "theta_N": 0.25}}"#).unwrap();
    let o = bilax(&["verify", "--params", cfg.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn singular_dn_exits_1() {
    let o = bilax(&["simulate", "--model", "dn", "--N", "2", "--params", r#"{"c0": 1e-20}"#, "--steps", "10"]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("singular"));
}
