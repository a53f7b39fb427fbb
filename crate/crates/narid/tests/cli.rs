//! Integration tests for the `narid` binary: exit codes, artifact
//! creation, and flag-over-config-file precedence.

use std::path::{Path, PathBuf};
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_narid"))
}

fn workdir(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join("narid_cli_tests").join(name);
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn generate(dir: &Path) -> PathBuf {
    let csv = dir.join("y.csv");
    let out = bin()
        .args(["generate", "--preset-demo", "--n", "1600", "--seed", "5"])
        .arg("--output")
        .arg(&csv)
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(csv.exists());
    assert!(dir.join("y.json").exists(), "truth sidecar missing");
    csv
}

#[test]
fn run_produces_artifacts_and_exits_zero() {
    let dir = workdir("run_ok");
    let csv = generate(&dir);
    let out_dir = dir.join("out");
    let out = bin()
        .args(["run", "--no-neural", "--radius", "1e-3", "--seed", "5"])
        .arg("--input")
        .arg(&csv)
        .arg("--output")
        .arg(&out_dir)
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("terms selected by AIC"), "{stdout}");
    for f in [
        "report.json",
        "predictions_k1.csv",
        "predictions_k2.csv",
        "residuals.csv",
        "structure.csv",
        "timing.txt",
    ] {
        assert!(out_dir.join(f).exists(), "{f} missing");
    }
    assert!(!out_dir.join("FAILED.txt").exists());
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out_dir.join("report.json")).unwrap())
            .unwrap();
    assert_eq!(report["status"], "ok");
    assert_eq!(report["radius"], 1e-3);
}

#[test]
fn flags_override_config_file() {
    let dir = workdir("precedence");
    let csv = generate(&dir);
    let conf = dir.join("run.conf");
    std::fs::write(
        &conf,
        format!(
            "input = {}\nradius = 0.5\nneural = false\nseed = 9\n",
            csv.display()
        ),
    )
    .unwrap();
    let out_dir = dir.join("out");
    let out = bin()
        .args(["run", "--radius", "1e-4"])
        .arg("--config")
        .arg(&conf)
        .arg("--output")
        .arg(&out_dir)
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out_dir.join("report.json")).unwrap())
            .unwrap();
    // the explicit flag wins over the file value
    assert_eq!(report["radius"], 1e-4);
    assert_eq!(report["seed"], 9);
}

#[test]
fn failing_stage_sets_exit_code_and_marker() {
    let dir = workdir("run_fail");
    let csv = dir.join("tiny.csv");
    std::fs::write(&csv, "1\n2\n3\n4\n5\n6\n7\n8\n9\n10\n").unwrap();
    let out_dir = dir.join("out");
    let out = bin()
        .args(["run", "--no-neural"])
        .arg("--input")
        .arg(&csv)
        .arg("--output")
        .arg(&out_dir)
        .output()
        .unwrap();
    assert!(!out.status.success());
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("split"), "stage missing from: {stderr}");
    assert!(stderr.contains("too few samples"), "{stderr}");
    let marker = std::fs::read_to_string(out_dir.join("FAILED.txt")).unwrap();
    assert!(marker.contains("split"));
}

#[test]
fn generate_accepts_explicit_terms() {
    let dir = workdir("gen_terms");
    let csv = dir.join("y.csv");
    let out = bin()
        .args([
            "generate",
            "--term",
            "const=25",
            "--term",
            "y1=1.6786",
            "--term",
            "y2=-0.975",
            "--term",
            "y1^3=-1e-5",
            "--sigma",
            "10",
            "--n",
            "400",
            "--seed",
            "1",
        ])
        .arg("--output")
        .arg(&csv)
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let truth: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("y.json")).unwrap()).unwrap();
    assert_eq!(truth["terms"][3], "y(k-1)^3");
    assert_eq!(truth["n"], 400);

    let bad = bin()
        .args(["generate", "--term", "q1=2", "--output"])
        .arg(dir.join("bad.csv"))
        .output()
        .unwrap();
    assert!(!bad.status.success());
}
