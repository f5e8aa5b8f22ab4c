//! End-to-end checks of the binary: exit-code contract, report formats,
//! determinism.

use std::path::PathBuf;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_symspace")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn write_step_fn(name: &str, json: &str) -> PathBuf {
    let path = std::env::temp_dir().join(format!("symspace-cli-{name}-{}.json", std::process::id()));
    std::fs::write(&path, json).unwrap();
    path
}

#[test]
fn indices_on_the_sqrt_log_weight() {
    let out = run(&["indices", "powlog:0.5:0.5"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("gamma = 0.48"), "{text}");
    assert!(text.contains("delta = 0.49"), "{text}");
}

#[test]
fn indices_rejects_non_admissible_weights() {
    assert_eq!(code(&run(&["indices", "pow:2"])), 64);
    assert_eq!(code(&run(&["indices", "gauss:1"])), 64);
    assert_eq!(code(&run(&["indices", "pow:1"])), 0);
}

#[test]
fn embed_exit_codes_follow_the_series_verdict() {
    assert_eq!(code(&run(&["embed", "pow:0.5", "pow:1"])), 0);
    let out = run(&["embed", "pow:0.5", "pow:0.5", "--witness", "5"]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("[2, 4, 6, 8, 10]"));
    // the log-gap pair has no positive index: the chain refuses
    assert_eq!(code(&run(&["embed", "powlog:0.5:0.5", "pow:0.5", "--chain"])), 65);
}

#[test]
fn rho_pipeline_and_preconditions() {
    let out = run(&["rho", "pow:0.5", "pow:0.75", "--u", "0.25"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("all checks pass"));
    assert_eq!(code(&run(&["rho", "pow:0.5", "pow:0.5"])), 65);
    assert_eq!(code(&run(&["rho", "pow:0.5", "pow:0.75", "--u", "0.6"])), 65);
}

#[test]
fn verify_cex_small_run_passes_and_depth_is_capped() {
    let out = run(&["verify-cex", "--m", "1", "--samples", "25"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("all claims pass"));
    let out = run(&["verify-cex", "--m", "0", "--samples", "1"]);
    assert_eq!(code(&out), 0, "degenerate single-window run");
    assert_eq!(code(&run(&["verify-cex", "--m", "12"])), 66);
}

#[test]
fn norm_subcommand_matches_fundamental_values() {
    let x = write_step_fn(
        "quarter",
        r#"{"breakpoints":[{"dyadic":2},1.0],"values":[1.0,0.0]}"#,
    );
    let path = x.to_str().unwrap();
    let lor = stdout(&run(&["norm", "lorentz", "pow:0.5", path]));
    assert!(lor.contains("0.5000000000"), "{lor}");
    let orl = stdout(&run(&["norm", "orlicz", "pow:2", path]));
    assert!(orl.contains("0.50000000"), "{orl}");
    let f = stdout(&run(&["norm", "f", "-", path]));
    assert!(f.contains("0.5000000000"), "{f}");
    assert_eq!(code(&run(&["norm", "lorentz", "pow:0.5", "/no/such/file.json"])), 64);
    std::fs::remove_file(x).ok();
}

#[test]
fn json_reports_are_byte_identical_across_runs() {
    let a = run(&["verify-cex", "--m", "1", "--samples", "20", "--format", "json"]);
    let b = run(&["verify-cex", "--m", "1", "--samples", "20", "--format", "json"]);
    assert_eq!(code(&a), 0);
    assert_eq!(stdout(&a), stdout(&b));
    let c = run(&["verify-cex", "--m", "1", "--samples", "20", "--seed", "7", "--format", "json"]);
    assert_ne!(stdout(&a), stdout(&c), "seed must matter");
}

#[test]
fn csv_report_has_one_row_per_claim() {
    let out = run(&["verify-cex", "--m", "0", "--samples", "5", "--format", "csv"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("claim_id,kind,computed,bound,pass"));
    assert!(lines.clone().count() >= 10);
    assert!(lines.all(|l| l.split(',').count() == 5));
}

#[test]
fn unknown_flags_are_usage_errors() {
    assert_eq!(code(&run(&["verify-cex", "--frobnicate"])), 64);
    assert_eq!(code(&run(&["norm", "hilbert", "pow:0.5", "/tmp/x.json"])), 64);
}
