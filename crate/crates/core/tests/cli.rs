use std::path::Path;
use std::process::{Command, Output};

fn frw(args: &[&str], dir: &Path, seed_env: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_frw-killing"));
    cmd.args(args).current_dir(dir).env_remove("KL_SEED");
    if let Some(s) = seed_env {
        cmd.env("KL_SEED", s);
    }
    cmd.output().expect("binary runs")
}

fn scratch(name: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("frw-killing-cli-{name}-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn json(out: &[u8]) -> serde_json::Value {
    serde_json::from_slice(out).expect("JSON report")
}

#[test]
fn config_file_environment_and_flag_precedence() {
    let dir = scratch("precedence");
    std::fs::write(dir.join("verify.cfg"), "# local settings\nseed = 11\nsamples = 7\nprofile = constant:2\n").unwrap();

    let out = frw(&["catalog", "--list"], &dir, None);
    let cfg = &json(&out.stdout)["config"];
    assert_eq!(cfg["seed"], 11);
    assert_eq!(cfg["sample_count"], 7);
    assert_eq!(cfg["profile"], "constant:2");

    let out = frw(&["catalog", "--list"], &dir, Some("12"));
    assert_eq!(json(&out.stdout)["config"]["seed"], 12);

    let out = frw(&["catalog", "--list", "--seed", "13"], &dir, Some("12"));
    assert_eq!(json(&out.stdout)["config"]["seed"], 13);

    std::fs::write(dir.join("verify.cfg"), "colour = blue\n").unwrap();
    let out = frw(&["catalog", "--list"], &dir, None);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("colour"));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn report_file_and_exit_codes() {
    let dir = scratch("output");
    let out = frw(&["algebra-dim", "--profile", "secant:1", "--samples", "5", "--output", "report.json"], &dir, None);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let report = json(&std::fs::read(dir.join("report.json")).unwrap());
    assert_eq!(report["results"]["algebra_dimension"], 10);
    assert_eq!(report["pass"], true);
    assert!(report.get("wall_time_seconds").is_none());

    let out = frw(&["killing-check", "--profile", "constant:1", "--field", "hyp2", "--samples", "3"], &dir, None);
    assert_eq!(out.status.code(), Some(2), "hyperbolic fields need the secant profile");

    let out = frw(&["algebra-dim", "--profile", "exponential:1,1", "--samples", "4", "--tol", "rank_gap=1e300"], &dir, None);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("rank_gap"));

    let out = frw(&["compat-rank", "--profile", "constant:2", "--timing"], &dir, None);
    assert_eq!(out.status.code(), Some(0));
    assert!(json(&out.stdout)["wall_time_seconds"].is_number());

    let out = frw(&["full-verify", "--profile", "secant:1", "--format", "unknown"], &dir, None);
    assert_eq!(out.status.code(), Some(2));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn compat_rank_example_output() {
    let out = frw(&["compat-rank", "--profile", "exponential:1,1", "--point", "x:0,0,0,0"], Path::new("."), None);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("\"kernel_dim\": 6"));
    assert!(text.contains("e+00") || text.contains("e-"), "floats use exponent notation");
}
