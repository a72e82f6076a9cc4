use std::path::PathBuf;
use std::process::{Command, Output};

fn kappa(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kappa")).args(args).env_remove("KAPPA_CONFIG").output().expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = kappa(args);
    assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap().trim_end().to_string()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("kappa-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn algebra_commands() {
    assert_eq!(stdout(&["normal-order", "P1 x1"]), "-i hbar + x1 P1");
    assert_eq!(stdout(&["normal-order", "x1 x0"]), "x0 x1 + i lam x1");
    assert_eq!(stdout(&["commutator", "x0", "x1"]), "-i lam x1");
    assert_eq!(stdout(&["commutator", "xh1", "ph1"]), "i hbar");
    assert_eq!(stdout(&["pair", "x0^2", "P0^2"]), "-2 hbar^2");
    assert_eq!(stdout(&["pair", "x1 x0", "P1"]), "-hbar lam");
}

#[test]
fn boost_bracket_sign_follows_the_profile() {
    let derived = stdout(&["-N", "2", "commutator", "M[1,0]", "P0"]);
    let literal = stdout(&["-N", "2", "--profile", "paper-literal", "commutator", "M[1,0]", "P0"]);
    assert_eq!(derived, "-i hbar P1");
    assert_eq!(literal, "i hbar P1");
}

#[test]
fn derive_cross_lists_the_table() {
    let text = stdout(&["derive-cross"]);
    assert!(text.lines().any(|l| l == "[x1, x0] = i lam x1"), "{text}");
    let json: serde_json::Value = serde_json::from_str(&stdout(&["derive-cross", "--format", "json"])).unwrap();
    assert_eq!(json.as_array().unwrap().len(), text.lines().count());
}

#[test]
fn exit_codes_separate_errata_from_failures() {
    assert_eq!(kappa(&["check", "basis-change"]).status.code(), Some(0));
    assert_eq!(kappa(&["check", "cross-derive"]).status.code(), Some(1));
    assert_eq!(kappa(&["--profile", "paper-literal", "check", "jacobi"]).status.code(), Some(3));
    assert_eq!(kappa(&["check", "no-such-suite"]).status.code(), Some(4));
    assert_eq!(kappa(&["bogus-command"]).status.code(), Some(2));
}

#[test]
fn parse_errors_report_a_position() {
    let out = kappa(&["normal-order", "x0 + y"]);
    assert_eq!(out.status.code(), Some(4));
    assert_eq!(String::from_utf8_lossy(&out.stderr).trim(), "kappa: 1:6: unknown token `y`");
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let a = kappa(&["check", "pairing-grid"]);
    let b = kappa(&["check", "pairing-grid"]);
    assert!(!a.stdout.is_empty());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn json_records_carry_the_run_settings() {
    let records: serde_json::Value = serde_json::from_str(&stdout(&["--seed", "5", "check", "basis-change"])).unwrap();
    let first = &records[0];
    assert_eq!(first["suite"], "basis-change");
    assert_eq!(first["status"], "pass");
    assert_eq!(first["N"], 6);
    assert_eq!(first["seed"], 5);
}

#[test]
fn config_file_from_the_environment() {
    let cfg = scratch("run.toml");
    std::fs::write(&cfg, "truncation_order = 3\nsign_policy = \"paper-literal\"\n").unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_kappa"))
        .args(["check", "jacobi"])
        .env("KAPPA_CONFIG", &cfg)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    let records: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(records[0]["N"], 3);

    std::fs::write(&cfg, "n_levels = 2\n").unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_kappa")).args(["check", "jacobi"]).env("KAPPA_CONFIG", &cfg).output().unwrap();
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn uncertainty_writes_csv_and_markdown() {
    let csv = scratch("bounds.csv");
    let md = scratch("summary.md");
    let out = kappa(&[
        "--states",
        "4",
        "--n-levels",
        "24",
        "-o",
        md.to_str().unwrap(),
        "uncertainty",
        "--kappa-hbar",
        "2",
        "--csv",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let rows = std::fs::read_to_string(&csv).unwrap();
    assert!(rows.starts_with("state,kappa_hbar,pair,kind,lhs,rhs,margin\n"));
    assert!(std::fs::read_to_string(&md).unwrap().contains("| uncertainty |"));
}
