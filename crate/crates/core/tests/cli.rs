//! End-to-end CLI checks, including the golden exchange-matrix files.
//! Set QDYBE_REGEN_GOLDEN=1 to rewrite the golden files from current output.

use std::path::PathBuf;

use qdybe::cli::{run, Command, Format, LambdaMode, RunConfig};

fn run_cfg(cfg: RunConfig) -> (i32, String) {
    let mut buf = Vec::new();
    let code = run(&cfg, &mut buf);
    (code, String::from_utf8(buf).unwrap())
}

fn golden_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name)
}

fn check_golden(name: &str, cfg: RunConfig) {
    let (code, out) = run_cfg(cfg);
    assert_eq!(code, 0, "{name} exited nonzero");
    let path = golden_path(name);
    if std::env::var("QDYBE_REGEN_GOLDEN").as_deref() == Ok("1") {
        std::fs::write(&path, &out).unwrap();
        return;
    }
    let expected = std::fs::read_to_string(&path)
        .unwrap_or_else(|_| panic!("missing golden file {name}; set QDYBE_REGEN_GOLDEN=1"));
    assert_eq!(out, expected, "golden mismatch for {name}");
}

#[test]
fn golden_exchange_matrices() {
    check_golden(
        "exchange_1_1.json",
        RunConfig {
            command: Command::Exchange { delta: 1, gamma: 1, inverse: false, oracle: false },
            lambda: LambdaMode::Symbolic,
            format: Format::Json,
        },
    );
    check_golden(
        "exchange_2_2.json",
        RunConfig {
            command: Command::Exchange { delta: 2, gamma: 2, inverse: false, oracle: false },
            lambda: LambdaMode::Symbolic,
            format: Format::Json,
        },
    );
}

#[test]
fn oracle_flag_agrees_with_closed_form() {
    let closed = run_cfg(RunConfig {
        command: Command::Exchange { delta: 2, gamma: 2, inverse: false, oracle: false },
        lambda: LambdaMode::Symbolic,
        format: Format::Json,
    });
    let oracle = run_cfg(RunConfig {
        command: Command::Exchange { delta: 2, gamma: 2, inverse: false, oracle: true },
        lambda: LambdaMode::Symbolic,
        format: Format::Json,
    });
    assert_eq!(closed, oracle);
}

#[test]
fn qdybe_command_passes() {
    let (code, out) = run_cfg(RunConfig {
        command: Command::Qdybe { dims: [1, 1, 1] },
        lambda: LambdaMode::Symbolic,
        format: Format::Text,
    });
    assert_eq!(code, 0);
    assert_eq!(out, "PASS qdybe dims=1,1,1\n");
}

#[test]
fn biorth_command_passes() {
    let (code, out) = run_cfg(RunConfig {
        command: Command::Biorth { gamma: 2, delta: 2, s: 2 },
        lambda: LambdaMode::Symbolic,
        format: Format::Text,
    });
    assert_eq!(code, 0);
    assert!(out.starts_with("PASS"));
}

#[test]
fn mr_check_command_passes() {
    let (code, out) = run_cfg(RunConfig {
        command: Command::MrCheck { gamma: 2, delta: 1 },
        lambda: LambdaMode::Symbolic,
        format: Format::Json,
    });
    assert_eq!(code, 0);
    let parsed: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(parsed["status"], "PASS");
    assert_eq!(parsed["coefficients"].as_array().unwrap().len(), 2);
}

#[test]
fn verify_all_small_bound() {
    let (code, out) = run_cfg(RunConfig {
        command: Command::VerifyAll { max_dim: Some(2), seed: 42 },
        lambda: LambdaMode::Symbolic,
        format: Format::Text,
    });
    assert_eq!(code, 0, "output:\n{out}");
    assert_eq!(out.lines().count(), 13);
    assert!(out.lines().all(|l| l.starts_with("PASS ")));
}
