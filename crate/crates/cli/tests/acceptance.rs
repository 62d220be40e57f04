//! End-to-end criterion for the CLI: each subcommand reproduces its golden
//! report byte for byte, output is identical across runs, and exit codes
//! follow the contract.

use std::path::Path;
use std::process::{Command, Output, Stdio};
use std::io::Write;

fn bcc() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_bcc"));
    cmd.env_remove("BCC_WEIGHT_CAP");
    cmd
}

fn run(args: &[&str]) -> Output {
    bcc().args(args).output().expect("binary runs")
}

fn run_stdin(args: &[&str], input: &str) -> Output {
    let mut child = bcc()
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary spawns");
    child
        .stdin
        .take()
        .unwrap()
        .write_all(input.as_bytes())
        .unwrap();
    child.wait_with_output().expect("binary exits")
}

fn golden(name: &str) -> Vec<u8> {
    let path = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name);
    std::fs::read(&path).unwrap_or_else(|e| panic!("cannot read {path:?}: {e}"))
}

fn exit_code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

/// Runs twice, asserts determinism, and checks stdout against the golden.
fn check_golden(args: &[&str], golden_name: &str, expected_exit: i32) {
    let first = run(args);
    let second = run(args);
    assert_eq!(first.stdout, second.stdout, "{args:?} not deterministic");
    assert_eq!(first.status, second.status, "{args:?} exit not deterministic");
    assert_eq!(
        first.stdout,
        golden(golden_name),
        "{args:?} diverged from golden {golden_name}: got {}",
        String::from_utf8_lossy(&first.stdout)
    );
    assert_eq!(exit_code(&first), expected_exit, "{args:?} exit code");
}

#[test]
fn criterion_10_cli_end_to_end() {
    // primitive-relator on the worked examples
    check_golden(
        &[
            "primitive-relator",
            "--presentation",
            "< x, y | [x,y] >",
            "--output",
            "json",
        ],
        "relator_commutator.json",
        0,
    );
    check_golden(
        &[
            "primitive-relator",
            "--presentation",
            "< x, y | [x,y]^2 >",
            "--output",
            "json",
        ],
        "relator_commutator_squared.json",
        10,
    );
    check_golden(
        &[
            "primitive-relator",
            "--presentation",
            "< x, y | x^2 y^-3 >",
            "--output",
            "json",
        ],
        "relator_trefoil.json",
        0,
    );

    // primitive-link on the worked examples
    check_golden(
        &["primitive-link", "--matrix", "[[0,1],[1,0]]", "--output", "json"],
        "link_hopf.json",
        0,
    );
    check_golden(
        &["primitive-link", "--matrix", "[[0,2],[2,0]]", "--output", "json"],
        "link_label2.json",
        10,
    );
    check_golden(
        &["primitive-link", "--matrix", "[[0]]", "--output", "json"],
        "link_knot.json",
        0,
    );

    // certify job files
    let golden_dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    let job = |name: &str| golden_dir.join(name).to_str().unwrap().to_owned();
    check_golden(
        &["certify", "--file", &job("jobs_full_braid4.json"), "--output", "json"],
        "certify_full_braid4.json",
        0,
    );
    check_golden(
        &["certify", "--file", &job("jobs_link_label2.json"), "--output", "json"],
        "certify_link_label2.json",
        10,
    );
    check_golden(
        &["certify", "--file", &job("jobs_empty.json"), "--output", "json"],
        "certify_empty.json",
        0,
    );

    // every json line parses back
    for name in ["certify_full_braid4.json", "certify_link_label2.json"] {
        let bytes = golden(name);
        for line in String::from_utf8(bytes).unwrap().lines() {
            let v: serde_json::Value = serde_json::from_str(line).unwrap();
            assert!(v.get("job_id").is_some());
            assert!(v.get("verdict").is_some());
        }
    }

    println!("criterion 10: PASS — CLI reports are byte-identical across runs and match the goldens");
}

#[test]
fn malformed_inputs_exit_2() {
    let out = run(&["primitive-relator", "--presentation", "< x | x ? >"]);
    assert_eq!(exit_code(&out), 2);
    assert!(out.stdout.is_empty());
    assert!(String::from_utf8_lossy(&out.stderr).contains("error:"));

    let out = run(&["primitive-link", "--matrix", "[[0,1],[2,0]]"]);
    assert_eq!(exit_code(&out), 2, "asymmetric matrix");

    let out = run_stdin(&["certify"], "{\"format_version\":2,\"jobs\":[]}");
    assert_eq!(exit_code(&out), 2, "unsupported format_version");

    let out = run_stdin(
        &["certify"],
        "{\"format_version\":1,\"jobs\":[\
          {\"job_id\":\"a\",\"descriptor\":{\"kind\":\"pure_braid\",\"n\":3}},\
          {\"job_id\":\"a\",\"descriptor\":{\"kind\":\"pure_braid\",\"n\":4}}]}",
    );
    assert_eq!(exit_code(&out), 2, "duplicate job_id");
}

#[test]
fn stdin_matches_flag_input() {
    let via_flag = run(&[
        "primitive-relator",
        "--presentation",
        "< x, y | [x,y] >",
        "--output",
        "json",
    ]);
    let via_stdin = run_stdin(
        &["primitive-relator", "--output", "json"],
        "< x, y | [x,y] >\n",
    );
    assert_eq!(via_flag.stdout, via_stdin.stdout);
    assert_eq!(via_flag.status, via_stdin.status);
}

#[test]
fn weight_cap_env_triggers_abstention() {
    let out = bcc()
        .args(["primitive-relator", "--presentation", "< x, y | [[x,y],y] >", "--output", "json"])
        .env("BCC_WEIGHT_CAP", "2")
        .output()
        .unwrap();
    assert_eq!(exit_code(&out), 11, "cap 2 cannot reach weight 3");
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["reason"], "WEIGHT_CAP_EXCEEDED");

    // the flag wins over the environment
    let out = bcc()
        .args([
            "primitive-relator",
            "--presentation",
            "< x, y | [[x,y],y] >",
            "--weight-cap",
            "8",
            "--output",
            "json",
        ])
        .env("BCC_WEIGHT_CAP", "2")
        .output()
        .unwrap();
    assert_eq!(exit_code(&out), 0);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["weight"], 3);
}
