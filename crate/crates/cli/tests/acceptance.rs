//! CLI acceptance: byte-identical output across repeated runs for every
//! subcommand fixture (criterion 9), the documented exit codes, and
//! coverage of every library operation by at least one subcommand.

use std::io::Write;
use std::process::{Command, Output, Stdio};

fn cflab() -> Command {
    Command::new(env!("CARGO_BIN_EXE_cflab"))
}

fn run_with_stdin(args: &[&str], stdin: Option<&str>) -> Output {
    let mut cmd = cflab();
    cmd.args(args);
    cmd.stdin(if stdin.is_some() {
        Stdio::piped()
    } else {
        Stdio::null()
    });
    cmd.stdout(Stdio::piped()).stderr(Stdio::piped());
    let mut child = cmd.spawn().expect("spawn cflab");
    if let Some(input) = stdin {
        child
            .stdin
            .as_mut()
            .unwrap()
            .write_all(input.as_bytes())
            .unwrap();
    }
    child.wait_with_output().expect("wait for cflab")
}

const GOLDEN_BCF: &str = "BCF\n1\n3\n3\n3\n3\n3\n3\n3\n3\n3\n3\n3\n3\n";
const RCF_WINDOW: &str =
    "{\"kind\":\"RCF\",\"a0\":0,\"digits\":[1,2,4,16,256,3,2,1,9,1,1,2,5,1],\"terminated\":false}";

/// Every subcommand fixture, run twice: the bytes must match exactly.
#[test]
fn criterion_9_deterministic_output() {
    let fixtures: Vec<(&str, Vec<&str>, Option<&str>)> = vec![
        (
            "expand",
            vec![
                "expand",
                "--bcf",
                "--value",
                "(-1+1*sqrt(5))/2",
                "--count",
                "5",
            ],
            None,
        ),
        (
            "expand-text",
            vec![
                "expand", "--rcf", "--value", "415/93", "--count", "10", "--text",
            ],
            None,
        ),
        (
            "convert",
            vec!["convert", "--to", "rcf", "--count", "8", "--input", "-"],
            Some(GOLDEN_BCF),
        ),
        (
            "convergents",
            vec!["convergents", "--count", "8", "--input", "-"],
            Some(GOLDEN_BCF),
        ),
        (
            "convergents-csv",
            vec!["convergents", "--count", "8", "--csv", "--input", "-"],
            Some(GOLDEN_BCF),
        ),
        (
            "mu",
            vec!["mu", "--window", "10", "--input", "-"],
            Some(GOLDEN_BCF),
        ),
        (
            "hits",
            vec!["hits", "--alpha", "5/2", "--window", "12", "--input", "-"],
            Some(RCF_WINDOW),
        ),
        (
            "hits-csv",
            vec![
                "hits", "--alpha", "5/2", "--window", "12", "--csv", "--input", "-",
            ],
            Some(RCF_WINDOW),
        ),
        (
            "interval",
            vec![
                "interval", "--family", "bcf", "--word", "2,2,3", "--at", "1/2",
            ],
            None,
        ),
        (
            "dim",
            vec![
                "dim",
                "--family",
                "bcf",
                "--alphabet",
                "3,4",
                "--depth",
                "1",
                "--tol",
                "1e-4",
                "--pressure-at",
                "1/2",
            ],
            None,
        ),
        (
            "dim-induced",
            vec![
                "dim",
                "--family",
                "bcf",
                "--alphabet",
                "2,3",
                "--depth",
                "1",
                "--tol",
                "1e-3",
                "--cutoff",
                "12",
            ],
            None,
        ),
        (
            "seed-search",
            vec!["seed-search", "--alphabet", "2,3", "--p", "2"],
            None,
        ),
        (
            "construct",
            vec![
                "construct",
                "--alphabet",
                "2,3",
                "--p",
                "2",
                "--epsilon",
                "0.455",
                "--lambda",
                "0.1",
                "--t",
                "3",
                "--alpha",
                "121/60",
                "--digits",
                "2000",
                "--seed-pattern",
                "periodic:0,1",
                "--verify-k",
                "5",
                "--holder-k",
                "3",
            ],
            None,
        ),
    ];
    for (name, args, stdin) in fixtures {
        let first = run_with_stdin(&args, stdin);
        assert!(
            first.status.success(),
            "{name} failed: {}",
            String::from_utf8_lossy(&first.stderr)
        );
        assert!(!first.stdout.is_empty(), "{name} produced no output");
        let second = run_with_stdin(&args, stdin);
        assert_eq!(
            first.stdout, second.stdout,
            "{name} output differs between runs"
        );
        println!("criterion 9 ({name}): PASS");
    }
}

#[test]
fn expand_matches_documented_example() {
    let out = run_with_stdin(
        &[
            "expand",
            "--bcf",
            "--value",
            "(-1+1*sqrt(5))/2",
            "--count",
            "5",
        ],
        None,
    );
    assert_eq!(
        String::from_utf8_lossy(&out.stdout),
        "{\"b0\":1,\"digits\":[3,3,3,3,3],\"kind\":\"BCF\",\"terminated\":false}\n"
    );
}

#[test]
fn validation_errors_exit_2() {
    // clap-level usage error
    let out = run_with_stdin(&["expand", "--count", "-3"], None);
    assert_eq!(out.status.code(), Some(2));
    // semantic validation error
    let out = run_with_stdin(
        &["expand", "--rcf", "--value", "not-a-number", "--count", "3"],
        None,
    );
    assert_eq!(out.status.code(), Some(2));
    // kind mismatch
    let out = run_with_stdin(
        &["convert", "--to", "bcf", "--count", "4", "--input", "-"],
        Some(GOLDEN_BCF),
    );
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn budget_errors_exit_3() {
    let mut cmd = cflab();
    cmd.args([
        "construct",
        "--alphabet",
        "2,3",
        "--p",
        "2",
        "--epsilon",
        "0.455",
        "--digits",
        "5000",
    ])
    .env("CFLAB_DIGIT_BUDGET", "1000")
    .stdin(Stdio::null())
    .stdout(Stdio::piped())
    .stderr(Stdio::piped());
    let out = cmd.spawn().unwrap().wait_with_output().unwrap();
    assert_eq!(out.status.code(), Some(3));
}

/// Dispatch coverage: every library operation is reachable from at least
/// one subcommand.
#[test]
fn every_operation_has_a_subcommand() {
    let dispatch: &[(&str, &[&str])] = &[
        ("expand", &["rcf_digits", "bcf_digits"]),
        ("convert", &["rcf_to_bcf", "bcf_to_rcf"]),
        ("convergents", &["rcf_convergents", "bcf_convergents"]),
        ("mu", &["mu_rcf_estimate", "mu_bcf_estimate"]),
        ("hits", &["good_hits"]),
        (
            "interval",
            &[
                "apply_word",
                "mobius_compose",
                "fundamental_interval",
                "derivative_range",
                "distortion",
                "interval_diameter",
            ],
        ),
        (
            "dim",
            &["pressure_bounds", "dim_bounds", "induce_parabolic"],
        ),
        ("seed-search", &["search_seed_words"]),
        (
            "construct",
            &[
                "choose_alpha",
                "minimal_m_sequence",
                "floor_exp",
                "build_stream",
                "verify_good",
                "holder_check",
                "not2_positions",
            ],
        ),
    ];
    let all_operations = [
        "mobius_compose",
        "floor_exp",
        "rcf_digits",
        "bcf_digits",
        "rcf_convergents",
        "bcf_convergents",
        "rcf_to_bcf",
        "bcf_to_rcf",
        "mu_rcf_estimate",
        "mu_bcf_estimate",
        "good_hits",
        "apply_word",
        "fundamental_interval",
        "derivative_range",
        "distortion",
        "interval_diameter",
        "pressure_bounds",
        "dim_bounds",
        "induce_parabolic",
        "search_seed_words",
        "choose_alpha",
        "minimal_m_sequence",
        "build_stream",
        "verify_good",
        "holder_check",
        "not2_positions",
    ];
    let covered: std::collections::BTreeSet<&str> = dispatch
        .iter()
        .flat_map(|(_, ops)| ops.iter().copied())
        .collect();
    for op in all_operations {
        assert!(covered.contains(op), "operation {op} has no subcommand");
    }
}
