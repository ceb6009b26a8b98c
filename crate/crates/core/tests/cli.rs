//! End-to-end checks of the command-line contract: exit codes, formats, and
//! stream behavior, driving the real binary.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_intransitive"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn data(name: &str) -> String {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "data", name]
        .iter()
        .collect();
    path.to_str().unwrap().to_string()
}

fn stdout_str(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).unwrap()
}

fn stderr_str(output: &Output) -> String {
    String::from_utf8(output.stderr.clone()).unwrap()
}

#[test]
fn demo_exit_codes() {
    for name in [
        "efron",
        "losho-sticks",
        "condorcet-vote",
        "gears3",
        "levers",
        "pulleys",
        "towers",
        "combs",
        "birds",
    ] {
        let output = run(&["demo", name]);
        assert_eq!(
            output.status.code(),
            Some(0),
            "demo {name}: {}",
            stderr_str(&output)
        );
        assert!(
            stdout_str(&output).contains("confirmed: yes"),
            "demo {name}"
        );
    }
}

#[test]
fn chain_demo_length_boundary() {
    let output = run(&["demo", "gears-chain-n", "--n", "2"]);
    assert_eq!(output.status.code(), Some(2));
    assert!(
        stderr_str(&output).contains("chain needs n >= 3"),
        "{}",
        stderr_str(&output)
    );

    let output = run(&["demo", "gears-chain-n", "--n", "5"]);
    assert_eq!(output.status.code(), Some(0));
}

#[test]
fn unknown_demo_exits_two() {
    let output = run(&["demo", "sudoku"]);
    assert_eq!(output.status.code(), Some(2));
    assert!(stderr_str(&output).contains("unknown demo"));
}

#[test]
fn verify_efron_file() {
    let output = run(&["verify", &data("efron.json")]);
    assert_eq!(output.status.code(), Some(0), "{}", stderr_str(&output));
    let text = stdout_str(&output);
    assert!(text.contains("digest: sha256:"), "{text}");
    assert!(
        text.contains("cycle: blue -> yellow -> red -> green -> blue"),
        "{text}"
    );
}

#[test]
fn verify_lo_shu_file() {
    let output = run(&["verify", &data("lo_shu_sticks.json")]);
    assert_eq!(output.status.code(), Some(0));
    let text = stdout_str(&output);
    assert!(text.contains("counts=5:0:4"), "{text}");
}

#[test]
fn verify_condorcet_file() {
    let output = run(&["verify", &data("condorcet.json")]);
    assert_eq!(output.status.code(), Some(0));
    assert!(stdout_str(&output).contains("cycle: A -> B -> C -> A"));
}

#[test]
fn verify_gear_expectations() {
    let output = run(&["verify", &data("gears_triple_cycle.json")]);
    assert_eq!(output.status.code(), Some(0), "{}", stderr_str(&output));

    let output = run(&["verify", &data("gears_triple_jam.json")]);
    assert_eq!(output.status.code(), Some(0), "{}", stderr_str(&output));
    assert!(stdout_str(&output).contains("jam: mesh loop"));

    // a free-spinning pair fails its declared jam expectation
    let output = run(&["verify", &data("gears_pair_free.json")]);
    assert_eq!(output.status.code(), Some(1));
    assert!(stdout_str(&output).contains("confirmed: no"));
}

#[test]
fn verify_towers_file() {
    let output = run(&["verify", &data("towers.json")]);
    assert_eq!(output.status.code(), Some(0));
    let text = stdout_str(&output);
    assert!(text.contains("A marks B"), "{text}");
    assert!(text.contains("cycle: A -> B -> C -> A"), "{text}");
}

#[test]
fn verify_contract_errors_exit_two() {
    let output = run(&["verify", &data("single_die.json")]);
    assert_eq!(output.status.code(), Some(2));
    assert!(
        stderr_str(&output).contains("need at least 2"),
        "{}",
        stderr_str(&output)
    );

    let output = run(&["verify", "/nonexistent/nope.json"]);
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn verify_negative_exits_one() {
    let output = run(&["verify", &data("transitive_dice.json")]);
    assert_eq!(output.status.code(), Some(1));
    assert!(stdout_str(&output).contains("confirmed: no"));
}

#[test]
fn json_format_reports() {
    let output = run(&["verify", &data("efron.json"), "--format", "json"]);
    assert_eq!(output.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_str(&stdout_str(&output)).unwrap();
    assert_eq!(report["confirmed"], serde_json::json!(true));
    assert_eq!(report["exit_code"], serde_json::json!(0));
    assert!(report["input_digest"]
        .as_str()
        .unwrap()
        .starts_with("sha256:"));
    assert!(!report["pairs"].as_array().unwrap().is_empty());
}

#[test]
fn decimal_flag_marks_approximations() {
    let output = run(&["verify", &data("efron.json"), "--decimal"]);
    assert!(stdout_str(&output).contains("2/3 (~0.666667)"));

    let output = run(&["verify", &data("efron.json")]);
    assert!(!stdout_str(&output).contains('~'));
}

#[test]
fn search_dice_stream_is_deterministic_and_limited() {
    let base = [
        "search", "dice", "--sets", "3", "--faces", "3", "--min", "1", "--max", "5",
    ];
    let serial = run(&[&base[..], &["--jobs", "1"]].concat());
    let parallel = run(&[&base[..], &["--jobs", "7"]].concat());
    assert_eq!(serial.status.code(), Some(0), "{}", stderr_str(&serial));
    assert_eq!(
        serial.stdout, parallel.stdout,
        "streams must match across --jobs"
    );

    let full = stdout_str(&serial);
    let limited = run(&[&base[..], &["--limit", "1"]].concat());
    let limited = stdout_str(&limited);
    assert_eq!(limited.lines().count(), 1);
    assert_eq!(limited.lines().next(), full.lines().next());
}

#[test]
fn search_dice_empty_space_exits_one() {
    let output = run(&[
        "search", "dice", "--sets", "3", "--faces", "3", "--min", "5", "--max", "5",
    ]);
    assert_eq!(output.status.code(), Some(1));
    assert!(output.stdout.is_empty(), "no results may be streamed");
    assert!(stderr_str(&output).contains("emitted 0"));
}

#[test]
fn search_lane_triples_single_lane_exits_one() {
    let output = run(&["search", "lane-triples", "--lanes", "1"]);
    assert_eq!(output.status.code(), Some(1));
    assert!(output.stdout.is_empty());
}

#[test]
fn search_lane_triples_streams_hits() {
    let output = run(&["search", "lane-triples", "--lanes", "3", "--limit", "3"]);
    assert_eq!(output.status.code(), Some(0), "{}", stderr_str(&output));
    let text = stdout_str(&output);
    assert_eq!(text.lines().count(), 3);
    for line in text.lines() {
        let value: serde_json::Value = serde_json::from_str(line).unwrap();
        assert_eq!(value["kind"], serde_json::json!("lane_profile_set"));
        assert_eq!(value["cycle"], serde_json::json!(["A", "B", "C"]));
    }
}

#[test]
fn search_report_goes_to_stderr() {
    let output = run(&[
        "search", "dice", "--sets", "3", "--faces", "3", "--min", "1", "--max", "4", "--limit", "2",
    ]);
    let err = stderr_str(&output);
    assert!(err.contains("command: search dice"), "{err}");
    assert!(
        !err.contains("--jobs"),
        "report must not echo --jobs: {err}"
    );
    for line in stdout_str(&output).lines() {
        assert!(
            line.starts_with('{'),
            "stdout carries only JSON Lines: {line}"
        );
    }
}

#[test]
fn bad_usage_exits_two() {
    let output = run(&["search", "dice", "--sets"]);
    assert_eq!(
        output.status.code(),
        Some(2),
        "clap usage errors use exit 2"
    );

    let output = run(&["demo", "gears3", "--rx", "2"]);
    assert_eq!(output.status.code(), Some(2), "--rx without --ry");
    assert!(stderr_str(&output).contains("together"));

    let output = run(&["demo", "gears3", "--rx", "1", "--ry", "2"]);
    assert_eq!(output.status.code(), Some(2), "inverted radii");

    let output = run(&[
        "search",
        "lane-triples",
        "--lanes",
        "3",
        "--palette",
        "Sprocket:1-3",
    ]);
    assert_eq!(output.status.code(), Some(2));
    assert!(stderr_str(&output).contains("unknown lane kind"));
}

#[test]
fn rotation_flag_flips_fixtures() {
    let right = run(&["demo", "towers"]);
    assert!(stdout_str(&right).contains("cycle: A -> B -> C -> A"));

    let left = run(&["demo", "towers", "--rotation", "left"]);
    assert_eq!(left.status.code(), Some(0));
    assert!(
        stdout_str(&left).contains("cycle: A -> C -> B -> A"),
        "{}",
        stdout_str(&left)
    );
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let first = run(&["demo", "efron", "--format", "json"]);
    let second = run(&["demo", "efron", "--format", "json"]);
    assert_eq!(first.stdout, second.stdout);
}
