//! End-to-end checks of the `permind` binary: flags, output formats, wire
//! protocol and exit codes (0 ok, 2 usage, 3 inconsistent feedback, 4 bound
//! violation, 5 cap/budget).

use std::io::Write as _;
use std::process::{Command, Output, Stdio};

use permind::Transcript;

fn permind(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_permind"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn permind_with_stdin(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_permind"))
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
        .write_all(stdin.as_bytes())
        .unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).unwrap()
}

fn code(output: &Output) -> i32 {
    output.status.code().expect("no signal")
}

#[test]
fn solve_prints_a_solved_transcript() {
    let out = permind(&["solve", "--n", "4", "--secret", "2 1 4 3"]);
    assert_eq!(code(&out), 0);
    let t = Transcript::from_json(&stdout(&out)).unwrap();
    assert_eq!((t.version, t.n, t.k), (1, 4, 4));
    assert!(t.solved);
    assert_eq!(t.queries, 9);
    assert_eq!(t.entries.len(), 9);
    assert_eq!(t.secret.unwrap().as_slice(), &[2, 1, 4, 3]);
}

#[test]
fn solve_is_byte_identical_across_runs() {
    let args = ["solve", "--n", "6", "--k", "9", "--seed", "31"];
    let first = permind(&args);
    let second = permind(&args);
    assert_eq!(code(&first), 0);
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn solve_usage_errors_exit_two() {
    assert_eq!(code(&permind(&["solve", "--n", "4"])), 2);
    assert_eq!(code(&permind(&["solve", "--n", "4", "--secret", "1 2 3"])), 2);
    assert_eq!(code(&permind(&["solve", "--n", "4", "--secret", "1 2 3 3"])), 2);
    assert_eq!(code(&permind(&["solve", "--n", "4", "--k", "2", "--seed", "1"])), 2);
    assert_eq!(code(&permind(&["frobnicate"])), 2);
}

#[test]
fn solve_budget_exhaustion_exits_five() {
    let out = permind(&["solve", "--n", "4", "--secret", "2 1 4 3", "--budget", "3"]);
    assert_eq!(code(&out), 5);
    // The partial transcript is still emitted.
    let t = Transcript::from_json(&stdout(&out)).unwrap();
    assert!(!t.solved);
    assert_eq!(t.queries, 3);
}

#[test]
fn solve_trace_goes_to_stderr() {
    let out = permind(&["solve", "--n", "3", "--secret", "2 3 1", "--trace"]);
    assert_eq!(code(&out), 0);
    let err = String::from_utf8(out.stderr.clone()).unwrap();
    assert!(err.lines().next().unwrap().starts_with("Q1 1 2 3 -> "), "{err}");
    assert!(err.lines().all(|l| l.contains('[') && l.contains("->")), "{err}");
}

#[test]
fn verify_text_and_json_formats() {
    let out = permind(&["verify", "--n", "4"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("n=4 k=4: 24 secrets"), "{text}");
    assert!(text.contains("0 failures"), "{text}");

    let out = permind(&["verify", "--n", "3", "--k", "5", "--format", "json"]);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["secrets_tested"], 60);
    assert_eq!(v["bound_violations"], 0);
}

#[test]
fn verify_cap_exhaustion_exits_five() {
    let out = permind(&["verify", "--n", "9", "--cap", "100"]);
    assert_eq!(code(&out), 5);
}

#[test]
fn verify_budget_failures_exit_four() {
    let out = permind(&["verify", "--n", "4", "--budget", "2"]);
    assert_eq!(code(&out), 4);
}

#[test]
fn bench_emits_one_csv_row() {
    let out = permind(&["bench", "--n", "10", "--trials", "25", "--seed", "9"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "n,k,trials,min,mean,max,paper_bound,impl_bound,violations,fallbacks"
    );
    let row = lines.next().unwrap();
    assert!(row.starts_with("10,10,25,"), "{row}");
    assert_eq!(lines.next(), None);

    let again = permind(&["bench", "--n", "10", "--trials", "25", "--seed", "9"]);
    assert_eq!(out.stdout, again.stdout, "bench must be reproducible from the seed");
}

#[test]
fn count_round_trips_a_solved_transcript() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("game.json");
    let path = path.to_str().unwrap();
    let out = permind(&["solve", "--n", "5", "--secret", "3 1 5 2 4", "--output", path]);
    assert_eq!(code(&out), 0);

    let out = permind(&["count", "--input", path]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out).trim(), "1");

    let out = permind(&["count", "--input", path, "--cap", "10"]);
    assert_eq!(code(&out), 5);

    let out = permind(&["count", "--input", "/nonexistent/game.json"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn count_rejects_contradictory_transcripts() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("lies.json");
    let doctored = r#"{
      "version": 1, "n": 3, "k": 3,
      "entries": [
        {"seq": 1, "guess": [1, 2, 3], "black": 0},
        {"seq": 2, "guess": [1, 2, 3], "black": 1}
      ],
      "solved": false, "secret": null, "queries": 2
    }"#;
    std::fs::write(&path, doctored).unwrap();
    let out = permind(&["count", "--input", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out).trim(), "0");
}

#[test]
fn play_solves_against_scripted_answers() {
    // Honest answers for secret (2,3,1): the sweep answers 0,0 leave all
    // three open matches on the last family code, the first search probe
    // (2,1,3) scores 1, and its disambiguation guess is the secret itself.
    let out = permind_with_stdin(&["play", "--n", "3"], "0\n0\n1\n3\n");
    assert_eq!(code(&out), 0);
    assert_eq!(
        stdout(&out),
        "GUESS 1: 1 2 3\nGUESS 2: 3 1 2\nGUESS 3: 2 1 3\nGUESS 4: 2 3 1\nSECRET: 2 3 1\n"
    );
}

#[test]
fn play_detects_lying_codemaker() {
    let out = permind_with_stdin(&["play", "--n", "3"], "2\n2\n");
    assert_eq!(code(&out), 3);
    let text = stdout(&out);
    assert!(text.contains("ERROR: inconsistent feedback"), "{text}");
}

#[test]
fn play_rejects_garbage_answers() {
    let out = permind_with_stdin(&["play", "--n", "3"], "x\ny\nz\n");
    assert_eq!(code(&out), 2);
    assert!(stdout(&out).contains("ERROR:"));

    let out = permind_with_stdin(&["play", "--n", "3"], "7\n");
    assert_eq!(code(&out), 2);

    // Closing the stream mid-game is a usage failure, not a crash.
    let out = permind_with_stdin(&["play", "--n", "3"], "0\n");
    assert_eq!(code(&out), 2);
}

#[test]
fn play_writes_transcript_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("played.json");
    let path = path.to_str().unwrap();
    let out = permind_with_stdin(
        &["play", "--n", "3", "--output", path],
        "0\n0\n3\n",
    );
    assert_eq!(code(&out), 0);
    let t = Transcript::from_json(&std::fs::read_to_string(path).unwrap()).unwrap();
    assert!(t.solved);
    assert_eq!(t.queries, 3);
}

#[test]
fn experiment_formats_and_modes() {
    let out = permind(&["experiment", "--n", "4", "--depth", "1"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("worst factor 8/3"), "{}", stdout(&out));

    let out = permind(&["experiment", "--n", "4", "--depth", "2", "--format", "json"]);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["depth"], 2);
    assert_eq!(v["second_query"], "adaptive");
    assert_eq!(v["witness_answers"].as_array().unwrap().len(), 2);

    let out = permind(&["experiment", "--n", "4", "--depth", "2", "--second", "opening"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("witness second guess: 4 1 2 3"));

    assert_eq!(code(&permind(&["experiment", "--n", "4", "--depth", "3"])), 2);
    assert_eq!(
        code(&permind(&["experiment", "--n", "4", "--depth", "2", "--second", "psychic"])),
        2
    );
}
