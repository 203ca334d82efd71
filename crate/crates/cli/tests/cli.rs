use std::process::{Command, Output};

use sgo_core::{parse_diagram, GameRecord};

const FIXTURES: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/../core/tests/fixtures");

fn sgo(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sgo")).args(args).output().unwrap()
}

fn fixture(name: &str) -> String {
    format!("{FIXTURES}/{name}")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn replay_prints_final_fixture() {
    let out = sgo(&["replay", &fixture("race.sgo")]);
    assert!(out.status.success());
    let printed = parse_diagram(&stdout(&out)).unwrap();
    let expected = parse_diagram(&std::fs::read_to_string(fixture("race_resolved.txt")).unwrap()).unwrap();
    assert_eq!(printed, expected);
    assert!(!stdout(&out).contains("result"), "game is not over, so no score");
}

#[test]
fn replay_appends_score_when_game_ended() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("done.sgo");
    std::fs::write(&path, "sgo 1\nsize 3\n1. B B2 W pass\n2. B pass W pass\n").unwrap();
    let out = sgo(&["replay", path.to_str().unwrap()]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("# black territory 8 prisoners 0 total 8\n"), "{text}");
    assert!(text.ends_with("# result black\n"));
    assert!(parse_diagram(&text).is_ok(), "score lines are comments");
}

#[test]
fn score_reports_totals() {
    let out = sgo(&["score", &fixture("entangle.sgo")]);
    assert!(out.status.success());
    assert_eq!(
        stdout(&out),
        "black territory 37 prisoners 6 total 43\nwhite territory 0 prisoners 0 total 0\nresult black\n"
    );
}

#[test]
fn new_emits_parseable_record() {
    let out = sgo(&["new", "--size", "9"]);
    assert_eq!(stdout(&out), "sgo 1\nsize 9\n");
    let out = sgo(&["new", "--setup", &fixture("race_setup.txt")]);
    let record = GameRecord::parse(&stdout(&out)).unwrap();
    assert_eq!(record.setup.len(), 10);
}

#[test]
fn small_oracle_check_is_clean() {
    let out = sgo(&["oracle-check", "--size", "2", "--depth", "3"]);
    assert!(out.status.success());
    assert!(stdout(&out).ends_with(", 0 mismatches\n"));
    let out = sgo(&["oracle-check", "--size", "4", "--budget", "50", "--seed", "9"]);
    assert!(out.status.success());
}

#[test]
fn selfplay_is_reproducible() {
    let args = ["selfplay", "--size", "5", "--games", "20", "--seed", "3", "--paired"];
    let a = sgo(&args);
    let b = sgo(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    assert!(text.starts_with("game,length,winner,"));
    assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), 21);
    let other = sgo(&["selfplay", "--size", "5", "--games", "20", "--seed", "4", "--paired"]);
    assert_ne!(a.stdout, other.stdout);
}

#[test]
fn hotseat_reads_piped_moves() {
    let mut child = Command::new(env!("CARGO_BIN_EXE_sgo"))
        .args(["hotseat", "--size", "3"])
        .stdin(std::process::Stdio::piped())
        .stdout(std::process::Stdio::piped())
        .stderr(std::process::Stdio::piped())
        .spawn()
        .unwrap();
    use std::io::Write;
    child.stdin.take().unwrap().write_all(b"B2\nB2\nA1\nC3\npass\npass\n").unwrap();
    let out = child.wait_with_output().unwrap();
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("# red stone at B2\n"));
    assert!(text.contains("# result "));
    assert!(!text.contains("turn 1 Black"), "prompts go to stderr");
}

#[test]
fn failures_have_distinct_exit_codes() {
    let code = |args: &[&str]| sgo(args).status.code().unwrap();
    let dir = tempfile::tempdir().unwrap();
    let garbled = dir.path().join("garbled.sgo");
    std::fs::write(&garbled, "sgo 1\nsize 5\n1. B A1 W\n").unwrap();
    let illegal = dir.path().join("illegal.sgo");
    std::fs::write(&illegal, "sgo 1\nsize 5\n1. B A1 W B1\n2. B A1 W C1\n").unwrap();

    let codes = [
        code(&["frobnicate"]),
        code(&["selfplay", "--size", "99"]),
        code(&["replay", "/definitely/missing.sgo"]),
        code(&["replay", garbled.to_str().unwrap()]),
        code(&["replay", illegal.to_str().unwrap()]),
    ];
    assert_eq!(codes, [2, 3, 4, 5, 6]);
    let missing = sgo(&["replay", "missing.sgo"]);
    assert!(String::from_utf8_lossy(&missing.stderr).contains("missing.sgo"));
    assert_eq!(code(&["--help"]), 0);
}
