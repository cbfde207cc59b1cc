use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/tests/fixtures").join(name)
}

fn rlcert(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rlcert")).args(args).output().unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn check_accepts() {
    let out = rlcert(&["check", path(&fixture("ground.trs")), path(&fixture("ground-linear.json"))]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).starts_with("ACCEPT"));
}

#[test]
fn check_rejects_with_offending_terms() {
    let out = rlcert(&["check", path(&fixture("dup.trs")), path(&fixture("dup-conv.json"))]);
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    assert!(text.contains("fan-violation") && text.contains("g(a)"), "{text}");
}

#[test]
fn check_conditional_accept() {
    let dir = tempfile::tempdir().unwrap();
    let trs = dir.path().join("dup.trs");
    let cert = dir.path().join("cert.json");
    fs::write(&trs, "(VAR x)\n(RULES g(x) -> f(x,x))\n").unwrap();
    fs::write(
        &cert,
        r#"{"mode":"valley-rl","labels":[0],"relative_termination":"assumed","fan_bound":null,"peaks":[]}"#,
    )
    .unwrap();
    let out = rlcert(&["check", path(&trs), path(&cert)]);
    assert_eq!(out.status.code(), Some(3), "{}", stdout(&out));
}

#[test]
fn check_errors_on_bad_input() {
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("cert.json");
    fs::write(&cert, r#"{"mode":"linear-rl"}"#).unwrap();
    let out = rlcert(&["check", path(&fixture("ground.trs")), path(&cert)]);
    assert_eq!(out.status.code(), Some(2));
    let missing = dir.path().join("missing.trs");
    let out = rlcert(&["check", path(&missing), path(&cert)]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn cps_lists_peaks() {
    let out = rlcert(&["cps", path(&fixture("dup.trs"))]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 9);
    assert_eq!(text.lines().filter(|l| !l.ends_with("(trivial)")).count(), 4);
}

#[test]
fn prove_then_check() {
    let out = rlcert(&["prove", path(&fixture("ground.trs")), "--depth", "2", "--max-label", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("cert.json");
    fs::write(&cert, &out.stdout).unwrap();
    let out = rlcert(&["check", path(&fixture("ground.trs")), path(&cert)]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn prove_fails_on_non_confluent_system() {
    for mode in ["valley", "conv"] {
        let out = rlcert(&["prove", path(&fixture("dup.trs")), "--mode", mode]);
        assert_eq!(out.status.code(), Some(1));
        assert!(out.stdout.is_empty());
    }
}

#[test]
fn ars_check() {
    let out = rlcert(&["ars", "check", path(&fixture("layered.ars"))]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).ends_with("decreasing\n"));
    let dir = tempfile::tempdir().unwrap();
    let fork = dir.path().join("fork.ars");
    fs::write(&fork, "a 1 b\na 1 c\n").unwrap();
    let out = rlcert(&["ars", "check", path(&fork), "--maxlen", "2"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("FAIL"));
}
