use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn tsynth(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tsynth")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn fixture(dir: &Path, name: &str, arg: Option<&str>) -> PathBuf {
    let path = dir.join(format!("{name}{}.json", arg.unwrap_or("")));
    let mut args = vec!["fixtures", name];
    args.extend(arg);
    args.extend(["-o", path.to_str().unwrap()]);
    assert_eq!(code(&tsynth(&args)), 0, "fixture {name}");
    path
}

#[test]
fn member_exit_codes() {
    let dir = TempDir::new().unwrap();
    let l = fixture(dir.path(), "example-L", None);
    let l = l.to_str().unwrap();
    let yes = tsynth(&["member", l, "(a,0)(a,2/5)(a,1)"]);
    assert_eq!(code(&yes), 0);
    assert_eq!(stdout(&yes).trim(), "accept");
    let empty = tsynth(&["member", l, ""]);
    assert_eq!(code(&empty), 1);
    assert_eq!(stdout(&empty).trim(), "reject");
    let bad = tsynth(&["member", l, "(a,1)(a,0)"]);
    assert_eq!(code(&bad), 2);
    assert!(!bad.stderr.is_empty());
}

#[test]
fn separate_points() {
    let dir = TempDir::new().unwrap();
    let a = fixture(dir.path(), "points-a", None);
    let b = fixture(dir.path(), "points-b", None);
    let out = dir.path().join("sep.json");
    let (a, b) = (a.to_str().unwrap(), b.to_str().unwrap());
    let yes = tsynth(&["separate", a, b, "-k", "1", "-m", "2", "-o", out.to_str().unwrap()]);
    assert_eq!(code(&yes), 0);
    assert!(stdout(&yes).starts_with("separable"));
    let sep = out.to_str().unwrap();
    assert_eq!(code(&tsynth(&["member", sep, "(a,1)"])), 0);
    assert_eq!(code(&tsynth(&["member", sep, "(a,2)"])), 1);
    let no = tsynth(&["separate", a, b, "-k", "0", "-m", "1"]);
    assert_eq!(code(&no), 1);
    assert_eq!(stdout(&no).trim(), "not-separable");
    let missing = dir.path().join("missing.json");
    assert_eq!(code(&tsynth(&["separate", a, missing.to_str().unwrap(), "-k", "1"])), 2);
}

#[test]
fn synth_deadline() {
    let dir = TempDir::new().unwrap();
    let g = fixture(dir.path(), "deadline", None);
    let g = g.to_str().unwrap();
    let out = dir.path().join("ctrl.json");
    let yes = tsynth(&["synth", g, "-k", "1", "-m", "1", "-o", out.to_str().unwrap()]);
    assert_eq!(code(&yes), 0);
    let sim = tsynth(&["simulate", out.to_str().unwrap(), "a@1/2 a@3/2"]);
    assert_eq!(code(&sim), 0);
    let lines: Vec<String> = stdout(&sim).lines().map(String::from).collect();
    assert_eq!(lines.len(), 3);
    assert!(lines[1].contains("-> b_bad"));
    assert!(lines[2].contains("-> b_ok"));
    let seeded = |seed: &str| stdout(&tsynth(&["simulate", out.to_str().unwrap(), "--seed", seed]));
    assert_eq!(seeded("4"), seeded("4"));
    assert_eq!(code(&tsynth(&["synth", g, "-k", "0", "-m", "1"])), 1);
    assert_eq!(code(&tsynth(&["synth", g, "-k", "1", "-m", "1", "--cap", "10"])), 3);
}

#[test]
fn fixtures_and_dot() {
    let dir = TempDir::new().unwrap();
    assert_eq!(code(&tsynth(&["fixtures", "nonsense"])), 2);
    assert_eq!(code(&tsynth(&["fixtures", "example-Lk"])), 2);
    let lk = tsynth(&["fixtures", "example-Lk", "2"]);
    assert_eq!(code(&lk), 0);
    assert!(stdout(&lk).contains("\"alphabet\""));
    let l = fixture(dir.path(), "example-L", None);
    let first = tsynth(&["dot", l.to_str().unwrap()]);
    let second = tsynth(&["dot", l.to_str().unwrap()]);
    assert_eq!(code(&first), 0);
    assert_eq!(first.stdout, second.stdout);
    let text = stdout(&first);
    assert!(text.starts_with("digraph"));
    assert_eq!(text.lines().filter(|l| l.contains("[label") && !l.contains("->")).count(), 3);
    assert_eq!(text.matches("->").count(), 4);
    let g = fixture(dir.path(), "deadline", None);
    assert!(stdout(&tsynth(&["dot", g.to_str().unwrap()])).starts_with("digraph \"game\""));
}
