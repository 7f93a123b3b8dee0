use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

fn fixture(name: &str) -> String {
    fixtures().join(format!("{name}.txt")).to_str().unwrap().to_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_strongstable"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn scratch(name: &str, text: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("strongstable-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

#[test]
fn goldens_match_byte_for_byte() {
    for f in ["f0", "f1", "f2", "f3", "f4", "f6"] {
        for cmd in ["solve", "pairs", "classes", "sequence", "rotations", "intermediate"] {
            let out = run(&[cmd, &fixture(f)]);
            let golden = std::fs::read(fixtures().join("golden").join(format!("{f}.{cmd}.out"))).unwrap();
            assert_eq!(out.stdout, golden, "{f} {cmd}");
            let want = if f == "f3" { 1 } else { 0 };
            assert_eq!(out.status.code(), Some(want), "{f} {cmd}");
        }
    }
}

#[test]
fn documented_examples() {
    let o = run(&["solve", &fixture("f3")]);
    assert_eq!(stdout(&o), "NONE\n");
    assert_eq!(o.status.code(), Some(1));

    let o = run(&["intermediate", &fixture("f6")]);
    assert_eq!(stdout(&o), "yes\n");
    assert_eq!(o.status.code(), Some(0));

    let o = run(&["solve", &fixture("f0")]);
    assert_eq!(stdout(&o), "");
    assert_eq!(o.status.code(), Some(0));

    let o = run(&["solve", &fixture("f2"), "--side", "women"]);
    assert_eq!(stdout(&o), "m1 w2\nm2 w1\n");
}

#[test]
fn check_reports_blocking_edges() {
    let good = scratch("good.txt", "m1 w1\nm2 w2\n");
    let o = run(&["check", &fixture("f2"), "--matching", good.to_str().unwrap()]);
    assert_eq!(stdout(&o), "");
    assert_eq!(o.status.code(), Some(0));

    let partial = scratch("partial.txt", "m1 w2\n");
    let o = run(&["check", &fixture("f2"), "--matching", partial.to_str().unwrap()]);
    assert_eq!(stdout(&o), "m1 w1\nm2 w1\n");
    assert_eq!(o.status.code(), Some(1));

    let clash = scratch("clash.txt", "m1 w1\nm2 w1\n");
    let o = run(&["check", &fixture("f2"), "--matching", clash.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn check_accepts_solve_output() {
    for seed in 0..25 {
        let inst = run(&["gen", "--men", "5", "--women", "4", "--density", "0.7", "--ties", "0.4", "--seed", &seed.to_string()]);
        let inst_path = scratch(&format!("gen{seed}.txt"), &stdout(&inst));
        let solved = run(&["solve", inst_path.to_str().unwrap()]);
        if solved.status.code() != Some(0) {
            assert_eq!(stdout(&solved), "NONE\n");
            continue;
        }
        let m_path = scratch(&format!("gen{seed}.m.txt"), &stdout(&solved));
        let o = run(&["check", inst_path.to_str().unwrap(), "--matching", m_path.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0), "seed {seed}");
        assert!(o.stdout.is_empty());
    }
}

#[test]
fn gen_is_deterministic() {
    let args = ["gen", "--men", "6", "--women", "6", "--density", "0.5", "--ties", "0.3", "--seed", "42"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.status.code(), Some(0));
    assert!(stdout(&a).starts_with("men: m1 m2 m3 m4 m5 m6\n"));

    let bad = run(&["gen", "--men", "2", "--women", "2", "--ties", "1.5"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn input_errors_exit_two() {
    let asym = scratch("asym.txt", "men: m1\nwomen: w1\nm1: w1\n");
    let o = run(&["solve", asym.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));

    assert_eq!(run(&["pairs", "/definitely/not/here"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn oracle_cap_exits_three() {
    let big = run(&["gen", "--men", "7", "--women", "7", "--density", "1", "--seed", "1"]);
    let path = scratch("big.txt", &stdout(&big));
    let o = run(&["oracle", path.to_str().unwrap(), "--cap", "50"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(o.stdout.is_empty());
}

#[test]
fn oracle_and_enumerate_outputs() {
    let o = run(&["oracle", &fixture("f2")]);
    assert_eq!(stdout(&o), "m1 w1\nm2 w2\n\nm1 w2\nm2 w1\n");
    let o = run(&["oracle", &fixture("f3")]);
    assert_eq!(stdout(&o), "NONE\n");
    assert_eq!(o.status.code(), Some(1));

    let o = run(&["enumerate", &fixture("f4"), "--expand", "--limit", "10"]);
    assert_eq!(stdout(&o), "class 0: m1=1 m2=1\n  m1 w1; m2 w2\n  m1 w2; m2 w1\n");
    let o = run(&["enumerate", &fixture("f6")]);
    assert_eq!(stdout(&o).lines().count(), 4);
    let o = run(&["enumerate", &fixture("f4"), "--expand", "--limit", "1"]);
    assert_eq!(stdout(&o).lines().count(), 2);
}

#[test]
fn outputs_are_deterministic() {
    let inst = run(&["gen", "--men", "6", "--women", "6", "--density", "0.9", "--ties", "0.3", "--seed", "3"]);
    let path = scratch("det.txt", &stdout(&inst));
    for cmd in ["solve", "pairs", "classes", "enumerate", "sequence", "rotations", "intermediate"] {
        let a = run(&[cmd, path.to_str().unwrap()]);
        let b = run(&[cmd, path.to_str().unwrap()]);
        assert_eq!(a.stdout, b.stdout, "{cmd}");
        assert_eq!(a.status.code(), b.status.code(), "{cmd}");
    }
}
