//! End-to-end checks of the binary: exit codes per failure class, artifact
//! routing, and the interactive oracle protocol.

use std::io::{BufRead, BufReader, Write};
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

use ggt::generators::DEFAULT_EDGE_CAP;
use ggt::traditional;
use ggt_cli::formats::{emit_hypergraph, parse_hypergraph, parse_tests};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_ggt"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("process exited without a code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

struct Workspace {
    dir: PathBuf,
}

impl Workspace {
    fn new(tag: &str) -> Self {
        let dir = std::env::temp_dir().join(format!("ggt-cli-{tag}-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        Workspace { dir }
    }

    fn file(&self, name: &str, content: &str) -> String {
        let path = self.dir.join(name);
        std::fs::write(&path, content).unwrap();
        path.to_str().unwrap().to_string()
    }

    fn path(&self, name: &str) -> String {
        self.dir.join(name).to_str().unwrap().to_string()
    }
}

impl Drop for Workspace {
    fn drop(&mut self) {
        std::fs::remove_dir_all(&self.dir).ok();
    }
}

#[test]
fn gen_writes_a_parseable_instance_to_stdout() {
    let out = run(&["gen", "traditional", "--n", "5", "--d", "2"]);
    assert_eq!(code(&out), 0);
    let h = parse_hypergraph(&stdout(&out)).unwrap();
    assert_eq!((h.n(), h.edge_count()), (5, 10));
    assert!(stderr(&out).contains("gen: traditional"));
}

#[test]
fn construct_routes_artifact_to_output_file() {
    let ws = Workspace::new("construct");
    let hg = ws.file("t.hg", &emit_hypergraph(&traditional(5, 2, DEFAULT_EDGE_CAP).unwrap()));
    let tests = ws.path("t.tests");

    let out = run(&["construct", &hg, "--seed", "3", "--output", &tests]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).is_empty(), "artifact went to the file, stdout stays clean");
    assert!(stderr(&out).contains("construct: k="));
    let family = parse_tests(&std::fs::read_to_string(&tests).unwrap()).unwrap();
    assert_eq!(family.n(), 5);

    let verify_out = run(&["verify", &hg, &tests]);
    assert_eq!(code(&verify_out), 0);
    assert_eq!(stdout(&verify_out), "valid\n");
}

#[test]
fn usage_errors_exit_2() {
    let out = run(&["gen", "mystery", "--n", "4"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("registered families"));

    let ws = Workspace::new("usage");
    let hg = ws.file("t.hg", &emit_hypergraph(&traditional(4, 2, DEFAULT_EDGE_CAP).unwrap()));
    let both = run(&["adaptive", &hg, "--oracle-edge", "0", "--interactive"]);
    assert_eq!(code(&both), 2);
    assert!(stderr(&both).contains("exactly one"));

    let range = run(&["adaptive", &hg, "--oracle-edge", "99"]);
    assert_eq!(code(&range), 2);

    // Missing subcommand and unknown flags go through clap, same code.
    let clap = bin().output().unwrap();
    assert_eq!(clap.status.code().unwrap(), 2);
}

#[test]
fn io_and_parse_errors_exit_3() {
    let missing = run(&["stats", "/nonexistent/never.hg"]);
    assert_eq!(code(&missing), 3);
    assert!(stderr(&missing).starts_with("error: "));

    let ws = Workspace::new("parse");
    let dup = ws.file("dup.hg", "2 2\n0\n0\n");
    let out = run(&["stats", &dup]);
    assert_eq!(code(&out), 3);
    assert!(stderr(&out).contains("duplicates"));
}

#[test]
fn validity_failures_exit_1() {
    let ws = Workspace::new("validity");
    let hg = ws.file("pair.hg", "2 2\n0\n1\n");
    let blank = ws.file("blank.tests", "1 2\n00\n");

    let verify_out = run(&["verify", &hg, &blank]);
    assert_eq!(code(&verify_out), 1);
    assert_eq!(stdout(&verify_out), "invalid 0 1\n");
    assert!(stderr(&verify_out).contains("warning: test 0 is empty"));

    let nomatch = run(&["decode", &hg, &blank, "1"]);
    assert_eq!(code(&nomatch), 1);

    let singles = ws.file("three.hg", "3 3\n0\n1\n2\n");
    let none = run(&["optimal", &singles, "--k-max", "1"]);
    assert_eq!(code(&none), 1);
    assert_eq!(stdout(&none), "none\n");

    let triangle = ws.file("k3.g", "3 3\n0 1\n1 2\n0 2\n");
    let monochrome = ws.file("mono.col", "0 0\n1 0\n2 1\n");
    let improper = run(&["tests-from-coloring", &triangle, &monochrome]);
    assert_eq!(code(&improper), 1);
    assert!(stderr(&improper).contains("one color on both endpoints"));
}

#[test]
fn reduce_requires_padding_for_other_edge_counts() {
    let ws = Workspace::new("reduce");
    let path = ws.file("c4.g", "4 4\n0 1\n1 2\n2 3\n3 0\n");

    let bare = run(&["reduce", &path]);
    assert_eq!(code(&bare), 2);
    assert!(stderr(&bare).contains("--pad"));

    let padded_graph = ws.path("c4-padded.g");
    let padded = run(&["reduce", &path, "--pad", "--graph-out", &padded_graph]);
    assert_eq!(code(&padded), 0);
    let h = parse_hypergraph(&stdout(&padded)).unwrap();
    assert_eq!(h.edge_count() % 3, 0);
    assert!(std::fs::read_to_string(&padded_graph).unwrap().starts_with("8 7\n"));
}

#[test]
fn interactive_adaptive_speaks_the_protocol() {
    let ws = Workspace::new("interactive");
    let h = traditional(5, 2, DEFAULT_EDGE_CAP).unwrap();
    let hg = ws.file("t.hg", &emit_hypergraph(&h));
    let hidden = 4;

    let mut child = bin()
        .args(["adaptive", &hg, "--interactive"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::null())
        .spawn()
        .unwrap();
    let mut to_child = child.stdin.take().unwrap();
    let from_child = BufReader::new(child.stdout.take().unwrap());

    let mut result: Option<usize> = None;
    for line in from_child.lines() {
        let line = line.unwrap();
        if let Some(ids) = line.strip_prefix("TEST") {
            let fired = ids
                .split_whitespace()
                .map(|t| t.parse::<usize>().unwrap())
                .any(|v| h.edges()[hidden].contains(v));
            writeln!(to_child, "{}", if fired { 1 } else { 0 }).unwrap();
            to_child.flush().unwrap();
        } else if let Some(index) = line.strip_prefix("RESULT ") {
            result = Some(index.parse().unwrap());
        }
    }
    assert_eq!(result, Some(hidden));
    assert!(child.wait().unwrap().success());
}

#[test]
fn garbled_interactive_answers_exit_3() {
    let ws = Workspace::new("garbled");
    let hg = ws.file("t.hg", &emit_hypergraph(&traditional(5, 2, DEFAULT_EDGE_CAP).unwrap()));

    let mut child = bin()
        .args(["adaptive", &hg, "--interactive"])
        .stdin(Stdio::piped())
        .stdout(Stdio::null())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(b"banana\n").unwrap();
    let out = child.wait_with_output().unwrap();
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8(out.stderr).unwrap().contains("expected 0 or 1"));
}

#[test]
fn bench_csv_lands_on_stdout_with_stable_header() {
    let out = run(&[
        "bench",
        "--instances",
        "adaptive-lb:2",
        "--methods",
        "optimal",
        "--seeds",
        "5",
    ]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "instance,method,seed,n,m,d,beta,info_lower_bound,required_k,k,attempts,adaptive_worst,adaptive_mean"
    );
    // required_k(3, 2, 1, 3.0) = ceil((2 ln 3 + 3) * 4e) = 57.
    assert_eq!(lines.next().unwrap(), "adaptive-lb:2,optimal,5,3,3,2,1,2,57,2,,,");
    assert!(lines.next().is_none());
}
