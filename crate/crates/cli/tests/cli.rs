//! End-to-end runs of the binary on the shipped data files.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use cantor_tm::fixtures::{example_shift, ExampleTable};
use cantor_tm::format::parse_cells;
use cantor_tm::BiSequence;

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cantor-tm")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn verify_incrementer() {
    let o = run(&["verify", data("incrementer.exp").to_str().unwrap()]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("mode=direct hit=3 native_steps=3 consistent=true"), "{out}");
}

#[test]
fn reader_mode_adds_latency() {
    let o = run(&["verify", data("incrementer-reader.exp").to_str().unwrap()]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("mode=reader hit=7 native_steps=3 consistent=true"));
}

#[test]
fn colliding_machine_has_a_witness() {
    let o = run(&["check-reversible", data("colliding.tm").to_str().unwrap()]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.starts_with("reversible=false "));
    assert!(out.contains("witness=\"q0: . 0 | q0: . 1\""), "{out}");
    let o = run(&["check-reversible", data("flipper.tm").to_str().unwrap()]);
    assert!(stdout(&o).starts_with("reversible=true"));
}

#[test]
fn example_render_matches_golden() {
    let dir = tempfile::tempdir().unwrap();
    let svg = dir.path().join("example.svg");
    let o = run(&["render", "--example", "consistent", "--svg", svg.to_str().unwrap()]);
    assert!(o.status.success());
    let golden = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden/example.svg");
    assert_eq!(std::fs::read(svg).unwrap(), std::fs::read(golden).unwrap());
}

#[test]
fn compile_then_simulate_matches_library() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("ex.shift");
    assert!(run(&["compile", "--example", "consistent", "-o", file.to_str().unwrap()]).status.success());
    let s = example_shift(ExampleTable::Consistent);
    let start = "1 0 . 1 1 0 1";
    let mut seq = BiSequence(parse_cells(start, |n| s.symbol_index(n)).unwrap());
    let mut expected = String::new();
    for i in 0..=12 {
        expected.push_str(&format!("{i}\t{}\n", seq.display(s.alphabet())));
        seq = s.apply(&seq);
    }
    for extra in [&[][..], &["--blockmap"][..]] {
        let mut args = vec!["simulate", file.to_str().unwrap(), "--input", start, "--steps", "12"];
        args.extend_from_slice(extra);
        let o = run(&args);
        assert!(o.status.success());
        assert_eq!(stdout(&o), expected, "{extra:?}");
    }
}

#[test]
fn usage_and_domain_errors() {
    let o = run(&["verify"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["budget", "--m", "1", "--nu", "0"]);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8(o.stderr).unwrap();
    assert_eq!(err.lines().count(), 1, "{err}");
    assert!(err.starts_with("error kind="));
    let o = run(&["verify", "missing.exp"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn outputs_are_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let mut results = Vec::new();
    for i in 0..2 {
        let trace = dir.path().join(format!("trace{i}.csv"));
        let svg = dir.path().join(format!("orbit{i}.svg"));
        let o = run(&[
            "--seed",
            "7",
            "verify",
            data("incrementer.exp").to_str().unwrap(),
            "--trace",
            trace.to_str().unwrap(),
            "--svg",
            svg.to_str().unwrap(),
        ]);
        assert!(o.status.success());
        let s = run(&["--seed", "7", "suspension", "--fixture", "angular", "--samples", "5", "--grid", "16"]);
        assert!(s.status.success());
        results.push((o.stdout, std::fs::read(trace).unwrap(), std::fs::read(svg).unwrap(), s.stdout));
    }
    assert_eq!(results[0], results[1]);
    assert!(results[0].1.starts_with(b"# radix: "));
}

#[test]
fn jobs_keep_input_order() {
    let files = ["incrementer.exp", "loop.exp", "incrementer-reader.exp", "incrementer.exp"];
    let paths: Vec<String> = files.iter().map(|f| data(f).to_str().unwrap().to_string()).collect();
    let mut serial = vec!["verify"];
    serial.extend(paths.iter().map(String::as_str));
    let mut parallel = vec!["--jobs", "3", "verify"];
    parallel.extend(paths.iter().map(String::as_str));
    let a = run(&serial);
    let b = run(&parallel);
    assert!(a.status.success() && b.status.success());
    assert_eq!(a.stdout, b.stdout);
    let modes: Vec<&str> = std::str::from_utf8(&a.stdout)
        .unwrap()
        .lines()
        .map(|l| l.split(' ').nth(1).unwrap())
        .collect();
    assert_eq!(modes, ["mode=direct", "mode=direct", "mode=reader", "mode=direct"]);
}

#[test]
fn budget_prints_steps() {
    let o = run(&["budget", "--m", "10", "--nu", "1"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("complete_steps=9"), "{}", stdout(&o));
}
