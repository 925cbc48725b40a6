//! End-to-end checks of the `skolem` binary: exit codes, determinism of the
//! emitted artifacts, and the bench/defx report paths.

use std::path::Path;
use std::process::{Command, Output};

fn skolem(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_skolem"))
        .args(args)
        .output()
        .expect("binary runs")
}

const EX1: &str = "p cnf 6 4\na 1 2 0\ne 3 4 5 6 0\n1 2 3 0\n2 -3 4 0\n5 6 0\n-5 -6 0\n";

#[test]
fn synth_verify_roundtrip() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("ex1.qdimacs");
    let aag = dir.path().join("ex1.aag");
    std::fs::write(&spec, EX1).unwrap();
    let out = skolem(&["synth", spec.to_str().unwrap(), "-o", aag.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let out = skolem(&["verify", spec.to_str().unwrap(), aag.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    assert!(String::from_utf8_lossy(&out.stdout).contains("valid"));
}

#[test]
fn verify_rejects_corrupted_vector() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("ex1.qdimacs");
    let aag = dir.path().join("bad.aag");
    std::fs::write(&spec, EX1).unwrap();
    // constants that cannot satisfy (y3 ∨ y4) ∧ (¬y3 ∨ ¬y4): y3 = y4 = 0
    std::fs::write(&aag, "aag 2 2 0 4 0\n2\n4\n1\n1\n0\n0\n").unwrap();
    let out = skolem(&["verify", spec.to_str().unwrap(), aag.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1), "{out:?}");
    assert!(String::from_utf8_lossy(&out.stdout).contains("invalid"));
}

#[test]
fn unknown_flag_is_a_usage_error() {
    let out = skolem(&["synth", "--definitely-not-a-flag"]);
    assert_eq!(out.status.code(), Some(2));
    let out = skolem(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn missing_input_file_is_a_usage_error() {
    let out = skolem(&["synth", "/nonexistent/path.qdimacs"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn identical_runs_produce_identical_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("ex1.qdimacs");
    std::fs::write(&spec, EX1).unwrap();
    let run = |tag: &str| {
        let aag = dir.path().join(format!("{tag}.aag"));
        let stats = dir.path().join(format!("{tag}.json"));
        let out = skolem(&[
            "synth",
            spec.to_str().unwrap(),
            "-o",
            aag.to_str().unwrap(),
            "--stats",
            stats.to_str().unwrap(),
            "--seed",
            "42",
        ]);
        assert_eq!(out.status.code(), Some(0), "{out:?}");
        (
            std::fs::read(&aag).unwrap(),
            std::fs::read_to_string(&stats).unwrap(),
        )
    };
    let (aag1, stats1) = run("a");
    let (aag2, stats2) = run("b");
    assert_eq!(aag1, aag2, "AAG bytes must be identical for a fixed seed");
    let counts = |s: &str| {
        let v: serde_json::Value = serde_json::from_str(s).unwrap();
        (
            v["unates"].clone(),
            v["unique"].clone(),
            v["learned"].clone(),
            v["repaired"].clone(),
            v["self_substituted"].clone(),
            v["repair_rounds"].clone(),
        )
    };
    assert_eq!(counts(&stats1), counts(&stats2));
}

#[test]
fn seed_env_fallback_is_used() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("ex1.qdimacs");
    std::fs::write(&spec, EX1).unwrap();
    let aag_env = dir.path().join("env.aag");
    let out = Command::new(env!("CARGO_BIN_EXE_skolem"))
        .args(["synth", spec.to_str().unwrap(), "-o", aag_env.to_str().unwrap()])
        .env("SKOLEM_SEED", "42")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let aag_flag = dir.path().join("flag.aag");
    let out = skolem(&[
        "synth",
        spec.to_str().unwrap(),
        "-o",
        aag_flag.to_str().unwrap(),
        "--seed",
        "42",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        std::fs::read(&aag_env).unwrap(),
        std::fs::read(&aag_flag).unwrap()
    );
}

fn write_bench_dir(dir: &Path) {
    std::fs::write(dir.join("one.qdimacs"), EX1).unwrap();
    std::fs::write(
        dir.join("two.qdimacs"),
        "p cnf 2 1\na 1 0\ne 2 0\n1 2 0\n",
    )
    .unwrap();
    std::fs::write(dir.join("broken.qdimacs"), "p cnf 1 2\n1 0\n").unwrap();
    std::fs::write(dir.join("ignored.txt"), "not a benchmark").unwrap();
}

#[test]
fn bench_reports_csv_and_par2() {
    let dir = tempfile::tempdir().unwrap();
    write_bench_dir(dir.path());
    let csv = dir.path().join("report.csv");
    let out = skolem(&[
        "bench",
        dir.path().to_str().unwrap(),
        "--csv",
        csv.to_str().unwrap(),
        "--timeout",
        "60",
    ]);
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("PAR-2:"), "{stdout}");
    let report = std::fs::read_to_string(&csv).unwrap();
    let lines: Vec<&str> = report.lines().collect();
    assert_eq!(lines[0], "instance,status,time_s,unates,unique,learned,repaired,self_substituted");
    assert_eq!(lines.len(), 4, "{report}");
    assert!(report.contains("broken.qdimacs,error"));
    assert!(String::from_utf8_lossy(&out.stderr).contains("broken.qdimacs"));
}

#[test]
fn bench_empty_dir_is_ok() {
    let dir = tempfile::tempdir().unwrap();
    let out = skolem(&["bench", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("PAR-2: n/a"));
}

#[test]
fn defx_reports_definability_per_output() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("ex1.qdimacs");
    std::fs::write(&spec, EX1).unwrap();
    let out = skolem(&["defx", spec.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.starts_with("variable,name,status,definition_clauses"), "{text}");
    assert!(text.contains("6,y4,unique,"), "{text}");
    // three outputs stay open for learning
    assert_eq!(text.matches(",empty,0").count(), 3, "{text}");
}

#[test]
fn ablation_flags_run_to_completion() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("ex1.qdimacs");
    std::fs::write(&spec, EX1).unwrap();
    for extra in [
        vec!["--lex", "off"],
        vec!["--cluster", "random"],
        vec!["--k", "2", "--s", "8"],
    ] {
        let aag = dir.path().join("out.aag");
        let mut args = vec!["synth", spec.to_str().unwrap(), "-o", aag.to_str().unwrap()];
        args.extend(extra.iter().copied());
        let out = skolem(&args);
        assert_eq!(out.status.code(), Some(0), "{args:?}: {out:?}");
        let v = skolem(&["verify", spec.to_str().unwrap(), aag.to_str().unwrap()]);
        assert_eq!(v.status.code(), Some(0));
    }
}

#[test]
fn trace_and_dumps_are_written() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("ex1.qdimacs");
    std::fs::write(&spec, EX1).unwrap();
    let trace = dir.path().join("trace.jsonl");
    let samples = dir.path().join("samples.csv");
    let trees = dir.path().join("trees.dot");
    let funcs = dir.path().join("funcs.txt");
    let out = skolem(&[
        "synth",
        spec.to_str().unwrap(),
        "--trace",
        trace.to_str().unwrap(),
        "--dump-samples",
        samples.to_str().unwrap(),
        "--dump-trees",
        trees.to_str().unwrap(),
        "--dump-funcs",
        funcs.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let csv = std::fs::read_to_string(&samples).unwrap();
    assert!(csv.starts_with("x1,x2,y1,y2,y3,y4"), "{csv}");
    assert!(std::fs::read_to_string(&trees).unwrap().contains("digraph"));
    let funcs_text = std::fs::read_to_string(&funcs).unwrap();
    assert!(funcs_text.contains("y4 = "), "{funcs_text}");
}

#[test]
fn expired_timeout_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("ex1.qdimacs");
    std::fs::write(&spec, EX1).unwrap();
    let out = skolem(&["synth", spec.to_str().unwrap(), "--timeout", "0"]);
    assert_eq!(out.status.code(), Some(3), "{out:?}");
}

#[test]
fn verify_can_dump_learned_clauses() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("ex1.qdimacs");
    let aag = dir.path().join("ex1.aag");
    let drat = dir.path().join("proof.drat");
    std::fs::write(&spec, EX1).unwrap();
    let out = skolem(&["synth", spec.to_str().unwrap(), "-o", aag.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let out = skolem(&[
        "verify",
        spec.to_str().unwrap(),
        aag.to_str().unwrap(),
        "--dump-drat",
        drat.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&drat).unwrap();
    for line in text.lines() {
        assert!(line.ends_with(" 0"), "clause line `{line}`");
    }
}
