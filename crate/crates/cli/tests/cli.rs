use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use qlct_core::signal::load;
use qlct_core::QSignal2D;

fn qlct(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qlct")).args(args).output().expect("spawn qlct")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn p(dir: &Path, name: &str) -> String {
    dir.join(name).to_string_lossy().into_owned()
}

fn generate(dir: &Path, name: &str, kind: &str, grid: &str, extra: &[&str]) -> String {
    let out = p(dir, name);
    let mut args = vec!["generate", kind, "--grid", grid, "-o", &out];
    args.extend_from_slice(extra);
    let o = qlct(&args);
    assert!(o.status.success(), "{}", stderr(&o));
    out
}

fn number_after(text: &str, key: &str) -> f64 {
    let rest = &text[text.find(key).unwrap_or_else(|| panic!("'{key}' not in {text}")) + key.len()..];
    rest.split_whitespace().next().unwrap().parse().unwrap()
}

#[test]
fn forward_smoke() {
    let d = tempfile::tempdir().unwrap();
    let f = generate(d.path(), "f.qsig", "random", "16x16", &["--seed", "3"]);
    let big = p(d.path(), "F.qsig");
    let o = qlct(&["forward", "--a1", "0,1,-1,0", "--a2", "0,1,-1,0", "-i", &f, "-o", &big, "--method", "fast", "--check"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let ratio = number_after(&stdout(&o), "plancherel ratio");
    assert!((ratio - 1.0).abs() < 1e-12);
    let s: QSignal2D<f64> = load(&big).unwrap();
    assert_eq!(s.grid().len(), 256);
}

#[test]
fn file_round_trip() {
    let d = tempfile::tempdir().unwrap();
    let f = generate(d.path(), "f.qsig", "chirp", "24x24", &[]);
    let (big, back) = (p(d.path(), "F.qsig"), p(d.path(), "b.qsig"));
    for method in ["fast", "direct"] {
        let m = ["--a1", "1,-2,0.5,0", "--a2", "2,0.5,-1,0.25", "--method", method];
        let o = qlct(&[&["forward", "-i", &f, "-o", &big][..], &m].concat());
        assert!(o.status.success(), "{}", stderr(&o));
        let o = qlct(&[&["inverse", "-i", &big, "-o", &back, "--reference", &f][..], &m].concat());
        assert!(o.status.success(), "{}", stderr(&o));
        assert!(number_after(&stdout(&o), "relative L2 error") <= 1e-8);
        // the grid inferred without --reference is the same
        let o = qlct(&[&["inverse", "-i", &big, "-o", &back][..], &m].concat());
        assert!(o.status.success(), "{}", stderr(&o));
        let a: QSignal2D<f64> = load(&back).unwrap();
        let b: QSignal2D<f64> = load(&f).unwrap();
        assert!(a.rel_l2_error(&b) <= 1e-8);
    }
}

#[test]
fn non_unimodular_is_a_usage_error() {
    let d = tempfile::tempdir().unwrap();
    let f = generate(d.path(), "f.qsig", "gaussian", "8x8", &[]);
    let o = qlct(&["forward", "--a1", "1,1,1,1", "-i", &f, "-o", &p(d.path(), "F.qsig")]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("det(A1) != 1"), "{}", stderr(&o));
    let o = qlct(&["forward", "--a2", "2,0,0,0.6", "-i", &f, "-o", &p(d.path(), "F.qsig")]);
    assert!(stderr(&o).contains("det(A2) != 1"));
    // within the command-line tolerance
    let o = qlct(&["forward", "--a1", "0,1,-1,0.0000000001", "-i", &f, "-o", &p(d.path(), "F.qsig")]);
    assert!(o.status.success(), "{}", stderr(&o));
}

#[test]
fn io_errors_exit_two() {
    let d = tempfile::tempdir().unwrap();
    let o = qlct(&["forward", "-i", &p(d.path(), "missing.qsig"), "-o", &p(d.path(), "F.qsig")]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).starts_with("qlct: read "));
    let junk = p(d.path(), "junk.qsig");
    fs::write(&junk, b"not a signal").unwrap();
    let o = qlct(&["forward", "-i", &junk, "-o", &p(d.path(), "F.qsig")]);
    assert_eq!(o.status.code(), Some(2));
    let o = qlct(&["forward", "-i", &junk, "-o", &junk]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).is_empty());
}

#[test]
fn gabor_analyze_and_synthesize() {
    let d = tempfile::tempdir().unwrap();
    let f = generate(d.path(), "f.qsig", "gaussian", "16x16", &[]);
    let dir = p(d.path(), "coeffs");
    let o = qlct(&["gabor", "analyze", "-i", &f, "-o", &dir, "--window", "gaussian:sigma=1.0,1.0", "--a1", "1,2,0.5,2"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let m: serde_json::Value = serde_json::from_slice(&fs::read(Path::new(&dir).join("manifest.json")).unwrap()).unwrap();
    assert_eq!(m["slices"].as_array().unwrap().len(), 256);
    let back = p(d.path(), "back.qsig");
    let o = qlct(&["gabor", "synthesize", "-i", &dir, "-o", &back, "--window", "gaussian:sigma=1.0,1.0", "--reference", &f]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(number_after(&stdout(&o), "relative L2 error") <= 1e-2);
}

#[test]
fn gabor_memory_budget() {
    let d = tempfile::tempdir().unwrap();
    let f = generate(d.path(), "f.qsig", "gaussian", "40x40", &[]);
    let dir = p(d.path(), "c");
    let o = qlct(&["gabor", "analyze", "-i", &f, "-o", &dir]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("--force"));
    let o = qlct(&["gabor", "analyze", "-i", &f, "-o", &dir, "--stride", "4"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("wrote 100 slices"));
}

#[test]
fn spectrogram_peaks_at_impulse() {
    let d = tempfile::tempdir().unwrap();
    let f = generate(d.path(), "f.qsig", "impulse", "8x8", &["--at", "5,2"]);
    // window peak on the grid sample just right of the origin
    let c = 0.5 * (std::f64::consts::TAU / 8.0).sqrt();
    let w = format!("gaussian:sigma=0.6,0.6,center={c},{c}");
    let dir = p(d.path(), "c");
    let o = qlct(&["gabor", "analyze", "-i", &f, "-o", &dir, "--window", &w]);
    assert!(o.status.success(), "{}", stderr(&o));
    let pgm = p(d.path(), "s.pgm");
    let o = qlct(&["gabor", "spectrogram", "-i", &dir, "-o", &pgm, "--slice", "max_over_omega"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("at cell (5, 2)"), "{}", stdout(&o));
    assert!(PathBuf::from(format!("{pgm}.json")).exists());
    let csv = p(d.path(), "s.csv");
    let o = qlct(&["gabor", "spectrogram", "-i", &dir, "-o", &csv, "--slice", "fix_y:5,2"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(fs::read_to_string(&csv).unwrap().lines().count(), 65);
}

#[test]
fn verify_young_hundred_trials() {
    let d = tempfile::tempdir().unwrap();
    let report = p(d.path(), "young.json");
    let o = qlct(&["verify", "young", "--trials", "100", "--seed", "7", "--grid", "16x16", "--report", &report, "--quiet"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v: Vec<serde_json::Value> = serde_json::from_slice(&fs::read(&report).unwrap()).unwrap();
    let seeded: Vec<_> = v.iter().filter(|r| !r["seed"].is_null()).collect();
    assert_eq!(seeded.len(), 200);
    for pp in [2.0, 4.0] {
        assert_eq!(seeded.iter().filter(|r| r["params"]["p"] == pp).count(), 100);
    }
    assert!(v.iter().all(|r| r["margin"].as_f64().unwrap() >= -1e-6));
    let csv = fs::read_to_string(d.path().join("young.csv")).unwrap();
    assert_eq!(csv.lines().count(), v.len() + 1);
}

#[test]
fn verify_heisenberg_prints_table() {
    let o = qlct(&["verify", "heisenberg", "--trials", "10", "--grid", "16x16"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.contains("PASS heisenberg am-gm identity over 10 random"));
    assert_eq!(out.lines().filter(|l| l.starts_with("INFO heisenberg: C_s") && l.contains("empirical")).count(), 15);
    assert!(out.contains("C_s spread across dilations"));
    assert!(stderr(&o).is_empty());
}

#[test]
fn verify_all_is_deterministic() {
    let d = tempfile::tempdir().unwrap();
    let (a, b) = (p(d.path(), "a.json"), p(d.path(), "b.json"));
    for r in [&a, &b] {
        let o = qlct(&["verify", "all", "--grid", "12x12", "--trials", "2", "--seed", "5", "--report", r, "--quiet"]);
        assert!(o.status.success(), "{}", stderr(&o));
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    assert_eq!(fs::read(d.path().join("a.csv")).unwrap(), fs::read(d.path().join("b.csv")).unwrap());
}

#[test]
fn verify_violation_exits_one_with_report() {
    // a nearly flat window on a tiny patch breaks the edge budget of the lemma
    let o = qlct(&["verify", "lemma-log", "--grid", "8x8", "--dx", "0.05", "--trials", "1"]);
    assert_eq!(o.status.code(), Some(1));
    let err = stderr(&o);
    assert!(err.contains("FAIL lemma-log"));
    assert!(err.contains("\"name\": \"lemma-log\""));
    assert!(stdout(&o).contains("FAIL lemma-log"));
}

#[test]
fn verify_rejects_unknown_suite() {
    let o = qlct(&["verify", "nope"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("unknown suite"));
}

#[test]
fn csv_round_trip() {
    let d = tempfile::tempdir().unwrap();
    let f = generate(d.path(), "f.qsig", "random", "6x5", &["--seed", "1"]);
    let csv = p(d.path(), "f.csv");
    let back = p(d.path(), "g.qsig");
    assert!(qlct(&["export-csv", "-i", &f, "-o", &csv]).status.success());
    let o = qlct(&["import-csv", "-i", &csv, "-o", &back]);
    assert!(o.status.success(), "{}", stderr(&o));
    let (a, b): (QSignal2D<f64>, QSignal2D<f64>) = (load(&f).unwrap(), load(&back).unwrap());
    assert_eq!(a, b);
}

#[test]
fn thread_count_from_environment() {
    let run = |v: &str| Command::new(env!("CARGO_BIN_EXE_qlct")).env("QLCT_THREADS", v).args(["verify", "plancherel", "--grid", "8x8", "--trials", "1", "--quiet"]).output().unwrap();
    assert!(run("1").status.success());
    let o = run("zero");
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("QLCT_THREADS"));
}
