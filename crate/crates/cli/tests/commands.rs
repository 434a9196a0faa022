use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn amforge(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_amforge"))
        .args(args)
        .output()
        .expect("spawn amforge")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn path(dir: &TempDir, name: &str) -> String {
    dir.path().join(name).to_str().unwrap().to_owned()
}

fn sample(dir: &TempDir, count: &str, seed: &str) -> String {
    let out = path(dir, "circuits.jsonl");
    let o = amforge(&["sample", "--devices", "3-5", "--count", count, "--seed", seed, "--with-spec", "--out", &out]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    out
}

#[test]
fn roundtrip_reports_exact_count() {
    let o = amforge(&["roundtrip", "--formulation", "sfci", "--count", "1000", "--seed", "7"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("1000/1000 round-trips exact"));
}

#[test]
fn encode_then_decode_restores_designs() {
    let dir = TempDir::new().unwrap();
    let circuits = sample(&dir, "40", "3");
    for f in ["cf", "pm", "fm", "sfm", "sfci", "sfci-nct", "sfci-ndp"] {
        let ds = path(&dir, &format!("{f}.jsonl"));
        let back = path(&dir, &format!("{f}.back.jsonl"));
        assert!(amforge(&["encode", "--formulation", f, "--in", &circuits, "--out", &ds]).status.success());
        let o = amforge(&["decode", "--formulation", f, "--in", &ds, "--out", &back]);
        assert!(o.status.success(), "{f}: {}", String::from_utf8_lossy(&o.stderr));
        assert_eq!(fs::read_to_string(&circuits).unwrap(), fs::read_to_string(&back).unwrap(), "{f}");
    }
}

#[test]
fn decode_failures_exit_one() {
    let dir = TempDir::new().unwrap();
    let circuits = sample(&dir, "5", "4");
    let ds = path(&dir, "ds.jsonl");
    assert!(amforge(&["encode", "--formulation", "sfci", "--in", &circuits, "--out", &ds]).status.success());
    let broken = fs::read_to_string(&ds).unwrap().replacen("<VIN>", "<VDD>", 1);
    fs::write(&ds, broken).unwrap();
    let o = amforge(&["decode", "--in", &ds, "--out", &path(&dir, "back.jsonl")]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn invalid_designs_fail_validation() {
    let dir = TempDir::new().unwrap();
    let file = path(&dir, "bad.jsonl");
    // The inductor is missing from every net.
    let line = r#"{"vertices":["VIN","VOUT","GND","Sa","L"],"edges":[[["VIN",0,1],["Sa",0,1]],[["VOUT",0,1],["Sa",0,2],["GND",0,1]]],"duty":0.5}"#;
    fs::write(&file, format!("{line}\n")).unwrap();
    let o = amforge(&["validate", "--in", &file]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("0/1 valid"));
}

#[test]
fn eval_prints_ten_rates_and_mse() {
    let dir = TempDir::new().unwrap();
    let results = path(&dir, "res.jsonl");
    fs::write(
        &results,
        concat!(
            r#"{"target":{"ratio":0.5,"eff":0.9},"outcome":{"ratio":0.52,"eff":0.9}}"#,
            "\n",
            r#"{"target":{"ratio":0.5,"eff":0.9},"outcome":"invalid"}"#,
            "\n"
        ),
    )
    .unwrap();
    let o = amforge(&["eval", "--results", &results, "--tolerances", "0.01:0.1:0.01"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let rates: Vec<&str> = text.lines().skip(1).take_while(|l| !l.starts_with("mse")).collect();
    assert_eq!(rates.len(), 10);
    assert!(rates[0].ends_with("0.000000"), "{}", rates[0]);
    assert!(rates[1].ends_with("0.500000"), "{}", rates[1]);
    assert!(text.contains("mse_ratio\t0.500200"));
    assert!(text.contains("mse_eff\t0.500000"));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(amforge(&["roundtrip", "--formulation", "xyz"]).status.code(), Some(2));
    assert_eq!(amforge(&["sample", "--no-such-flag"]).status.code(), Some(2));
    assert_eq!(amforge(&["eval", "--results", "x", "--tolerances", "0.1:0.01:0.01"]).status.code(), Some(2));
    assert_eq!(amforge(&[]).status.code(), Some(2));
}

#[test]
fn missing_input_exits_one() {
    let o = amforge(&["validate", "--in", "/nonexistent/circuits.jsonl"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn stats_ignore_worker_count() {
    let dir = TempDir::new().unwrap();
    let circuits = sample(&dir, "60", "5");
    let one = amforge(&["stats", "--in", &circuits, "--workers", "1"]);
    let many = amforge(&["stats", "--in", &circuits, "--workers", "8"]);
    assert!(one.status.success());
    assert_eq!(one.stdout, many.stdout);
    let ds = path(&dir, "ds.jsonl");
    let a = amforge(&["encode", "--formulation", "pm", "--in", &circuits, "--out", &ds, "--workers", "1"]);
    assert!(a.status.success());
    let first = fs::read(&ds).unwrap();
    assert!(amforge(&["encode", "--formulation", "pm", "--in", &circuits, "--out", &ds, "--workers", "6"]).status.success());
    assert_eq!(first, fs::read(&ds).unwrap());
}

#[test]
fn sampling_is_seeded() {
    let dir = TempDir::new().unwrap();
    let a = fs::read(sample(&dir, "20", "11")).unwrap();
    let b = fs::read(sample(&dir, "20", "11")).unwrap();
    assert_eq!(a, b);
    let c = fs::read(sample(&dir, "20", "12")).unwrap();
    assert_ne!(a, c);
}

#[test]
fn canon_dedup_counts_classes() {
    let dir = TempDir::new().unwrap();
    let circuits = sample(&dir, "10", "6");
    // Duplicating the file doubles every class.
    let text = fs::read_to_string(&circuits).unwrap();
    fs::write(&circuits, format!("{text}{text}")).unwrap();
    let o = amforge(&["canon", "--in", &circuits, "--dedup"]);
    assert!(o.status.success());
    let lines: Vec<String> = stdout(&o).lines().map(str::to_owned).collect();
    assert_eq!(lines.len(), 10);
    assert!(lines.iter().all(|l| l.ends_with("\t2") && l.split('\t').next().unwrap().len() == 64));
}

#[test]
fn specs_fall_back_to_table_then_placeholder() {
    let dir = TempDir::new().unwrap();
    let circuits = path(&dir, "c.jsonl");
    let o = amforge(&["sample", "--devices", "4", "--count", "3", "--seed", "2", "--out", &circuits]);
    assert!(o.status.success());

    let ds = path(&dir, "ds.jsonl");
    let o = amforge(&["encode", "--formulation", "sfci", "--in", &circuits, "--out", &ds]);
    assert!(o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("warning: 3 design(s)"));

    let keys = stdout(&amforge(&["canon", "--in", &circuits]));
    let mut csv = String::from("key,duty,ratio,eff\n");
    for key in keys.lines() {
        for duty in ["0.1", "0.3", "0.5", "0.7", "0.9"] {
            csv.push_str(&format!("{key},{duty},0.25,0.75\n"));
        }
    }
    let perf = path(&dir, "perf.csv");
    fs::write(&perf, csv).unwrap();
    let o = amforge(&["encode", "--formulation", "sfci", "--in", &circuits, "--out", &ds, "--perf", &perf]);
    assert!(o.status.success());
    assert!(!String::from_utf8_lossy(&o.stderr).contains("warning"));
    let text = fs::read_to_string(&ds).unwrap();
    assert_eq!(text.matches(r#""spec":{"ratio":0.25,"eff":0.75}"#).count(), 3);

    let results = path(&dir, "res.jsonl");
    let o = amforge(&["mock", "--in", &ds, "--mode", "echo", "--perf", &perf, "--out", &results]);
    assert!(o.status.success());
    let eval = stdout(&amforge(&["eval", "--results", &results]));
    assert!(eval.contains("0.0100\t1.000000"), "{eval}");
    assert!(Path::new(&results).exists());
}
