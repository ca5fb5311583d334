use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use benford_forensics::datagen::{generate, GeneratorSpec};
use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_benford"))
}

fn fixture() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures/heads_of_state.csv")
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn ok_json(args: &[&str]) -> Value {
    let out = run(args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn write_generic(dir: &Path, name: &str, values: &[f64]) -> String {
    let path = dir.join(name);
    let mut text = String::from("count\n");
    for v in values {
        text.push_str(&format!("{v}\n"));
    }
    std::fs::write(&path, text).unwrap();
    path.display().to_string()
}

fn write_paired(dir: &Path, name: &str, a1: &[u64], a2: &[u64]) -> String {
    let path = dir.join(name);
    let mut text = String::from("country,head_name,title,count_a1,count_a2,collected_at\n");
    for (i, (x, y)) in a1.iter().zip(a2).enumerate() {
        text.push_str(&format!("C{i},H{i},president,{x},{y},2016-03-01T08:00:00Z\n"));
    }
    std::fs::write(&path, text).unwrap();
    path.display().to_string()
}

fn log_uniform_file(dir: &Path, n: usize) -> String {
    let sample = generate(&GeneratorSpec::log_uniform(0.0, 6.0, n, 42)).unwrap();
    write_generic(dir, &format!("lu{n}.csv"), &sample)
}

#[test]
fn analyze_fixture_structure() {
    let f = fixture();
    let r = ok_json(&["analyze", f.to_str().unwrap(), "--column", "count_a1", "--digits", "1,2", "--alpha", "0.05"]);
    assert_eq!(r["column"], "count_a1");
    assert_eq!(r["positions"].as_array().unwrap().len(), 2);
    assert_eq!(r["descriptive"]["n"], 169);
    assert_eq!(r["descriptive"]["max"], 93_500_000.0);
    assert_eq!(r["descriptive"]["mode"], 148_000.0);
    assert!(r["tool_version"].as_str().unwrap().starts_with("benford "));
    for block in r["positions"].as_array().unwrap() {
        let sum: f64 = block["observed"].as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).sum();
        assert!((sum - 1.0).abs() < 1e-8);
    }
}

#[test]
fn analyze_log_uniform_sample_conforms() {
    let dir = tempfile::tempdir().unwrap();
    let file = log_uniform_file(dir.path(), 10_000);
    let r = ok_json(&["analyze", &file, "--column", "generic", "--digits", "1"]);
    assert_eq!(r["positions"][0]["conclusion"], "conforms");
    assert!((r["positions"][0]["chi_square"]["statistic"].as_f64().unwrap() - 11.5435626).abs() < 1e-6);
}

#[test]
fn analyze_all_zero_column_fails_with_data_error() {
    let dir = tempfile::tempdir().unwrap();
    let file = write_paired(dir.path(), "zeros.csv", &[0, 0, 0], &[0, 0, 0]);
    let out = run(&["analyze", &file, "--digits", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("no included values"));
}

#[test]
fn compare_identical_columns_gives_identical_blocks() {
    let dir = tempfile::tempdir().unwrap();
    let counts: Vec<u64> = (1..=300u64).map(|i| i * i * 37 + 5).collect();
    let file = write_paired(dir.path(), "same.csv", &counts, &counts);
    let r = ok_json(&["compare", &file]);
    assert_eq!(r["count_a1"], r["count_a2"]);
    assert_eq!(r["count_a1"]["positions"].as_array().unwrap().len(), 2);
}

#[test]
fn compare_synthetic_pair_mirrors_the_headline() {
    let dir = tempfile::tempdir().unwrap();
    let n = 10_000;
    let a1: Vec<u64> = generate(&GeneratorSpec::uniform_integer(1, 999_999, n, 42))
        .unwrap()
        .into_iter()
        .map(|x| x as u64)
        .collect();
    let a2: Vec<u64> = generate(&GeneratorSpec::log_uniform(3.0, 9.0, n, 42))
        .unwrap()
        .into_iter()
        .map(|x| x.round() as u64)
        .collect();
    let file = write_paired(dir.path(), "pair.csv", &a1, &a2);
    let r = ok_json(&["compare", &file]);
    assert_eq!(r["count_a1"]["positions"][0]["conclusion"], "deviates");
    assert_eq!(r["count_a2"]["positions"][0]["conclusion"], "conforms");
    assert_eq!(r["n_records"], n);
}

#[test]
fn compare_discloses_the_zero_exclusion() {
    let f = fixture();
    let r = ok_json(&["compare", f.to_str().unwrap()]);
    let block = &r["count_a2"]["positions"][0];
    assert_eq!(block["n_included"], 168);
    assert_eq!(block["exclusions"]["zero_value"], 1);
    assert!(r["coefficient_of_variation"]["count_a1"].is_number());
}

#[test]
fn trim_sweep_defaults_on_fixture() {
    let f = fixture();
    let r = ok_json(&["trim-sweep", f.to_str().unwrap()]);
    let rows = r["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 6);
    let top5 = rows.iter().find(|row| row["end"] == "top" && row["fraction"] == 0.05).unwrap();
    assert_eq!(top5["removed_count"], 9);
    assert_eq!(top5["kept_count"], 160);
    let bottom5 = rows.iter().find(|row| row["end"] == "bottom" && row["fraction"] == 0.05).unwrap();
    let mut removed: Vec<u64> = bottom5["removed_values"].as_array().unwrap().iter().map(|v| v.as_u64().unwrap()).collect();
    removed.sort_unstable();
    assert_eq!(removed, [223, 1540, 2110, 2450, 4980, 13500, 14100, 15100, 15900]);
}

#[test]
fn trim_sweep_zero_fraction_matches_baseline() {
    let f = fixture();
    let r = ok_json(&["trim-sweep", f.to_str().unwrap(), "--fractions", "0", "--ends", "top,bottom,both"]);
    for row in r["rows"].as_array().unwrap() {
        assert_eq!(row["removed_count"], 0);
        assert_eq!(row["result"], r["baseline"]);
    }
}

#[test]
fn trim_sweep_on_paper_sized_conformant_sample() {
    let dir = tempfile::tempdir().unwrap();
    let file = log_uniform_file(dir.path(), 169);
    let r = ok_json(&["trim-sweep", &file, "--column", "generic"]);
    assert_eq!(r["baseline"]["conclusion"], "conforms");
    for row in r["rows"].as_array().unwrap() {
        assert_eq!(row["result"]["conclusion"], "conforms");
    }
}

#[test]
fn trim_sweep_rejects_half_fraction() {
    let f = fixture();
    let out = run(&["trim-sweep", f.to_str().unwrap(), "--fractions", "0.5"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn gen_geometric_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["gen", "--family", "geometric", "--base", "2", "--length", "10"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 11);
    assert_eq!((lines[0], lines[1], lines[10]), ("count", "2", "1024"));

    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for p in [&a, &b] {
        let out = run(&["gen", "--family", "loguniform", "--n", "10000", "--seed", "42", "--out", p.to_str().unwrap()]);
        assert!(out.status.success());
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn gen_rejects_zero_rate() {
    let out = run(&["gen", "--family", "exponential", "--rate", "0"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!out.status.success());
}

#[test]
fn plot_data_rows() {
    let f = fixture();
    let out = run(&["plot-data", f.to_str().unwrap(), "--digit", "1"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 9);
    assert!(rows[0].starts_with("1,0.301030,"));

    let out = run(&["plot-data", f.to_str().unwrap(), "--digit", "2"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let expected: Vec<f64> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    assert_eq!(expected.len(), 10);
    assert!((expected.iter().sum::<f64>() - 1.0).abs() < 1e-5);
}

#[test]
fn plot_data_matches_analyze_for_log_uniform_sample() {
    let dir = tempfile::tempdir().unwrap();
    let file = log_uniform_file(dir.path(), 10_000);
    let out = run(&["plot-data", &file, "--column", "generic", "--digit", "1"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let report = ok_json(&["analyze", &file, "--column", "generic", "--digits", "1"]);
    let block = &report["positions"][0];
    for (i, line) in text.lines().skip(1).enumerate() {
        let cols: Vec<f64> = line.split(',').map(|c| c.parse().unwrap()).collect();
        let expected = block["expected"][i].as_f64().unwrap();
        let observed = block["observed"][i].as_f64().unwrap();
        assert!((cols[1] - expected).abs() <= 5e-7);
        assert!((cols[2] - observed).abs() <= 5e-7);
        assert!((cols[2] - cols[1]).abs() < 0.02);
    }
}

#[test]
fn thousands_separators_flag() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("spaced.csv");
    std::fs::write(
        &path,
        "country,head_name,title,count_a1,count_a2,collected_at\n\
         United States,Barack Obama,president,93 500 000,\"52,400\",2016-03-01T08:00:00Z\n\
         Nepal,Ram Baran Yadav,president,312000,4120,2016-03-01T08:05:00Z\n",
    )
    .unwrap();
    let p = path.to_str().unwrap();
    let out = run(&["analyze", p, "--digits", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("row 2"));
    let r = ok_json(&["analyze", p, "--digits", "1", "--thousands-separators"]);
    assert_eq!(r["descriptive"]["max"], 93_500_000.0);
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(run(&["analyze", "/nonexistent/data.csv"]).status.code(), Some(2));
    let f = fixture();
    assert_eq!(run(&["analyze", f.to_str().unwrap(), "--alpha", "1.5"]).status.code(), Some(1));
    assert_eq!(run(&["analyze", f.to_str().unwrap(), "--digits", "0"]).status.code(), Some(1));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn json_output_to_file_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let f = fixture();
    let paths: Vec<PathBuf> = (0..2).map(|i| dir.path().join(format!("r{i}.json"))).collect();
    for p in &paths {
        let out = run(&["analyze", f.to_str().unwrap(), "--json", p.to_str().unwrap()]);
        assert!(out.status.success());
        assert!(out.stdout.is_empty());
    }
    assert_eq!(std::fs::read(&paths[0]).unwrap(), std::fs::read(&paths[1]).unwrap());
}
