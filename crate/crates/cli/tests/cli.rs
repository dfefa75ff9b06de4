use std::path::PathBuf;
use std::process::{Command, Output};

use proptest::prelude::*;
use vanhecke_cli::csv_io::{parse_samples, write_samples};
use vanhecke_cli::EXAMPLE_CSV;
use vanhecke_core::SampleSet;

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_vanhecke"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn temp_csv(name: &str, body: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("vanhecke-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path
}

fn example_file() -> PathBuf {
    temp_csv("example.csv", EXAMPLE_CSV)
}

#[test]
fn estimate_on_example_table() {
    let path = example_file();
    let o = bin(&["estimate", path.to_str().unwrap()]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("mean                  3.29"), "{out}");
    assert!(out.contains("standard_error        0.74"));
    assert!(out.contains("imaginary_error       0.26"));
}

#[test]
fn estimate_digits_and_json() {
    let path = example_file();
    let o = bin(&["estimate", path.to_str().unwrap(), "--digits", "4"]);
    assert!(stdout(&o).contains("standard_error        0.7437"));
    let o = bin(&["estimate", path.to_str().unwrap(), "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["n"], 11);
    assert!((v["mean"].as_f64().unwrap() - 3.29).abs() < 1e-12);
    assert!((v["zero_variance_points"][0]["im"].as_f64().unwrap() - 10f64.sqrt()).abs() < 1e-12);
    assert!((v["zero_variance_points"][1]["im"].as_f64().unwrap() + 10f64.sqrt()).abs() < 1e-12);
}

#[test]
fn estimate_constant_and_identity_files() {
    let flat = temp_csv("flat.csv", "x,v\n1,5\n2,5\n3,5\n4,5\n");
    let out = stdout(&bin(&["estimate", flat.to_str().unwrap()]));
    assert!(out.contains("mean                  5.00"));
    assert!(out.contains("imaginary_error       0.00"));

    let body: String = std::iter::once("x,v\n".to_string())
        .chain((1..=11).map(|i| format!("{i},{i}\n")))
        .collect();
    let ident = temp_csv("ident.csv", &body);
    let out = stdout(&bin(&["estimate", ident.to_str().unwrap()]));
    assert!(out.contains("imaginary_error       3.16"), "{out}");
}

#[test]
fn estimate_error_exit_codes() {
    let missing = bin(&["estimate", "/nonexistent/file.csv"]);
    assert_eq!(missing.status.code(), Some(1));

    let bad = temp_csv("bad.csv", "x,v\n1,2\n2,oops\n");
    let o = bin(&["estimate", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));

    let degenerate = temp_csv("degenerate.csv", "x,v\n2,1\n2,3\n2,4\n");
    assert_eq!(bin(&["estimate", degenerate.to_str().unwrap()]).status.code(), Some(2));

    assert_eq!(bin(&["estimate"]).status.code(), Some(1));
    assert_eq!(bin(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(bin(&["--help"]).status.code(), Some(0));
}

#[test]
fn weights_degree_zero_are_uniform() {
    let path = example_file();
    let o = bin(&["weights", path.to_str().unwrap(), "--at", "-3,2", "--degree", "0", "--json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    for row in v["weights"].as_array().unwrap() {
        assert!((row["weight"]["re"].as_f64().unwrap() - 1.0 / 11.0).abs() < 1e-15);
        assert!(row["weight"]["im"].as_f64().unwrap().abs() < 1e-15);
    }
}

#[test]
fn weights_at_zero_variance_point() {
    let path = example_file();
    let o = bin(&["weights", path.to_str().unwrap(), "--at", "6,3.16227766", "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let sum_residual = v["unbiasedness_residuals"][0].as_f64().unwrap();
    assert!(sum_residual < 1e-10);
    let text = stdout(&bin(&["weights", path.to_str().unwrap(), "--at", "6,3.16227766"]));
    assert!(text.contains("unbiasedness residuals"));
}

#[test]
fn weights_on_sample_point_are_real() {
    let path = example_file();
    let o = bin(&["weights", path.to_str().unwrap(), "--at", "4", "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v["weights"]
        .as_array()
        .unwrap()
        .iter()
        .all(|r| r["weight"]["im"].as_f64().unwrap() == 0.0));
}

#[test]
fn variance_examples() {
    let path = example_file();
    let p = path.to_str().unwrap();
    let json = |args: &[&str]| -> serde_json::Value {
        let o = bin(args);
        assert!(o.status.success());
        serde_json::from_slice(&o.stdout).unwrap()
    };
    let at_mean = json(&["variance", p, "--at", "6", "--sigma2", "1", "--json"]);
    assert!((at_mean["variance"]["re"].as_f64().unwrap() - 0.0909091).abs() < 1e-7);
    let at_zero = json(&["variance", p, "--at", "0", "--sigma2", "1", "--json"]);
    assert!((at_zero["variance"]["re"].as_f64().unwrap() - 0.41818).abs() < 1e-5);
    let root = json(&["variance", p, "--at", "6,3.16227766", "--json"]);
    let residue = (10.0 - 3.16227766f64 * 3.16227766) / 110.0;
    assert!((root["variance"]["re"].as_f64().unwrap() - residue).abs() < 1e-15);
    let text = stdout(&bin(&["variance", p, "--at", "6"]));
    assert!(text.starts_with("variance 0.0909090909"), "{text}");
}

#[test]
fn simulate_reports_key_values() {
    let o = bin(&["simulate", "--reps", "2000", "--seed", "5"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("x_j=5.5\n"));
    assert!(out.contains("replicates=2000\n"));
    let theoretical = out
        .lines()
        .find_map(|l| l.strip_prefix("theoretical_mse="))
        .unwrap()
        .parse::<f64>()
        .unwrap();
    assert!((theoretical - 1.0931818181818182).abs() < 1e-12);
}

#[test]
fn simulate_constant_trend_and_scaling() {
    let json = |args: &[&str]| -> serde_json::Value {
        let o = bin(args);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        serde_json::from_slice(&o.stdout).unwrap()
    };
    let c = json(&["simulate", "--n", "8", "--beta", "2", "--at", "0.5", "--reps", "10", "--json"]);
    assert!((c["theoretical_mse"].as_f64().unwrap() - 1.125).abs() < 1e-15);
    let one = json(&["simulate", "--reps", "10", "--json"]);
    let two = json(&["simulate", "--reps", "10", "--sigma", "2", "--json"]);
    assert_eq!(
        two["theoretical_mse"].as_f64().unwrap(),
        4.0 * one["theoretical_mse"].as_f64().unwrap()
    );
}

#[test]
fn simulate_rejects_on_sample_point() {
    assert_eq!(bin(&["simulate", "--at", "3", "--reps", "10"]).status.code(), Some(1));
}

#[test]
fn example_command() {
    let o = bin(&["example"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("3.29") && out.contains("0.74") && out.contains("0.26"));
    let j = bin(&["example", "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&j.stdout).unwrap();
    assert!((v["standard_error"].as_f64().unwrap() - 0.7437).abs() < 5e-4);
    assert!((v["imaginary_error"].as_f64().unwrap() - 0.2593).abs() < 5e-4);
}

proptest! {
    #[test]
    fn csv_round_trip_is_bit_exact(rows in prop::collection::vec((any::<f64>(), any::<f64>()), 1..40)) {
        let rows: Vec<(f64, f64)> = rows.into_iter().filter(|(x, v)| x.is_finite() && v.is_finite()).collect();
        prop_assume!(!rows.is_empty());
        let (xs, vs): (Vec<f64>, Vec<f64>) = rows.into_iter().unzip();
        let samples = SampleSet::new(xs, vs).unwrap();
        let mut buf = Vec::new();
        write_samples(&samples, &mut buf).unwrap();
        let back = parse_samples(buf.as_slice()).unwrap();
        for (a, b) in samples.abscissas().iter().zip(back.abscissas()) {
            prop_assert_eq!(a.to_bits(), b.to_bits());
        }
        for (a, b) in samples.values().iter().zip(back.values()) {
            prop_assert_eq!(a.to_bits(), b.to_bits());
        }
    }
}
