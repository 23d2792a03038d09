use std::process::{Command, Output};

use serde_json::Value;

fn bethe3(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bethe3")).args(args).output().expect("binary runs")
}

fn records(out: &Output) -> Vec<Value> {
    String::from_utf8_lossy(&out.stdout).lines().map(|l| serde_json::from_str(l).expect("json line")).collect()
}

#[test]
fn critical_table() {
    let out = bethe3(&["critical", "--n2", "1..6"]);
    assert_eq!(out.status.code(), Some(0));
    let r = records(&out);
    assert_eq!(r.len(), 6);
    assert_eq!(r[0]["C"].as_f64(), Some(-6.0));
    assert!((r[1]["C"].as_f64().unwrap() + 4.163).abs() < 5e-4);
    assert_eq!(r[1]["n2"].as_i64(), Some(2));
}

#[test]
fn trace_flips_branch_at_origin() {
    let out = bethe3(&["trace", "--label", "0,0", "--c-range", "-10..2", "--step", "0.05"]);
    assert_eq!(out.status.code(), Some(0));
    let r = records(&out);
    assert_eq!(r.len(), 241);
    let cs: Vec<f64> = r.iter().map(|v| v["c"].as_f64().unwrap()).collect();
    assert!(cs.windows(2).all(|w| w[0] < w[1]));
    for v in &r {
        let real = v["branch"] == "RealK";
        assert_eq!(real, v["c"].as_f64().unwrap() >= 0.0);
        assert_eq!(v["k"].as_array().unwrap().len(), 3);
    }
}

#[test]
fn output_is_deterministic() {
    let args = ["spectrum", "--labels", "2,2", "0,0", "1,2", "0,2", "--c", "-2.5", "--partners"];
    let (a, b) = (bethe3(&args), bethe3(&args));
    assert_eq!(a.stdout, b.stdout);
    let r = records(&a);
    assert_eq!(r.len(), 6);
    let e: Vec<f64> = r.iter().map(|v| v["E"].as_f64().unwrap()).collect();
    assert!(e.windows(2).all(|w| w[0] <= w[1]));
}

#[test]
fn density_csv_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("grid.csv");
    let out = bethe3(&[
        "density", "--label", "0,2", "--c", "-9", "--resolution", "10", "--format", "csv", "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("r12,r23,r31,density"));
    let rows: Vec<Vec<f64>> = lines.map(|l| l.split(',').map(|x| x.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 100);
    for r in rows {
        assert!((r[0] + r[1] + r[2] - 1.0).abs() < 1e-12 && r[3] >= 0.0);
    }
}

#[test]
fn full_precision_numbers() {
    let out = bethe3(&["critical", "--n2", "2", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let c: f64 = text.lines().nth(1).unwrap().split(',').nth(1).unwrap().parse().unwrap();
    let json = records(&bethe3(&["critical", "--n2", "2"]));
    assert_eq!(json[0]["C"].as_f64(), Some(c));
    assert!(text.lines().nth(1).unwrap().split(',').nth(1).unwrap().len() >= 15);
}

#[test]
fn usage_errors() {
    assert_eq!(bethe3(&["trace", "--label", "0,0", "--c-range", "2..-1"]).status.code(), Some(64));
    assert_eq!(bethe3(&["density", "--label", "0,0", "--c", "1", "--resolution", "4"]).status.code(), Some(64));
    assert_eq!(bethe3(&["trace", "--label", "0,0", "--c-range", "0..1", "--step", "0"]).status.code(), Some(64));
    assert_eq!(bethe3(&["verify", "--suite", "bogus"]).status.code(), Some(64));
    assert_eq!(bethe3(&["--help"]).status.code(), Some(0));
}

#[test]
fn solver_failure_writes_trailer() {
    // the trimer gap falls below double resolution this deep, so the amplitudes are singular
    let out = bethe3(&["density", "--label", "0,0", "--c", "-45", "--resolution", "8"]);
    assert_eq!(out.status.code(), Some(2));
    let r = records(&out);
    assert_eq!(r.last().unwrap()["record"], "error");
}

#[test]
fn tolerance_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_bethe3"))
        .args(["spectrum", "--labels", "1,1", "--c", "-3"])
        .env("BETHE3_TOL", "1e-6")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let loose = records(&out)[0]["E"].as_f64().unwrap();
    let tight = records(&bethe3(&["spectrum", "--labels", "1,1", "--c", "-3"]))[0]["E"].as_f64().unwrap();
    assert!((loose - tight).abs() < 1e-4);
}

#[test]
fn verify_suite_passes() {
    let out = bethe3(&["verify", "--suite", "observables"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let r = records(&out);
    assert!(r.iter().filter(|v| v["record"] == "property").all(|v| v["passed"] == true));
    assert_eq!(r.last().unwrap()["record"], "summary");
}
