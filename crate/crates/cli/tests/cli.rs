use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

const MM1: &str =
    r#"{"model": "mm1", "lambda": 1, "service": {"kind": "exponential", "params": {"mu": 2}}, "threshold_H": 1}"#;

fn overage(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_overage")).args(args).output().unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn arg(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[derive(Debug)]
struct Row {
    lambda: f64,
    h: f64,
    metric: String,
    method: String,
    value: f64,
    ci: Option<(f64, f64)>,
}

fn rows(out: &Output) -> Vec<Row> {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let mut reader = csv::Reader::from_reader(out.stdout.as_slice());
    let header = reader.headers().unwrap().clone();
    assert_eq!(header.iter().collect::<Vec<_>>().join(","), overage_cli::CSV_HEADER);
    reader
        .records()
        .map(|r| {
            let r = r.unwrap();
            let num = |i: usize| r[i].parse::<f64>().unwrap();
            Row {
                lambda: num(1),
                h: num(4),
                metric: r[5].to_string(),
                method: r[6].to_string(),
                value: num(7),
                ci: (!r[8].is_empty()).then(|| (num(8), num(9))),
            }
        })
        .collect()
}

fn find<'a>(rows: &'a [Row], metric: &str, method: &str) -> &'a Row {
    rows.iter().find(|r| r.metric == metric && r.method == method).unwrap()
}

#[test]
fn run_reports_closed_form_and_quadrature() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "mm1.json", MM1);
    let rows = rows(&overage(&["run", arg(&f), "--methods", "analytic,quadrature"]));
    assert_eq!(rows.len(), 8);
    assert!((find(&rows, "P_s", "analytic").value - (-1.0f64).exp()).abs() < 1e-12);
    assert!((find(&rows, "avg_aoi", "analytic").value - 1.75).abs() < 1e-12);
    for m in ["P_o", "avg_overage", "P_s"] {
        assert!((find(&rows, m, "analytic").value - find(&rows, m, "quadrature").value).abs() < 1e-6);
    }
}

#[test]
fn simulation_interval_covers_quadrature_for_gamma_service() {
    let dir = TempDir::new().unwrap();
    let f = write(
        &dir,
        "g.json",
        r#"{"model": "mg11", "lambda": 1, "service": {"kind": "gamma", "params": {"alpha": 2, "beta": 4}},
            "threshold_H": 1, "sim": {"packets": 400000, "seed": 5}}"#,
    );
    let rows = rows(&overage(&["run", arg(&f)]));
    for m in ["P_o", "avg_overage", "P_s", "avg_aoi"] {
        let q = find(&rows, m, "quadrature").value;
        let (lo, hi) = find(&rows, m, "simulation").ci.unwrap();
        assert!(lo <= q && q <= hi, "{m}: {q} outside [{lo}, {hi}]");
    }
    assert!(rows.iter().all(|r| r.method != "analytic"));
}

#[test]
fn malformed_json_exits_two_without_output() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "bad.json", "{\"model\": \"mm1\",\n \"lambda\": }");
    let out = overage(&["run", arg(&f)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("bad.json:2:"), "{err}");
}

#[test]
fn unknown_keys_are_rejected() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "k.json", &MM1.replace("\"lambda\"", "\"lamda\": 1, \"lambda\""));
    assert_eq!(overage(&["validate", arg(&f)]).status.code(), Some(2));
}

#[test]
fn validate_reports_domain_errors() {
    let dir = TempDir::new().unwrap();
    let unstable = write(&dir, "u.json", &MM1.replace("\"lambda\": 1", "\"lambda\": 3"));
    let out = overage(&["validate", arg(&unstable)]);
    assert_eq!(out.status.code(), Some(3));
    let bad_rate = write(
        &dir,
        "b.json",
        r#"{"model": "mg11", "lambda": 1, "service": {"kind": "gamma", "params": {"alpha": 2, "beta": 0}}, "threshold_H": 1}"#,
    );
    assert_eq!(overage(&["validate", arg(&bad_rate)]).status.code(), Some(3));
    let ok = write(&dir, "ok.json", MM1);
    let out = overage(&["validate", arg(&ok)]);
    assert!(out.status.success());
    let echoed: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(echoed["sim"]["seed"], 20_190_701);
}

#[test]
fn sweep_is_sorted_and_single_value_matches_run() {
    let dir = TempDir::new().unwrap();
    let sweep = r#"{"model": "mm1", "lambda": 1, "service": {"kind": "exponential", "params": {"mu": 2}},
        "threshold_H": 1, "sweep": {"parameter": "H", "values": [3, 0.5, 1]}}"#;
    let f = write(&dir, "s.json", sweep);
    let rows = rows(&overage(&["sweep", arg(&f), "--methods", "analytic"]));
    let hs: Vec<f64> = rows.iter().map(|r| r.h).collect();
    let mut sorted = hs.clone();
    sorted.sort_by(f64::total_cmp);
    assert_eq!(hs, sorted);

    let single = write(&dir, "one.json", &sweep.replace("[3, 0.5, 1]", "[1]"));
    let plain = write(&dir, "plain.json", MM1);
    let common = ["--packets", "50000", "--no-timing"];
    let a = overage(&[&["sweep", arg(&single)][..], &common].concat());
    let b = overage(&[&["run", arg(&plain)][..], &common].concat());
    assert!(a.status.success() && b.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn worker_count_does_not_change_output() {
    let dir = TempDir::new().unwrap();
    let f = write(
        &dir,
        "w.json",
        r#"{"model": "mg12star", "lambda": 1, "service": {"kind": "exponential", "params": {"mu": 2}},
            "threshold_H": 1, "sweep": {"parameter": "lambda", "values": [0.5, 1, 1.5, 2]}}"#,
    );
    let run = |w: &str| overage(&["sweep", arg(&f), "--packets", "20000", "--workers", w, "--no-timing"]).stdout;
    let one = run("1");
    assert!(!one.is_empty());
    assert_eq!(one, run("4"));
}

#[test]
fn output_file_round_trips_through_csv() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "mm1.json", MM1);
    let out = dir.path().join("out.csv");
    let status = overage(&["run", arg(&f), "--packets", "20000", "--output", arg(&out)]);
    assert!(status.status.success() && status.stdout.is_empty());
    let mut reader = csv::Reader::from_path(&out).unwrap();
    let records: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    assert_eq!(records.len(), 12);
    for r in &records {
        let v: f64 = r[7].parse().unwrap();
        assert!(v.is_finite());
        if &r[6] == "simulation" {
            assert_eq!(&r[10], "20000");
            assert_eq!(&r[11], "20190701");
        } else {
            assert!(r[8].is_empty() && r[10].is_empty());
        }
        assert!(r[12].parse::<f64>().unwrap() >= 0.0);
    }
}

#[test]
fn unknown_figure_lists_valid_names() {
    let out = overage(&["figure", "fig9"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    for name in overage_cli::PRESET_NAMES {
        assert!(err.contains(name), "{err}");
    }
}

#[test]
fn rho_sweep_has_interior_minimum() {
    let dir = TempDir::new().unwrap();
    let f = write(
        &dir,
        "rho.json",
        r#"{"model": "mm1", "lambda": 1, "service": {"kind": "exponential", "params": {"mu": 2}},
            "threshold_H": 1, "sweep": {"parameter": "rho", "values": [0.05, 0.2, 0.4, 0.53, 0.7, 0.85, 0.95]}}"#,
    );
    let rows = rows(&overage(&["sweep", arg(&f), "--methods", "analytic"]));
    let aoi: Vec<&Row> = rows.iter().filter(|r| r.metric == "avg_aoi").collect();
    let lambdas: Vec<f64> = aoi.iter().map(|r| r.lambda).collect();
    assert!((lambdas[0] - 0.1).abs() < 1e-12);
    let v: Vec<f64> = aoi.iter().map(|r| r.value).collect();
    let k = (0..v.len()).min_by(|&a, &b| v[a].total_cmp(&v[b])).unwrap();
    assert!(k > 0 && k < v.len() - 1, "{v:?}");
}

#[test]
fn fig5_trade_off_between_overage_and_staleness() {
    let out = overage(&["figure", "fig5", "--methods", "quadrature", "--no-timing"]);
    let rows = rows(&out);
    for metric in ["P_o", "P_s"] {
        let series: Vec<&Row> = rows.iter().filter(|r| r.metric == metric).collect();
        assert_eq!(series.len(), 80);
        for w in series.chunks(20) {
            for pair in w.windows(2) {
                let (a, b) = (pair[0].value, pair[1].value);
                match metric {
                    "P_o" => assert!(b <= a + 1e-9),
                    _ => assert!(b >= a - 1e-9),
                }
            }
        }
    }
}
