use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde::{Deserialize, Serialize};

fn bkm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bkm"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn problems_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("problems")
}

#[derive(Debug, Serialize, Deserialize, PartialEq)]
struct Record {
    case: String,
    x: f64,
    y: f64,
    computed: f64,
    exact: Option<f64>,
    abs_err: Option<f64>,
    rel_err: Option<f64>,
    paper_bkm: Option<f64>,
    paper_competitor: Option<f64>,
}

fn records(csv_text: &str) -> Vec<Record> {
    csv::Reader::from_reader(csv_text.as_bytes())
        .deserialize()
        .collect::<Result<_, _>>()
        .unwrap()
}

#[test]
fn list_shows_the_five_cases() {
    let o = bkm(&["list"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 5);
    for name in [
        "helmholtz",
        "laplace",
        "convection-x",
        "convection-xy",
        "varying-helmholtz",
    ] {
        assert!(text.lines().any(|l| l.starts_with(name)), "{name} missing");
    }
    for table in 1..=5 {
        assert!(text.contains(&format!("Table {table}")));
    }
}

#[test]
fn laplace_five_knots_reproduces_the_linear_solution() {
    let o = bkm(&[
        "run",
        "laplace",
        "--boundary-knots",
        "5",
        "--shape",
        "25",
        "--format",
        "csv",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let rows = records(&stdout(&o));
    let expected = [1.5, 0.85, 0.15, -0.45, 0.9, 0.3, 0.0];
    assert_eq!(rows.len(), expected.len());
    for (r, e) in rows.iter().zip(expected) {
        assert_eq!(r.case, "laplace");
        assert!((r.computed - e).abs() <= 5e-4, "{r:?}");
        assert!((r.x + r.y - e).abs() < 1e-12);
    }
}

#[test]
fn laplace_markdown_prints_three_decimal_values() {
    let o = bkm(&[
        "run",
        "laplace",
        "--boundary-knots",
        "5",
        "--shape",
        "25",
        "--compare-paper",
    ]);
    assert!(o.status.success());
    let text = stdout(&o);
    for v in [
        "1.500", "0.850", "0.150", "-0.450", "0.900", "0.300", "0.000",
    ] {
        assert!(text.contains(&format!("| {v} |")), "{v} missing in\n{text}");
    }
    assert!(text.contains("\nPASS "));
}

#[test]
fn helmholtz_compare_paper_passes() {
    let o = bkm(&[
        "run",
        "helmholtz",
        "--boundary-knots",
        "11",
        "--compare-paper",
    ]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("paper BKM(11)"));
    assert!(text.contains("DRBEM"));
    assert!(
        text.lines().any(|l| l.starts_with("PASS max abs error")),
        "{text}"
    );
}

#[test]
fn bad_arguments_exit_2_with_usage() {
    let cases: &[&[&str]] = &[
        &["run", "helmholtz", "--boundary-knots", "2"],
        &["run", "no-such-case"],
        &["run", "laplace", "--shape", "-1"],
        &["run", "laplace", "--shape", "0"],
        &["run", "laplace", "--interior", "ring:2:3"],
        &[
            "run",
            "laplace",
            "--interior",
            "file:/nonexistent/knots.csv",
        ],
        &["run", "laplace", "--format", "xml"],
        &["frobnicate"],
        &[],
    ];
    for args in cases {
        let o = bkm(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(stderr(&o).contains("Usage:"), "{args:?}: {}", stderr(&o));
        assert!(stdout(&o).is_empty());
    }
}

#[test]
fn solver_failure_exits_1_with_condition_estimate() {
    // two interior knots at the same place cannot both be collocated
    let o = bkm(&[
        "run",
        "convection-x",
        "--interior",
        "ring:0.5:3",
        "--interior",
        "ring:0.5:3",
    ]);
    assert_eq!(o.status.code(), Some(1), "{}", stdout(&o));
    let err = stderr(&o);
    assert!(err.contains("convection-x"), "{err}");
    assert!(err.contains("condition estimate"), "{err}");
}

#[test]
fn identical_runs_give_identical_output() {
    for format in ["markdown", "csv"] {
        let args = [
            "run",
            "convection-xy",
            "--format",
            format,
            "--show-condition",
            "--compare-paper",
        ];
        assert_eq!(stdout(&bkm(&args)), stdout(&bkm(&args)));
    }
    // JSON differs only in the measured wall time
    let strip = |o: Output| {
        let mut v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
        assert!(v["wall_time_ms"].as_f64().unwrap() >= 0.0);
        v.as_object_mut().unwrap().remove("wall_time_ms");
        v
    };
    let args = ["run", "varying-helmholtz", "--format", "json"];
    assert_eq!(strip(bkm(&args)), strip(bkm(&args)));
}

#[test]
fn csv_round_trips_with_full_precision() {
    let o = bkm(&["run", "helmholtz", "--format", "csv"]);
    let text = stdout(&o);
    assert!(
        text.starts_with("case,x,y,computed,exact,abs_err,rel_err,paper_bkm,paper_competitor\n")
    );
    let rows = records(&text);
    let json = bkm(&["run", "helmholtz", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&json.stdout).unwrap();
    let points = v["points"].as_array().unwrap();
    assert_eq!(rows.len(), points.len());
    for (r, p) in rows.iter().zip(points) {
        assert_eq!(r.computed, p["computed"].as_f64().unwrap());
        assert_eq!(r.abs_err, p["abs_err"].as_f64());
        assert!((r.exact.unwrap() - r.x.sin()).abs() <= 1e-15);
    }
    // the two (0, 0) rows have an exact value of zero and so no relative error
    assert_eq!(rows.iter().filter(|r| r.rel_err.is_none()).count(), 2);
    // writing the parsed records again gives back the same text
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in &rows {
        w.serialize(r).unwrap();
    }
    assert_eq!(String::from_utf8(w.into_inner().unwrap()).unwrap(), text);
}

#[test]
fn json_has_config_summary_and_condition() {
    let o = bkm(&["run", "convection-x", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["case"], "convection-x");
    assert_eq!(v["config"]["boundary_knots"], 7);
    assert_eq!(v["config"]["interior_knots"], 11);
    assert_eq!(v["config"]["shape"], 4.0);
    assert_eq!(v["points"].as_array().unwrap().len(), 8);
    assert!(v["summary"]["max_abs_error"].as_f64().unwrap() > 0.0);
    assert!(v["condition_estimate"].as_f64().unwrap() > 1.0);
    assert_eq!(v["criterion"]["threshold"], 1e-2);
}

#[test]
fn run_all_covers_every_case_and_out_writes_a_copy() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("all.csv");
    let o = bkm(&["run-all", "--format", "csv", "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    assert_eq!(std::fs::read_to_string(&out).unwrap(), text);
    let rows = records(&text);
    for name in [
        "helmholtz",
        "laplace",
        "convection-x",
        "convection-xy",
        "varying-helmholtz",
    ] {
        assert!(rows.iter().any(|r| r.case == name), "{name}");
    }
}

#[test]
fn interior_file_matches_the_equivalent_explicit_points() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("knots.csv");
    // the ring's own coordinates, so the two layouts agree bit for bit
    let ring: Vec<String> = (0..3)
        .map(|k| {
            let t = std::f64::consts::TAU * k as f64 / 3.0;
            format!("{},{}", 0.5 * 2.0 * t.cos(), 0.5 * t.sin())
        })
        .collect();
    std::fs::write(&path, format!("x,y\n{}\n", ring.join("\n"))).unwrap();
    let from_file = format!("file:{}", path.display());
    let a = bkm(&[
        "run",
        "convection-x",
        "--interior",
        &from_file,
        "--format",
        "csv",
    ]);
    let b = bkm(&[
        "run",
        "convection-x",
        "--interior",
        "ring:0.5:3",
        "--format",
        "csv",
    ]);
    assert!(a.status.success() && b.status.success());
    assert_eq!(stdout(&a), stdout(&b));
}

#[test]
fn solve_problem_files() {
    for (file, tol) in [
        ("helmholtz-mixed.toml", 1e-6),
        ("poisson.toml", 1e-3),
        ("convection.toml", 1e-3),
    ] {
        let path = problems_dir().join(file);
        let o = bkm(&["solve", path.to_str().unwrap(), "--format", "csv"]);
        assert!(o.status.success(), "{file}: {}", stderr(&o));
        for r in records(&stdout(&o)) {
            assert!(r.abs_err.unwrap() <= tol, "{file}: {r:?}");
            assert!(r.paper_bkm.is_none() && r.paper_competitor.is_none());
        }
    }
}

#[test]
fn expression_errors_exit_2_with_position() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        ("dirichlet = \"sin(x\"", "boundary.dirichlet: column 6"),
        ("dirichlet = \"x ^ 2\"", "boundary.dirichlet: column 3"),
        ("dirichlet = \"pow(x)\"", "boundary.dirichlet: column 6"),
        ("dirichlet = \"nx\"", "boundary.dirichlet: column 1"),
        ("dirichlet = \"tan(x)\"", "unknown name `tan`"),
    ];
    for (line, needle) in cases {
        let path = dir.path().join("p.toml");
        std::fs::write(
            &path,
            format!("[domain]\na = 1.5\nb = 0.5\n[operator]\nk = 1.0\n[boundary]\n{line}\n[evaluate]\npoints = [[0.0, 0.0]]\n"),
        )
        .unwrap();
        let o = bkm(&["solve", path.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(2), "{line}");
        let err = stderr(&o);
        assert!(err.contains(needle), "{line}: {err}");
        assert!(err.contains('^'), "{err}");
    }
}

#[test]
fn malformed_problem_files_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.toml");
    for text in [
        "not toml at all [",
        "[domain]\na = 1.5\nb = 0.5\n[boundary]\ndirichlet = \"x\"\n",
        "[domain]\na = 1.5\nb = 0.5\n[operator]\ndx = 1.0\n[boundary]\ndirichlet = \"x\"\n[evaluate]\npoints = [[0.0, 0.0]]\n",
    ] {
        std::fs::write(&path, text).unwrap();
        let o = bkm(&["solve", path.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(2), "{text}");
    }
    let o = bkm(&["solve", "/nonexistent/problem.toml"]);
    assert_eq!(o.status.code(), Some(2));
}
