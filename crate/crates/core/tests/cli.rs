use std::fs;
use std::path::Path;

use totpos::cli::{run, EXIT_ERROR, EXIT_FAIL, EXIT_PASS};
use totpos::lattice::read_lattice;
use totpos::positivity::CheckReport;

fn run_args(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut full = vec!["totpos"];
    full.extend_from_slice(args);
    let code = run(full, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

const CONSTANT_3X3: &str = r#"{"shape":[3,3],"axes":[[0,1,2],[0,1,2]],"values":[1,1,1,1,1,1,1,1,1],"interpretation":"density"}"#;
const ANTI: &str =
    r#"{"shape":[2,2],"axes":[[0,1],[0,1]],"values":[1,2,2,1],"interpretation":"density"}"#;

#[test]
fn check_constant_lattice_passes() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "c.json", CONSTANT_3X3);
    let (code, out, _) = run_args(&["check", "--input", &input, "--mode", "pairs"]);
    assert_eq!(code, EXIT_PASS);
    let report = CheckReport::from_json(&out).unwrap();
    assert!(report.passed());
}

#[test]
fn check_failure_reports_witness() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "a.json", ANTI);
    let report_path = dir.path().join("r.json");
    let (code, out, _) = run_args(&[
        "check",
        "--input",
        &input,
        "--alpha",
        "+1,+1",
        "--output",
        report_path.to_str().unwrap(),
    ]);
    assert_eq!(code, EXIT_FAIL);
    assert_eq!(out.trim(), "fail");
    let report = CheckReport::from_json(&fs::read_to_string(&report_path).unwrap()).unwrap();
    let w = report.witness.unwrap();
    assert_eq!(
        w.indices,
        vec![vec![0, 0], vec![1, 1], vec![1, 0], vec![0, 1]]
    );
    assert_eq!(report.min_margin, -3.0);

    let (code, _, _) = run_args(&["check", "--input", &input, "--alpha", "+1,-1"]);
    assert_eq!(code, EXIT_PASS);
    for mode in ["full", "chain"] {
        assert_eq!(
            run_args(&["check", "--input", &input, "--mode", mode]).0,
            EXIT_FAIL
        );
    }
    assert_eq!(
        run_args(&["check", "--input", &input, "--mode", "negative"]).0,
        EXIT_PASS
    );
}

#[test]
fn check_input_errors() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "c.json", CONSTANT_3X3);
    let (code, _, err) = run_args(&["check", "--input", &input, "--alpha", "+1,+1,+1"]);
    assert_eq!(code, EXIT_ERROR);
    assert!(err.contains("dimension"), "{err}");

    let bad = write(
        dir.path(),
        "bad.json",
        r#"{"shape":[2],"axes":[[0,1]],"values":[1,-1],"interpretation":"density"}"#,
    );
    let (code, _, err) = run_args(&["check", "--input", &bad]);
    assert_eq!(code, EXIT_ERROR);
    assert!(err.contains("values"), "{err}");

    let bad_axes = write(
        dir.path(),
        "bad2.json",
        r#"{"shape":[2],"axes":[[1,0]],"values":[1,1],"interpretation":"density"}"#,
    );
    let (_, _, err) = run_args(&["check", "--input", &bad_axes]);
    assert!(err.contains("axes"), "{err}");

    let (code, _, _) = run_args(&["check", "--input", "/nonexistent/file.json"]);
    assert_eq!(code, EXIT_ERROR);

    let (code, _, err) = run_args(&["check", "--input", &input, "--mode", "survival"]);
    assert_eq!(code, EXIT_ERROR);
    assert!(err.contains("pmf"), "{err}");
}

#[test]
fn osdensity_csv_and_round_trip_into_check() {
    let dir = tempfile::tempdir().unwrap();
    let (code, out, _) = run_args(&[
        "osdensity",
        "--dist",
        "exp:1",
        "--d",
        "3",
        "--i",
        "1",
        "--j",
        "2",
        "--grid",
        "0:5:50",
    ]);
    assert_eq!(code, EXIT_PASS);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("x,y,value"));
    let rows: Vec<Vec<f64>> = lines
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 2500);
    assert!(rows.iter().all(|r| r.len() == 3 && r[2] >= 0.0));

    let lattice_path = dir.path().join("h.json");
    let (code, _, _) = run_args(&[
        "osdensity",
        "--dist",
        "exp:1",
        "--d",
        "3",
        "--i",
        "1",
        "--j",
        "2",
        "--grid",
        "0:5:50",
        "--format",
        "lattice",
        "--output",
        lattice_path.to_str().unwrap(),
    ]);
    assert_eq!(code, EXIT_PASS);
    let lattice = read_lattice(&lattice_path).unwrap();
    assert_eq!(lattice.shape(), &[50, 50]);
    // The CSV and the lattice file carry identical values.
    for (row, v) in rows.iter().zip(lattice.values()) {
        assert_eq!(row[2], *v);
    }
    let (code, _, _) = run_args(&[
        "check",
        "--input",
        lattice_path.to_str().unwrap(),
        "--alpha",
        "+1,+1",
    ]);
    assert_eq!(code, EXIT_PASS);
}

#[test]
fn osdensity_above_support_is_zero() {
    let (code, out, _) = run_args(&[
        "osdensity",
        "--dist",
        "uniform:0,1",
        "--d",
        "3",
        "--grid",
        "2:3:10",
    ]);
    assert_eq!(code, EXIT_PASS);
    assert!(out
        .lines()
        .skip(1)
        .all(|l| l.rsplit(',').next().unwrap().parse::<f64>().unwrap() == 0.0));
}

#[test]
fn osdensity_first_k() {
    let (code, out, _) = run_args(&[
        "osdensity",
        "--dist",
        "uniform:0,1",
        "--d",
        "3",
        "--k",
        "3",
        "--grid",
        "0.1:0.9:4",
    ]);
    assert_eq!(code, EXIT_PASS);
    assert_eq!(out.lines().next(), Some("x1,x2,x3,value"));
    assert_eq!(out.lines().count(), 65);
}

#[test]
fn verify_examples() {
    let (code, out, _) = run_args(&["verify", "--prop", "dfr", "--dist", "exp:1"]);
    assert_eq!(code, EXIT_PASS);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["passed"], true);

    let (code, out, _) = run_args(&["verify", "--prop", "dfr", "--dist", "weibull:2,1"]);
    assert_eq!(code, EXIT_FAIL);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert!(v["checks"][0]["report"]["witness"].is_object());

    let (code, _, _) = run_args(&[
        "verify",
        "--prop",
        "equivalence",
        "--trials",
        "200",
        "--shape",
        "3,3,3",
    ]);
    assert_eq!(code, EXIT_PASS);

    for prop in ["plrd", "prd", "cis", "cis-spacing", "beta-identity"] {
        let (code, out, _) = run_args(&["verify", "--prop", prop, "--trials", "100"]);
        assert_eq!(code, EXIT_PASS, "{prop}: {out}");
    }
    let (code, _, _) = run_args(&[
        "verify",
        "--prop",
        "prd",
        "--dist",
        "weibull:2,1",
        "--d",
        "4",
        "--i",
        "1",
        "--j",
        "3",
    ]);
    assert_eq!(code, EXIT_FAIL);
    assert_eq!(run_args(&["verify", "--prop", "nope"]).0, EXIT_ERROR);
    assert_eq!(
        run_args(&["verify", "--prop", "prd", "--i", "2"]).0,
        EXIT_ERROR
    );
}

#[test]
fn sample_is_deterministic_and_sorted() {
    let args = [
        "sample",
        "--dist",
        "weibull:0.5,1",
        "--d",
        "3",
        "--n",
        "10",
        "--seed",
        "99",
    ];
    let (code, a, _) = run_args(&args);
    assert_eq!(code, EXIT_PASS);
    let (_, b, _) = run_args(&args);
    assert_eq!(a, b);
    let rows: Vec<Vec<f64>> = a
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 10);
    assert!(rows
        .iter()
        .all(|r| r.len() == 3 && r.windows(2).all(|w| w[0] <= w[1])));
}

#[test]
fn sample_bins_match_memoryless_gap() {
    let (code, out, _) = run_args(&[
        "sample", "--dist", "exp:1", "--d", "2", "--n", "100000", "--bins", "5", "--y", "0.5",
    ]);
    assert_eq!(code, EXIT_PASS);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("bin_low,bin_high,count,estimate,stderr"));
    let truth = (-0.5f64).exp();
    let mut n = 0;
    for line in lines {
        let f: Vec<f64> = line.split(',').map(|v| v.parse().unwrap()).collect();
        assert!((f[3] - truth).abs() <= 3.0 * f[4], "{line}");
        n += 1;
    }
    assert_eq!(n, 5);
}
