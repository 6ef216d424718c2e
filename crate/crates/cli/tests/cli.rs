use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn cauchy(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cauchy")).args(args).output().expect("binary runs")
}

fn run_fixture(name: &str, format: &str) -> Output {
    let path = fixture(name);
    cauchy(&["run", "--config", path.to_str().unwrap(), "--format", format])
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn exit_codes_follow_worst_status() {
    for (name, code) in [
        ("pass.json", 0),
        ("violation.json", 1),
        ("error.json", 2),
        ("mixed.json", 1),
        ("singular.json", 2),
        ("all_kinds.json", 0),
    ] {
        let out = run_fixture(name, "json");
        assert_eq!(out.status.code(), Some(code), "{name}: {}", String::from_utf8_lossy(&out.stderr));
    }
}

#[test]
fn repeated_runs_are_byte_identical() {
    for name in ["pass.json", "mixed.json", "all_kinds.json"] {
        let a = run_fixture(name, "json");
        let b = run_fixture(name, "json");
        assert!(!a.stdout.is_empty());
        assert_eq!(a.stdout, b.stdout, "{name}");
    }
}

#[test]
fn summary_counts_match_reports() {
    let out = run_fixture("mixed.json", "json");
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["counts"]["pass"], 1);
    assert_eq!(v["counts"]["violation"], 2);
    assert_eq!(v["counts"]["error"], 0);
    assert_eq!(v["reports"].as_array().unwrap().len(), 3);
    assert_eq!(v["reports"][0]["kind"], "rectangle_identity");
}

#[test]
fn text_explains_singular_homotopy() {
    let out = run_fixture("singular.json", "text");
    let text = stdout(&out);
    assert!(text.contains("PASS exp-square"), "{text}");
    assert!(text.contains("ERROR through-pole"), "{text}");
    assert!(text.contains("singular sample: t="), "{text}");
    assert!(text.contains("eps="), "{text}");
}

#[test]
fn enclosed_pole_reports_winding() {
    let out = cauchy(&[
        "rectangle",
        "--f",
        "1/(z-(0.5+0.5*i))",
        "--region",
        r#"{"rectangle": [0, 1, 0, 1]}"#,
        "--format",
        "text",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("winding=1"), "{}", stdout(&out));
}

#[test]
fn parse_errors_exit_with_two() {
    let out = cauchy(&["integrate", "--f", "exp(", "--path", r#"{"line": [[0, 0], [1, 1]]}"#]);
    assert_eq!(out.status.code(), Some(2));

    let out = cauchy(&["integrate", "--f", "z", "--path", "not json"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
}

#[test]
fn integrate_with_expected_value() {
    let path = r#"{"line": [[0, 0], [1, 1]]}"#;
    let good = cauchy(&["integrate", "--f", "exp(z)", "--path", path, "--expected", "[0.46869393991588515, 2.2873552871788423]"]);
    assert_eq!(good.status.code(), Some(0), "{}", stdout(&good));
    let bad = cauchy(&["integrate", "--f", "exp(z)", "--path", path, "--expected", "[0, 0]"]);
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn csv_output_is_written() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("cr.csv");
    let out = cauchy(&[
        "check-cr",
        "--f",
        "z^2",
        "--region",
        r#"{"rectangle": [0, 1, 0, 1]}"#,
        "--resolution",
        "3",
        "--csv",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    let header = lines.next().unwrap();
    assert!(header.starts_with("x,y"), "{header}");
    assert_eq!(lines.count(), 9);

    let csv = dir.path().join("axisym.csv");
    let out = cauchy(&[
        "fluid-axisym",
        "--q",
        "x/(x^2+z^2)^(3/2)",
        "--p",
        "z/(x^2+z^2)^(3/2)",
        "--region",
        r#"{"rectangle": [-1, 1, 0, 1]}"#,
        "--csv",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let text = std::fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with("x,z,q,p,residual\n"));
}

#[test]
fn out_flag_writes_the_summary() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("summary.json");
    let cfg = fixture("pass.json");
    let out = cauchy(&["run", "--config", cfg.to_str().unwrap(), "--out", target.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let written = std::fs::read(&target).unwrap();
    assert_eq!(written, run_fixture("pass.json", "json").stdout);
}

#[test]
fn fluid_subcommands() {
    let out = cauchy(&["fluid-bernoulli", "--v", "1/(1+s)", "--s-max", "1"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!((v["reports"][0]["left"][0].as_f64().unwrap() - 0.375).abs() < 1e-12);

    let out = cauchy(&["fluid-bernoulli", "--v", "1-s", "--s-max", "2"]);
    assert_eq!(out.status.code(), Some(2));

    let out = cauchy(&["fluid-jacobian", "--field", r#"["x", "y", "z"]"#, "--points", "[[0, 0, 0], [1, 1, 1]]", "--tol", "1e-4"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
}
