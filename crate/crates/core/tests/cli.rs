use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn schurkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_schurkit")).args(args).output().unwrap()
}

fn spec(name: &str) -> String {
    fixture(name).to_string_lossy().into_owned()
}

fn rows(csv_text: &[u8]) -> (Vec<String>, Vec<Vec<f64>>) {
    let mut r = csv::Reader::from_reader(csv_text);
    let header = r.headers().unwrap().iter().map(String::from).collect();
    let rows = r
        .records()
        .map(|rec| rec.unwrap().iter().map(|v| v.parse().unwrap()).collect())
        .collect();
    (header, rows)
}

fn column(header: &[String], name: &str) -> usize {
    header.iter().position(|h| h == name).unwrap()
}

#[test]
fn circle_closes() {
    let out = schurkit(&["reconstruct", &spec("circle.json")]);
    assert_eq!(out.status.code(), Some(0));
    let (header, rows) = rows(&out.stdout);
    assert_eq!(&header[..5], ["s", "x", "y", "dx", "dy"]);
    let (first, last) = (&rows[0], &rows[rows.len() - 1]);
    assert!((first[1] - last[1]).hypot(first[2] - last[2]) <= 1e-5);
}

#[test]
fn square_marks_four_duplicate_rows() {
    let out = schurkit(&["reconstruct", &spec("square.json")]);
    let (header, rows) = rows(&out.stdout);
    let jump = column(&header, "jump");
    let marked: Vec<usize> = (0..rows.len()).filter(|&i| rows[i][jump] == 1.0).collect();
    assert_eq!(marked.len(), 4);
    for i in marked {
        // same s and position as the row before, different tangent
        assert_eq!(rows[i][..3], rows[i - 1][..3]);
        assert_ne!(rows[i][3..5], rows[i - 1][3..5]);
    }
}

#[test]
fn helix_curvature_column_is_constant() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("helix.csv");
    let out = schurkit(&["reconstruct", &spec("helix.json"), "--out", &path.to_string_lossy()]);
    assert_eq!(out.status.code(), Some(0));
    let (header, rows) = rows(&std::fs::read(&path).unwrap());
    let k = column(&header, "curvature");
    // a = 1, b = 0.5: k = a / (a^2 + b^2)
    let worst = rows.iter().map(|r| (r[k] - 0.8).abs()).fold(0.0, f64::max);
    assert!(worst <= 1e-4, "{worst}");
}

#[test]
fn minkowski_headers_use_time_coordinate() {
    let out = schurkit(&["reconstruct", &spec("timelike_twisted.json")]);
    let (header, _) = rows(&out.stdout);
    assert_eq!(&header[..7], ["s", "t", "x", "y", "dt", "dx", "dy"]);
}

fn verify_report(args: &[&str]) -> (i32, serde_json::Value) {
    let out = schurkit(args);
    let code = out.status.code().unwrap();
    let value = serde_json::from_slice(&out.stdout).unwrap_or(serde_json::Value::Null);
    (code, value)
}

#[test]
fn circle_vs_line_passes() {
    let (code, rep) = verify_report(&["verify", "thm1.1", &spec("arc.json"), &spec("line.json")]);
    assert_eq!(code, 0);
    assert_eq!(rep["outcome"], "pass");
    assert_eq!(rep["config"]["step"], 1e-3);
    assert_eq!(rep["config"]["tol"], 1e-6);
    assert!(rep["details"]["min_slack"].as_f64().unwrap() >= -1e-6);
}

#[test]
fn every_theorem_passes_on_its_fixture() {
    for (theorem, a, b) in [
        ("corollary", "arc.json", Some("helix_arc.json")),
        ("prop2.2", "arc.json", Some("helix_arc.json")),
        ("thm2.3", "timelike.json", Some("timelike_twisted.json")),
        ("thm1.2", "sphere_arm.json", Some("sphere_arm_open.json")),
        ("eq1.1", "convex_oval.json", None),
    ] {
        let mut args = vec!["verify".to_string(), theorem.to_string(), spec(a)];
        args.extend(b.map(spec));
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let (code, rep) = verify_report(&args);
        assert_eq!(code, 0, "{theorem}: {rep}");
        assert_eq!(rep["outcome"], "pass", "{theorem}");
        assert_eq!(rep["theorem"], theorem);
    }
}

#[test]
fn violated_hypothesis_skips_conclusions() {
    let (code, rep) = verify_report(&["verify", "thm1.1", &spec("line.json"), &spec("arc.json")]);
    assert_eq!(code, 0);
    assert_eq!(rep["outcome"], "hypotheses-violated");
    assert_eq!(rep["conclusions_skipped"], true);
    assert!(rep["conclusions"].as_array().unwrap().is_empty());
    let failed: Vec<&str> = rep["hypotheses"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["pass"] == false)
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    assert_eq!(failed, ["curvature domination k >= |k~|"]);
}

#[test]
fn input_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"geometry": "plane", "length": 1, "curvature": {"preset": "constant"}}"#).unwrap();
    for args in [
        vec!["verify".to_string(), "thm1.1".into(), bad.to_string_lossy().into_owned(), spec("line.json")],
        vec!["verify".into(), "thm1.1".into(), spec("arc.json"), spec("timelike.json")],
        vec!["verify".into(), "thm1.1".into(), spec("arc.json"), spec("circle.json")],
        vec!["verify".into(), "thm1.1".into(), spec("arc.json")],
        vec!["verify".into(), "thm7".into(), spec("arc.json"), spec("line.json")],
        vec!["sweep".into(), "thm1.1".into(), spec("arc.json"), spec("line.json"), "--grid".into(), "1".into()],
        vec!["verify".into(), "thm1.1".into(), spec("arc.json"), spec("line.json"), "--range".into(), "2:1".into()],
    ] {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let out = schurkit(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    }
}

#[test]
fn reports_are_byte_identical() {
    let args = ["verify", "corollary", &spec("arc.json"), &spec("helix_arc.json")];
    let (a, b) = (schurkit(&args), schurkit(&args));
    assert_eq!(a.stdout, b.stdout);
    assert!(!a.stdout.is_empty());
}

#[test]
fn sweep_of_identical_curves_has_zero_slack() {
    let out = schurkit(&["sweep", "thm1.1", &spec("arc.json"), &spec("arc.json"), "--grid", "6"]);
    assert_eq!(out.status.code(), Some(0));
    let mut r = csv::Reader::from_reader(out.stdout.as_slice());
    let header = r.headers().unwrap().clone();
    let (mono, chord) = (
        header.iter().position(|h| h == "min_slack").unwrap(),
        header.iter().position(|h| h == "chord_slack").unwrap(),
    );
    let mut n = 0;
    for rec in r.records() {
        let rec = rec.unwrap();
        assert!(rec[mono].parse::<f64>().unwrap().abs() <= 1e-9);
        assert!(rec[chord].parse::<f64>().unwrap().abs() <= 1e-9);
        n += 1;
    }
    assert_eq!(n, 15);
}

#[test]
fn sweep_circle_vs_helix_passes() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("sweep.json");
    let out = schurkit(&[
        "sweep",
        "thm1.1",
        &spec("arc.json"),
        &spec("helix_arc.json"),
        "--report",
        &report.to_string_lossy(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let rep: serde_json::Value = serde_json::from_slice(&std::fs::read(&report).unwrap()).unwrap();
    assert_eq!(rep["outcome"], "pass");
    assert_eq!(rep["details"]["pairs"], 45);
    assert_eq!(rep["config"]["grid"], 10);
}

#[test]
fn project_writes_lifted_samples() {
    let dir = tempfile::tempdir().unwrap();
    let summary = dir.path().join("summary.json");
    let out = schurkit(&[
        "project",
        &spec("sphere_arm.json"),
        &spec("sphere_arm_open.json"),
        "--report",
        &summary.to_string_lossy(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let (header, rows) = rows(&out.stdout);
    assert_eq!(header.len(), 14);
    let (tau, jump) = (column(&header, "tau"), column(&header, "jump"));
    assert_eq!(rows.iter().filter(|r| r[jump] == 1.0).count(), 2);
    assert!(rows.windows(2).all(|w| w[1][tau] >= w[0][tau]));
    let s: serde_json::Value = serde_json::from_slice(&std::fs::read(&summary).unwrap()).unwrap();
    assert_eq!(s["dominance"]["pass"], true);
}

#[test]
fn horizon_plane_is_an_input_error() {
    let out = schurkit(&["project", &spec("sphere_arm.json"), &spec("sphere_arm_open.json"), "--plane", "1,0,0,1"]);
    assert_eq!(out.status.code(), Some(2), "{}", String::from_utf8_lossy(&out.stderr));
}
