use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn cpc(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cpc"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

const HAMMING_CROSS: &str = "1-2,1-3,1-4,2-3,2-5,3-6,4-5,4-6,5-6";

fn build(dir: &Path, out: &str, extra: &[&str]) {
    let mut args = vec!["build", "-o", out];
    args.extend_from_slice(extra);
    let o = cpc(dir, &args);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
}

#[test]
fn no_arguments_prints_usage_and_exits_1() {
    let dir = TempDir::new().unwrap();
    let o = cpc(dir.path(), &[]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("Usage: cpc"));
    let o = cpc(dir.path(), &["distance", "--no-such-flag"]);
    assert_eq!(o.status.code(), Some(1));
    let o = cpc(dir.path(), &["--help"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn stabilizers_of_the_4_2_2_code() {
    let dir = TempDir::new().unwrap();
    build(dir.path(), "b.json", &["--bit", "detect-3-2-2", "--phase", "detect-3-2-2", "--cross", "1-2"]);
    let o = cpc(dir.path(), &["stabilizers", "b.json"]);
    assert_eq!(stdout(&o), "Z_D1 Z_D2 Z_p1 X_p2\nX_D1 X_D2 X_p1 Z_p2\n");
    let o = cpc(dir.path(), &["stabilizers", "b.json", "--binary"]);
    assert_eq!(stdout(&o), "0001|1110\n1110|0001\n");
}

#[test]
fn hamming_bundle_reproduces_the_syndrome_table() {
    let dir = TempDir::new().unwrap();
    build(
        dir.path(),
        "b.json",
        &["--bit", "hamming-7-4-3-bit", "--phase", "hamming-7-4-3-phase", "--cross", HAMMING_CROSS],
    );
    let o = cpc(dir.path(), &["syndromes", "b.json", "--format", "table"]);
    let text = stdout(&o);
    let expected = [
        "1        111 000  000 111  111 111  data",
        "5        100 000  011 100  111 100  parity",
        "10       000 001  011 110  011 111  parity",
    ];
    for line in expected {
        assert!(text.lines().any(|l| l == line), "missing {line:?} in\n{text}");
    }
    assert_eq!(text.lines().count(), 11);

    let o = cpc(dir.path(), &["syndromes", "b.json", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["entries"].as_array().unwrap().len(), 30);
    assert_eq!(v["unique"], true);

    let o = cpc(dir.path(), &["distance", "b.json", "--max-weight", "3"]);
    assert!(stdout(&o).starts_with("distance 3\n"), "{}", stdout(&o));
    let o = cpc(dir.path(), &["distance", "b.json", "--max-weight", "2"]);
    assert_eq!(stdout(&o), "distance >=3\n");
}

#[test]
fn reference_build_matches_explicit_build() {
    let dir = TempDir::new().unwrap();
    build(dir.path(), "a.json", &["--reference", "10-4-3"]);
    build(
        dir.path(),
        "b.json",
        &["--bit", "hamming-7-4-3-bit", "--phase", "hamming-7-4-3-phase", "--cross", HAMMING_CROSS],
    );
    let a: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("a.json")).unwrap()).unwrap();
    let b: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("b.json")).unwrap()).unwrap();
    assert_eq!(a["g_xz"], b["g_xz"]);
    assert_eq!(a["syndromes"], b["syndromes"]);
}

#[test]
fn malformed_json_is_a_data_error_with_line_context() {
    let dir = TempDir::new().unwrap();
    std::fs::write(dir.path().join("bad.json"), "{\n  \"name\": \"x\",\n  \"graph\": [1,\n}\n").unwrap();
    let o = cpc(dir.path(), &["stabilizers", "bad.json"]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.contains("bad.json:4:"), "{err}");
    assert!(err.contains("4 | }"), "{err}");

    let o = cpc(dir.path(), &["stabilizers", "missing.json"]);
    assert_eq!(o.status.code(), Some(2));
    let o = cpc(dir.path(), &["build", "--bit", "nope", "--phase", "detect-3-2-2"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn tampered_bundle_is_rejected() {
    let dir = TempDir::new().unwrap();
    build(dir.path(), "b.json", &["--reference", "4-2-2"]);
    let path = dir.path().join("b.json");
    let mut v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    v["metadata"]["claimed_distance"] = serde_json::json!(3);
    std::fs::write(&path, v.to_string()).unwrap();
    let o = cpc(dir.path(), &["distance", "b.json"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("metadata"));
}

#[test]
fn incompatible_codes_are_a_data_error() {
    let dir = TempDir::new().unwrap();
    let o = cpc(dir.path(), &["build", "--bit", "detect-3-2-2", "--phase", "hamming-7-4-3-phase"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("encodes"));
}

#[test]
fn classical_code_files_are_accepted() {
    let dir = TempDir::new().unwrap();
    std::fs::write(dir.path().join("rep.json"), r#"{"name":"rep","k":2,"checks":[[0,1]]}"#).unwrap();
    build(dir.path(), "b.json", &["--bit", "rep.json", "--phase", "rep.json", "--cross", "1-2"]);
    let o = cpc(dir.path(), &["distance", "b.json"]);
    assert!(stdout(&o).starts_with("distance 2"));
}

#[test]
fn monte_carlo_csv_is_reproducible() {
    let dir = TempDir::new().unwrap();
    build(dir.path(), "b.json", &["--reference", "10-4-3"]);
    let args = ["montecarlo", "b.json", "--p", "0.01,0.05", "--shots", "30000", "--seed", "7", "--out", "a.csv"];
    assert_eq!(cpc(dir.path(), &args).status.code(), Some(0));
    let mut seq = args.to_vec();
    seq[9] = "b.csv";
    seq.push("--sequential");
    assert_eq!(cpc(dir.path(), &seq).status.code(), Some(0));
    let a = std::fs::read_to_string(dir.path().join("a.csv")).unwrap();
    let b = std::fs::read_to_string(dir.path().join("b.csv")).unwrap();
    assert_eq!(a, b);
    let lines: Vec<&str> = a.lines().collect();
    assert_eq!(lines[0], "p,shots,failures,rate,stderr,seed");
    assert_eq!(lines.len(), 3);
    assert!(lines[1].starts_with("0.01,30000,"));

    let o = cpc(dir.path(), &["montecarlo", "b.json", "--p", "1.5"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn search_finds_and_reports_failure() {
    let dir = TempDir::new().unwrap();
    build(dir.path(), "a.json", &["--reference", "4-2-1"]);
    let o = cpc(dir.path(), &["search", "a.json", "--target-d", "2", "-o", "found.json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).starts_with("found: cross 1-2 "), "{}", stdout(&o));
    let o = cpc(dir.path(), &["distance", "found.json"]);
    assert!(stdout(&o).starts_with("distance 2"));

    build(dir.path(), "b.json", &["--reference", "4-2-2"]);
    let o = cpc(dir.path(), &["search", "b.json", "--target-d", "3"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("every candidate set was examined"));

    let o = cpc(dir.path(), &["search", "b.json", "--target-d", "9"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn graph_files_annotate_translate_and_export() {
    let dir = TempDir::new().unwrap();
    // the [[4,2,1]] graph, written by hand without annotation
    std::fs::write(
        dir.path().join("g.json"),
        r#"{"num_data":2,"num_parity":2,"bit_edges":[[0,0],[1,0]],"phase_edges":[[0,1],[1,1]],"cross_edges":[]}"#,
    )
    .unwrap();
    let o = cpc(dir.path(), &["annotate", "g.json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["annotated"], true);
    assert_eq!(v["virtual_edges"], serde_json::json!([]));

    let o = cpc(dir.path(), &["translate", "g.json"]);
    assert!(stdout(&o).contains("unconnected: p1.phase p2.phase"), "{}", stdout(&o));

    let o = cpc(dir.path(), &["export-dot", "g.json"]);
    let dot = stdout(&o);
    assert!(dot.contains("D1 [shape=triangle]") && dot.contains("D1 -- p1 [color=red]"));
    let o = cpc(dir.path(), &["export-dot", "g.json", "--view", "factor"]);
    assert!(stdout(&o).contains("shape=square"));
}
