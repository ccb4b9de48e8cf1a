use std::path::Path;
use std::process::{Command, Output};

fn topocent(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_topocent"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn workspace() -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("p3.el"), "0 1\n1 2\n").unwrap();
    std::fs::write(dir.path().join("k3.el"), "a b\nb c\nc a\n").unwrap();
    std::fs::write(dir.path().join("split.el"), "0 1\n2 3\n").unwrap();
    dir
}

#[test]
fn analyze_path_json() {
    let dir = workspace();
    let out = topocent(dir.path(), &["analyze", "p3.el", "--json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let cstar: Vec<f64> = v["nodes"].as_array().unwrap().iter().map(|n| n["cstar"].as_f64().unwrap()).collect();
    for (got, want) in cstar.iter().zip([1.8, 4.5, 1.8]) {
        assert!((got - want).abs() < 1e-9);
    }
    assert!((v["graph"]["kirchhoff"].as_f64().unwrap() - 4.0 / 3.0).abs() < 1e-9);
    assert_eq!(v["graph"]["kirchhoff_convention"], "trace");
}

#[test]
fn analyze_triangle_text() {
    let dir = workspace();
    let out = topocent(dir.path(), &["analyze", "k3.el"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("kirchhoff 0.6667"));
}

#[test]
fn io_and_graph_errors_exit_2() {
    let dir = workspace();
    let missing = topocent(dir.path(), &["analyze", "missing.el"]);
    assert_eq!(missing.status.code(), Some(2));
    let split = topocent(dir.path(), &["analyze", "split.el"]);
    assert_eq!(split.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&split.stderr).contains("disconnected"));
    let usage = topocent(dir.path(), &["verify", "--only", "nonsense"]);
    assert_eq!(usage.status.code(), Some(2));
}

#[test]
fn verify_single_suite_passes() {
    let dir = workspace();
    let out = topocent(dir.path(), &["verify", "--only", "theorem1", "--n", "12"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("PASS detour."));
    assert_eq!(text.lines().count(), 1);
}

#[test]
fn verify_unattainable_tolerance_exits_1_with_instance() {
    let dir = workspace();
    let out = topocent(dir.path(), &["verify", "detour", "--tolerance", "1e-30", "--n", "6"]);
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    assert!(text.contains("FAIL detour.avg_detour_eq_lplus_diag"));
    assert!(text.contains("# failing instance"));
}

#[test]
fn verify_is_byte_identical() {
    let dir = workspace();
    let args = ["verify", "--only", "montecarlo", "--seed", "7", "--runs", "20000"];
    let a = topocent(dir.path(), &args);
    let b = topocent(dir.path(), &args);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn verify_forest_census_table() {
    let dir = workspace();
    let out = topocent(dir.path(), &["verify", "forests", "--input", "p3.el"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("eps_n1 3") && text.contains("eps_n2 4"));
}

#[test]
fn walk_reports_exact_and_estimate() {
    let dir = workspace();
    let out = topocent(dir.path(), &["walk", "p3.el", "--from", "0", "--to", "2", "--runs", "20000", "--json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["exact"].as_f64().unwrap(), 4.0);
    let est = &v["estimate"];
    let (mean, se) = (est["mean"].as_f64().unwrap(), est["std_error"].as_f64().unwrap());
    assert!((mean - 4.0).abs() <= 4.0 * se);
    assert_eq!(est["runs"], 20000);
    assert_eq!(est["seed"], 42);
    assert_eq!(v["dense_approx"]["convention"], "source-degree");
}

#[test]
fn walk_is_independent_of_workers() {
    let dir = workspace();
    let run = |w: &str| topocent(dir.path(), &["walk", "k3.el", "--from", "a", "--to", "c", "--workers", w]).stdout;
    assert_eq!(run("1"), run("3"));
}

#[test]
fn een_netlist() {
    let dir = workspace();
    let out = topocent(dir.path(), &["een", "export", "p3.el"]);
    assert_eq!(stdout(&out), "0 1 R=1.0\n1 2 R=1.0\n");
}

#[test]
fn compare_csv_header() {
    let dir = workspace();
    let out = topocent(dir.path(), &["compare", "p3.el"]);
    let text = stdout(&out);
    assert!(text.starts_with("node,degree,GC,SC,GB,RB,C*,"));
    assert_eq!(text.lines().count(), 4);
}

#[test]
fn reference_pipeline() {
    let dir = workspace();
    assert!(topocent(dir.path(), &["gen", "--preset", "paper", "-o", "ref.el"]).status.success());
    assert!(topocent(dir.path(), &["perturb", "ref.el", "--preset", "pert1", "-o", "p1.el"]).status.success());
    assert!(topocent(dir.path(), &["perturb", "p1.el", "--preset", "pert2", "-o", "p2.el"]).status.success());
    let out = topocent(dir.path(), &["sensitivity", "p1.el", "p2.el", "--json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["deltas"]["randic"].as_f64().unwrap(), 0.0);
    for key in ["before", "after", "deltas", "directions"] {
        assert!(v.get(key).is_some(), "{key}");
    }
    let dot = stdout(&topocent(dir.path(), &["export-dot", "ref.el", "--metric", "cstar"]));
    assert!(dot.starts_with("graph G {") && dot.contains("\"v1\" [fillcolor=\"0.0000 "));
}

#[test]
fn output_flag_writes_file() {
    let dir = workspace();
    let out = topocent(dir.path(), &["analyze", "p3.el", "--csv", "--output", "out.csv"]);
    assert!(out.status.success() && out.stdout.is_empty());
    let text = std::fs::read_to_string(dir.path().join("out.csv")).unwrap();
    assert!(text.starts_with("id,label,lplus_diag,cstar"));
}
