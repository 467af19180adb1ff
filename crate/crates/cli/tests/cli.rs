use std::path::Path;
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_hopjc");

fn hopjc(args: &[&str]) -> Output {
    Command::new(BIN).args(args).env("RUST_LOG", "warn").output().unwrap()
}

fn write_config(dir: &Path, body: &str) -> String {
    let path = dir.join("run.toml");
    std::fs::write(&path, body).unwrap();
    path.display().to_string()
}

const SERIES: &str = r#"
[[scenario]]
name = "series"
initial_qubits = "eg"
alpha = 0.5
delta_over_g = 5.0
j_over_g = 1.0
t_max_over_pi = 2.0
n_steps = 9
protocol = "concurrence_series"
sweep = { parameter = "j_over_g", min = 0.0, max = 2.0, n_points = 3 }

[[scenario]]
name = "forward"
initial_qubits = "bell_plus"
alpha = 0.0
delta_over_g = 0.0
j_over_g = 0.0
t_max_over_pi = 1.0
n_steps = 3
protocol = "reciprocation_forward"

[[scenario]]
name = "full"
initial_qubits = "bell_plus"
alpha = 0.3
delta_over_g = 0.0
j_over_g = 0.1
t_max_over_pi = 1.0
n_steps = 5
protocol = "reciprocation_full"
"#;

fn read(dir: &Path, file: &str) -> String {
    std::fs::read_to_string(dir.join(file)).unwrap()
}

#[test]
fn writes_fixed_schemas_and_metadata() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), SERIES);
    let out = tmp.path().join("out");
    let res = hopjc(&["--config", &cfg, "--out", out.to_str().unwrap(), "--threads", "2"]);
    assert!(res.status.success(), "{}", String::from_utf8_lossy(&res.stderr));

    let series = read(&out, "series.csv");
    let mut lines = series.lines();
    assert_eq!(lines.next(), Some("gt_over_pi,J_over_g,concurrence,norm_error"));
    assert_eq!(series.lines().count(), 1 + 3 * 9);
    assert!(lines.next().unwrap().starts_with("0.00000000000e0,0.00000000000e0,"));

    let forward = read(&out, "forward.csv");
    let rows: Vec<&str> = forward.lines().collect();
    assert_eq!(rows[0], "gt_over_pi,alpha,P,epsilon,norm_error");
    // No gg amplitude at t = 0, so the entropy is undefined there.
    assert!(rows[1].contains(",null,"));
    // gt = π/2 of the uncoupled resonant case: P = 1, ε = 1.
    let mid: Vec<f64> = rows[2].split(',').map(|x| x.parse().unwrap()).collect();
    assert!((mid[2] - 1.0).abs() < 1e-9 && (mid[3] - 1.0).abs() < 1e-9);

    let full = read(&out, "full.csv");
    assert_eq!(
        full.lines().next(),
        Some("gt_over_pi,alpha,P,epsilon,norm_error,C_retrieved,C_projected,P_projection")
    );

    let meta: serde_json::Value = serde_json::from_str(&read(&out, "series.json")).unwrap();
    assert_eq!(meta["scenario"], "series");
    assert_eq!(meta["truncation"], 11);
    assert_eq!(meta["expensive"], false);
    assert!(meta["max_norm_error"].as_f64().unwrap() <= 1e-9);
    assert_eq!(meta["config_hash"].as_str().unwrap().len(), 64);
    assert_eq!(meta["points"].as_array().unwrap().len(), 3);
}

#[test]
fn output_is_byte_identical_across_runs_and_thread_counts() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), SERIES);
    let a = tmp.path().join("a");
    let b = tmp.path().join("b");
    assert!(hopjc(&["--config", &cfg, "--out", a.to_str().unwrap(), "--threads", "1"]).status.success());
    assert!(hopjc(&["--config", &cfg, "--out", b.to_str().unwrap(), "--threads", "3"]).status.success());
    for f in ["series.csv", "forward.csv", "full.csv"] {
        assert_eq!(read(&a, f), read(&b, f), "{f} differs");
    }
}

#[test]
fn empty_scenario_list_is_a_config_error() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "# nothing here\n");
    assert_eq!(hopjc(&["--config", &cfg]).status.code(), Some(2));
    assert_eq!(hopjc(&[]).status.code(), Some(2));
}

#[test]
fn invalid_scenarios_exit_with_config_code() {
    let tmp = tempfile::tempdir().unwrap();
    let bad = SERIES.replace("n_steps = 9", "n_steps = 1");
    let cfg = write_config(tmp.path(), &bad);
    assert_eq!(hopjc(&["--config", &cfg]).status.code(), Some(2));
    assert_eq!(hopjc(&["--scenario", "fig99"]).status.code(), Some(2));
}

#[test]
fn expensive_scenarios_need_the_flag() {
    let res = hopjc(&["--scenario", "fig5"]);
    assert_eq!(res.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&res.stderr).contains("--allow-expensive"));
}

#[test]
fn lists_bundled_scenarios_in_stable_order() {
    let a = hopjc(&["--list"]);
    let b = hopjc(&["--list"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    assert!(text.contains("fig2a: C vs (gt, J), Δ=5g, α=1, initial eg"));
    assert!(text.contains("fig6d: C vs (gt, Δ), J=0.5g, initial gg"));
    let names: Vec<&str> = text.lines().map(|l| l.split(':').next().unwrap()).collect();
    assert_eq!(names.first(), Some(&"fig2a"));
    assert_eq!(names.last(), Some(&"fig10f"));
    assert_eq!(names.len(), 37);
}

#[test]
fn bundled_scenario_runs() {
    let tmp = tempfile::tempdir().unwrap();
    let res = hopjc(&["--scenario", "fig7a", "--out", tmp.path().to_str().unwrap()]);
    assert!(res.status.success(), "{}", String::from_utf8_lossy(&res.stderr));
    let csv = read(tmp.path(), "fig7a.csv");
    assert_eq!(csv.lines().count(), 1 + 101 * 201);
    let meta: serde_json::Value = serde_json::from_str(&read(tmp.path(), "fig7a.json")).unwrap();
    assert_eq!(meta["leakage_flagged"], false);
}
