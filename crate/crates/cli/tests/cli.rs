use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn intcheb(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_intcheb")).args(args).env_remove("INTCHEB_THREADS").output().unwrap()
}

fn json_of(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

#[test]
fn equilibrium_support_and_robin_constant() {
    let v = json_of(&intcheb(&["equilibrium", "--alpha1", "0.25", "--alpha2", "0"]));
    let r = &v["result"];
    assert!((r["a"].as_f64().unwrap() - 0.0625).abs() < 1e-12);
    assert!((r["b"].as_f64().unwrap() - 0.25).abs() < 1e-12);
    assert!((r["F_w"].as_f64().unwrap() - (4096.0f64 / 27.0).ln()).abs() < 1e-9);
    assert_eq!(v["config"]["command"], "equilibrium");
    assert_eq!(v["config"]["alpha1"], 0.25);
}

#[test]
fn lemniscate_of_z_is_exact() {
    let v = json_of(&intcheb(&["lemniscate", "--poly", "0,1", "--r", "0.5"]));
    let reports = v["result"].as_array().unwrap();
    assert_eq!(reports.len(), 1);
    assert_eq!(reports[0]["kind"], "exact");
    assert_eq!(reports[0]["value"], 0.5);
}

fn read_region(path: &Path) -> (Vec<String>, Vec<Vec<f64>>) {
    let text = std::fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("# config: {"));
    let header: Vec<String> = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines.map(|l| l.split(',').map(|x| x.parse().unwrap()).collect()).collect();
    (header, rows)
}

#[test]
fn two_factor_region_box() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("region.csv");
    let out = intcheb(&[
        "region",
        "--factors",
        "z:*,4z-1:*",
        "--m",
        "0.179335",
        "--step",
        "0.0005",
        "-o",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stdout).contains("feasible"));
    let (header, rows) = read_region(&path);
    assert_eq!(header, ["alpha1", "alpha2", "l_1", "l_2", "feasible"]);
    let feasible: Vec<&Vec<f64>> = rows.iter().filter(|r| r[4] == 1.0).collect();
    let span = |i: usize| {
        let xs = feasible.iter().map(|r| r[i]);
        (xs.clone().fold(f64::INFINITY, f64::min), xs.fold(f64::NEG_INFINITY, f64::max))
    };
    let (a_lo, a_hi) = span(0);
    let (b_lo, b_hi) = span(1);
    let step = 0.0005 + 1e-9;
    assert!((a_lo - 0.2961).abs() <= step && (a_hi - 0.3634).abs() <= step, "alpha1 [{a_lo}, {a_hi}]");
    assert!((b_lo - 0.0952).abs() <= step && (b_hi - 0.1767).abs() <= step, "alpha2 [{b_lo}, {b_hi}]");
}

#[test]
fn csv_floats_have_nine_significant_digits() {
    let out = intcheb(&["region", "--factors", "z:*,4z-1:*", "--step", "0.05"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut longest = 0;
    for line in text.lines().skip(2) {
        for field in line.split(',') {
            let digits = field.trim_start_matches(['-', '0', '.']).chars().filter(char::is_ascii_digit).count();
            longest = longest.max(digits);
            assert!(digits <= 9, "{field}");
        }
    }
    assert_eq!(longest, 9);
}

#[test]
fn identical_configs_give_identical_bytes() {
    let args = ["sweep", "--factors", "z:*,4z-1:*", "--objective", "lower", "--step", "0.01"];
    let a = intcheb(&args);
    let b = intcheb(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn config_file_reproduces_and_flags_override() {
    let first = json_of(&intcheb(&["sweep", "--factors", "z:*,4z-1:*", "--step", "0.01"]));
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.json");
    std::fs::write(&path, serde_json::to_string(&first["config"]).unwrap()).unwrap();
    let again = json_of(&intcheb(&["--config", path.to_str().unwrap()]));
    assert_eq!(first, again);

    let lower = json_of(&intcheb(&["sweep", "--config", path.to_str().unwrap(), "--objective", "lower"]));
    assert_eq!(lower["config"]["objective"], "lower");
    assert_eq!(lower["config"]["step"], 0.01);
    assert_eq!(lower["result"]["kind"], "lower");
}

#[test]
fn exact_search_reports_degree_two_optimum() {
    let v = json_of(&intcheb(&["exact", "--degree", "4", "--domain", "0:1"]));
    let rows = v["result"].as_array().unwrap();
    assert_eq!(rows.len(), 4);
    assert_eq!(rows[1]["record"]["norm"], 0.25);
    assert_eq!(rows[1]["record"]["polynomial"], serde_json::json!([0, -1, 1]));
}

#[test]
fn construct_returns_an_integer_polynomial() {
    let v = json_of(&intcheb(&["construct", "--degree", "8", "--domain", "0:1"]));
    let c = &v["result"]["construction"];
    assert!(c["certified_bound"].as_f64().unwrap() > 0.0);
    assert_eq!(v["result"]["nodes"].as_array().unwrap().len(), 9);
}

#[test]
fn leja_estimates_capacity_of_symmetric_interval() {
    let v = json_of(&intcheb(&["leja", "--domain", "-2:2", "--leja-length", "2000"]));
    let cap = v["result"]["equilibrium"]["weighted_capacity"]["value"].as_f64().unwrap();
    // Independent numpy Leja run (800k-point grid) gives 1.00246 at n = 2000.
    assert!((cap - 1.00246).abs() < 2e-4, "{cap}");
}

#[test]
fn fixed_weight_bounds_use_the_closed_form() {
    let up = json_of(&intcheb(&["bound", "upper", "--factors", "z:0.580894,4z-1:0.09"]));
    assert!((up["result"]["best"].as_f64().unwrap() - 0.18043338).abs() < 1e-4);
    assert_eq!(up["result"]["reports"][0]["parameters"]["mode"], "closed-form");
    let low = json_of(&intcheb(&["bound", "lower", "--factors", "z:0.660666,4z-1:0.128"]));
    assert!((low["result"]["best"].as_f64().unwrap() - 0.176056).abs() < 5e-4);
}

#[test]
fn invalid_input_exits_with_two() {
    assert_eq!(code(&intcheb(&[])), 2);
    assert_eq!(code(&intcheb(&["bound"])), 2);
    assert_eq!(code(&intcheb(&["lemniscate", "--poly", "0,1", "--r", "1.5"])), 2);
    assert_eq!(code(&intcheb(&["equilibrium", "--alpha1", "0.4", "--alpha2", "0.3"])), 2);
    assert_eq!(code(&intcheb(&["leja", "--factors", "z:*"])), 2);
    assert_eq!(code(&intcheb(&["sweep", "--factors", "z:0.1"])), 2);
    assert_eq!(code(&intcheb(&["exact", "--degree", "3", "--domain", "0:1,2:3"])), 2);
    assert_eq!(code(&intcheb(&["bound", "upper", "--mode", "closed-form", "--factors", "5z-1:0.1"])), 2);
    let bad_flag = intcheb(&["region", "--factors", "z"]);
    assert_eq!(code(&bad_flag), 2);
    let msg = String::from_utf8_lossy(&bad_flag.stderr);
    assert!(msg.contains("--factors") && msg.contains("EXPONENT"), "{msg}");
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, r#"{"command": "sweep", "stepp": 0.1}"#).unwrap();
    assert_eq!(code(&intcheb(&["--config", path.to_str().unwrap()])), 2);
}

#[test]
fn numerical_failure_exits_with_three() {
    // 1/3 lies inside the support of the equilibrium measure.
    let out = intcheb(&["bound", "lower", "--domain", "0:1", "--factors", "z:0.1", "--zetas", "1/3", "--leja-length", "200"]);
    assert_eq!(code(&out), 3, "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn thread_variable_is_validated() {
    let run = |v: &str| {
        Command::new(env!("CARGO_BIN_EXE_intcheb"))
            .args(["lemniscate", "--poly", "0,1", "--r", "0.5"])
            .env("INTCHEB_THREADS", v)
            .output()
            .unwrap()
    };
    assert_eq!(code(&run("1")), 0);
    assert_eq!(code(&run("0")), 2);
    assert_eq!(code(&run("many")), 2);
}
