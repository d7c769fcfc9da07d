use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_khsheet"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn run_in(dir: &Path, args: &[&str]) -> Output {
    bin().current_dir(dir).args(args).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn crate_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn assert_schema(name: &str, doc: &Value) {
    let schema = read_json(&crate_dir().join("schemas").join(format!("{name}.schema.json")));
    let v = jsonschema::validator_for(&schema).unwrap();
    let errors: Vec<String> = v.iter_errors(doc).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{name}: {errors:?}");
}

/// CSV rows as string records.
fn csv_rows(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let header = r.headers().unwrap().iter().map(String::from).collect();
    let rows = r.records().map(|x| x.unwrap().iter().map(String::from).collect()).collect();
    (header, rows)
}

fn column(header: &[String], name: &str) -> usize {
    header.iter().position(|h| h == name).unwrap()
}

#[test]
fn analyze_reports_the_euler_root() {
    let o = run(&["analyze", "--k", "0", "--m", "1"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let (h, rows) = csv_rows(&String::from_utf8(o.stdout).unwrap());
    assert_eq!(h[..9], ["K", "M", "c", "x1_sq", "x2_sq", "X1", "u_low", "u_upp", "classification"]);
    assert_eq!(rows.len(), 1);
    let x1_sq: f64 = rows[0][column(&h, "x1_sq")].parse().unwrap();
    assert!((x1_sq - 0.2360680).abs() < 1e-7);
    assert!(!rows[0][column(&h, "C1")].is_empty());
}

#[test]
fn analyze_window_endpoints_vanish() {
    for k in [0.0f64, 1.0, 2.0] {
        let top = (k * k + 2.0).sqrt();
        let o = run(&["analyze", "--k", &k.to_string(), "--m", &format!("{k},{top}")]);
        assert_eq!(code(&o), 0);
        let (h, rows) = csv_rows(&String::from_utf8(o.stdout).unwrap());
        for r in rows {
            let x: f64 = r[column(&h, "x1_sq")].parse().unwrap();
            assert!(x.abs() < 1e-12, "{x}");
            assert!(r[column(&h, "C1")].is_empty());
        }
    }
}

#[test]
fn analyze_empty_sweep_and_bad_config() {
    assert_eq!(code(&run(&["analyze", "--m", ""])), 1);
    let dir = TempDir::new().unwrap();
    let cfg = dir.path().join("bad.json");
    std::fs::write(&cfg, r#"{"analyze": {"k": [0], "mach": [1]}}"#).unwrap();
    let o = run(&["analyze", "--config", cfg.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("unknown field"), "{}", stderr(&o));
    std::fs::write(&cfg, "{not json").unwrap();
    assert_eq!(code(&run(&["analyze", "--config", cfg.to_str().unwrap()])), 2);
    assert_eq!(code(&run(&["analyze", "--k", "x"])), 2);
    assert_eq!(code(&run(&["analyze", "--k", "0", "--m", "1", "--c", "-1"])), 2);
}

#[test]
fn on_shell_mode_metadata() {
    let dir = TempDir::new().unwrap();
    let o = run_in(dir.path(), &["mode", "--k", "0.5", "--m", "1.2", "--eta", "2", "-o", "mode.csv"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let meta = read_json(&dir.path().join("mode.json"));
    assert_schema("mode_metadata", &meta);
    assert!(meta["on_shell"].as_bool().unwrap());
    assert!(meta["residual"]["max"].as_f64().unwrap() <= 1e-10);
    let (h, rows) = csv_rows(&std::fs::read_to_string(dir.path().join("mode.csv")).unwrap());
    assert_eq!(h, ["x1", "x2", "field", "value"]);
    // 9 x1 samples, each with the front and 17 x2 samples of 7 fields
    assert_eq!(rows.len(), 9 * (1 + 17 * 7));
}

#[test]
fn fluid_mode_has_no_deformation() {
    let o = run(&["mode", "--k", "0", "--m", "1"]);
    assert_eq!(code(&o), 0);
    let (_, rows) = csv_rows(&String::from_utf8(o.stdout).unwrap());
    let mut seen = 0;
    for r in rows.iter().filter(|r| r[2].starts_with('E')) {
        assert_eq!(r[3].parse::<f64>().unwrap(), 0.0);
        seen += 1;
    }
    assert!(seen > 0);
    assert!(rows.iter().any(|r| r[2] == "h" && r[3].parse::<f64>().unwrap() != 0.0));
}

#[test]
fn mode_outside_the_window() {
    let o = run(&["mode", "--k", "0", "--m", "1.6"]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("no unstable root"));
    // an explicit off-shell tau is allowed and flagged
    let o = run(&["mode", "--k", "0", "--m", "1", "--tau", "0.3,0.1", "--format", "json"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let doc: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_schema("table_document", &doc);
    assert_schema("mode_metadata", &doc["summary"]);
    assert!(!doc["summary"]["on_shell"].as_bool().unwrap());
}

#[test]
fn simulate_defaults_track_the_growth_rate() {
    let dir = TempDir::new().unwrap();
    let o = run_in(dir.path(), &["simulate", "--k", "0", "--m", "1", "--eta", "1", "-o", "sim.csv", "--plot-data", "plots"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let s = read_json(&dir.path().join("sim.json"));
    assert_schema("simulate_summary", &s);
    assert!(s["relative_error"].as_f64().unwrap() <= 0.02, "{s}");
    assert!(s["abscissa_relative_error"].as_f64().unwrap() <= 0.02);
    assert!(!s["reflection_warning"].as_bool().unwrap());
    let (h, rows) = csv_rows(&std::fs::read_to_string(dir.path().join("sim.csv")).unwrap());
    assert_eq!(h, ["t", "log_norm", "energy", "residual"]);
    assert_eq!(rows.len() as u64, s["steps"].as_u64().unwrap() + 1);
    assert!(dir.path().join("plots/log_norm.dat").exists());
}

#[test]
fn simulate_rejects_a_large_step() {
    let o = run(&["simulate", "--k", "0", "--m", "1", "--dt", "0.5"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("CFL"));
    assert!(o.stdout.is_empty());
}

#[test]
fn simulate_warns_about_reflections() {
    let dir = TempDir::new().unwrap();
    let o = run_in(
        dir.path(),
        &["simulate", "--k", "0", "--m", "1", "--points", "48", "--length", "6", "--t-end", "8", "--method", "dense", "-o", "s.csv"],
    );
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let s = read_json(&dir.path().join("s.json"));
    assert_schema("simulate_summary", &s);
    assert!(s["reflection_warning"].as_bool().unwrap());
}

#[test]
fn hadamard_table() {
    let o = run(&["hadamard", "--k", "0", "--m", "1", "--n-list", "5,10,20", "--alpha", "2", "--format", "json"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let doc: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_schema("table_document", &doc);
    assert_schema("hadamard_summary", &doc["summary"]);
    assert_eq!(doc["summary"]["n_star"], 12);
    let ratios: Vec<f64> = doc["rows"].as_array().unwrap().iter().map(|r| r["log10_ratio"].as_f64().unwrap()).collect();
    assert_eq!(ratios.len(), 3);
    assert!(ratios.windows(2).all(|w| w[1] > w[0]), "{ratios:?}");

    let o = run(&["hadamard", "--k", "0", "--m", "1", "--n-list", "5"]);
    let (h, _) = csv_rows(&String::from_utf8(o.stdout).unwrap());
    let want = ["n", "norm_f0", "norm_h0", "norm_v0", "norm_G0", "norm_f_T", "norm_h_T", "norm_v_T", "norm_G_T", "log10_ratio"];
    assert_eq!(h, want);
}

#[test]
fn hadamard_huge_norms_are_powers_of_ten() {
    let o = run(&["hadamard", "--k", "0", "--m", "1", "--n-list", "2000", "--t0", "1"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let (h, rows) = csv_rows(&String::from_utf8(o.stdout).unwrap());
    let cell = &rows[0][column(&h, "norm_f_T")];
    let l: f64 = cell.strip_prefix("10^").expect(cell).parse().unwrap();
    assert!(l > 300.0);
}

#[test]
fn hadamard_usage_errors() {
    let o = run(&["hadamard", "--k", "0", "--m", "1", "--j", "2", "--k-reg", "3"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("at least"));
    let o = run(&["hadamard"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("missing background"));
}

#[test]
fn flags_override_the_config() {
    let dir = TempDir::new().unwrap();
    let cfg = dir.path().join("c.json");
    std::fs::write(
        &cfg,
        r#"{"background": {"rho_dot": 1, "v1_plus": 1, "g11_plus": 0, "g12_plus": 0, "c": 1},
            "mode": {"eta": 3}, "output": {"path": "from_config.csv"}}"#,
    )
    .unwrap();
    let o = run_in(dir.path(), &["mode", "--config", "c.json", "--v1-plus", "1.2", "-o", "flag.csv"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(!dir.path().join("from_config.csv").exists());
    let meta = read_json(&dir.path().join("flag.json"));
    assert_eq!(meta["background"]["v1_plus"], 1.2);
    assert_eq!(meta["eta"], 3.0);
}

#[test]
fn output_is_deterministic_across_thread_counts() {
    let mut outs = Vec::new();
    for threads in ["1", "3"] {
        for cmd in [
            vec!["analyze", "--k", "0:2:5", "--m", "0:2.5:11"],
            vec!["hadamard", "--k", "0.5", "--m", "1.2", "--n-list", "3,6"],
            vec!["simulate", "--k", "0.5", "--m", "1.2", "--points", "64", "--length", "15", "--t-end", "4", "--format", "json"],
        ] {
            let o = bin().env("KHSHEET_THREADS", threads).args(&cmd).output().unwrap();
            assert_eq!(code(&o), 0, "{}", stderr(&o));
            outs.push(o.stdout);
        }
    }
    assert_eq!(outs[..3], outs[3..]);
    let o = bin().env("KHSHEET_THREADS", "0").args(["analyze"]).output().unwrap();
    assert_eq!(code(&o), 2);
}

#[test]
fn shipped_configs_are_valid() {
    let dir = crate_dir().join("configs");
    let mut n = 0;
    for entry in std::fs::read_dir(&dir).unwrap() {
        let path = entry.unwrap().path();
        let doc = read_json(&path);
        assert_schema("run_config", &doc);
        khsheet::RunConfig::load(&path).unwrap();
        n += 1;
    }
    assert_eq!(n, 4);
}

#[test]
fn help_and_version_succeed() {
    assert_eq!(code(&run(&["--help"])), 0);
    assert_eq!(code(&run(&["--version"])), 0);
    assert_eq!(code(&run(&["frobnicate"])), 2);
}
