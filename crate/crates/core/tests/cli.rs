use std::path::Path;
use std::process::{Command, Output};

use fsrevival::infomeasures::entropy_power;
use fsrevival::pipeline::{read_csv, CSV_HEADER};

fn cli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fsrevival"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn text(b: &[u8]) -> String {
    String::from_utf8_lossy(b).into_owned()
}

fn write_config(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

const SMALL_BOUNCER: &str = "model = bouncer\nz0 = 25\nsigma = 1\npoints = 2048\nsamples = 120\nt_end = 1.0\nwindow = 5\n";

#[test]
fn bundled_configs_validate() {
    for name in ["bouncer_fig1", "ring_fig2"] {
        let out = cli(&["validate", name]);
        assert_eq!(out.status.code(), Some(0), "{}", text(&out.stderr));
        assert_eq!(text(&out.stdout).trim(), "ok");
    }
}

#[test]
fn negative_sigma_names_the_key() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "neg.conf", "model = bouncer\nsigma = -1\n");
    let out = cli(&["validate", &cfg]);
    assert_eq!(out.status.code(), Some(2));
    let lines: Vec<String> = text(&out.stdout).lines().map(String::from).collect();
    assert_eq!(lines.len(), 1);
    assert!(lines[0].starts_with("sigma:"));
}

#[test]
fn too_few_samples_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "few.conf", "model = bouncer\nsamples = 50\n");
    let out = cli(&["run", &cfg, "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(text(&out.stderr).contains("samples"));
}

#[test]
fn unknown_key_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "typo.conf", "model = ring\nradius = 50\n");
    for cmd in ["run", "validate", "schedule"] {
        let out = cli(&[cmd, &cfg]);
        assert_eq!(out.status.code(), Some(2));
        assert!(text(&out.stderr).contains("`radius`"), "{}", text(&out.stderr));
    }
    assert_eq!(cli(&["run"]).status.code(), Some(2));
    assert_eq!(cli(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(cli(&["validate", "no_such_config"]).status.code(), Some(2));
}

#[test]
fn schedule_prints_fraction_table() {
    let out = cli(&["schedule", "bouncer_fig1"]);
    assert_eq!(out.status.code(), Some(0));
    let s = text(&out.stdout);
    let rows: Vec<&str> = s.lines().filter(|l| l.contains('/') && !l.starts_with('#') && !l.starts_with("p/q")).collect();
    let labels: Vec<&str> = rows.iter().map(|r| r.split('\t').next().unwrap()).collect();
    assert_eq!(labels, ["1/4", "1/3", "1/2", "2/3", "3/4", "1/1"]);
    let t: f64 = rows[0].split('\t').nth(1).unwrap().parse().unwrap();
    assert!((t - 3183.10).abs() < 0.01);
}

#[test]
fn massless_ring_has_no_schedule() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "m.conf", "model = ring\nm0 = 15\ndelta_mev = 0\n");
    let out = cli(&["schedule", &cfg]);
    assert_eq!(out.status.code(), Some(2));
    assert!(text(&out.stderr).contains("unbounded"));
    let out = cli(&["validate", &cfg]);
    assert_eq!(out.status.code(), Some(2));
    assert!(text(&out.stdout).starts_with("delta_mev:"));
}

#[test]
fn ring_run_writes_csv_and_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = cli(&["run", "ring_fig2", "--out", dir.path().to_str().unwrap(), "--threads", "2", "--no-plot"]);
    assert_eq!(out.status.code(), Some(0), "{}", text(&out.stderr));
    let csv = std::fs::read_to_string(dir.path().join("ring_fig2.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), "# units: t in ns");
    assert_eq!(lines.next().unwrap(), CSV_HEADER);
    let rows = read_csv(&csv).unwrap();
    assert_eq!(rows.len(), 4000);
    for r in &rows {
        assert_eq!(r.var_p, None);
        assert_eq!(r.entropy_power, entropy_power(r.entropy));
        assert_eq!(r.product, r.fisher * r.entropy_power);
    }
    assert!(!dir.path().join("ring_fig2.svg").exists());
    let report = std::fs::read_to_string(dir.path().join("ring_fig2.txt")).unwrap();
    assert!(report.contains("T_r/2 (ns)"));
    assert!(report.contains("minima:"));
    assert!(report.contains("dominant spacing"));
}

#[test]
fn bouncer_run_writes_all_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "b.conf", SMALL_BOUNCER);
    let out_dir = dir.path().join("out");
    let out = cli(&["run", &cfg, "--out", out_dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", text(&out.stderr));
    let csv = std::fs::read_to_string(out_dir.join("series.csv")).unwrap();
    assert!(csv.starts_with("# units: t in scaled"));
    let rows = read_csv(&csv).unwrap();
    assert_eq!(rows.len(), 120);
    assert!((rows[0].product - 1.0).abs() < 1e-6);
    assert!(rows.iter().all(|r| r.var_p.is_some()));
    for r in &rows {
        assert_eq!(r.entropy_power, entropy_power(r.entropy));
        assert_eq!(r.product, r.fisher * r.entropy_power);
    }
    let svg = std::fs::read_to_string(out_dir.join("product.svg")).unwrap();
    assert!(svg.contains("stroke-dasharray"));
    assert!(out_dir.join("report.txt").exists());
}

#[test]
fn lost_probability_is_a_contract_failure() {
    // A grid that ends just above the packet cannot hold it once it spreads.
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "tight.conf", &format!("{SMALL_BOUNCER}z_max = 30\n"));
    let out = cli(&["run", &cfg, "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3), "{}", text(&out.stderr));
    assert!(text(&out.stderr).contains("contract"));
}
