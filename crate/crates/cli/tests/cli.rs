use lifshitz::constants::BOLTZMANN;
use lifshitz::dielectric::material_file::load_material;
use lifshitz::engine::{free_energy_plates, LifshitzJob};
use lifshitz::reflection::ReflectionPolicy;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::time::{Duration, Instant};

fn repo() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn cli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lifshitz"))
        .args(args)
        .current_dir(repo())
        .output()
        .unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// Data rows of a CSV output, split into fields.
fn rows(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(String::from).collect())
        .collect()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

#[test]
fn eps_of_vacuum_is_one() {
    let o = cli(&["eps", "--material", "materials/vacuum.toml", "--sweep", "1e10:1e18:9:log"]);
    assert_eq!(code(&o), 0);
    let r = rows(&stdout(&o));
    assert_eq!(r.len(), 9);
    assert!(r.iter().all(|f| f[1] == "1.00000000000e0" && f[2] == "ok"));
}

#[test]
fn eps_of_si_at_zero_frequency() {
    let o = cli(&["eps", "--material", "materials/si-lorentz.toml", "--sweep", "0:1e15:2"]);
    assert_eq!(code(&o), 0);
    assert_eq!(rows(&stdout(&o))[0][1], "1.18700000000e1");
}

#[test]
fn eps_large_grid_is_fast() {
    let start = Instant::now();
    let o = cli(&["eps", "--material", "materials/si-logband.toml", "--sweep", "1e10:1e18:10000:log"]);
    assert_eq!(code(&o), 0);
    assert!(start.elapsed() < Duration::from_secs(1));
    assert_eq!(rows(&stdout(&o)).len(), 10000);
}

#[test]
fn malformed_material_reports_its_line() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "bad.toml", "[variant]\nkind = \"oscillator\"\n\n[[oscillators]]\ndelta_eps = \"x\"\n");
    let o = cli(&["eps", "--material", p.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 5"), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(code(&cli(&["free-energy"])), 2);
    assert_eq!(code(&cli(&["free-energy", "--material", "materials/silica.toml", "--policy", "bogus"])), 2);
    assert_eq!(code(&cli(&["free-energy", "--material", "materials/silica.toml", "--sweep", "3:1:4"])), 2);
    assert_eq!(code(&cli(&["audit", "--class", "nonsense"])), 2);
    assert_eq!(code(&cli(&["eps", "--material", "materials/missing.toml"])), 2);
}

#[test]
fn vacuum_free_energy_is_zero() {
    let o = cli(&["free-energy", "--material", "materials/vacuum.toml", "--sweep", "1e-7:1e-6:4"]);
    assert_eq!(code(&o), 0);
    assert!(rows(&stdout(&o)).iter().all(|f| f[1] == "0.00000000000e0"));
}

#[test]
fn free_energy_matches_the_library_exactly() {
    let o = cli(&[
        "free-energy",
        "--material",
        "materials/silica.toml",
        "--a",
        "3e-7",
        "--T",
        "300",
        "--format",
        "json",
        "--deterministic",
    ]);
    assert_eq!(code(&o), 0);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let cli_value = doc["data"]["rows"][0]["value"].as_f64().unwrap();
    let silica = load_material(&repo().join("materials/silica.toml")).unwrap();
    let job = LifshitzJob::symmetric(3e-7, 300.0, silica, ReflectionPolicy::Standard).unwrap();
    assert_eq!(cli_value, free_energy_plates(&job).unwrap().value);
    assert!(doc["meta"]["config_sha256"].as_str().unwrap().len() == 64);
    assert!(doc["meta"].get("generated_unix").is_none());
}

#[test]
fn hundred_point_sweep_is_fast() {
    let start = Instant::now();
    let o = cli(&["free-energy", "--material", "materials/silica.toml", "--T", "300", "--sweep", "1e-7:1e-5:100:log"]);
    assert_eq!(code(&o), 0);
    assert!(start.elapsed() < Duration::from_secs(10));
    assert_eq!(rows(&stdout(&o)).len(), 100);
}

#[test]
fn convergence_failure_flags_rows_and_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "cfg.toml", "[tolerances]\nmax_matsubara_index = 100\n");
    let o = cli(&[
        "free-energy",
        "--config",
        cfg.to_str().unwrap(),
        "--material",
        "materials/silica.toml",
        "--sweep",
        "1e-8:1e-6:3:log",
    ]);
    assert_eq!(code(&o), 3);
    let r = rows(&stdout(&o));
    assert_eq!(r.len(), 3);
    assert!(r[0][4].starts_with("failed"));
    assert_eq!(r[2][4], "ok");
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "cfg.toml", "material = \"../../root/none.toml\"\na = 5e-7\nT = 10.0\n");
    let silica = repo().join("materials/silica.toml");
    let o = cli(&["free-energy", "--config", cfg.to_str().unwrap(), "--material", silica.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert!(rows(&stdout(&o))[0][0].starts_with("5.00000000000e-7"));
    let o = cli(&["free-energy", "--config", cfg.to_str().unwrap(), "--material", silica.to_str().unwrap(), "--a", "2e-7"]);
    assert!(rows(&stdout(&o))[0][0].starts_with("2.00000000000e-7"));
    let bad = write(dir.path(), "bad.toml", "separation = 1.0\n");
    assert_eq!(code(&cli(&["eps", "--config", bad.to_str().unwrap()])), 2);
}

#[test]
fn pfa_force_column() {
    let o = cli(&["free-energy", "--material", "materials/silica.toml", "--a", "2e-7", "--R", "1e-4"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert!(out.contains("a_m,force_N,"));
    let o = cli(&["free-energy", "--material", "materials/silica.toml", "--a", "2e-7", "--R", "1e-5"]);
    assert!(stdout(&o).contains("# warning: R/a"));
}

#[test]
fn atom_wall_free_energy() {
    let o = cli(&["free-energy", "--material", "materials/silica.toml", "--atom", "rubidium", "--a", "1e-6"]);
    assert_eq!(code(&o), 0);
    let r = rows(&stdout(&o));
    assert!(r[0][1].parse::<f64>().unwrap() < 0.0);
}

#[test]
fn audit_expectations() {
    let o = cli(&["audit", "--material", "materials/silica.toml", "--expect", "satisfied"]);
    assert_eq!(code(&o), 0);

    let o = cli(&["audit", "--class", "dc-augmented", "--expect", "violated", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let s0 = doc["data"]["fitted_s0"].as_f64().unwrap();
    let r = 2.81f64 / 4.81;
    let li3: f64 = (1..400).map(|k| r.powi(2 * k) / (k as f64).powi(3)).sum();
    let zeta3: f64 = 1.2020569031595942;
    let a = 1e-6;
    let expected = BOLTZMANN / (16.0 * std::f64::consts::PI * a * a) * (zeta3 - li3);
    assert!((s0 / expected - 1.0).abs() < 0.02);

    let o = cli(&["audit", "--class", "dc-augmented", "--expect", "satisfied"]);
    assert_eq!(code(&o), 4);
}

#[test]
fn audit_class_must_match_material() {
    let o = cli(&["audit", "--material", "materials/silica.toml", "--class", "dc-augmented"]);
    assert_eq!(code(&o), 2);
    let o = cli(&["audit", "--material", "materials/silica-dc.toml", "--policy", "dc", "--class", "dc-augmented", "--grid", "1e-3:5e-2:8"]);
    assert_eq!(code(&o), 0);
}

#[test]
fn optical_modulation_smoke() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write(
        dir.path(),
        "om.toml",
        "scenario = \"optical-modulation\"\nseparations = [1.0e-7, 2.0e-7]\noverlay = \"data.txt\"\n",
    );
    write(dir.path(), "data.txt", "# a dF\n1e-7 -2e-12\n");
    let out = dir.path().join("out");
    let o = cli(&["scenario", spec.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(out.join("optical-modulation.csv")).unwrap();
    assert!(csv.contains("a_m,dF_dc_neglected_N,dF_dc_included_N,dF_screened_N,dF_zero_T_N,"));
    assert!(csv.contains("non-physical"));
    assert_eq!(rows(&csv).len(), 2);
    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("optical-modulation.summary.json")).unwrap()).unwrap();
    assert_eq!(summary["data"]["Sweep"]["overlay"]["points"][0][1].as_f64(), Some(-2e-12));
}

#[test]
fn condensate_smoke() {
    let dir = tempfile::tempdir().unwrap();
    let o = cli(&["scenario", "scenarios/condensate-shift.toml", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let csv = std::fs::read_to_string(dir.path().join("condensate-shift.csv")).unwrap();
    let r = rows(&csv);
    assert_eq!(r[0].len(), 6);
    assert_eq!(r.first().unwrap()[0], "7.00000000000e-6");
    assert_eq!(r.last().unwrap()[0], "1.10000000000e-5");
}

#[test]
fn nonequilibrium_condensate_exits_five() {
    let dir = tempfile::tempdir().unwrap();
    let spec = write(
        dir.path(),
        "neq.toml",
        "scenario = \"condensate-shift\"\nsurface_temperature = 479.0\nenvironment_temperature = 310.0\n",
    );
    let o = cli(&["scenario", spec.to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
    assert_eq!(code(&o), 5);
    assert!(String::from_utf8_lossy(&o.stderr).contains("out of scope"));
}

#[test]
fn deterministic_reruns_are_identical() {
    let args = ["free-energy", "--material", "materials/silica-dc.toml", "--policy", "screened", "--sweep", "1e-7:1e-6:5", "--deterministic"];
    let a = cli(&args);
    let b = cli(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let plain = cli(&args[..args.len() - 1]);
    assert!(stdout(&plain).contains("# generated-unix:"));
}
