use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::{json, Value};
use tempfile::TempDir;

const SMALL_GRID: &str = r#"{"n": 8, "length": 10, "nr": 96, "rmax": 20, "ntheta": 12, "nphi": 24, "lmax": 3, "np": 96}"#;

fn small_grid() -> Value {
    serde_json::from_str(SMALL_GRID).unwrap()
}

fn run(dir: &Path, command: &str, cfg: &Value) -> (Output, PathBuf) {
    let path = dir.join(format!("{command}.json"));
    std::fs::write(&path, serde_json::to_string_pretty(cfg).unwrap()).unwrap();
    let out = dir.join(format!("{command}-out"));
    let output = Command::new(env!("CARGO_BIN_EXE_majorana"))
        .args([command, "--quiet", "--config"])
        .arg(&path)
        .arg("--out")
        .arg(&out)
        .env("MAJORANA_THREADS", "2")
        .output()
        .unwrap();
    (output, out)
}

fn report(out: &Path, name: &str) -> Value {
    serde_json::from_str(&std::fs::read_to_string(out.join(name)).unwrap()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

#[test]
fn verify_small_config_passes() {
    let tmp = TempDir::new().unwrap();
    let (o, out) = run(tmp.path(), "verify", &json!({"grid": small_grid(), "seed": 7}));
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let r = report(&out, "verify_report.json");
    let checks = r["checks"].as_array().unwrap();
    assert!(checks.len() >= 30);
    assert!(checks.iter().all(|c| c["pass"] == true));
    assert!(checks.iter().all(|c| c["anchor"].as_str().is_some_and(|a| !a.is_empty())));
    assert_eq!(r["skipped_modes"].as_array().unwrap().len(), 0);
}

#[test]
fn verify_massless_reports_skipped_mode() {
    let tmp = TempDir::new().unwrap();
    let (o, out) = run(tmp.path(), "verify", &json!({"mass": 0.0, "grid": small_grid()}));
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let r = report(&out, "verify_report.json");
    // The p = 0 mode of an 8³ grid sits at (4, 4, 4).
    assert_eq!(r["skipped_modes"], json!([4 * 64 + 4 * 8 + 4]));
}

#[test]
fn impossible_tolerance_fails_with_exit_one() {
    let tmp = TempDir::new().unwrap();
    let cfg = json!({"grid": small_grid(), "tolerances": {"fourier.round_trip": 1e-30}});
    let (o, out) = run(tmp.path(), "verify", &cfg);
    assert_eq!(code(&o), 1);
    let r = report(&out, "verify_report.json");
    let failed: Vec<&str> = r["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["pass"] == false)
        .map(|c| c["id"].as_str().unwrap())
        .collect();
    assert_eq!(failed, ["fourier.round_trip"]);
}

#[test]
fn bad_configs_exit_two() {
    let tmp = TempDir::new().unwrap();
    let bad = [
        json!({"unknown_key": 1}),
        json!({"mass": -1.0}),
        json!({"grid": {"n": 7}}),
        json!({"tolerances": {"no.such.check": 1.0}}),
        json!({"command": "evolve"}),
        json!({"initial": {"kind": "gaussian", "width": 0.0, "chi": [1, 0, 0, 0]}}),
    ];
    for cfg in bad {
        let (o, _) = run(tmp.path(), "verify", &cfg);
        assert_eq!(code(&o), 2, "config {cfg}");
    }
    let missing = Command::new(env!("CARGO_BIN_EXE_majorana"))
        .args(["verify", "--quiet", "--config"])
        .arg(tmp.path().join("absent.json"))
        .output()
        .unwrap();
    assert_eq!(code(&missing), 2);
}

#[test]
fn evolve_at_rest_conserves_norm() {
    let tmp = TempDir::new().unwrap();
    let cfg = json!({"grid": {"n": 16, "length": 20}, "time": {"steps": 50, "dt": 0.1}});
    let (o, out) = run(tmp.path(), "evolve", &cfg);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let r = report(&out, "evolve_report.json");
    assert!(r["norm_drift"].as_f64().unwrap() < 1e-12);
    assert_eq!(r["velocity_checked"], false);
    let frames = std::fs::read_to_string(out.join("frames.csv")).unwrap();
    assert_eq!(frames.lines().count(), 52);
}

#[test]
fn boosted_packet_moves_at_group_velocity() {
    let tmp = TempDir::new().unwrap();
    let cfg = json!({
        "mass": 1.0,
        "grid": {"n": 32, "length": 40},
        "initial": {"kind": "gaussian", "center": [-4, 0, 0], "width": 3.0, "chi": [1, 0, 0, 0], "momentum": [1.0, 0, 0]},
        "time": {"steps": 40, "dt": 0.1}
    });
    let (o, out) = run(tmp.path(), "evolve", &cfg);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let r = report(&out, "evolve_report.json");
    assert_eq!(r["velocity_checked"], true);
    assert!(r["velocity_rel_error"].as_f64().unwrap() < 0.02);
    // Momentum spread pulls ⟨p/E⟩ a little below p₀/E₀ = 1/√2.
    let v = r["predicted_velocity"][0].as_f64().unwrap();
    assert!(v > 0.6 && v < 0.5_f64.sqrt(), "v = {v}");
}

#[test]
fn zero_field_stays_zero() {
    let tmp = TempDir::new().unwrap();
    let cfg = json!({"grid": {"n": 8}, "initial": {"kind": "zero"}, "time": {"steps": 5, "dt": 0.2, "dump_every": 5}});
    let (o, out) = run(tmp.path(), "evolve", &cfg);
    assert_eq!(code(&o), 0);
    let r = report(&out, "evolve_report.json");
    assert_eq!(r["all_frames_zero"], true);
    assert_eq!(r["norm_drift"], 0.0);
    assert!(out.join("field_00005.csv").exists());
}

#[test]
fn spherical_evolve_conserves_norm() {
    let tmp = TempDir::new().unwrap();
    let cfg = json!({"geometry": "spherical", "grid": small_grid(), "time": {"steps": 10, "dt": 0.3}});
    let (o, out) = run(tmp.path(), "evolve", &cfg);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(report(&out, "evolve_report.json")["norm_drift"].as_f64().unwrap() < 1e-12);
}

#[test]
fn transforms_round_trip() {
    let tmp = TempDir::new().unwrap();
    let (o, out) = run(tmp.path(), "transform", &json!({"grid": {"n": 16}, "output": {"formats": ["csv", "bin"]}}));
    assert_eq!(code(&o), 0);
    let r = report(&out, "transform_report.json");
    assert!(r["error"].as_f64().unwrap() < 1e-9);
    for f in ["input.csv", "input.maj", "spectrum.csv", "reconstruction.maj"] {
        assert!(out.join(f).exists(), "{f}");
    }
    let mut bytes = std::fs::File::open(out.join("input.maj")).unwrap();
    let field = majorana_core::io::read_cartesian(&mut bytes).unwrap().into_field().unwrap();
    assert_eq!(field.grid.n, 16);

    let sub = tmp.path().join("spherical");
    std::fs::create_dir_all(&sub).unwrap();
    let cfg = json!({"geometry": "spherical", "grid": small_grid(), "output": {"formats": ["bin"]}});
    let (o, out) = run(&sub, "transform", &cfg);
    assert_eq!(code(&o), 0);
    let r = report(&out, "transform_report.json");
    assert!(r["error"].as_f64().unwrap() < 1e-4);
    assert_eq!(r["tail_warning"], false);
    assert!(out.join("input.majs").exists() && !out.join("input.csv").exists());
}

#[test]
fn single_mode_spectra_have_one_dominant_entry() {
    let tmp = TempDir::new().unwrap();
    let cfg = json!({"grid": {"n": 8}, "initial": {"kind": "plane_wave", "p": [0.6, 0, 0], "chi": [1, 0, 0, 0]}});
    let (o, out) = run(tmp.path(), "spectrum", &cfg);
    assert_eq!(code(&o), 0);
    let s = &report(&out, "spectrum_report.json")["sparsity"];
    assert_eq!(s["significant_entries"], 1);
    assert!(s["dominant"]["fraction"].as_f64().unwrap() > 1.0 - 1e-12);

    let cfg = json!({
        "geometry": "spherical",
        "grid": small_grid(),
        "initial": {"kind": "spherical_mode", "p": 2.0, "l": 2, "mu": 1, "chi": [1, 0, 0, 0]}
    });
    let (o, out) = run(tmp.path(), "spectrum", &cfg);
    assert_eq!(code(&o), 0);
    let d = &report(&out, "spectrum_report.json")["sparsity"]["dominant"];
    assert_eq!((d["l"].as_i64(), d["mu"].as_i64()), (Some(2), Some(1)));
    assert!((d["momentum"][0].as_f64().unwrap() - 2.0).abs() < 0.2);
    assert!(d["fraction"].as_f64().unwrap() > 0.9);
}

#[test]
fn outputs_are_deterministic() {
    let tmp = TempDir::new().unwrap();
    let cfg = json!({"grid": {"n": 8}, "time": {"steps": 3, "dt": 0.1, "dump_every": 1}});
    let read = |sub: &str| {
        let dir = tmp.path().join(sub);
        std::fs::create_dir_all(&dir).unwrap();
        let (o, out) = run(&dir, "evolve", &cfg);
        assert_eq!(code(&o), 0);
        ["frames.csv", "field_00002.csv", "evolve_report.json"].map(|f| std::fs::read(out.join(f)).unwrap())
    };
    assert_eq!(read("a"), read("b"));
}
