use std::f64::consts::PI;
use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn mzi(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mzi"))
        .arg("--out-dir")
        .arg(dir)
        .args(args)
        .env_remove("MZI_CONFIG")
        .output()
        .unwrap()
}

fn report_value(dir: &Path, stem: &str, key: &str) -> String {
    let text = fs::read_to_string(dir.join(format!("{stem}_report.csv"))).unwrap();
    let mut lines = text.lines();
    let keys: Vec<&str> = lines.next().unwrap().split(',').collect();
    let values: Vec<&str> = lines.next().unwrap().split(',').collect();
    let k = keys.iter().position(|k| *k == key).unwrap_or_else(|| panic!("no {key} in {keys:?}"));
    values[k].to_string()
}

#[test]
fn exit_codes() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path();
    assert_eq!(mzi(d, &["--help"]).status.code(), Some(0));
    assert_eq!(mzi(d, &["frobnicate"]).status.code(), Some(2));
    assert_eq!(mzi(d, &["simulate", "fringe", "--to", "3 ps"]).status.code(), Some(2));
    assert_eq!(mzi(d, &["thermal", "alpha", "--heater", "4"]).status.code(), Some(2));
    let missing = mzi(d, &["fit", "fringe", "nope.csv"]);
    assert_eq!(missing.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&missing.stderr).contains("nope.csv"));
    fs::write(d.join("bad.csv"), "control,unit,out1\n0,W,0.5\n1,W,oops\n").unwrap();
    let bad = mzi(d, &["fit", "fringe", d.join("bad.csv").to_str().unwrap()]);
    assert_eq!(bad.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("out1"));
}

#[test]
fn config_from_environment() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path();
    let cfg = d.join("device.toml");
    fs::write(&cfg, "[crosstalk]\nphi0 = 0.2\nalphas = [10.0]\n").unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_mzi"))
        .args(["--out-dir", d.to_str().unwrap(), "simulate", "fringe"])
        .env("MZI_CONFIG", &cfg)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(report_value(d, "fringe", "alpha"), "10");
    fs::write(&cfg, "[crosstalk]\nphi0 = 0.2\nalpha = [10.0]\n").unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_mzi"))
        .args(["--out-dir", d.to_str().unwrap(), "simulate", "fringe"])
        .env("MZI_CONFIG", &cfg)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn plane_fit_from_samples() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path();
    let mut csv = String::from("p1,p2,phi\n");
    for i in 0..5 {
        for j in 0..5 {
            let (p1, p2) = (0.1 * i as f64, 0.1 * j as f64);
            csv.push_str(&format!("{p1},{p2},{}\n", -0.17 + 13.16 * p1 - 8.77 * p2));
        }
    }
    fs::write(d.join("plane.csv"), csv).unwrap();
    let out = mzi(d, &["fit", "plane", d.join("plane.csv").to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let a2: f64 = report_value(d, "plane_fit", "alpha2").parse().unwrap();
    assert!((a2 + 8.77).abs() < 1e-9);
    assert!(d.join("plane_fit.csv").exists());
}

#[test]
fn stability_of_wrapped_series() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path();
    let t: Vec<f64> = (0..=600).map(|k| 60.0 * k as f64).collect();
    let phi: Vec<f64> = t.iter().map(|&t| PI - 0.002 + 0.004 * (2.0 * PI * t / 3600.0).sin()).collect();
    let mut csv = String::from("t,phi\n");
    for (t, p) in t.iter().zip(&phi) {
        let wrapped = (p + PI).rem_euclid(2.0 * PI) - PI;
        csv.push_str(&format!("{t},{wrapped}\n"));
    }
    // straight-line detrend by normal equations
    let n = t.len() as f64;
    let (mt, mp) = (t.iter().sum::<f64>() / n, phi.iter().sum::<f64>() / n);
    let slope = t.iter().zip(&phi).map(|(a, b)| (a - mt) * (b - mp)).sum::<f64>() / t.iter().map(|a| (a - mt).powi(2)).sum::<f64>();
    let res: Vec<f64> = t.iter().zip(&phi).map(|(a, b)| b - mp - slope * (a - mt)).collect();
    let expected = res.iter().cloned().fold(f64::MIN, f64::max) - res.iter().cloned().fold(f64::MAX, f64::min);
    fs::write(d.join("series.csv"), csv).unwrap();
    let path = d.join("series.csv");
    assert!(mzi(d, &["fit", "stability", path.to_str().unwrap(), "--wrapped"]).status.success());
    let ptp: f64 = report_value(d, "stability", "peak_to_peak").parse().unwrap();
    assert!((ptp - expected).abs() < 1e-9, "{ptp} vs {expected}");
    assert!(mzi(d, &["fit", "stability", path.to_str().unwrap()]).status.success());
    let raw: f64 = report_value(d, "stability", "peak_to_peak").parse().unwrap();
    assert!(raw > 6.0, "{raw}");
}

#[test]
fn thermal_solve_on_small_grid() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path();
    let cfg = d.join("chip.toml");
    fs::write(&cfg, "[chip]\nnx = 61\nny = 21\n").unwrap();
    let out = mzi(d, &["--config", cfg.to_str().unwrap(), "thermal", "solve", "--power", "200 mW"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let rows = fs::read_to_string(d.join("temperature.csv")).unwrap().lines().count();
    assert_eq!(rows, 61 * 21 + 1);
    let q: f64 = report_value(d, "temperature", "power_per_length_w_per_m").parse().unwrap();
    assert!((q - 10.0).abs() < 1e-3, "{q}");
}

#[test]
fn seeds_control_the_noise() {
    let tmp = tempfile::tempdir().unwrap();
    let run = |name: &str, seed: &str| {
        let d = tmp.path().join(name);
        assert!(mzi(&d, &["--seed", seed, "simulate", "fringe", "--noise", "0.05"]).status.success());
        fs::read(d.join("fringe.csv")).unwrap()
    };
    assert_eq!(run("a", "1"), run("b", "1"));
    assert_ne!(run("a", "1"), run("c", "2"));
}
