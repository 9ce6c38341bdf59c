//! End-to-end pipeline tests: sweep columns, CSV/fit round trips,
//! determinism, detect-mode comparison, and the installed binary's
//! command-line surface.

use std::f64::consts::PI;
use std::process::Command;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use oam_gear::analysis::{fit_alpha_vs_theta, read_sweep_csv};
use oam_gear::cli::{run_fit, run_render, run_sweep, GridConfig, Overrides, RunConfig};
use oam_gear::fwm::DetectMode;

fn config(l: i32) -> RunConfig {
    RunConfig::from_sources(
        None,
        Overrides {
            l: Some(l),
            ..Overrides::default()
        },
    )
    .unwrap()
}

#[test]
fn sweep_columns_match_the_control_law() {
    let dir = tempfile::tempdir().unwrap();

    let report = run_sweep(&config(2), 0.0, 90.0, 7, dir.path()).unwrap();
    assert_eq!(report.m, 4);
    for (k, s) in report.samples.iter().enumerate() {
        let expect = 15.0 * k as f64;
        assert!((s.theta_deg - expect).abs() < 1e-12);
        assert!(
            (s.alpha_deg - expect).abs() < 1e-6,
            "frame {k}: alpha {}",
            s.alpha_deg
        );
    }

    let report = run_sweep(&config(20), 0.0, 90.0, 19, dir.path()).unwrap();
    assert_eq!(report.m, 40);
    for (k, s) in report.samples.iter().enumerate() {
        let expect = 0.5 * k as f64;
        assert!(
            (s.alpha_deg - expect).abs() < 1e-6,
            "frame {k}: alpha {}",
            s.alpha_deg
        );
    }
}

#[test]
fn sweep_csv_feeds_the_fit_at_full_precision() {
    let dir = tempfile::tempdir().unwrap();
    let report = run_sweep(&config(2), 0.0, 90.0, 7, dir.path()).unwrap();

    // In-process fit on the samples as swept.
    let pairs: Vec<(f64, f64)> = report
        .samples
        .iter()
        .map(|s| (s.theta_deg, s.alpha_deg))
        .collect();
    let direct = fit_alpha_vs_theta(&pairs).unwrap();

    // Fit on the CSV round trip: shortest-representation float formatting
    // reproduces every f64 exactly.
    let back = read_sweep_csv(&report.csv_path).unwrap();
    assert_eq!(back, report.samples);
    let fit = run_fit(&report.csv_path, 2, 1e-6).unwrap();
    assert!(fit.within_tolerance);
    assert_eq!(fit.fit.slope, direct.slope);
    assert_eq!(fit.fit.intercept, direct.intercept);
    assert!((fit.theory - 1.0).abs() < 1e-15);
}

#[test]
fn two_row_sweeps_fail_at_the_fit_stage() {
    let dir = tempfile::tempdir().unwrap();
    let report = run_sweep(&config(2), 0.0, 10.0, 2, dir.path()).unwrap();
    assert_eq!(report.samples.len(), 2);
    let err = run_fit(&report.csv_path, 2, 1e-6).unwrap_err();
    assert!(matches!(
        err,
        oam_gear::Error::InsufficientSamples { needed: 3, got: 2 }
    ));
}

#[test]
fn render_outputs_are_deterministic() {
    let dir_a = tempfile::tempdir().unwrap();
    let dir_b = tempfile::tempdir().unwrap();
    let mut cfg = config(2);
    cfg.theta_deg = 33.0;
    cfg.grid = GridConfig { n: 256, extent: 2.5 };
    let a = run_render(&cfg, dir_a.path()).unwrap();
    let b = run_render(&cfg, dir_b.path()).unwrap();
    for (pa, pb) in [
        (&a.signal_path, &b.signal_path),
        (&a.fwm_path, &b.fwm_path),
    ] {
        let bytes_a = std::fs::read(pa).unwrap();
        let bytes_b = std::fs::read(pb).unwrap();
        assert_eq!(bytes_a, bytes_b);
        assert!(!bytes_a.is_empty());
    }
    assert!(a.signal_is_flat);
    assert_eq!(a.petal_count, 4);
}

#[test]
fn slope_magnitude_follows_two_over_l_for_random_preparations() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let dir = tempfile::tempdir().unwrap();
    for l in [1i32, 2, 5, 20] {
        let mut cfg = config(l);
        cfg.theta0_deg = rng.gen_range(-90.0..90.0);
        cfg.grid = GridConfig { n: 256, extent: 2.5 };
        let report = run_sweep(&cfg, 0.0, 90.0, 13, dir.path()).unwrap();
        let pairs: Vec<(f64, f64)> = report
            .samples
            .iter()
            .map(|s| (s.theta_deg, s.alpha_deg))
            .collect();
        let fit = fit_alpha_vs_theta(&pairs).unwrap();
        let expect = 2.0 / l.unsigned_abs() as f64;
        assert!(
            (fit.slope.abs() - expect).abs() < 1e-6,
            "l={l}: slope {} (theta0 {})",
            fit.slope,
            cfg.theta0_deg
        );
    }
}

#[test]
fn negative_charge_rotates_the_other_way() {
    let dir = tempfile::tempdir().unwrap();
    let report = run_sweep(&config(-2), 0.0, 90.0, 7, dir.path()).unwrap();
    let pairs: Vec<(f64, f64)> = report
        .samples
        .iter()
        .map(|s| (s.theta_deg, s.alpha_deg))
        .collect();
    let fit = fit_alpha_vs_theta(&pairs).unwrap();
    assert!((fit.slope + 1.0).abs() < 1e-6, "slope {}", fit.slope);
    // The fit command compares |slope|, so the sign convention does not
    // change the verdict.
    let verdict = run_fit(&report.csv_path, -2, 1e-6).unwrap();
    assert!(verdict.within_tolerance);
}

/// Full detection keeps the weaker vertical block. Its interference term
/// has the same phase argument with the opposite sign, so the measured
/// rotation is unchanged while the modulation depth drops from 1 to
/// (β²−1)/(β²+1); this test pins both effects.
#[test]
fn full_detection_matches_dominant_rotation_with_less_contrast() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = config(2);
    cfg.grid = GridConfig { n: 256, extent: 2.5 };

    let dominant = run_sweep(&cfg, 0.0, 90.0, 7, dir.path()).unwrap();
    cfg.detect_mode = DetectMode::Full;
    let full = run_sweep(&cfg, 0.0, 90.0, 7, dir.path()).unwrap();

    let mut worst = 0.0f64;
    for (d, f) in dominant.samples.iter().zip(&full.samples) {
        worst = worst.max((d.alpha_deg - f.alpha_deg).abs());
    }
    assert!(worst < 1e-6, "full-mode rotation deviation {worst}°");

    // Contrast: harmonic-4 modulation relative to the mean, full vs
    // dominant, should shrink by (β²−1)/(β²+1).
    let depth = |cfg: &RunConfig| {
        let theta = 20f64.to_radians();
        let params =
            oam_gear::FwmParams::new(cfg.beta, theta, cfg.detect_mode).unwrap();
        let signal = oam_gear::prep::prepared_signal(&oam_gear::PrepConfig::new(
            cfg.l, 0.0, theta,
        ));
        let det = oam_gear::fwm::detected_state(
            &oam_gear::fwm::fwm_transfer(&signal, &params),
            &params,
        )
        .unwrap();
        let grid: oam_gear::GridSpec = cfg.grid.into();
        let img = oam_gear::render::render(&det, &grid).unwrap();
        let annulus = oam_gear::Annulus::around_ring(
            grid.ring_radius(2),
            grid.render_waist(2),
        )
        .unwrap();
        let profile =
            oam_gear::analysis::angular_profile(&img, annulus, 720).unwrap();
        2.0 * profile.harmonic(4).norm() / profile.harmonic(0).norm()
    };
    let full_depth = depth(&cfg);
    cfg.detect_mode = DetectMode::Dominant;
    let dominant_depth = depth(&cfg);
    let beta2 = cfg.beta * cfg.beta;
    let expect = (beta2 - 1.0) / (beta2 + 1.0);
    assert!(
        (full_depth / dominant_depth - expect).abs() < 1e-6,
        "contrast ratio {} vs {expect}",
        full_depth / dominant_depth
    );
    println!(
        "full detection: rotation deviation {worst:.2e}°, contrast {full_depth:.4} vs {dominant_depth:.4} (ratio {expect:.4})"
    );

    let pairs: Vec<(f64, f64)> = full
        .samples
        .iter()
        .map(|s| (s.theta_deg, s.alpha_deg))
        .collect();
    let fit = fit_alpha_vs_theta(&pairs).unwrap();
    assert!(
        (fit.slope - 1.0).abs() < 1e-6,
        "full-mode slope {}",
        fit.slope
    );
}

#[test]
fn binary_render_sweep_fit_round_trip() {
    let exe = env!("CARGO_BIN_EXE_oam-gear");
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run");
    let cfg_path = dir.path().join("cfg.json");
    std::fs::write(
        &cfg_path,
        r#"{"l": 2, "theta0_deg": 0.0, "grid": {"n": 256, "extent": 2.5}}"#,
    )
    .unwrap();

    let render = Command::new(exe)
        .args([
            "render",
            "--config",
            cfg_path.to_str().unwrap(),
            "--theta-deg",
            "45",
            "--out-dir",
            out.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert!(render.status.success(), "{render:?}");
    let stdout = String::from_utf8_lossy(&render.stdout);
    assert!(stdout.contains("fwm petal count: 4"), "{stdout}");
    assert!(stdout.contains("flat (donut)"), "{stdout}");
    assert!(out.join("signal.pgm").exists());
    assert!(out.join("fwm.pgm").exists());

    let sweep = Command::new(exe)
        .args([
            "sweep",
            "--config",
            cfg_path.to_str().unwrap(),
            "--steps",
            "7",
            "--theta-start-deg",
            "0",
            "--theta-end-deg",
            "90",
            "--out-dir",
            out.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert!(sweep.status.success(), "{sweep:?}");
    let csv = out.join("sweep.csv");
    assert!(csv.exists());

    let fit = Command::new(exe)
        .args(["fit", csv.to_str().unwrap(), "--l", "2"])
        .output()
        .unwrap();
    assert!(fit.status.success(), "{fit:?}");
    let stdout = String::from_utf8_lossy(&fit.stdout);
    assert!(stdout.contains("PASS"), "{stdout}");

    // Wrong charge: the fitted slope cannot match 2/|l|, exit code 2.
    let bad = Command::new(exe)
        .args(["fit", csv.to_str().unwrap(), "--l", "5"])
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2), "{bad:?}");

    // Unreadable CSV: hard error, exit code 1.
    let err = Command::new(exe)
        .args(["fit", "missing.csv", "--l", "2"])
        .output()
        .unwrap();
    assert_eq!(err.status.code(), Some(1), "{err:?}");
}
