//! Command pipelines behind the `oam-gear` binary: configuration loading,
//! the render command, the dial sweep and the line-fit report.
//!
//! Angles cross this boundary in degrees (the natural dial unit) and are
//! converted to radians internally. All pipelines are deterministic:
//! identical configuration produces byte-identical PGM and CSV outputs.

use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analysis::{
    angular_profile, fit_alpha_vs_theta, petal_count, rotation_between, unwrap_rotations,
    Annulus, AngularProfile, LineFit, SweepSample, DEFAULT_BINS,
};
use crate::error::{Error, Result};
use crate::fwm::{detected_state, fwm_transfer, DetectMode, FwmParams, DEFAULT_BETA};
use crate::prep::{prepared_signal, PrepConfig};
use crate::render::{render, GridSpec, IntensityImage};

/// Grid settings as they appear in the JSON config (waist is fixed at 1).
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    #[serde(default = "default_grid_n")]
    pub n: usize,
    #[serde(default = "default_grid_extent")]
    pub extent: f64,
}

fn default_grid_n() -> usize {
    512
}

fn default_grid_extent() -> f64 {
    2.5
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig {
            n: default_grid_n(),
            extent: default_grid_extent(),
        }
    }
}

impl From<GridConfig> for GridSpec {
    fn from(g: GridConfig) -> Self {
        GridSpec {
            n: g.n,
            extent: g.extent,
            w: 1.0,
        }
    }
}

/// Annulus override as it appears in the JSON config.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnnulusConfig {
    pub r_inner: f64,
    pub r_outer: f64,
}

/// One simulation configuration.
///
/// Loadable from a JSON document; every field except `l` has a default.
/// When `annulus` is absent it is derived from the ring radius of the
/// rendered charge.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// Imprinted topological charge (nonzero).
    pub l: i32,
    #[serde(default)]
    pub theta0_deg: f64,
    #[serde(default)]
    pub theta_deg: f64,
    #[serde(default = "default_beta")]
    pub beta: f64,
    #[serde(default)]
    pub detect_mode: DetectMode,
    #[serde(default)]
    pub grid: GridConfig,
    #[serde(default)]
    pub annulus: Option<AnnulusConfig>,
}

fn default_beta() -> f64 {
    DEFAULT_BETA
}

/// Optional command-line overrides applied on top of a config file.
#[derive(Debug, Clone, Copy, Default)]
pub struct Overrides {
    pub l: Option<i32>,
    pub theta0_deg: Option<f64>,
    pub theta_deg: Option<f64>,
    pub beta: Option<f64>,
    pub detect_mode: Option<DetectMode>,
}

impl RunConfig {
    /// Loads a config file and applies flag overrides. Without a file, the
    /// overrides must at least provide `l`.
    pub fn from_sources(config_path: Option<&Path>, overrides: Overrides) -> Result<Self> {
        let mut cfg = match config_path {
            Some(path) => {
                let text = fs::read_to_string(path)?;
                serde_json::from_str::<RunConfig>(&text)?
            }
            None => RunConfig {
                l: overrides.l.ok_or_else(|| {
                    Error::InvalidParameter(
                        "no config file given; --l is required".into(),
                    )
                })?,
                theta0_deg: 0.0,
                theta_deg: 0.0,
                beta: DEFAULT_BETA,
                detect_mode: DetectMode::default(),
                grid: GridConfig::default(),
                annulus: None,
            },
        };
        if let Some(l) = overrides.l {
            cfg.l = l;
        }
        if let Some(v) = overrides.theta0_deg {
            cfg.theta0_deg = v;
        }
        if let Some(v) = overrides.theta_deg {
            cfg.theta_deg = v;
        }
        if let Some(v) = overrides.beta {
            cfg.beta = v;
        }
        if let Some(v) = overrides.detect_mode {
            cfg.detect_mode = v;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.l == 0 {
            return Err(Error::InvalidParameter(
                "l must be nonzero; a charge-0 beam carries no pattern to rotate".into(),
            ));
        }
        if self.l.unsigned_abs() > 50 {
            return Err(Error::InvalidParameter(format!(
                "|l| up to 50 is supported, got {}",
                self.l
            )));
        }
        if !(self.beta > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "beta must be positive, got {}",
                self.beta
            )));
        }
        GridSpec::from(self.grid).validate()?;
        if let Some(a) = self.annulus {
            Annulus::new(a.r_inner, a.r_outer)?;
        }
        Ok(())
    }

    fn grid_spec(&self) -> GridSpec {
        self.grid.into()
    }

    fn annulus_for(&self, grid: &GridSpec) -> Result<Annulus> {
        match self.annulus {
            Some(a) => Annulus::new(a.r_inner, a.r_outer),
            None => {
                let la = self.l.unsigned_abs();
                Annulus::around_ring(grid.ring_radius(la), grid.render_waist(la))
            }
        }
    }

    fn fwm_params(&self) -> Result<FwmParams> {
        FwmParams::new(self.beta, self.theta_deg.to_radians(), self.detect_mode)
    }

    fn prep_config(&self) -> PrepConfig {
        PrepConfig::new(
            self.l,
            self.theta0_deg.to_radians(),
            self.theta_deg.to_radians(),
        )
    }
}

/// What the render command produced.
#[derive(Debug, Clone)]
pub struct RenderReport {
    pub signal_path: PathBuf,
    pub fwm_path: PathBuf,
    /// Petal count measured on the generated-light image.
    pub petal_count: usize,
    /// Whether the input-signal image analyzed as a flat (donut) profile.
    pub signal_is_flat: bool,
}

/// Renders the input-signal donut and the generated-light gear for one
/// configuration, writes `signal.pgm` and `fwm.pgm` under `out_dir`, and
/// measures the gear's petal count.
pub fn run_render(cfg: &RunConfig, out_dir: &Path) -> Result<RenderReport> {
    cfg.validate()?;
    fs::create_dir_all(out_dir)?;
    let grid = cfg.grid_spec();
    let params = cfg.fwm_params()?;

    let signal = prepared_signal(&cfg.prep_config());
    let detected = detected_state(&fwm_transfer(&signal, &params), &params)?;
    let signal_img = render(&signal, &grid)?;
    let fwm_img = render(&detected, &grid)?;

    let signal_path = out_dir.join("signal.pgm");
    let fwm_path = out_dir.join("fwm.pgm");
    signal_img.write_pgm(&signal_path)?;
    fwm_img.write_pgm(&fwm_path)?;

    let annulus = cfg.annulus_for(&grid)?;
    let signal_is_flat = matches!(
        petal_count(&angular_profile(&signal_img, annulus, DEFAULT_BINS)?),
        Err(Error::FlatProfile)
    );
    let petals = petal_count(&angular_profile(&fwm_img, annulus, DEFAULT_BINS)?)?;

    Ok(RenderReport {
        signal_path,
        fwm_path,
        petal_count: petals,
        signal_is_flat,
    })
}

/// What a sweep produced.
#[derive(Debug, Clone)]
pub struct SweepReport {
    pub csv_path: PathBuf,
    pub samples: Vec<SweepSample>,
    /// Petal count of the reference frame.
    pub m: usize,
}

/// Largest dial step that keeps unwrapping unambiguous: the rotation per
/// step must stay below a quarter of the pattern period, which for the
/// control ratio 2/|l| means a dial step below π/8 for every charge.
pub const MAX_SWEEP_STEP_DEG: f64 = 22.5;

/// Sweeps the pump dial from `theta_start_deg` to `theta_end_deg` in
/// `steps` frames, measures each frame's pattern rotation against the
/// first frame, and writes `sweep.csv` under `out_dir`.
pub fn run_sweep(
    cfg: &RunConfig,
    theta_start_deg: f64,
    theta_end_deg: f64,
    steps: usize,
    out_dir: &Path,
) -> Result<SweepReport> {
    cfg.validate()?;
    if steps < 2 {
        return Err(Error::InsufficientSamples {
            needed: 2,
            got: steps,
        });
    }
    let dtheta = (theta_end_deg - theta_start_deg) / (steps - 1) as f64;
    if dtheta.abs() >= MAX_SWEEP_STEP_DEG {
        return Err(Error::UnwrapAmbiguity(format!(
            "dial step {dtheta:.3}° reaches the {MAX_SWEEP_STEP_DEG}° unwrapping limit; use more steps"
        )));
    }
    fs::create_dir_all(out_dir)?;
    let grid = cfg.grid_spec();
    let annulus = cfg.annulus_for(&grid)?;

    let thetas_deg: Vec<f64> = (0..steps)
        .map(|k| theta_start_deg + k as f64 * dtheta)
        .collect();
    let profiles: Vec<Result<AngularProfile>> = thetas_deg
        .par_iter()
        .map(|theta_deg| frame_profile(cfg, *theta_deg, &grid, annulus))
        .collect();
    let profiles: Vec<AngularProfile> =
        profiles.into_iter().collect::<Result<Vec<_>>>()?;

    let m = petal_count(&profiles[0])?;
    let wrapped: Vec<f64> = profiles
        .iter()
        .map(|p| rotation_between(&profiles[0], p, m))
        .collect::<Result<Vec<_>>>()?;
    let alphas = unwrap_rotations(m, &wrapped)?;

    let samples: Vec<SweepSample> = thetas_deg
        .iter()
        .zip(&alphas)
        .map(|(t, a)| SweepSample {
            theta_deg: *t,
            alpha_deg: a.to_degrees(),
        })
        .collect();
    let csv_path = out_dir.join("sweep.csv");
    crate::analysis::write_sweep_csv(&csv_path, &samples)?;
    Ok(SweepReport {
        csv_path,
        samples,
        m,
    })
}

fn frame_profile(
    cfg: &RunConfig,
    theta_deg: f64,
    grid: &GridSpec,
    annulus: Annulus,
) -> Result<AngularProfile> {
    let theta = theta_deg.to_radians();
    let params = FwmParams::new(cfg.beta, theta, cfg.detect_mode)?;
    let signal = prepared_signal(&PrepConfig::new(
        cfg.l,
        cfg.theta0_deg.to_radians(),
        theta,
    ));
    let detected = detected_state(&fwm_transfer(&signal, &params), &params)?;
    let img: IntensityImage = render(&detected, grid)?;
    angular_profile(&img, annulus, DEFAULT_BINS)
}

/// What the fit command produced.
#[derive(Debug, Clone, Copy)]
pub struct FitReport {
    pub fit: LineFit,
    /// Expected |slope| for the configured charge: 2/|l|.
    pub theory: f64,
    /// Whether ||slope| − 2/|l|| stayed inside the tolerance.
    pub within_tolerance: bool,
}

/// Fits a sweep CSV against the control law and compares |slope| with
/// 2/|l| at the given tolerance.
pub fn run_fit(csv_path: &Path, l: i32, tolerance: f64) -> Result<FitReport> {
    if l == 0 {
        return Err(Error::InvalidParameter("l must be nonzero".into()));
    }
    let samples = crate::analysis::read_sweep_csv(csv_path)?;
    let pairs: Vec<(f64, f64)> = samples
        .iter()
        .map(|s| (s.theta_deg, s.alpha_deg))
        .collect();
    let fit = fit_alpha_vs_theta(&pairs)?;
    let theory = 2.0 / l.unsigned_abs() as f64;
    Ok(FitReport {
        fit,
        theory,
        within_tolerance: (fit.slope.abs() - theory).abs() < tolerance,
    })
}
