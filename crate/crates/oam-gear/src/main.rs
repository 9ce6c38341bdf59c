//! Thin command-line front end over the library pipelines.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use oam_gear::cli::{run_fit, run_render, run_sweep, Overrides, RunConfig};
use oam_gear::fwm::DetectMode;

#[derive(Parser)]
#[command(
    name = "oam-gear",
    about = "Simulate polarization-controlled four-wave-mixing gear patterns and measure their rotation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ConfigArgs {
    /// JSON config file; flags below override its values.
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Topological charge (nonzero, |l| ≤ 50).
    #[arg(long)]
    l: Option<i32>,
    /// Preparation half-wave-plate angle, degrees from vertical.
    #[arg(long = "theta0-deg")]
    theta0_deg: Option<f64>,
    /// Pump half-wave-plate angle, degrees from vertical.
    #[arg(long = "theta-deg")]
    theta_deg: Option<f64>,
    /// Amplitude ratio of the two conversion channels.
    #[arg(long)]
    beta: Option<f64>,
    /// Detection mode: dominant | full.
    #[arg(long = "detect-mode", value_parser = parse_detect_mode)]
    detect_mode: Option<DetectMode>,
}

impl ConfigArgs {
    fn resolve(&self) -> oam_gear::Result<RunConfig> {
        RunConfig::from_sources(
            self.config.as_deref(),
            Overrides {
                l: self.l,
                theta0_deg: self.theta0_deg,
                theta_deg: self.theta_deg,
                beta: self.beta,
                detect_mode: self.detect_mode,
            },
        )
    }
}

fn parse_detect_mode(s: &str) -> Result<DetectMode, String> {
    match s {
        "dominant" => Ok(DetectMode::Dominant),
        "full" => Ok(DetectMode::Full),
        other => Err(format!("expected 'dominant' or 'full', got '{other}'")),
    }
}

#[derive(Subcommand)]
enum Command {
    /// Render the input donut and the generated gear to PGM files.
    Render {
        #[command(flatten)]
        config: ConfigArgs,
        /// Output directory for signal.pgm and fwm.pgm.
        #[arg(long = "out-dir", default_value = "out")]
        out_dir: PathBuf,
    },
    /// Sweep the pump dial and write theta/alpha rows to sweep.csv.
    Sweep {
        #[command(flatten)]
        config: ConfigArgs,
        #[arg(long = "out-dir", default_value = "out")]
        out_dir: PathBuf,
        /// Number of frames (≥ 2).
        #[arg(long, default_value_t = 7)]
        steps: usize,
        #[arg(long = "theta-start-deg", default_value_t = 0.0)]
        theta_start_deg: f64,
        #[arg(long = "theta-end-deg", default_value_t = 90.0)]
        theta_end_deg: f64,
    },
    /// Fit a sweep CSV and compare the slope against the control law 2/|l|.
    Fit {
        /// CSV file produced by the sweep command.
        csv: PathBuf,
        #[arg(long)]
        l: Option<i32>,
        /// Config file supplying l when --l is absent.
        #[arg(long, value_name = "PATH")]
        config: Option<PathBuf>,
        /// Accepted |slope| deviation from 2/|l|.
        #[arg(long, default_value_t = 1e-6)]
        tolerance: f64,
    },
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> oam_gear::Result<ExitCode> {
    match cli.command {
        Command::Render { config, out_dir } => {
            let cfg = config.resolve()?;
            let report = run_render(&cfg, &out_dir)?;
            println!("wrote {}", report.signal_path.display());
            println!("wrote {}", report.fwm_path.display());
            println!(
                "signal profile: {}",
                if report.signal_is_flat {
                    "flat (donut)"
                } else {
                    "structured"
                }
            );
            println!("fwm petal count: {}", report.petal_count);
            Ok(ExitCode::SUCCESS)
        }
        Command::Sweep {
            config,
            out_dir,
            steps,
            theta_start_deg,
            theta_end_deg,
        } => {
            let cfg = config.resolve()?;
            let report = run_sweep(&cfg, theta_start_deg, theta_end_deg, steps, &out_dir)?;
            println!(
                "swept {} frames (petal count {}), wrote {}",
                report.samples.len(),
                report.m,
                report.csv_path.display()
            );
            for s in &report.samples {
                println!("theta {:>10.4}°  alpha {:>12.6}°", s.theta_deg, s.alpha_deg);
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Fit {
            csv,
            l,
            config,
            tolerance,
        } => {
            let l = match (l, config) {
                (Some(l), _) => l,
                (None, Some(path)) => {
                    RunConfig::from_sources(Some(&path), Overrides::default())?.l
                }
                (None, None) => {
                    return Err(oam_gear::Error::InvalidParameter(
                        "fit needs --l or --config to know the charge".into(),
                    ))
                }
            };
            let report = run_fit(&csv, l, tolerance)?;
            println!("slope        {:+.9}", report.fit.slope);
            println!("intercept    {:+.9}°", report.fit.intercept);
            println!("max residual {:.3e}°", report.fit.max_residual);
            println!("theory 2/|l| {:+.9}", report.theory);
            if report.within_tolerance {
                println!("PASS: ||slope| - 2/|l|| < {tolerance:e}");
                Ok(ExitCode::SUCCESS)
            } else {
                println!("FAIL: ||slope| - 2/|l|| >= {tolerance:e}");
                Ok(ExitCode::from(2))
            }
        }
    }
}
