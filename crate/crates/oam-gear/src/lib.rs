//! Simulation of indirect angular control in a polarization-filtered
//! four-wave-mixing chain.
//!
//! A Gaussian beam is split onto opposite orbital-angular-momentum charges
//! carried by orthogonal polarizations, dressed by a quarter- and a
//! half-wave plate, and mixed on a pump whose linear polarization is dialed
//! by a half-wave plate at angle θ. The mixing converts the pump-parallel
//! and pump-perpendicular signal components with different strengths
//! (amplitude ratio β, default 2.1), so the generated light is dominated by
//! a single equal-weight superposition of ±l whose interference forms a
//! 2|l|-petal "gear". Rotating the pump dial by θ rotates that gear by
//!
//! ```text
//! α = (2 / |l|) · θ
//! ```
//!
//! which this crate verifies end to end: it renders the gear images,
//! extracts their rotation from azimuthal Fourier phases, and fits α
//! against θ.
//!
//! # Modules
//!
//! - [`state`]: sparse hybrid (OAM ⊗ polarization) superposition states
//! - [`operator`] / [`elements`]: wave plates, phase plate, Sagnac-style
//!   imprint loop and PBS as linear maps
//! - [`prep`]: the prepared signal state, closed form and element by
//!   element, and its pump-frame decomposition
//! - [`fwm`]: the polarization-weighted transfer and the detected state
//! - [`render`]: Laguerre-Gauss synthesis, intensity images, 16-bit PGM
//! - [`analysis`]: azimuthal profiles, petal counts, rotation extraction,
//!   the α-vs-θ line fit and the sweep CSV format
//! - [`cli`]: the render/sweep/fit pipelines behind the `oam-gear` binary
//!
//! # Conventions
//!
//! All polarization angles are measured from the vertical axis toward +H;
//! image coordinates have x right and y up, and pattern rotations are
//! positive counterclockwise. Global phases are physically unobservable:
//! composed element chains reproduce closed-form states up to a fixed
//! phase, and state comparisons use overlap magnitudes.
//!
//! # Example
//!
//! ```
//! use oam_gear::{DetectMode, FwmParams, GridSpec, PrepConfig};
//! use oam_gear::analysis::{angular_profile, petal_count, Annulus, DEFAULT_BINS};
//! use oam_gear::fwm::{detected_state, fwm_transfer};
//! use oam_gear::prep::prepared_signal;
//! use oam_gear::render::render;
//!
//! let theta = 15f64.to_radians();
//! let params = FwmParams::new(2.1, theta, DetectMode::Dominant)?;
//! let signal = prepared_signal(&PrepConfig::new(2, 0.0, theta));
//! let gear = detected_state(&fwm_transfer(&signal, &params), &params)?;
//!
//! let grid = GridSpec::default();
//! let image = render(&gear, &grid)?;
//! let annulus = Annulus::around_ring(grid.ring_radius(2), grid.render_waist(2))?;
//! let profile = angular_profile(&image, annulus, DEFAULT_BINS)?;
//! assert_eq!(petal_count(&profile)?, 4);
//! # Ok::<(), oam_gear::Error>(())
//! ```

pub mod analysis;
pub mod cli;
pub mod elements;
pub mod error;
pub mod fwm;
pub mod operator;
pub mod prep;
pub mod render;
pub mod state;

pub use analysis::{AngularProfile, Annulus, LineFit, RotationMeasurement, SweepSample};
pub use error::{Error, Result};
pub use fwm::{DetectMode, FwmParams};
pub use operator::{ElementOperator, OperatorKind};
pub use prep::PrepConfig;
pub use render::{GridSpec, IntensityImage};
pub use state::{HybridState, OamIndex, PolAxis};
