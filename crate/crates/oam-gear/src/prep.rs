//! Signal preparation: the hybrid input state carrying opposite OAM charges
//! on orthogonal polarizations, built either in closed form or by composing
//! the optical elements of the chain, plus its re-expression in the pump
//! polarization frame.
//!
//! The chain is: a balanced Gaussian beam enters the imprint loop (giving
//! (|l,H⟩ + |−l,V⟩)/√2), then passes a quarter-wave plate with its fast axis
//! at π/4 from vertical and a half-wave plate at `theta0` from vertical.
//! The closed-form result, with all four amplitudes of magnitude ½, is
//!
//! ```text
//! ½ (i e^{i2θ₀} |l⟩ + e^{−i2θ₀} |−l⟩) |H⟩ − ½ (e^{i2θ₀} |l⟩ + i e^{−i2θ₀} |−l⟩) |V⟩
//! ```
//!
//! The composed chain reproduces this state up to a fixed global phase of
//! 3π/4, which is why equivalence tests compare overlap magnitudes.
//!
//! # Pump frame
//!
//! The pump beam whose polarization controls the mixing is dialed by a
//! half-wave plate at angle `theta`. That plate acts on a *horizontally*
//! polarized pump branch, so the pump polarization direction sits at
//! `2·theta + π/2` from vertical ([`pump_basis_angle`]). Rotating the signal
//! into that frame ([`signal_in_pump_basis`]) aligns the new vertical axis
//! with the pump: the V component of the returned state is the pump-parallel
//! block and the H component the pump-perpendicular block, with coefficients
//! (Δ = θ − θ₀)
//!
//! ```text
//! parallel:      ½ (i e^{−i2Δ} |l⟩ + e^{i2Δ} |−l⟩)
//! perpendicular: ½ (e^{−i2Δ} |l⟩ + i e^{i2Δ} |−l⟩)
//! ```
//!
//! This is the only (H-pumped) convention under which the rotated closed
//! form matches the block formula with a single global phase; the
//! V-pumped alternative (`2·theta` from vertical) leaves an OAM-dependent
//! ±i mismatch between the blocks.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

use num_complex::Complex64;

use crate::elements::{hwp, qwp, sagnac};
use crate::error::Result;
use crate::state::{HybridState, OamIndex, PolAxis};

/// Preparation settings: OAM charge and the two half-wave-plate dial angles.
///
/// Angles are in radians, measured from the vertical axis toward +H. Both
/// plates are π-periodic in their fast axis, so configurations differing by
/// π in `theta0` or `theta` are physically identical.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrepConfig {
    /// Imprinted topological charge; the state carries ±l.
    pub l: OamIndex,
    /// Fast-axis angle of the preparation half-wave plate.
    pub theta0: f64,
    /// Fast-axis angle of the pump half-wave plate.
    pub theta: f64,
}

impl PrepConfig {
    pub fn new(l: impl Into<OamIndex>, theta0: f64, theta: f64) -> Self {
        PrepConfig {
            l: l.into(),
            theta0,
            theta,
        }
    }
}

/// Direction of the pump polarization, in radians from vertical toward +H.
///
/// The pump plate at `theta` reflects the horizontal pump about its fast
/// axis, landing at `2·theta − π/2`; the returned value is the same line
/// expressed at `2·theta + π/2` so that the perpendicular direction is a
/// further +π/2 rotation.
pub fn pump_basis_angle(theta: f64) -> f64 {
    2.0 * theta + FRAC_PI_2
}

/// Closed form of the prepared signal state.
pub fn prepared_signal(cfg: &PrepConfig) -> HybridState {
    let i = Complex64::i();
    let plus = Complex64::cis(2.0 * cfg.theta0);
    let minus = Complex64::cis(-2.0 * cfg.theta0);
    HybridState::from_amplitudes_raw([
        ((cfg.l, PolAxis::H), 0.5 * i * plus),
        ((cfg.l.flipped(), PolAxis::H), 0.5 * minus),
        ((cfg.l, PolAxis::V), -0.5 * plus),
        ((cfg.l.flipped(), PolAxis::V), -0.5 * i * minus),
    ])
}

/// The same state built by composing the chain element by element:
/// imprint loop, quarter-wave plate at π/4, half-wave plate at `theta0`,
/// applied to the balanced Gaussian input (|0,H⟩ + |0,V⟩)/√2.
///
/// Agrees with [`prepared_signal`] up to the fixed global phase 3π/4.
pub fn prepared_signal_via_elements(cfg: &PrepConfig) -> Result<HybridState> {
    let one = Complex64::new(1.0, 0.0);
    let balanced = HybridState::superpose(&[
        (one, &HybridState::basis_state(OamIndex(0), PolAxis::H)),
        (one, &HybridState::basis_state(OamIndex(0), PolAxis::V)),
    ])?;
    let looped = sagnac(cfg.l).apply(&balanced)?;
    let after_qwp = qwp(FRAC_PI_4).apply(&looped)?;
    hwp(cfg.theta0).apply(&after_qwp)
}

/// The prepared signal re-expressed in the pump polarization frame.
///
/// The returned state's V component is the pump-parallel block and its H
/// component the pump-perpendicular block (see the module docs for the
/// coefficient formulas). The norm of each block is ½ for every
/// configuration.
pub fn signal_in_pump_basis(cfg: &PrepConfig) -> HybridState {
    prepared_signal(cfg).rotate_pol_basis(pump_basis_angle(cfg.theta))
}
