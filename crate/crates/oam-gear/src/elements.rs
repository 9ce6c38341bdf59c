//! Constructors for the optical elements of the preparation chain: wave
//! plates, the vortex phase plate, the Sagnac-style imprint loop and the
//! polarizing beam splitter.
//!
//! # Angle convention
//!
//! Every fast-axis angle `chi` is measured **from the vertical axis toward
//! +H**. Internally the conventional from-horizontal angle `psi = π/2 − chi`
//! parameterizes the standard retarder matrices (fast axis unretarded, slow
//! axis delayed). With this convention `hwp(chi)` maps vertical light onto
//! the linear polarization at `2·chi` from vertical, measured toward +H.
//!
//! Wave-plate matrices are adopted verbatim and never re-phased; composed
//! chains therefore reproduce closed-form states only up to a fixed global
//! phase, and state comparisons should use overlap magnitudes.

use num_complex::Complex64;

use crate::operator::{Action, ElementOperator, JonesMatrix, OperatorKind};
use crate::state::{OamIndex, PolAxis};

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Half-wave plate with its fast axis at `chi` from vertical.
///
/// In the (H, V) basis, with `psi = π/2 − chi`:
/// `[[cos 2psi, sin 2psi], [sin 2psi, −cos 2psi]]`.
pub fn hwp(chi: f64) -> ElementOperator {
    let psi = std::f64::consts::FRAC_PI_2 - chi;
    let (s2, c2) = (2.0 * psi).sin_cos();
    let m: JonesMatrix = [[re(c2), re(s2)], [re(s2), re(-c2)]];
    ElementOperator::new(OperatorKind::Unitary, Action::Jones(m))
}

/// Quarter-wave plate with its fast axis at `chi` from vertical.
///
/// In the (H, V) basis, with `psi = π/2 − chi`:
/// `[[cos²psi + i sin²psi, (1−i) sinpsi cospsi], [(1−i) sinpsi cospsi, sin²psi + i cos²psi]]`.
pub fn qwp(chi: f64) -> ElementOperator {
    let psi = std::f64::consts::FRAC_PI_2 - chi;
    let (s, c) = psi.sin_cos();
    let i = Complex64::i();
    let diag_h = re(c * c) + i * (s * s);
    let diag_v = re(s * s) + i * (c * c);
    let off = (re(1.0) - i) * (s * c);
    let m: JonesMatrix = [[diag_h, off], [off, diag_v]];
    ElementOperator::new(OperatorKind::Unitary, Action::Jones(m))
}

/// Vortex phase plate: maps |0,H⟩ → |+l,H⟩ and |0,V⟩ → |−l,V⟩.
///
/// A partial isometry from the charge-0 subspace into the ±l subspace;
/// applying it to a state with content outside OAM 0 is an error.
pub fn phase_plate(l: OamIndex) -> ElementOperator {
    ElementOperator::new(
        OperatorKind::PartialIsometry,
        Action::OamImprint {
            l,
            balance_check: false,
        },
    )
}

/// Sagnac-style imprint loop built around [`phase_plate`].
///
/// Identical action to the phase plate at this level of abstraction (the
/// loop's internal mirror phases are absorbed into the plate definition);
/// provided as a named alias so a preparation chain reads element by element.
/// The loop expects equal H and V magnitudes on its Gaussian input and logs a
/// warning when they differ by more than 1e-9; the output is still produced.
pub fn sagnac(l: OamIndex) -> ElementOperator {
    ElementOperator::new(
        OperatorKind::PartialIsometry,
        Action::OamImprint {
            l,
            balance_check: true,
        },
    )
}

/// Polarizing beam splitter: the (transmit-H, reflect-V) port projectors.
///
/// Each port keeps one polarization without renormalizing; port
/// probabilities come from [`HybridState::project_pol`](crate::HybridState::project_pol).
pub fn pbs() -> (ElementOperator, ElementOperator) {
    (
        ElementOperator::new(
            OperatorKind::PartialIsometry,
            Action::PolarizationPort(PolAxis::H),
        ),
        ElementOperator::new(
            OperatorKind::PartialIsometry,
            Action::PolarizationPort(PolAxis::V),
        ),
    )
}
