//! Linear maps on hybrid states.
//!
//! An [`ElementOperator`] is either a polarization-only Jones matrix (identity
//! on OAM), an OAM imprint that moves the charge-0 subspace onto ±l, or a
//! polarization port projector. Operators are immutable after construction.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::state::{HybridState, OamIndex, PolAxis};

/// Hermiticity class of an operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OperatorKind {
    /// O†O = I on the whole space.
    Unitary,
    /// Norm non-increasing; isometric on its supported subspace at most.
    PartialIsometry,
}

/// 2×2 complex Jones matrix in the (H, V) component order, row-major.
pub type JonesMatrix = [[Complex64; 2]; 2];

#[derive(Debug, Clone)]
pub(crate) enum Action {
    /// Acts on polarization only; identity on every OAM index.
    Jones(JonesMatrix),
    /// |0,H⟩ → |+l,H⟩ and |0,V⟩ → |−l,V⟩; defined on the OAM-0 subspace.
    OamImprint { l: OamIndex, balance_check: bool },
    /// Keeps one polarization without renormalizing (a beam-splitter port).
    PolarizationPort(PolAxis),
}

/// An optical element as a linear map over the finite basis it acts on.
#[derive(Debug, Clone)]
pub struct ElementOperator {
    kind: OperatorKind,
    action: Action,
}

impl ElementOperator {
    pub(crate) fn new(kind: OperatorKind, action: Action) -> Self {
        ElementOperator { kind, action }
    }

    pub fn kind(&self) -> OperatorKind {
        self.kind
    }

    /// The Jones matrix for polarization-only operators.
    pub fn jones(&self) -> Option<JonesMatrix> {
        match &self.action {
            Action::Jones(m) => Some(*m),
            _ => None,
        }
    }

    /// Max-abs deviation of O†O from the identity on the operator's support.
    ///
    /// Jones operators are checked numerically; the imprint and port maps are
    /// exact by construction, so their defect is reported from the definition.
    pub fn unitarity_defect(&self) -> f64 {
        match &self.action {
            Action::Jones(m) => {
                let mut worst = 0.0f64;
                for i in 0..2 {
                    for j in 0..2 {
                        // (O†O)_ij = Σ_k conj(m[k][i]) m[k][j]
                        let mut e = Complex64::new(0.0, 0.0);
                        for k in 0..2 {
                            e += m[k][i].conj() * m[k][j];
                        }
                        let target = if i == j { 1.0 } else { 0.0 };
                        worst = worst.max((e - Complex64::new(target, 0.0)).norm());
                    }
                }
                worst
            }
            // The imprint sends orthonormal basis vectors to orthonormal
            // basis vectors; ports are exact projectors.
            Action::OamImprint { .. } | Action::PolarizationPort(_) => 0.0,
        }
    }

    /// Applies the operator to a state.
    pub fn apply(&self, s: &HybridState) -> Result<HybridState> {
        match &self.action {
            Action::Jones(m) => Ok(apply_jones(m, s)),
            Action::OamImprint { l, balance_check } => {
                apply_imprint(*l, *balance_check, s)
            }
            Action::PolarizationPort(p) => {
                let entries: Vec<_> = s
                    .amplitudes()
                    .filter(|((_, pol), _)| pol == p)
                    .collect();
                if entries.is_empty() {
                    return Err(Error::ZeroNorm);
                }
                Ok(HybridState::from_amplitudes_raw(entries))
            }
        }
    }
}

fn apply_jones(m: &JonesMatrix, s: &HybridState) -> HybridState {
    let mut ls: Vec<OamIndex> = s.amplitudes().map(|((l, _), _)| l).collect();
    ls.dedup();
    let entries = ls.into_iter().flat_map(|l| {
        let a_h = s.amplitude(l, PolAxis::H);
        let a_v = s.amplitude(l, PolAxis::V);
        [
            ((l, PolAxis::H), m[0][0] * a_h + m[0][1] * a_v),
            ((l, PolAxis::V), m[1][0] * a_h + m[1][1] * a_v),
        ]
    });
    HybridState::from_amplitudes_raw(entries)
}

fn apply_imprint(l: OamIndex, balance_check: bool, s: &HybridState) -> Result<HybridState> {
    if s.amplitudes().any(|((li, _), _)| li != OamIndex(0)) {
        return Err(Error::UnsupportedInput(format!(
            "OAM imprint is defined on the charge-0 subspace; state carries |l| up to {}",
            s.max_abs_oam()
        )));
    }
    let a_h = s.amplitude(OamIndex(0), PolAxis::H);
    let a_v = s.amplitude(OamIndex(0), PolAxis::V);
    if balance_check && (a_h.norm() - a_v.norm()).abs() > 1e-9 {
        log::warn!(
            "unbalanced input to the interferometer loop: |a_H| = {:.6}, |a_V| = {:.6}",
            a_h.norm(),
            a_v.norm()
        );
    }
    Ok(HybridState::from_amplitudes_raw([
        ((l, PolAxis::H), a_h),
        ((l.flipped(), PolAxis::V), a_v),
    ]))
}
