//! Hybrid states over the joint (OAM, polarization) basis.
//!
//! A [`HybridState`] is a sparse complex amplitude map over basis pairs
//! `(l, H|V)`, where `l` is the topological charge of the spatial mode and
//! `H`/`V` are the fixed linear laboratory polarization axes. States are
//! immutable after construction and all operations are pure functions, so
//! values may be shared freely across threads.
//!
//! Angle convention used throughout the crate: polarization directions are
//! measured **from the vertical axis toward +H**. A linear polarization at
//! angle `chi` from vertical is the Jones vector `(sin chi, cos chi)` in the
//! `(H, V)` component order.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Squared-norm agreement required for a state to be flagged as unit.
pub const NORM_TOL: f64 = 1e-12;

/// Amplitudes below this magnitude are dropped from the sparse map.
pub const PRUNE_TOL: f64 = 1e-15;

/// Topological charge of an orbital-angular-momentum mode.
///
/// The azimuthal phase winding of the mode is `exp(i l φ)`. Charges up to
/// `|l| = 50` are supported by every stage of the simulator; the state
/// algebra itself places no bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OamIndex(pub i32);

impl OamIndex {
    /// Magnitude of the charge.
    pub fn abs(self) -> u32 {
        self.0.unsigned_abs()
    }

    /// Charge of opposite sign.
    pub fn flipped(self) -> Self {
        OamIndex(-self.0)
    }
}

impl From<i32> for OamIndex {
    fn from(l: i32) -> Self {
        OamIndex(l)
    }
}

impl fmt::Display for OamIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Fixed linear laboratory polarization basis.
///
/// Rotated linear polarizations are expressed as superpositions of these two.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PolAxis {
    /// Horizontal.
    H,
    /// Vertical.
    V,
}

impl PolAxis {
    /// The orthogonal axis.
    pub fn other(self) -> Self {
        match self {
            PolAxis::H => PolAxis::V,
            PolAxis::V => PolAxis::H,
        }
    }
}

impl fmt::Display for PolAxis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PolAxis::H => write!(f, "H"),
            PolAxis::V => write!(f, "V"),
        }
    }
}

/// Sparse superposition state over `(OamIndex, PolAxis)` basis pairs.
///
/// Exact zeros are never stored; amplitudes below [`PRUNE_TOL`] are pruned
/// after every operation. The `unit` flag records whether the squared norm
/// is 1 within [`NORM_TOL`].
#[derive(Debug, Clone, PartialEq)]
pub struct HybridState {
    amps: BTreeMap<(OamIndex, PolAxis), Complex64>,
    unit: bool,
}

impl HybridState {
    /// The normalized basis state with amplitude 1 on `(l, p)`.
    pub fn basis_state(l: OamIndex, p: PolAxis) -> Self {
        let mut amps = BTreeMap::new();
        amps.insert((l, p), Complex64::new(1.0, 0.0));
        HybridState { amps, unit: true }
    }

    /// Builds a state from raw amplitudes without normalizing.
    ///
    /// Prunes sub-[`PRUNE_TOL`] entries and sets the unit flag from the
    /// resulting norm.
    pub(crate) fn from_amplitudes_raw<I>(entries: I) -> Self
    where
        I: IntoIterator<Item = ((OamIndex, PolAxis), Complex64)>,
    {
        let mut amps: BTreeMap<(OamIndex, PolAxis), Complex64> = BTreeMap::new();
        for (key, a) in entries {
            *amps.entry(key).or_insert(Complex64::new(0.0, 0.0)) += a;
        }
        amps.retain(|_, a| a.norm() >= PRUNE_TOL);
        let norm_sqr: f64 = amps.values().map(|a| a.norm_sqr()).sum();
        HybridState {
            amps,
            unit: (norm_sqr - 1.0).abs() <= NORM_TOL,
        }
    }

    /// Linear combination of states, renormalized to unit norm.
    ///
    /// Fails with [`Error::ZeroNorm`] when the combination cancels.
    pub fn superpose(terms: &[(Complex64, &HybridState)]) -> Result<Self> {
        let entries = terms.iter().flat_map(|(c, s)| {
            s.amps
                .iter()
                .map(move |(key, a)| (*key, c * a))
        });
        HybridState::from_amplitudes_raw(entries).renormalized()
    }

    /// Returns the same state scaled to unit norm.
    pub(crate) fn renormalized(mut self) -> Result<Self> {
        let norm = self.norm();
        if norm < NORM_TOL {
            return Err(Error::ZeroNorm);
        }
        for a in self.amps.values_mut() {
            *a /= norm;
        }
        self.amps.retain(|_, a| a.norm() >= PRUNE_TOL);
        self.unit = true;
        Ok(self)
    }

    /// Amplitude on `(l, p)`, zero if absent.
    pub fn amplitude(&self, l: OamIndex, p: PolAxis) -> Complex64 {
        self.amps
            .get(&(l, p))
            .copied()
            .unwrap_or(Complex64::new(0.0, 0.0))
    }

    /// Iterates over the stored `((l, p), amplitude)` entries in key order.
    pub fn amplitudes(&self) -> impl Iterator<Item = ((OamIndex, PolAxis), Complex64)> + '_ {
        self.amps.iter().map(|(k, a)| (*k, *a))
    }

    /// Number of stored amplitudes.
    pub fn len(&self) -> usize {
        self.amps.len()
    }

    /// True when no amplitude is stored.
    pub fn is_empty(&self) -> bool {
        self.amps.is_empty()
    }

    /// Squared norm Σ|a|².
    pub fn norm_sqr(&self) -> f64 {
        self.amps.values().map(|a| a.norm_sqr()).sum()
    }

    /// Norm.
    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Whether the state was verified unit-norm at construction.
    pub fn is_unit(&self) -> bool {
        self.unit
    }

    /// Largest |l| present in the state, 0 for polarization-only content.
    pub fn max_abs_oam(&self) -> u32 {
        self.amps.keys().map(|(l, _)| l.abs()).max().unwrap_or(0)
    }

    /// Inner product ⟨self|other⟩ with conjugation on `self`.
    pub fn inner_product(&self, other: &HybridState) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (key, a) in &self.amps {
            if let Some(b) = other.amps.get(key) {
                acc += a.conj() * b;
            }
        }
        acc
    }

    /// Projects onto one polarization axis.
    ///
    /// Returns the renormalized component together with the projection
    /// probability (the component's squared-norm fraction of the total).
    /// A vanishing component yields `(None, 0.0)`.
    pub fn project_pol(&self, p: PolAxis) -> (Option<HybridState>, f64) {
        let component: Vec<_> = self
            .amps
            .iter()
            .filter(|((_, pol), _)| *pol == p)
            .map(|(k, a)| (*k, *a))
            .collect();
        let comp_sqr: f64 = component.iter().map(|(_, a)| a.norm_sqr()).sum();
        let total_sqr = self.norm_sqr();
        if total_sqr <= 0.0 || comp_sqr / total_sqr < NORM_TOL * NORM_TOL {
            return (None, 0.0);
        }
        let state = HybridState::from_amplitudes_raw(component)
            .renormalized()
            .expect("nonzero component");
        (Some(state), comp_sqr / total_sqr)
    }

    /// Re-expresses the state in a rotated linear polarization basis.
    ///
    /// `chi` is the angle of the new vertical axis from the old one, measured
    /// from vertical toward +H. The new basis vectors are
    /// `V' = sin(chi) H + cos(chi) V` and `H' = cos(chi) H − sin(chi) V`
    /// (the orthogonal direction at `chi + π/2`), so `chi = 0` is the
    /// identity. The rotation is an isometry; OAM content is untouched.
    pub fn rotate_pol_basis(&self, chi: f64) -> HybridState {
        let (s, c) = chi.sin_cos();
        let ls: Vec<OamIndex> = {
            let mut v: Vec<_> = self.amps.keys().map(|(l, _)| *l).collect();
            v.dedup();
            v
        };
        let entries = ls.into_iter().flat_map(|l| {
            let a_h = self.amplitude(l, PolAxis::H);
            let a_v = self.amplitude(l, PolAxis::V);
            [
                ((l, PolAxis::H), c * a_h - s * a_v),
                ((l, PolAxis::V), s * a_h + c * a_v),
            ]
        });
        HybridState::from_amplitudes_raw(entries)
    }
}
