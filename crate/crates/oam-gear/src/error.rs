//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by state algebra, rendering, analysis and the CLI layer.
#[derive(Debug, Error)]
pub enum Error {
    /// A superposition or projection produced a state with vanishing norm.
    #[error("state has zero norm and cannot be normalized")]
    ZeroNorm,

    /// An operator was applied to a state outside its supported subspace.
    #[error("unsupported input: {0}")]
    UnsupportedInput(String),

    /// A parameter failed validation (non-positive scale factor, bad grid, ...).
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Attempt to write a PGM image whose pixels are all zero.
    #[error("image is identically zero; nothing to scale against")]
    AllZeroImage,

    /// The requested annulus does not fit inside the rendered window.
    #[error("annulus [{r_inner}, {r_outer}] exceeds the grid half-width {half_width}")]
    AnnulusOutsideWindow {
        r_inner: f64,
        r_outer: f64,
        half_width: f64,
    },

    /// No pixels contributed to one of the azimuthal bins (grid too coarse).
    #[error("no pixels fall in azimuthal bin {bin}; grid too coarse for this annulus")]
    EmptyAnnulus { bin: usize },

    /// The profile carries no azimuthal structure above the flatness threshold.
    #[error("profile is flat; no dominant harmonic")]
    FlatProfile,

    /// Too few samples for the requested fit or sweep.
    #[error("need at least {needed} samples, got {got}")]
    InsufficientSamples { needed: usize, got: usize },

    /// Consecutive rotation increments too large to unwrap unambiguously.
    #[error("unwrap ambiguity: {0}")]
    UnwrapAmbiguity(String),

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),

    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),

    #[error("config error: {0}")]
    Config(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
