//! Transverse field synthesis and intensity images.
//!
//! States are synthesized on a square grid using waist-plane Laguerre-Gauss
//! modes with radial index 0 (no propagation or Gouy phases: the patterns of
//! interest live in the waist plane). Within one polarization the OAM terms
//! add in amplitude; orthogonal polarizations add in intensity, since a
//! camera is polarization-insensitive.

use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::path::Path;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::state::{HybridState, OamIndex, PolAxis};

/// The ring radius of the highest charge is placed at this fraction of the
/// window half-width when the nominal waist would push it further out.
pub const RING_WINDOW_FRACTION: f64 = 0.6;

/// Square rendering window.
///
/// The window spans `[−extent·w, extent·w]` on both axes with `n` pixels per
/// side; pixel centers are cell-centered and the top row holds the largest y
/// (image coordinates: x right, y up).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    /// Pixels per side.
    pub n: usize,
    /// Half-width of the window in units of the beam waist.
    pub extent: f64,
    /// Beam waist, arbitrary length unit.
    pub w: f64,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            n: 512,
            extent: 2.5,
            w: 1.0,
        }
    }
}

impl GridSpec {
    pub fn validate(&self) -> Result<()> {
        if self.n < 32 {
            return Err(Error::InvalidParameter(format!(
                "grid needs at least 32 pixels per side, got {}",
                self.n
            )));
        }
        if !(self.extent > 0.0) || !(self.w > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "grid extent and waist must be positive, got extent={} w={}",
                self.extent, self.w
            )));
        }
        Ok(())
    }

    /// Physical half-width of the window.
    pub fn half_width(&self) -> f64 {
        self.extent * self.w
    }

    /// Pixel pitch.
    pub fn pixel_size(&self) -> f64 {
        2.0 * self.half_width() / self.n as f64
    }

    /// Waist actually used when rendering a state whose largest charge is
    /// `l_max`.
    ///
    /// The nominal waist is kept as long as the intensity ring at
    /// `w·sqrt(l/2)` stays inside [`RING_WINDOW_FRACTION`] of the half-width;
    /// beyond that the waist shrinks to pin the ring there, so large charges
    /// never clip the window.
    pub fn render_waist(&self, l_max: u32) -> f64 {
        if l_max == 0 {
            return self.w;
        }
        let ring_unit = (l_max as f64 / 2.0).sqrt();
        let cap = RING_WINDOW_FRACTION * self.half_width() / ring_unit;
        self.w.min(cap)
    }

    /// Intensity ring radius of charge `l_max` under [`Self::render_waist`].
    pub fn ring_radius(&self, l_max: u32) -> f64 {
        self.render_waist(l_max) * (l_max as f64 / 2.0).sqrt()
    }

    /// x coordinate of a pixel-center column.
    pub fn x_at(&self, col: usize) -> f64 {
        (col as f64 + 0.5) * self.pixel_size() - self.half_width()
    }

    /// y coordinate of a pixel-center row (row 0 on top).
    pub fn y_at(&self, row: usize) -> f64 {
        self.half_width() - (row as f64 + 0.5) * self.pixel_size()
    }
}

/// Waist-plane Laguerre-Gauss amplitude of radial index 0 and charge `l`.
///
/// Returns `N_l (√2 r/w)^{|l|} e^{−r²/w²} e^{i l φ}` with `N_l` chosen so the
/// squared modulus integrates to 1 over the plane. Valid for `|l| ≤ 170`
/// (beyond which the factorial in the normalization overflows f64).
pub fn lg_amplitude(l: OamIndex, r: f64, phi: f64, w: f64) -> Complex64 {
    let la = l.abs();
    let norm = (2.0 / (std::f64::consts::PI * w * w * factorial(la))).sqrt();
    let rho = std::f64::consts::SQRT_2 * r / w;
    let radial = norm * rho.powi(la as i32) * (-r * r / (w * w)).exp();
    radial * Complex64::cis(l.0 as f64 * phi)
}

fn factorial(n: u32) -> f64 {
    (1..=n).fold(1.0f64, |acc, k| acc * k as f64)
}

/// Whether pixel values are raw intensities or scaled to unit peak.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Normalization {
    Raw,
    UnitPeak,
}

/// Square grid of non-negative intensities with its generating [`GridSpec`].
#[derive(Debug, Clone, PartialEq)]
pub struct IntensityImage {
    grid: GridSpec,
    /// Waist used at synthesis time (after the large-charge cap).
    waist: f64,
    pixels: Vec<f64>,
    normalization: Normalization,
}

impl IntensityImage {
    /// Builds an image from raw pixels (row-major, top row first).
    pub fn from_pixels(grid: GridSpec, waist: f64, pixels: Vec<f64>) -> Result<Self> {
        grid.validate()?;
        if pixels.len() != grid.n * grid.n {
            return Err(Error::InvalidParameter(format!(
                "pixel buffer holds {} values, grid wants {}",
                pixels.len(),
                grid.n * grid.n
            )));
        }
        if pixels.iter().any(|p| !p.is_finite() || *p < 0.0) {
            return Err(Error::InvalidParameter(
                "pixels must be finite and non-negative".into(),
            ));
        }
        Ok(IntensityImage {
            grid,
            waist,
            pixels,
            normalization: Normalization::Raw,
        })
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    /// Waist used at synthesis time.
    pub fn waist(&self) -> f64 {
        self.waist
    }

    pub fn n(&self) -> usize {
        self.grid.n
    }

    pub fn pixels(&self) -> &[f64] {
        &self.pixels
    }

    pub fn pixel(&self, row: usize, col: usize) -> f64 {
        self.pixels[row * self.grid.n + col]
    }

    pub fn normalization(&self) -> Normalization {
        self.normalization
    }

    pub fn max_pixel(&self) -> f64 {
        self.pixels.iter().cloned().fold(0.0, f64::max)
    }

    /// Riemann-sum energy: Σ pixels × pixel area.
    pub fn energy(&self) -> f64 {
        let da = self.grid.pixel_size().powi(2);
        self.pixels.iter().sum::<f64>() * da
    }

    /// The same image scaled so the peak pixel is exactly 1.
    pub fn to_unit_peak(self) -> Result<Self> {
        let max = self.max_pixel();
        if max <= 0.0 {
            return Err(Error::AllZeroImage);
        }
        let pixels = self.pixels.iter().map(|p| p / max).collect();
        Ok(IntensityImage {
            pixels,
            normalization: Normalization::UnitPeak,
            ..self
        })
    }

    /// Writes the image as binary PGM ("P5"), 16-bit big-endian, maxval
    /// 65535, with `pixel = round(65535 · I / I_max)`.
    ///
    /// Deterministic byte-for-byte for identical inputs. Fails with
    /// [`Error::AllZeroImage`] when there is no intensity to scale against.
    pub fn write_pgm(&self, path: impl AsRef<Path>) -> Result<()> {
        let max = self.max_pixel();
        if max <= 0.0 {
            return Err(Error::AllZeroImage);
        }
        let file = File::create(path)?;
        let mut out = BufWriter::new(file);
        write!(out, "P5\n{} {}\n65535\n", self.grid.n, self.grid.n)?;
        for p in &self.pixels {
            let v = (65535.0 * p / max).round() as u16;
            out.write_all(&v.to_be_bytes())?;
        }
        out.flush()?;
        Ok(())
    }
}

/// Synthesizes the intensity image of a hybrid state.
///
/// `I(x, y) = Σ_pol |Σ_l a_{l,pol} · LG_l(r, φ)|²` at pixel centers, with the
/// waist from [`GridSpec::render_waist`] for the state's largest charge.
/// Pixels are evaluated independently (rows in parallel); the result is
/// deterministic.
pub fn render(state: &HybridState, grid: &GridSpec) -> Result<IntensityImage> {
    grid.validate()?;
    let w = grid.render_waist(state.max_abs_oam());
    let h_terms: Vec<(OamIndex, Complex64)> = state
        .amplitudes()
        .filter(|((_, p), _)| *p == PolAxis::H)
        .map(|((l, _), a)| (l, a))
        .collect();
    let v_terms: Vec<(OamIndex, Complex64)> = state
        .amplitudes()
        .filter(|((_, p), _)| *p == PolAxis::V)
        .map(|((l, _), a)| (l, a))
        .collect();

    let n = grid.n;
    let mut pixels = vec![0.0f64; n * n];
    pixels
        .par_chunks_mut(n)
        .enumerate()
        .for_each(|(row, out_row)| {
            let y = grid.y_at(row);
            for (col, out) in out_row.iter_mut().enumerate() {
                let x = grid.x_at(col);
                let r = x.hypot(y);
                let phi = y.atan2(x);
                let mut intensity = 0.0;
                for terms in [&h_terms, &v_terms] {
                    if terms.is_empty() {
                        continue;
                    }
                    let mut field = Complex64::new(0.0, 0.0);
                    for (l, a) in terms.iter() {
                        field += a * lg_amplitude(*l, r, phi, w);
                    }
                    intensity += field.norm_sqr();
                }
                *out = intensity;
            }
        });

    IntensityImage::from_pixels(*grid, w, pixels)
}

/// Reads back a binary 16-bit PGM written by [`IntensityImage::write_pgm`].
///
/// Returns `(width, height, samples)`; mostly a test and example helper.
pub fn read_pgm(path: impl AsRef<Path>) -> Result<(usize, usize, Vec<u16>)> {
    let mut bytes = Vec::new();
    File::open(path)?.read_to_end(&mut bytes)?;
    let bad = |msg: &str| Error::InvalidParameter(format!("not a 16-bit P5 PGM: {msg}"));

    // Header: three whitespace-separated tokens after the magic, no comments.
    let mut pos = 0usize;
    let mut token = |bytes: &[u8]| -> Result<String> {
        while pos < bytes.len() && bytes[pos].is_ascii_whitespace() {
            pos += 1;
        }
        let start = pos;
        while pos < bytes.len() && !bytes[pos].is_ascii_whitespace() {
            pos += 1;
        }
        if start == pos {
            return Err(bad("truncated header"));
        }
        Ok(String::from_utf8_lossy(&bytes[start..pos]).into_owned())
    };

    if token(&bytes)? != "P5" {
        return Err(bad("missing P5 magic"));
    }
    let width: usize = token(&bytes)?.parse().map_err(|_| bad("width"))?;
    let height: usize = token(&bytes)?.parse().map_err(|_| bad("height"))?;
    let maxval: u32 = token(&bytes)?.parse().map_err(|_| bad("maxval"))?;
    if maxval != 65535 {
        return Err(bad("expected maxval 65535"));
    }
    pos += 1; // single whitespace byte after maxval
    let data = &bytes[pos..];
    if data.len() != width * height * 2 {
        return Err(bad("sample count mismatch"));
    }
    let samples = data
        .chunks_exact(2)
        .map(|c| u16::from_be_bytes([c[0], c[1]]))
        .collect();
    Ok((width, height, samples))
}
