//! Welch cross-spectral estimation.
//!
//! Each segment is windowed and transformed; the cross-periodogram
//! `conj(X(ω)) X(ω)ᵀ / Σ_k w[k]²` estimates `Φ(ω) = Σ_k R(k) e^{-jωk}` with
//! `R(k) = E[x_i x_{i+k}ᵀ]`. With that divisor a unit-variance white input
//! has expected estimate equal to the identity at every frequency.

use std::f64::consts::PI;

use faer::Mat;
use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use super::grid::GridSpectrum;
use crate::error::{Error, Result};
use crate::hermitian::{HermitianMatrix, PsdPolicy};

/// Minimum number of averaged segments.
pub const MIN_SEGMENTS: usize = 4;

/// Zero-mean `m`-variate series stored sample-major.
#[derive(Clone, Debug, PartialEq)]
pub struct TimeSeries {
    dim: usize,
    data: Vec<f64>,
}

impl TimeSeries {
    /// `data` holds `len * dim` values, one sample after another.
    pub fn new(dim: usize, data: Vec<f64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidArgument("time series dimension must be >= 1".into()));
        }
        if data.len() % dim != 0 {
            return Err(Error::DimensionMismatch { left: dim, right: data.len() % dim });
        }
        if data.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("time series contains non-finite samples".into()));
        }
        Ok(Self { dim, data })
    }

    pub fn from_samples(samples: &[Vec<f64>]) -> Result<Self> {
        let dim = samples.first().map(Vec::len).unwrap_or(0);
        if samples.iter().any(|s| s.len() != dim) {
            return Err(Error::InvalidArgument("every sample must have the same number of channels".into()));
        }
        Self::new(dim, samples.concat())
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.data.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn sample(&self, t: usize) -> &[f64] {
        &self.data[t * self.dim..(t + 1) * self.dim]
    }

    pub fn samples(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks_exact(self.dim)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Window {
    Hann,
    Hamming,
    Rectangular,
}

impl Window {
    /// Periodic (DFT-even) window of length `len`.
    pub fn coefficients(self, len: usize) -> Vec<f64> {
        let n = len as f64;
        (0..len)
            .map(|k| {
                let x = 2.0 * PI * k as f64 / n;
                match self {
                    Window::Hann => 0.5 - 0.5 * x.cos(),
                    Window::Hamming => 0.54 - 0.46 * x.cos(),
                    Window::Rectangular => 1.0,
                }
            })
            .collect()
    }
}

impl std::str::FromStr for Window {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "hann" => Ok(Window::Hann),
            "hamming" => Ok(Window::Hamming),
            "rectangular" | "rect" | "boxcar" => Ok(Window::Rectangular),
            other => Err(Error::InvalidArgument(format!("unknown window '{other}'"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WelchConfig {
    /// Power of two; also the number of output frequencies.
    pub segment_len: usize,
    /// In `[0, 1)`.
    pub overlap_frac: f64,
    pub window: Window,
}

impl Default for WelchConfig {
    fn default() -> Self {
        Self { segment_len: 256, overlap_frac: 0.5, window: Window::Hann }
    }
}

impl WelchConfig {
    pub fn step(&self) -> usize {
        let overlap = (self.overlap_frac * self.segment_len as f64).round() as usize;
        (self.segment_len - overlap).max(1)
    }

    /// Number of full segments in a series of `len` samples.
    pub fn segment_count(&self, len: usize) -> usize {
        if len < self.segment_len {
            0
        } else {
            (len - self.segment_len) / self.step() + 1
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.segment_len < 2 || !self.segment_len.is_power_of_two() {
            return Err(Error::InvalidArgument(format!(
                "segment length must be a power of two >= 2, got {}",
                self.segment_len
            )));
        }
        if !(0.0..1.0).contains(&self.overlap_frac) {
            return Err(Error::InvalidArgument(format!("overlap must be in [0, 1), got {}", self.overlap_frac)));
        }
        Ok(())
    }
}

/// Averaged windowed cross-periodogram on the `segment_len`-point grid.
pub fn estimate_welch(ts: &TimeSeries, config: &WelchConfig, policy: &PsdPolicy) -> Result<GridSpectrum> {
    config.validate()?;
    let len = config.segment_len;
    let segments = config.segment_count(ts.len());
    if segments < MIN_SEGMENTS || ts.len() < 2 * len {
        return Err(Error::TooFewSegments { segments, required: MIN_SEGMENTS });
    }
    let m = ts.dim();
    let window = config.window.coefficients(len);
    let norm: f64 = window.iter().map(|w| w * w).sum();
    let fft = FftPlanner::<f64>::new().plan_fft_forward(len);

    let mut acc = vec![Mat::<Complex64>::zeros(m, m); len];
    let mut bufs = vec![vec![Complex64::new(0.0, 0.0); len]; m];
    for s in 0..segments {
        let start = s * config.step();
        for (ch, buf) in bufs.iter_mut().enumerate() {
            for (k, slot) in buf.iter_mut().enumerate() {
                *slot = Complex64::new(window[k] * ts.sample(start + k)[ch], 0.0);
            }
            fft.process(buf);
        }
        for (l, p) in acc.iter_mut().enumerate() {
            for j in 0..m {
                for i in 0..m {
                    p[(i, j)] += bufs[i][l].conj() * bufs[j][l];
                }
            }
        }
    }
    let scale = 1.0 / (norm * segments as f64);
    let values = acc
        .into_iter()
        .map(|p| {
            let p = Mat::from_fn(m, m, |i, j| p[(i, j)] * scale);
            HermitianMatrix::hermitian_part(p.as_ref())
        })
        .collect();
    GridSpectrum::new(values, policy)
}
