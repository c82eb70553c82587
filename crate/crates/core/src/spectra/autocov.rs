use faer::Mat;
use num_complex::Complex64;
use rustfft::FftPlanner;

use super::grid::GridSpectrum;
use crate::error::{Error, Result};
use crate::hermitian::{eigvalsh, HermitianMatrix, PsdPolicy, SymmetricMatrix, HERMITIAN_TOL};

/// Imaginary residue above which an inverse transform is rejected.
pub const MAX_IMAG_RESIDUE: f64 = 1e-6;

/// Lag sequence `R(k) = E[x_i x_{i+k}ᵀ]`, `k = 0..=K`, of a stationary
/// process; negative lags follow from `R(-k) = R(k)ᵀ`.
#[derive(Clone, Debug, PartialEq)]
pub struct Autocovariance {
    dim: usize,
    lags: Vec<Mat<f64>>,
}

impl Autocovariance {
    /// Checks shapes and that `R(0)` is symmetric positive definite.
    pub fn new(lags: Vec<Mat<f64>>) -> Result<Self> {
        let Some(r0) = lags.first() else {
            return Err(Error::InvalidArgument("autocovariance needs at least R(0)".into()));
        };
        let dim = r0.nrows();
        for r in &lags {
            if r.nrows() != dim || r.ncols() != dim {
                return Err(Error::DimensionMismatch { left: dim, right: r.nrows().max(r.ncols()) });
            }
            for j in 0..dim {
                for i in 0..dim {
                    if !r[(i, j)].is_finite() {
                        return Err(Error::InvalidArgument("autocovariance has non-finite entries".into()));
                    }
                }
            }
        }
        let r0 = SymmetricMatrix::new(r0.clone()).map_err(|e| match e {
            Error::NonHermitianInput { residual, tolerance } => {
                Error::InvalidArgument(format!("R(0) is not symmetric (residual {residual:.3e} > {tolerance:.3e})"))
            }
            other => other,
        })?;
        let min = eigvalsh(&r0)?[0];
        if min <= 0.0 {
            return Err(Error::NotPositiveDefinite { context: "R(0)".into(), min_eigenvalue: min });
        }
        let mut lags = lags;
        lags[0] = r0.into_mat();
        Ok(Self { dim, lags })
    }

    /// Scalar autocovariance `r[k] = R(k)`.
    pub fn scalar(lags: &[f64]) -> Result<Self> {
        Self::new(lags.iter().map(|&r| Mat::from_fn(1, 1, |_, _| r)).collect())
    }

    pub fn from_rows(lags: &[Vec<Vec<f64>>]) -> Result<Self> {
        let mats = lags
            .iter()
            .map(|rows| {
                let n = rows.len();
                if rows.iter().any(|r| r.len() != n) {
                    return Err(Error::InvalidArgument("lag matrices must be square".into()));
                }
                Ok(Mat::from_fn(n, n, |i, j| rows[i][j]))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(mats)
    }

    pub fn to_rows(&self) -> Vec<Vec<Vec<f64>>> {
        self.lags
            .iter()
            .map(|r| (0..self.dim).map(|i| (0..self.dim).map(|j| r[(i, j)]).collect()).collect())
            .collect()
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn max_lag(&self) -> usize {
        self.lags.len() - 1
    }

    /// `R(0..=K)`.
    pub fn lags(&self) -> &[Mat<f64>] {
        &self.lags
    }

    /// `R(k)` for any signed lag; zero beyond `max_lag`.
    pub fn lag(&self, k: isize) -> Mat<f64> {
        let n = self.dim;
        let idx = k.unsigned_abs();
        if idx > self.max_lag() {
            return Mat::zeros(n, n);
        }
        let r = &self.lags[idx];
        if k >= 0 {
            r.clone()
        } else {
            r.transpose().to_owned()
        }
    }

    /// Entry `(row, col)` of `R(k)` for any signed lag, without allocating.
    #[inline]
    pub fn entry(&self, k: isize, row: usize, col: usize) -> f64 {
        let idx = k.unsigned_abs();
        if idx > self.max_lag() {
            return 0.0;
        }
        if k >= 0 {
            self.lags[idx][(row, col)]
        } else {
            self.lags[idx][(col, row)]
        }
    }

    /// Keeps lags `0..=max_lag`.
    pub fn truncated(&self, max_lag: usize) -> Self {
        let keep = (max_lag + 1).min(self.lags.len());
        Self { dim: self.dim, lags: self.lags[..keep].to_vec() }
    }

    /// Multiplies `R(k)` by the Bartlett weight `1 - |k|/(K+1)`.
    pub fn with_bartlett_taper(&self) -> Self {
        let denom = (self.max_lag() + 1) as f64;
        let lags = self
            .lags
            .iter()
            .enumerate()
            .map(|(k, r)| {
                let w = 1.0 - k as f64 / denom;
                Mat::from_fn(self.dim, self.dim, |i, j| r[(i, j)] * w)
            })
            .collect();
        Self { dim: self.dim, lags }
    }

    pub fn trace_r0(&self) -> f64 {
        (0..self.dim).map(|i| self.lags[0][(i, i)]).sum()
    }
}

/// Result of [`autocov_to_spectrum`].
#[derive(Clone, Debug)]
pub struct SpectrumFromAutocov {
    pub spectrum: GridSpectrum,
    /// Frequencies whose value had to be floored.
    pub floored_frequencies: usize,
}

/// `Φ(ω_l) = Σ_{|k|≤K} R(k) e^{-jω_l k}` on an `n_freq`-point grid.
pub fn autocov_to_spectrum(acov: &Autocovariance, n_freq: usize, policy: &PsdPolicy) -> Result<SpectrumFromAutocov> {
    let required = 2 * acov.max_lag() + 1;
    if n_freq < required {
        return Err(Error::GridTooCoarse { n_freq, max_lag: acov.max_lag(), required });
    }
    let m = acov.dim();
    let k_max = acov.max_lag() as isize;
    let fft = FftPlanner::<f64>::new().plan_fft_forward(n_freq);
    // entries[(i, j)] holds the transform of lag sequence R(·)[i, j]
    let mut entries = vec![Vec::new(); m * m];
    for i in 0..m {
        for j in 0..m {
            let mut buf = vec![Complex64::new(0.0, 0.0); n_freq];
            for k in -k_max..=k_max {
                let slot = k.rem_euclid(n_freq as isize) as usize;
                buf[slot] += Complex64::new(acov.entry(k, i, j), 0.0);
            }
            fft.process(&mut buf);
            entries[i * m + j] = buf;
        }
    }
    let values = (0..n_freq)
        .map(|l| {
            let mat = Mat::from_fn(m, m, |i, j| entries[i * m + j][l]);
            HermitianMatrix::hermitian_part(mat.as_ref())
        })
        .collect();
    let spectrum = GridSpectrum::new(values, policy)?;
    let floored_frequencies = spectrum.flooring_count();
    Ok(SpectrumFromAutocov { spectrum, floored_frequencies })
}

/// Result of [`spectrum_to_autocov`].
#[derive(Clone, Debug)]
pub struct AutocovFromSpectrum {
    pub autocov: Autocovariance,
    /// Largest imaginary part discarded from the lags.
    pub imag_residual: f64,
}

/// `R(k) = (1/N) Σ_l Φ(ω_l) e^{jω_l k}` for `k = 0..=max_lag`.
pub fn spectrum_to_autocov(spec: &GridSpectrum, max_lag: usize) -> Result<AutocovFromSpectrum> {
    let n = spec.n_freq();
    if 2 * max_lag >= n {
        return Err(Error::LagTooLarge { max_lag, n_freq: n });
    }
    let (lags, imag_residual) = inverse_transform(spec.values(), max_lag)?;
    if imag_residual > MAX_IMAG_RESIDUE {
        return Err(Error::NonRealResidue { residue: imag_residual });
    }
    Ok(AutocovFromSpectrum { autocov: Autocovariance::new(lags)?, imag_residual })
}

/// Inverse DFT of matrix samples, real parts of lags `0..=max_lag` and the
/// largest discarded imaginary part.
pub(crate) fn inverse_transform(values: &[HermitianMatrix], max_lag: usize) -> Result<(Vec<Mat<f64>>, f64)> {
    let n = values.len();
    let m = values[0].dim();
    let ifft = FftPlanner::<f64>::new().plan_fft_inverse(n);
    let mut lags = vec![Mat::<f64>::zeros(m, m); max_lag + 1];
    let mut residual = 0.0f64;
    let scale = 1.0 / n as f64;
    for i in 0..m {
        for j in 0..m {
            let mut buf: Vec<Complex64> = values.iter().map(|v| v.get(i, j)).collect();
            ifft.process(&mut buf);
            for (k, lag) in lags.iter_mut().enumerate() {
                let z = buf[k] * scale;
                residual = residual.max(z.im.abs());
                lag[(i, j)] = z.re;
            }
        }
    }
    // R(0) is symmetric up to rounding
    let r0 = &lags[0];
    let mut scale0 = 0.0f64;
    let mut asym = 0.0f64;
    for i in 0..m {
        for j in 0..m {
            scale0 = scale0.max(r0[(i, j)].abs());
            asym = asym.max((r0[(i, j)] - r0[(j, i)]).abs());
        }
    }
    if asym > 1e3 * HERMITIAN_TOL * scale0.max(f64::MIN_POSITIVE) {
        return Err(Error::InvalidArgument(format!("inverse transform produced an asymmetric R(0) ({asym:.3e})")));
    }
    lags[0] = Mat::from_fn(m, m, |i, j| 0.5 * (r0[(i, j)] + r0[(j, i)]));
    Ok((lags, residual))
}
