//! ARMA-type rational spectra.
//!
//! A model `x_t = Σ_r A_r x_{t-r} + Σ_s B_s e_{t-s}`, `e_t ~ (0, Q)`, has
//! autocovariance `R(k) = E[x_i x_{i+k}ᵀ]` and spectrum
//! `Φ(ω) = Σ_k R(k) e^{-jωk} = G(e^{jω}) Q G(e^{jω})*` with
//! `G(z) = (I - Σ_r A_r z^r)^{-1} (Σ_s B_s z^s)`.
//! For scalar models this is the familiar `σ² |B(e^{-jω})|² / |A(e^{-jω})|²`.

use faer::linalg::solvers::Solve;
use faer::{Mat, Side};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::autocov::{inverse_transform, Autocovariance};
use super::grid::GridSpectrum;
use super::welch::TimeSeries;
use crate::error::{Error, Result};
use crate::hermitian::{HermitianMatrix, PsdPolicy};

/// Condition number of `I - Σ A_r e^{jωr}` above which evaluation fails.
pub const MAX_AR_CONDITION: f64 = 1e12;

/// Relative size `||R(k)||_F / ||R(0)||_F` below which lags are dropped.
pub const AUTOCOV_TRUNCATION_TOL: f64 = 1e-12;

const MAX_AUTOCOV_GRID: usize = 1 << 20;

/// Stable vector ARMA model.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalSpectrum {
    dim: usize,
    ar: Vec<Mat<f64>>,
    ma: Vec<Mat<f64>>,
    noise_cov: Mat<f64>,
}

/// JSON layout of a [`RationalSpectrum`]: row-major nested arrays.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RationalModelFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    #[serde(default)]
    pub ar: Vec<Vec<Vec<f64>>>,
    #[serde(default)]
    pub ma: Vec<Vec<Vec<f64>>>,
    pub noise_cov: Vec<Vec<f64>>,
}

fn to_mat(rows: &[Vec<f64>], dim: usize, what: &str) -> Result<Mat<f64>> {
    if rows.len() != dim || rows.iter().any(|r| r.len() != dim) {
        return Err(Error::InvalidArgument(format!("{what} must be {dim}x{dim}")));
    }
    Ok(Mat::from_fn(dim, dim, |i, j| rows[i][j]))
}

fn to_rows(m: &Mat<f64>) -> Vec<Vec<f64>> {
    (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect()).collect()
}

impl RationalSpectrum {
    /// Validates shapes, symmetric positive-definite `Q` and AR stability.
    ///
    /// An empty `ma` means `B_0 = I`.
    pub fn new(ar: Vec<Mat<f64>>, ma: Vec<Mat<f64>>, noise_cov: Mat<f64>) -> Result<Self> {
        let dim = noise_cov.nrows();
        if dim == 0 {
            return Err(Error::InvalidArgument("model dimension must be >= 1".into()));
        }
        for m in ar.iter().chain(ma.iter()).chain(std::iter::once(&noise_cov)) {
            if m.nrows() != dim || m.ncols() != dim {
                return Err(Error::DimensionMismatch { left: dim, right: m.nrows().max(m.ncols()) });
            }
            for j in 0..dim {
                for i in 0..dim {
                    if !m[(i, j)].is_finite() {
                        return Err(Error::InvalidArgument("model coefficients must be finite".into()));
                    }
                }
            }
        }
        for i in 0..dim {
            for j in 0..i {
                let (a, b) = (noise_cov[(i, j)], noise_cov[(j, i)]);
                if (a - b).abs() > 1e-12 * a.abs().max(b.abs()).max(1.0) {
                    return Err(Error::InvalidArgument("noise covariance must be symmetric".into()));
                }
            }
        }
        if noise_cov.llt(Side::Lower).is_err() {
            return Err(Error::NotPositiveDefinite { context: "noise covariance".into(), min_eigenvalue: f64::NAN });
        }
        let ma = if ma.is_empty() { vec![Mat::identity(dim, dim)] } else { ma };
        let model = Self { dim, ar, ma, noise_cov };
        let radius = model.ar_spectral_radius()?;
        if radius >= 1.0 {
            return Err(Error::UnstableAr { spectral_radius: radius });
        }
        Ok(model)
    }

    pub fn from_file(file: &RationalModelFile) -> Result<Self> {
        let dim = file.noise_cov.len();
        if let Some(d) = file.dim {
            if d != dim {
                return Err(Error::DimensionMismatch { left: d, right: dim });
            }
        }
        let ar = file.ar.iter().map(|m| to_mat(m, dim, "AR coefficient")).collect::<Result<_>>()?;
        let ma = file.ma.iter().map(|m| to_mat(m, dim, "MA coefficient")).collect::<Result<_>>()?;
        let q = to_mat(&file.noise_cov, dim, "noise_cov")?;
        Self::new(ar, ma, q)
    }

    pub fn to_file(&self) -> RationalModelFile {
        RationalModelFile {
            dim: Some(self.dim),
            ar: self.ar.iter().map(to_rows).collect(),
            ma: self.ma.iter().map(to_rows).collect(),
            noise_cov: to_rows(&self.noise_cov),
        }
    }

    /// `m`-dimensional white noise with covariance `Q`.
    pub fn white_noise(noise_cov: Mat<f64>) -> Result<Self> {
        Self::new(Vec::new(), Vec::new(), noise_cov)
    }

    /// Scalar ARMA with `x_t = Σ a_r x_{t-r} + Σ b_s e_{t-s}`, `Var e = variance`.
    /// An empty `ma` means `b_0 = 1`.
    pub fn scalar(ar: &[f64], ma: &[f64], variance: f64) -> Result<Self> {
        let one = |v: f64| Mat::from_fn(1, 1, |_, _| v);
        Self::new(ar.iter().map(|&a| one(a)).collect(), ma.iter().map(|&b| one(b)).collect(), one(variance))
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn ar(&self) -> &[Mat<f64>] {
        &self.ar
    }

    pub fn ma(&self) -> &[Mat<f64>] {
        &self.ma
    }

    pub fn noise_cov(&self) -> &Mat<f64> {
        &self.noise_cov
    }

    /// Largest eigenvalue modulus of the AR companion matrix; `< 1` iff all
    /// roots of `det(I - Σ A_r z^r)` lie outside the unit circle.
    pub fn ar_spectral_radius(&self) -> Result<f64> {
        let p = self.ar.len();
        if p == 0 {
            return Ok(0.0);
        }
        let m = self.dim;
        let n = p * m;
        let companion = Mat::from_fn(n, n, |i, j| {
            if i < m {
                self.ar[j / m][(i, j % m)]
            } else if i - m == j {
                1.0
            } else {
                0.0
            }
        });
        let eig = companion.eigenvalues().map_err(|_| Error::ConvergenceFailure)?;
        Ok(eig.iter().fold(0.0f64, |r, z| r.max(z.norm())))
    }

    /// `Φ(ω)`; Hermitian positive semidefinite by construction.
    pub fn eval(&self, omega: f64) -> Result<HermitianMatrix> {
        let m = self.dim;
        let phase = |r: usize| Complex64::from_polar(1.0, omega * r as f64);
        let mut denom = Mat::<Complex64>::identity(m, m);
        for (r, a) in self.ar.iter().enumerate() {
            let z = phase(r + 1);
            for j in 0..m {
                for i in 0..m {
                    denom[(i, j)] -= z * a[(i, j)];
                }
            }
        }
        let mut numer = Mat::<Complex64>::zeros(m, m);
        for (s, b) in self.ma.iter().enumerate() {
            let z = phase(s);
            for j in 0..m {
                for i in 0..m {
                    numer[(i, j)] += z * b[(i, j)];
                }
            }
        }
        if !self.ar.is_empty() {
            let sv = denom.singular_values().map_err(|_| Error::ConvergenceFailure)?;
            let (smax, smin) = (sv[0], sv[sv.len() - 1]);
            let condition = if smin > 0.0 { smax / smin } else { f64::INFINITY };
            if condition > MAX_AR_CONDITION {
                return Err(Error::SingularAr { omega, condition });
            }
        }
        let transfer = if self.ar.is_empty() { numer } else { denom.partial_piv_lu().solve(&numer) };
        let q = Mat::from_fn(m, m, |i, j| Complex64::new(self.noise_cov[(i, j)], 0.0));
        let phi = &transfer * &q * transfer.adjoint();
        Ok(HermitianMatrix::hermitian_part(phi.as_ref()))
    }

    /// Samples the model on an `n_freq`-point grid.
    pub fn grid(&self, n_freq: usize, policy: &PsdPolicy) -> Result<GridSpectrum> {
        GridSpectrum::from_fn(n_freq, policy, |w| self.eval(w))
    }

    /// Autocovariance lags until `||R(k)||_F < tol ||R(0)||_F` for every
    /// later lag.
    ///
    /// Lags come from an inverse DFT of `Φ` on a grid that is doubled until
    /// the retained lags fit in its first quarter, which keeps aliasing far
    /// below `tol` for geometrically decaying lags.
    pub fn autocovariance(&self, tol: f64) -> Result<Autocovariance> {
        let mut n = 256usize;
        loop {
            let values = (0..n)
                .map(|l| self.eval(super::grid::omega(l, n)))
                .collect::<Result<Vec<_>>>()?;
            let (lags, _) = inverse_transform(&values, n / 2)?;
            let norm = |r: &Mat<f64>| r.norm_l2();
            let r0 = norm(&lags[0]);
            let last = lags.iter().rposition(|r| norm(r) >= tol * r0).unwrap_or(0);
            if last < n / 4 {
                return Autocovariance::new(lags[..=last].to_vec());
            }
            if n >= MAX_AUTOCOV_GRID {
                return Err(Error::InvalidArgument(format!(
                    "autocovariance does not decay below {tol:e} within {} lags",
                    n / 4
                )));
            }
            n *= 2;
        }
    }

    /// Simulates `len` samples after discarding a burn-in.
    pub fn simulate<R: Rng + ?Sized>(&self, len: usize, burn_in: usize, rng: &mut R) -> Result<TimeSeries> {
        let m = self.dim;
        let chol = self
            .noise_cov
            .llt(Side::Lower)
            .map_err(|_| Error::NotPositiveDefinite { context: "noise covariance".into(), min_eigenvalue: f64::NAN })?;
        let l = chol.L().to_owned();
        let p = self.ar.len();
        let q = self.ma.len();
        let total = burn_in + len;
        let mut noise: Vec<Vec<f64>> = Vec::with_capacity(q);
        let mut history: Vec<Vec<f64>> = Vec::with_capacity(p + 1);
        let mut out = Vec::with_capacity(len * m);
        for t in 0..total {
            let z: Vec<f64> = (0..m).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
            let e: Vec<f64> = (0..m).map(|i| (0..=i).map(|k| l[(i, k)] * z[k]).sum()).collect();
            noise.insert(0, e);
            noise.truncate(q);
            let mut x = vec![0.0; m];
            for (r, a) in self.ar.iter().enumerate() {
                if let Some(prev) = history.get(r) {
                    for i in 0..m {
                        x[i] += (0..m).map(|j| a[(i, j)] * prev[j]).sum::<f64>();
                    }
                }
            }
            for (s, b) in self.ma.iter().enumerate() {
                if let Some(es) = noise.get(s) {
                    for i in 0..m {
                        x[i] += (0..m).map(|j| b[(i, j)] * es[j]).sum::<f64>();
                    }
                }
            }
            if t >= burn_in {
                out.extend_from_slice(&x);
            }
            history.insert(0, x);
            history.truncate(p.max(1));
        }
        TimeSeries::new(m, out)
    }
}
