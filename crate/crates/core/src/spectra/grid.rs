use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hermitian::{eigh, HermitianMatrix, PsdDecomposition, PsdPolicy};

/// Residual below which a grid is flagged as the spectrum of a real process.
pub const REAL_SYMMETRY_TOL: f64 = 1e-10;

/// Frequency of grid point `index` on an `n_freq`-point uniform grid of `[0, 2π)`.
#[inline]
pub fn omega(index: usize, n_freq: usize) -> f64 {
    2.0 * PI * index as f64 / n_freq as f64
}

/// A positive-definite matrix spectrum sampled at `ω_l = 2πl/N`, `l = 0..N`.
#[derive(Clone, Debug)]
pub struct GridSpectrum {
    dim: usize,
    values: Vec<HermitianMatrix>,
    flooring_count: usize,
    real_symmetric: bool,
}

/// Max over `l` of `||Φ(ω_{N-l}) - Φ(ω_l)ᵀ||_F`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SymmetryReport {
    pub max_residual: f64,
    pub worst_index: usize,
    pub real_symmetric: bool,
}

/// Positive-definiteness margins of a grid.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumSummary {
    pub dim: usize,
    pub n_freq: usize,
    pub min_eigenvalue: f64,
    pub min_eigenvalue_index: usize,
    pub max_eigenvalue: f64,
    pub condition: f64,
    pub mean_trace: f64,
    pub flooring_count: usize,
    pub symmetry: SymmetryReport,
}

impl GridSpectrum {
    /// Floors every value with `policy` and records how many frequencies
    /// needed it. A value that is negative beyond the policy tolerance, or
    /// identically zero, is rejected.
    pub fn new(values: Vec<HermitianMatrix>, policy: &PsdPolicy) -> Result<Self> {
        let dim = match values.first() {
            Some(v) => v.dim(),
            None => return Err(Error::InvalidArgument("spectrum grid must not be empty".into())),
        };
        let mut eigs = Vec::with_capacity(values.len());
        for value in &values {
            if value.dim() != dim {
                return Err(Error::DimensionMismatch { left: dim, right: value.dim() });
            }
            eigs.push(eigh(value)?);
        }
        // thresholds are relative to the largest eigenvalue over the grid
        let scale = eigs.iter().fold(0.0f64, |m, e| m.max(e.scale()));
        if scale <= 0.0 {
            return Err(Error::NotPositiveDefinite { context: "spectrum is identically zero".into(), min_eigenvalue: 0.0 });
        }
        let mut out = Vec::with_capacity(values.len());
        let mut flooring_count = 0;
        for (l, (value, eig)) in values.into_iter().zip(eigs).enumerate() {
            let min_eigenvalue = eig.min();
            let psd = PsdDecomposition::from_eig(eig, policy, scale).map_err(|_| Error::NotPositiveDefinite {
                context: format!("spectrum value at frequency index {l}"),
                min_eigenvalue,
            })?;
            if psd.eig.max() <= 0.0 {
                return Err(Error::NotPositiveDefinite {
                    context: format!("spectrum value at frequency index {l} is zero"),
                    min_eigenvalue,
                });
            }
            if psd.floored > 0 {
                flooring_count += 1;
                out.push(psd.floored_matrix());
            } else {
                out.push(value);
            }
        }
        let mut grid = Self { dim, values: out, flooring_count, real_symmetric: false };
        grid.real_symmetric = grid.check_real_symmetry().real_symmetric;
        Ok(grid)
    }

    /// Samples `f(ω_l)` on an `n_freq`-point grid.
    pub fn from_fn(n_freq: usize, policy: &PsdPolicy, mut f: impl FnMut(f64) -> Result<HermitianMatrix>) -> Result<Self> {
        let values = (0..n_freq).map(|l| f(omega(l, n_freq))).collect::<Result<Vec<_>>>()?;
        Self::new(values, policy)
    }

    /// Scalar spectrum from its samples.
    pub fn from_scalar(values: &[f64], policy: &PsdPolicy) -> Result<Self> {
        let values = values.iter().map(|&s| HermitianMatrix::from_diagonal(&[s])).collect();
        Self::new(values, policy)
    }

    pub fn constant(value: &HermitianMatrix, n_freq: usize, policy: &PsdPolicy) -> Result<Self> {
        Self::new(vec![value.clone(); n_freq], policy)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn n_freq(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[HermitianMatrix] {
        &self.values
    }

    pub fn value(&self, index: usize) -> &HermitianMatrix {
        &self.values[index]
    }

    pub fn omega(&self, index: usize) -> f64 {
        omega(index, self.n_freq())
    }

    /// Number of frequencies whose value was raised by the PSD floor.
    pub fn flooring_count(&self) -> usize {
        self.flooring_count
    }

    pub fn is_real_symmetric(&self) -> bool {
        self.real_symmetric
    }

    /// `c Φ(ω)` for `c > 0`.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        if !(c > 0.0 && c.is_finite()) {
            return Err(Error::InvalidArgument(format!("scale factor must be positive, got {c}")));
        }
        Ok(Self {
            dim: self.dim,
            values: self.values.iter().map(|v| v.scaled(c)).collect(),
            flooring_count: self.flooring_count,
            real_symmetric: self.real_symmetric,
        })
    }

    /// The samples of a scalar spectrum; `None` when `dim > 1`.
    pub fn scalar_values(&self) -> Option<Vec<f64>> {
        (self.dim == 1).then(|| self.values.iter().map(|v| v.get(0, 0).re).collect())
    }

    /// Grid mean of `tr Φ(ω)`, the rectangle rule for `(1/2π)∫ tr Φ dω`.
    pub fn mean_trace(&self) -> f64 {
        self.values.iter().map(|v| v.trace()).sum::<f64>() / self.n_freq() as f64
    }

    /// Compares `Φ(2π - ω)` with `Φ(ω)ᵀ`, which coincide for real processes.
    pub fn check_real_symmetry(&self) -> SymmetryReport {
        let n = self.n_freq();
        let mut max_residual = 0.0f64;
        let mut worst_index = 0;
        let mut scale = 0.0f64;
        for l in 0..n {
            let mirror = (n - l) % n;
            let lhs = &self.values[mirror];
            let rhs = &self.values[l];
            scale = scale.max(rhs.frobenius_norm());
            let mut r = 0.0;
            for i in 0..self.dim {
                for j in 0..self.dim {
                    let d: Complex64 = lhs.get(i, j) - rhs.get(j, i);
                    r += d.norm_sqr();
                }
            }
            let r = r.sqrt();
            if r > max_residual {
                max_residual = r;
                worst_index = l;
            }
        }
        SymmetryReport {
            max_residual,
            worst_index,
            real_symmetric: max_residual <= REAL_SYMMETRY_TOL * scale.max(1.0),
        }
    }

    pub fn summary(&self) -> Result<SpectrumSummary> {
        let mut min_eigenvalue = f64::INFINITY;
        let mut min_eigenvalue_index = 0;
        let mut max_eigenvalue = f64::NEG_INFINITY;
        for (l, v) in self.values.iter().enumerate() {
            let vals = crate::hermitian::eigvalsh(v)?;
            if vals[0] < min_eigenvalue {
                min_eigenvalue = vals[0];
                min_eigenvalue_index = l;
            }
            max_eigenvalue = max_eigenvalue.max(vals[vals.len() - 1]);
        }
        Ok(SpectrumSummary {
            dim: self.dim,
            n_freq: self.n_freq(),
            min_eigenvalue,
            min_eigenvalue_index,
            max_eigenvalue,
            condition: max_eigenvalue / min_eigenvalue,
            mean_trace: self.mean_trace(),
            flooring_count: self.flooring_count,
            symmetry: self.check_real_symmetry(),
        })
    }
}
