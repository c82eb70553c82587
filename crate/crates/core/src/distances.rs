//! Spectral W2 distance, Gelbrich bound and Hellinger distance.
//!
//! All three integrate a per-frequency term over a shared grid. At each
//! `ω_l` the kernel computes
//!
//! - `tr W = tr Φx + tr Φy - 2 tr[(Φx^{1/2} Φy Φx^{1/2})^{1/2}]`,
//! - `||Φx^{1/2} - Φy^{1/2}||_F²`,
//! - the trace gap `tr[(Φx Φy)^{1/2}] - tr[Φx^{1/2} Φy^{1/2}] ≥ 0`,
//! - the commutator norm `||Φx Φy - Φy Φx||_F`.
//!
//! `tr W` and the Hellinger integrand differ by exactly twice the trace gap.
//! When the two values commute the gap vanishes, so the kernel skips the
//! sandwich eigenproblem and reuses the Hellinger cross term.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hermitian::{
    clamp_bures, commutator_norm, eigvalsh, trace_of_product, HermitianMatrix, PsdDecomposition, PsdPolicy,
};
use crate::spectra::GridSpectrum;

/// Commutator norm (relative to `||Φx||_F ||Φy||_F`) under which a
/// frequency takes the commuting fast path.
pub const COMMUTING_TOL: f64 = 1e-12;

/// Which quantity a [`DistanceReport`] holds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DistanceKind {
    SpectralW2,
    GelbrichBound,
    Hellinger,
}

/// How the W2 formula is to be read.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Semantics {
    /// Exact distance: elliptical processes with a common density generator.
    #[default]
    Elliptical,
    /// Lower bound for arbitrary processes with the given spectra.
    Gelbrich,
}

impl std::str::FromStr for Semantics {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "elliptical" => Ok(Semantics::Elliptical),
            "gelbrich" => Ok(Semantics::Gelbrich),
            other => Err(Error::InvalidArgument(format!("unknown semantics '{other}'"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DistanceReport {
    pub kind: DistanceKind,
    pub value: f64,
    pub squared: f64,
    pub n_freq: usize,
    pub dim: usize,
    /// Integrand of `squared` at each grid frequency.
    pub per_freq_trace: Vec<f64>,
    /// `tr[(Φx Φy)^{1/2}] - tr[Φx^{1/2} Φy^{1/2}]` per frequency.
    pub alt_gap: Vec<f64>,
    /// Max over the grid of `||Φx Φy - Φy Φx||_F`.
    pub commutation_residual: f64,
    /// Frequencies floored while building the grids plus eigenvalues floored
    /// inside the kernel.
    pub flooring_count: usize,
    pub is_lower_bound: bool,
}

impl DistanceReport {
    /// Grid mean of the alternating-trace gap, i.e. `(W2² - Hellinger²)/2`.
    pub fn mean_alt_gap(&self) -> f64 {
        mean(&self.alt_gap)
    }
}

/// Per-frequency terms shared by all distances.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FrequencyTerms {
    pub w2_trace: f64,
    pub hellinger_sq: f64,
    pub alt_gap: f64,
    pub commutator: f64,
    pub floored: usize,
}

/// Evaluates every per-frequency quantity for one pair of spectral values.
pub fn frequency_terms(phix: &HermitianMatrix, phiy: &HermitianMatrix, policy: &PsdPolicy) -> Result<FrequencyTerms> {
    if phix.dim() != phiy.dim() {
        return Err(Error::DimensionMismatch { left: phix.dim(), right: phiy.dim() });
    }
    if phix.as_mat() == phiy.as_mat() {
        let floored = PsdDecomposition::new(phix, policy)?.floored;
        return Ok(FrequencyTerms { w2_trace: 0.0, hellinger_sq: 0.0, alt_gap: 0.0, commutator: 0.0, floored });
    }
    let dx = PsdDecomposition::new(phix, policy)?;
    let dy = PsdDecomposition::new(phiy, policy)?;
    let (root_x, root_y) = (dx.sqrt(), dy.sqrt());
    let total = phix.trace() + phiy.trace();

    let hellinger_sq = root_x.try_sub(&root_y)?.frobenius_norm().powi(2);
    let hellinger_cross = trace_of_product(&root_x, &root_y)?;
    let commutator = commutator_norm(phix, phiy)?;
    let commuting = commutator <= COMMUTING_TOL * phix.frobenius_norm() * phiy.frobenius_norm();

    let mut floored = dx.floored + dy.floored;
    let (w2_trace, alt_gap) = if commuting {
        (hellinger_sq, 0.0)
    } else {
        let sandwich = root_x.sandwich(phiy)?;
        let mut vals = eigvalsh(&sandwich)?;
        let scale = vals.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        floored += policy.apply(&mut vals, scale)?;
        let cross: f64 = vals.iter().map(|v| v.sqrt()).sum();
        (clamp_bures(total, cross)?, cross - hellinger_cross)
    };
    Ok(FrequencyTerms { w2_trace, hellinger_sq, alt_gap, commutator, floored })
}

/// The matrix `W[Φx, Φy] = Φx + Φy - 2 (Φx^{1/2} Φy Φx^{1/2})^{1/2}` and its
/// trace (evaluated from the eigenvalues of `Φx Φy`, clamped in the Bures
/// round-off band).
pub fn w_integrand(phix: &HermitianMatrix, phiy: &HermitianMatrix, policy: &PsdPolicy) -> Result<(HermitianMatrix, f64)> {
    if phix.dim() != phiy.dim() {
        return Err(Error::DimensionMismatch { left: phix.dim(), right: phiy.dim() });
    }
    let root_x = PsdDecomposition::new(phix, policy)?.sqrt();
    let geo = PsdDecomposition::new(&root_x.sandwich(phiy)?, policy)?.sqrt();
    let matrix = phix.try_add(phiy)?.try_sub(&geo.scaled(2.0))?;
    let cross = crate::hermitian::trace_sqrt_product(phix, phiy, policy)?;
    let trace = clamp_bures(phix.trace() + phiy.trace(), cross)?;
    Ok((matrix, trace))
}

fn check_grids(x: &GridSpectrum, y: &GridSpectrum) -> Result<()> {
    if x.dim() != y.dim() {
        return Err(Error::DimensionMismatch { left: x.dim(), right: y.dim() });
    }
    if x.n_freq() != y.n_freq() {
        return Err(Error::GridMismatch { left: x.n_freq(), right: y.n_freq() });
    }
    Ok(())
}

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

struct GridTerms {
    terms: Vec<FrequencyTerms>,
    base_flooring: usize,
}

fn grid_terms(x: &GridSpectrum, y: &GridSpectrum, policy: &PsdPolicy) -> Result<GridTerms> {
    check_grids(x, y)?;
    let terms = x
        .values()
        .iter()
        .zip(y.values())
        .map(|(a, b)| frequency_terms(a, b, policy))
        .collect::<Result<Vec<_>>>()?;
    Ok(GridTerms { terms, base_flooring: x.flooring_count() + y.flooring_count() })
}

impl GridTerms {
    fn report(&self, kind: DistanceKind, dim: usize, pick: impl Fn(&FrequencyTerms) -> f64) -> DistanceReport {
        let per_freq_trace: Vec<f64> = self.terms.iter().map(pick).collect();
        let squared = mean(&per_freq_trace).max(0.0);
        DistanceReport {
            kind,
            value: squared.sqrt(),
            squared,
            n_freq: self.terms.len(),
            dim,
            per_freq_trace,
            alt_gap: self.terms.iter().map(|t| t.alt_gap).collect(),
            commutation_residual: self.terms.iter().fold(0.0f64, |m, t| m.max(t.commutator)),
            flooring_count: self.base_flooring + self.terms.iter().map(|t| t.floored).sum::<usize>(),
            is_lower_bound: kind == DistanceKind::GelbrichBound,
        }
    }
}

/// Average W2 distance between processes with spectra `specx` and `specy`.
pub fn spectral_w2(specx: &GridSpectrum, specy: &GridSpectrum, policy: &PsdPolicy) -> Result<DistanceReport> {
    Ok(grid_terms(specx, specy, policy)?.report(DistanceKind::SpectralW2, specx.dim(), |t| t.w2_trace))
}

/// The W2 formula read as a lower bound for processes that need not be
/// elliptical; numerically identical to [`spectral_w2`].
pub fn gelbrich_lower_bound(specx: &GridSpectrum, specy: &GridSpectrum, policy: &PsdPolicy) -> Result<DistanceReport> {
    Ok(grid_terms(specx, specy, policy)?.report(DistanceKind::GelbrichBound, specx.dim(), |t| t.w2_trace))
}

/// [`spectral_w2`] or [`gelbrich_lower_bound`] by semantics.
pub fn w2_with_semantics(
    specx: &GridSpectrum,
    specy: &GridSpectrum,
    policy: &PsdPolicy,
    semantics: Semantics,
) -> Result<DistanceReport> {
    match semantics {
        Semantics::Elliptical => spectral_w2(specx, specy, policy),
        Semantics::Gelbrich => gelbrich_lower_bound(specx, specy, policy),
    }
}

/// Spectral Hellinger distance.
pub fn hellinger(specx: &GridSpectrum, specy: &GridSpectrum, policy: &PsdPolicy) -> Result<DistanceReport> {
    Ok(grid_terms(specx, specy, policy)?.report(DistanceKind::Hellinger, specx.dim(), |t| t.hellinger_sq))
}

/// Per-frequency `tr[(Φx Φy)^{1/2}] - tr[Φx^{1/2} Φy^{1/2}]`.
pub fn alt_gap_profile(specx: &GridSpectrum, specy: &GridSpectrum, policy: &PsdPolicy) -> Result<Vec<f64>> {
    Ok(grid_terms(specx, specy, policy)?.terms.into_iter().map(|t| t.alt_gap).collect())
}

/// Closed-form scalar distance `sqrt(mean((√Sx - √Sy)²))` on `m = 1` grids.
pub fn spectral_w2_scalar(sx: &GridSpectrum, sy: &GridSpectrum) -> Result<DistanceReport> {
    check_grids(sx, sy)?;
    let (Some(a), Some(b)) = (sx.scalar_values(), sy.scalar_values()) else {
        return Err(Error::InvalidArgument(format!("scalar path needs m = 1 grids, got m = {}", sx.dim())));
    };
    let mut report = scalar_report(&a, &b)?;
    report.flooring_count = sx.flooring_count() + sy.flooring_count();
    Ok(report)
}

/// Closed-form scalar distance on raw samples, floored by `policy`.
pub fn spectral_w2_scalar_values(sx: &[f64], sy: &[f64], policy: &PsdPolicy) -> Result<DistanceReport> {
    if sx.len() != sy.len() {
        return Err(Error::GridMismatch { left: sx.len(), right: sy.len() });
    }
    if sx.is_empty() {
        return Err(Error::InvalidArgument("empty spectrum".into()));
    }
    let floor = |s: &[f64]| -> Result<(Vec<f64>, usize)> {
        if s.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("scalar spectrum has non-finite samples".into()));
        }
        let scale = s.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if scale <= 0.0 {
            return Err(Error::NotPositiveDefinite { context: "scalar spectrum is identically zero".into(), min_eigenvalue: 0.0 });
        }
        let mut out = s.to_vec();
        let count = policy.apply(&mut out, scale).map_err(|e| match e {
            Error::IndefiniteInput { min_eigenvalue, .. } => {
                Error::NotPositiveDefinite { context: "scalar spectrum".into(), min_eigenvalue }
            }
            other => other,
        })?;
        Ok((out, count))
    };
    let (a, fa) = floor(sx)?;
    let (b, fb) = floor(sy)?;
    let mut report = scalar_report(&a, &b)?;
    report.flooring_count = fa + fb;
    Ok(report)
}

fn scalar_report(a: &[f64], b: &[f64]) -> Result<DistanceReport> {
    let per_freq_trace: Vec<f64> = a.iter().zip(b).map(|(x, y)| (x.sqrt() - y.sqrt()).powi(2)).collect();
    let squared = mean(&per_freq_trace);
    Ok(DistanceReport {
        kind: DistanceKind::SpectralW2,
        value: squared.sqrt(),
        squared,
        n_freq: a.len(),
        dim: 1,
        per_freq_trace,
        alt_gap: vec![0.0; a.len()],
        commutation_residual: 0.0,
        flooring_count: 0,
        is_lower_bound: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectra::omega;

    fn p() -> PsdPolicy {
        PsdPolicy::default()
    }

    #[test]
    fn integrand_examples() {
        let a = HermitianMatrix::from_diagonal(&[4.0]);
        let b = HermitianMatrix::from_diagonal(&[1.0]);
        let (w, tr) = w_integrand(&a, &b, &p()).unwrap();
        assert!((tr - 1.0).abs() < 1e-14);
        assert!((w.get(0, 0).re - 1.0).abs() < 1e-14);
        let (_, tr) = w_integrand(&a, &a, &p()).unwrap();
        assert!(tr.abs() < 1e-14);
    }

    #[test]
    fn identical_grids_give_zero() {
        let g = GridSpectrum::from_scalar(&[1.0, 2.0, 3.0, 2.0], &p()).unwrap();
        let r = spectral_w2(&g, &g, &p()).unwrap();
        assert_eq!(r.value, 0.0);
        assert_eq!(hellinger(&g, &g, &p()).unwrap().value, 0.0);
    }

    #[test]
    fn flat_scalar_spectra() {
        let x = GridSpectrum::from_scalar(&[1.0; 16], &p()).unwrap();
        let y = GridSpectrum::from_scalar(&[4.0; 16], &p()).unwrap();
        let r = spectral_w2(&x, &y, &p()).unwrap();
        assert!((r.value - 1.0).abs() < 1e-14);
        assert!((r.squared - 1.0).abs() < 1e-14);
        assert!((spectral_w2_scalar(&x, &y).unwrap().value - 1.0).abs() < 1e-15);
        let g = gelbrich_lower_bound(&x, &y, &p()).unwrap();
        assert!(g.is_lower_bound);
        assert_eq!(g.value, r.value);
    }

    #[test]
    fn grid_mismatch_and_dimension_mismatch() {
        let x = GridSpectrum::from_scalar(&[1.0; 8], &p()).unwrap();
        let y = GridSpectrum::from_scalar(&[1.0; 16], &p()).unwrap();
        assert!(matches!(spectral_w2(&x, &y, &p()), Err(Error::GridMismatch { .. })));
        let z = GridSpectrum::constant(&HermitianMatrix::identity(2), 8, &p()).unwrap();
        assert!(matches!(spectral_w2(&x, &z, &p()), Err(Error::DimensionMismatch { .. })));
        assert!(spectral_w2_scalar(&z, &z).is_err());
    }

    #[test]
    fn scalar_values_path_floors_and_rejects() {
        assert!(matches!(
            spectral_w2_scalar_values(&[1.0, -1.0], &[1.0, 1.0], &p()),
            Err(Error::NotPositiveDefinite { .. })
        ));
        let r = spectral_w2_scalar_values(&[4.0, 4.0], &[1.0, 1.0], &p()).unwrap();
        assert!((r.value - 1.0).abs() < 1e-15);
    }

    #[test]
    fn cosine_spectrum_matrix_and_closed_form_agree() {
        let n = 4096;
        let sx: Vec<f64> = (0..n).map(|l| 1.25 + omega(l, n).cos()).collect();
        let x = GridSpectrum::from_scalar(&sx, &p()).unwrap();
        let y = GridSpectrum::from_scalar(&vec![1.0; n], &p()).unwrap();
        let matrix = spectral_w2(&x, &y, &p()).unwrap();
        let closed = spectral_w2_scalar(&x, &y).unwrap();
        assert!((matrix.value - closed.value).abs() <= 1e-12 * closed.value);
        assert!(matrix.alt_gap.iter().all(|g| g.abs() <= 1e-12));
    }

    #[test]
    fn semantics_parse() {
        assert_eq!("gelbrich".parse::<Semantics>().unwrap(), Semantics::Gelbrich);
        assert!("other".parse::<Semantics>().is_err());
    }
}
