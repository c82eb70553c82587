//! Power spectra: frequency grids, autocovariance transforms, rational
//! models and Welch estimation.
//!
//! Conventions used throughout: `R(k) = E[x_i x_{i+k}ᵀ]`,
//! `Φ(ω) = Σ_k R(k) e^{-jωk}`, and grids sample `[0, 2π)` uniformly at
//! `ω_l = 2πl/N`.

mod autocov;
mod grid;
mod rational;
mod welch;

pub use autocov::{
    autocov_to_spectrum, spectrum_to_autocov, Autocovariance, AutocovFromSpectrum, SpectrumFromAutocov,
    MAX_IMAG_RESIDUE,
};
pub use grid::{omega, GridSpectrum, SpectrumSummary, SymmetryReport, REAL_SYMMETRY_TOL};
pub use rational::{RationalModelFile, RationalSpectrum, AUTOCOV_TRUNCATION_TOL, MAX_AR_CONDITION};
pub use welch::{estimate_welch, TimeSeries, WelchConfig, Window, MIN_SEGMENTS};

/// Evaluates a rational model on a grid; alias of [`RationalSpectrum::eval`].
pub fn eval_rational(model: &RationalSpectrum, omega: f64) -> crate::Result<crate::HermitianMatrix> {
    model.eval(omega)
}

/// Residual report for the real-process symmetry `Φ(2π - ω) = Φ(ω)ᵀ`.
pub fn check_real_symmetry(spec: &GridSpectrum) -> SymmetryReport {
    spec.check_real_symmetry()
}
