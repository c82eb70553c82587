//! # spectral-w2
//!
//! Distances between stationary stochastic processes computed directly from
//! their power spectra.
//!
//! | Function | Value |
//! |----------|-------|
//! | [`spectral_w2`] | `sqrt((1/2π) ∫ tr[Φx + Φy - 2 (Φx^{1/2} Φy Φx^{1/2})^{1/2}] dω)` |
//! | [`gelbrich_lower_bound`] | same number, reported as a lower bound |
//! | [`hellinger`] | `sqrt((1/2π) ∫ ||Φx^{1/2} - Φy^{1/2}||_F² dω)` |
//! | [`spectral_w2_scalar`] | `sqrt((1/2π) ∫ (Sx^{1/2} - Sy^{1/2})² dω)` for `m = 1` |
//!
//! The first value is the average W2 Wasserstein distance per time step
//! between two processes that are elliptical with the same density
//! generator (Gaussian processes in particular). Without that hypothesis it
//! is a lower bound on the average W2 distance. It never exceeds the
//! Hellinger distance, because `tr[(Φx Φy)^{1/2}] ≥ tr[Φx^{1/2} Φy^{1/2}]`,
//! and the two coincide whenever `Φx(ω)` and `Φy(ω)` commute.
//!
//! The [`oracle`] module checks these spectral formulas by brute force: it
//! assembles the block-Toeplitz covariances of `x_{0..i}`, `y_{0..i}`,
//! evaluates the finite-dimensional Bures form and divides by `i + 1`.
//!
//! ## Quick start
//!
//! ```
//! use spectral_w2::{spectral_w2, PsdPolicy, RationalSpectrum};
//!
//! let policy = PsdPolicy::default();
//! let ar1 = RationalSpectrum::scalar(&[0.5], &[], 1.0).unwrap();
//! let white = RationalSpectrum::scalar(&[], &[], 1.0).unwrap();
//!
//! let report = spectral_w2(&ar1.grid(1024, &policy).unwrap(), &white.grid(1024, &policy).unwrap(), &policy).unwrap();
//! assert!((report.squared - 0.186969).abs() < 1e-5);
//! ```
//!
//! ## Conventions
//!
//! - `R(k) = E[x_i x_{i+k}ᵀ]` and `Φ(ω) = Σ_k R(k) e^{-jωk}`.
//! - Spectral values are complex Hermitian; transposes of the real-process
//!   formulas are read as conjugate transposes.
//! - Integrals over `[0, 2π)` are grid means on `ω_l = 2πl/N`, which is
//!   spectrally accurate for smooth periodic integrands.
//! - Non-positive eigenvalues are floored by a [`PsdPolicy`] and every
//!   flooring is counted in the reports.

#![forbid(unsafe_code)]

pub mod cli;
pub mod distances;
mod error;
pub mod hermitian;
pub mod io;
pub mod oracle;
pub mod spectra;

pub use distances::{
    alt_gap_profile, gelbrich_lower_bound, hellinger, spectral_w2, spectral_w2_scalar, spectral_w2_scalar_values,
    w_integrand, DistanceKind, DistanceReport, Semantics,
};
pub use error::{Error, Result};
pub use hermitian::{
    bures_w2_squared, eigh, sqrt_psd, trace_sqrt_product, trace_sqrt_product_cholesky, EigenDecomposition, Hermitian,
    HermitianMatrix, PsdPolicy, SymmetricMatrix,
};
pub use oracle::{
    build_block_toeplitz, convergence_diagnostic, finite_horizon_w2_sq_per_step, trace_sqrt_product_per_step,
    BlockToeplitzCovariance, ConvergenceDiagnostic,
};
pub use spectra::{
    autocov_to_spectrum, estimate_welch, spectrum_to_autocov, Autocovariance, GridSpectrum, RationalSpectrum,
    TimeSeries, WelchConfig, Window, AUTOCOV_TRUNCATION_TOL,
};
