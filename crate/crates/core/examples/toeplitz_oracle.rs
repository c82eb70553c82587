//! Brute-force check of the spectral formula: per-step W2² between the
//! block-Toeplitz covariances of `x_{0..i}` and `y_{0..i}` as `i` grows.
//!
//! cargo run --release --example toeplitz_oracle

use spectral_w2::oracle::DEFAULT_HORIZONS;
use spectral_w2::{convergence_diagnostic, spectral_w2, PsdPolicy, RationalSpectrum, AUTOCOV_TRUNCATION_TOL};

fn main() -> spectral_w2::Result<()> {
    let policy = PsdPolicy::default();
    let ar1 = RationalSpectrum::scalar(&[0.5], &[], 1.0)?;
    let ma1 = RationalSpectrum::scalar(&[], &[1.0, 0.5], 1.0)?;

    let target = spectral_w2(&ar1.grid(8192, &policy)?, &ma1.grid(8192, &policy)?, &policy)?.squared;
    let (ax, ay) = (ar1.autocovariance(AUTOCOV_TRUNCATION_TOL)?, ma1.autocovariance(AUTOCOV_TRUNCATION_TOL)?);
    println!("AR(1) lags kept: {}, MA(1) lags kept: {}", ax.max_lag(), ay.max_lag());

    let diag = convergence_diagnostic(&ax, &ay, &DEFAULT_HORIZONS, target, &policy)?;
    println!("{:>6} {:>16} {:>12} {:>12}", "i", "W2²/(i+1)", "rel. error", "min eig");
    for (k, &i) in diag.horizons.iter().enumerate() {
        let v = diag.per_step_values[k];
        println!("{i:>6} {v:>16.12} {:>12.3e} {:>12.6}", (v - target).abs() / target, diag.min_eigenvalues[k]);
    }
    println!("spectral target   {:.12}", diag.spectral_target);
    println!("extrapolated      {:.12}  ({})", diag.extrapolated_limit, diag.extrapolation_model);
    println!("converged         {}", diag.converged);
    Ok(())
}
