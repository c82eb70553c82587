//! Autocovariance and spectrum transforms.
//!
//! cargo run --example autocov_roundtrip

use spectral_w2::{autocov_to_spectrum, spectrum_to_autocov, Autocovariance, PsdPolicy, RationalSpectrum};

fn main() -> spectral_w2::Result<()> {
    let policy = PsdPolicy::default();

    // MA(1) with θ = 0.5: S(ω) = 1.25 + cos ω
    let ma1 = Autocovariance::scalar(&[1.25, 0.5])?;
    let spec = autocov_to_spectrum(&ma1, 16, &policy)?.spectrum;
    println!("S(0) = {:.6}, S(π) = {:.6}", spec.value(0).get(0, 0).re, spec.value(8).get(0, 0).re);

    let back = spectrum_to_autocov(&spec, 3)?;
    let lags: Vec<f64> = (0..=3).map(|k| back.autocov.entry(k, 0, 0)).collect();
    println!("recovered lags {lags:?} (imaginary residual {:.1e})", back.imag_residual);

    // AR(1): R(k) = (4/3) 0.5^k
    let ar1 = RationalSpectrum::scalar(&[0.5], &[], 1.0)?.autocovariance(1e-12)?;
    println!("AR(1): {} lags kept", ar1.max_lag() + 1);
    for k in 0..4 {
        println!("  R({k}) = {:.15}  closed form {:.15}", ar1.entry(k, 0, 0), 4.0 / 3.0 * 0.5f64.powi(k as i32));
    }
    Ok(())
}
