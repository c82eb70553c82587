//! Spectral W2 distance, Gelbrich bound and Hellinger distance between an
//! AR(1) process and white noise.
//!
//! cargo run --example spectral_distance

use spectral_w2::{gelbrich_lower_bound, hellinger, spectral_w2, spectral_w2_scalar, PsdPolicy, RationalSpectrum};

fn main() -> spectral_w2::Result<()> {
    let policy = PsdPolicy::default();
    let n_freq = 4096;

    let ar1 = RationalSpectrum::scalar(&[0.5], &[], 1.0)?;
    let white = RationalSpectrum::scalar(&[], &[], 1.0)?;
    let (x, y) = (ar1.grid(n_freq, &policy)?, white.grid(n_freq, &policy)?);

    let w2 = spectral_w2(&x, &y, &policy)?;
    let bound = gelbrich_lower_bound(&x, &y, &policy)?;
    let h = hellinger(&x, &y, &policy)?;
    let closed = spectral_w2_scalar(&x, &y)?;

    println!("AR(1) a=0.5 vs white noise, N = {n_freq}");
    println!("  spectral W2        {:.12}", w2.value);
    println!("  Gelbrich bound     {:.12} (lower bound: {})", bound.value, bound.is_lower_bound);
    println!("  Hellinger          {:.12}", h.value);
    println!("  scalar closed form {:.12}", closed.value);
    println!("  flooring count     {}", w2.flooring_count);
    Ok(())
}
