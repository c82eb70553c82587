//! Hellinger versus W2 on a pair of 2x2 spectra that do not commute.
//!
//! The per-frequency gap `tr[(Φx Φy)^{1/2}] - tr[Φx^{1/2} Φy^{1/2}]` is
//! nonnegative, and `Hellinger² - W2²` equals twice its grid mean, so the
//! W2 value sits below the Hellinger value.
//!
//! cargo run --example alt_gap

use faer::Mat;
use spectral_w2::{alt_gap_profile, hellinger, spectral_w2, PsdPolicy, RationalSpectrum};

fn main() -> spectral_w2::Result<()> {
    let policy = PsdPolicy::default();
    let n_freq = 512;

    let diag = RationalSpectrum::new(
        vec![Mat::from_fn(2, 2, |i, j| [[0.5, 0.0], [0.0, -0.3]][i][j])],
        Vec::new(),
        Mat::identity(2, 2),
    )?;
    let (c, s) = (0.5f64.cos(), 0.5f64.sin());
    let rot = Mat::from_fn(2, 2, |i, j| [[c, -s], [s, c]][i][j]);
    let d = Mat::from_fn(2, 2, |i, j| if i == j { [0.6, 0.2][i] } else { 0.0 });
    let mixed = RationalSpectrum::new(
        vec![&rot * &d * rot.transpose()],
        Vec::new(),
        Mat::from_fn(2, 2, |i, j| if i == j { [1.0, 0.5][i] } else { 0.0 }),
    )?;

    let (x, y) = (diag.grid(n_freq, &policy)?, mixed.grid(n_freq, &policy)?);
    let w2 = spectral_w2(&x, &y, &policy)?;
    let h = hellinger(&x, &y, &policy)?;
    let gap = alt_gap_profile(&x, &y, &policy)?;

    let min_gap = gap.iter().cloned().fold(f64::INFINITY, f64::min);
    let max_gap = gap.iter().cloned().fold(0.0, f64::max);
    println!("W2        {:.12}", w2.value);
    println!("Hellinger {:.12}", h.value);
    println!("H² - W2²  {:.6e}", h.squared - w2.squared);
    println!("2·mean gap {:.6e}", 2.0 * w2.mean_alt_gap());
    println!("gap range [{min_gap:.3e}, {max_gap:.3e}], max commutator {:.3e}", w2.commutation_residual);
    Ok(())
}
