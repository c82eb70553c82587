//! Welch estimation of a simulated AR(1) series and its distance to the
//! true spectrum.
//!
//! cargo run --release --example welch_estimate

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use spectral_w2::{estimate_welch, spectral_w2, PsdPolicy, RationalSpectrum, WelchConfig, Window};

fn main() -> spectral_w2::Result<()> {
    let policy = PsdPolicy::default();
    let model = RationalSpectrum::scalar(&[0.5], &[], 1.0)?;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let series = model.simulate(1 << 17, 1000, &mut rng)?;

    let cfg = WelchConfig { segment_len: 256, overlap_frac: 0.5, window: Window::Hann };
    let estimate = estimate_welch(&series, &cfg, &policy)?;
    let truth = model.grid(cfg.segment_len, &policy)?;

    println!("samples {}, segments {}", series.len(), cfg.segment_count(series.len()));
    println!("mean trace: estimate {:.6}, model {:.6}", estimate.mean_trace(), truth.mean_trace());
    for l in [0, 32, 64, 128] {
        println!(
            "  S(ω_{l:<3}) estimate {:.4}  model {:.4}",
            estimate.value(l).get(0, 0).re,
            truth.value(l).get(0, 0).re
        );
    }
    println!("W2(estimate, model) = {:.6}", spectral_w2(&estimate, &truth, &policy)?.value);
    Ok(())
}
