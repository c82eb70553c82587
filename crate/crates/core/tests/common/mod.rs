#![allow(dead_code)]

use faer::Mat;
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use spectral_w2::{GridSpectrum, HermitianMatrix, PsdPolicy, RationalSpectrum};

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn random_unitary(n: usize, rng: &mut ChaCha8Rng) -> Mat<Complex64> {
    let g = Mat::from_fn(n, n, |_, _| c(rng.sample(StandardNormal), rng.sample(StandardNormal)));
    g.qr().compute_Q()
}

/// `U diag(10^u) U*` with `u` uniform in `[-decades, decades]`.
pub fn random_pd(n: usize, decades: f64, rng: &mut ChaCha8Rng) -> HermitianMatrix {
    let u = random_unitary(n, rng);
    let vals: Vec<f64> = (0..n).map(|_| 10f64.powf(rng.random_range(-decades..=decades))).collect();
    HermitianMatrix::from_factors(u.as_ref(), &vals)
}

/// Oracle for `Σ √λ(AB)`: general (non-Hermitian) eigenvalues of the plain
/// product, computed without any similarity transform.
pub fn sum_sqrt_eig_product(a: &HermitianMatrix, b: &HermitianMatrix) -> f64 {
    let prod = a.as_mat() * b.as_mat();
    let eig = prod.eigenvalues().expect("general eigenvalues");
    eig.iter().map(|z| z.sqrt().re).sum()
}

/// `tr[A^{1/2} B^{1/2}]` from independently computed roots.
pub fn trace_root_product(a: &HermitianMatrix, b: &HermitianMatrix, policy: &PsdPolicy) -> f64 {
    let ra = spectral_w2::sqrt_psd(a, policy).unwrap();
    let rb = spectral_w2::sqrt_psd(b, policy).unwrap();
    let p = ra.as_mat() * rb.as_mat();
    (0..a.dim()).map(|i| p[(i, i)].re).sum()
}

fn real(n: usize, f: impl FnMut(usize, usize) -> f64) -> Mat<f64> {
    Mat::from_fn(n, n, f)
}

/// Seeded stable VARMA(1,1) model of dimension `m`.
pub fn random_model(m: usize, rng: &mut ChaCha8Rng) -> RationalSpectrum {
    loop {
        let a = real(m, |_, _| rng.sample::<f64, _>(StandardNormal) * 0.6 / (m as f64).sqrt());
        let b1 = real(m, |_, _| rng.sample::<f64, _>(StandardNormal) * 0.4);
        let g = real(m, |_, _| rng.sample::<f64, _>(StandardNormal));
        let q = real(m, |i, j| (0..m).map(|k| g[(i, k)] * g[(j, k)]).sum::<f64>() + if i == j { 0.2 } else { 0.0 });
        let q = real(m, |i, j| 0.5 * (q[(i, j)] + q[(j, i)]));
        if let Ok(model) = RationalSpectrum::new(vec![a], vec![Mat::identity(m, m), b1], q) {
            if model.ar_spectral_radius().unwrap() < 0.9 {
                return model;
            }
        }
    }
}

pub fn random_grid(m: usize, n_freq: usize, rng: &mut ChaCha8Rng) -> GridSpectrum {
    random_model(m, rng).grid(n_freq, &PsdPolicy::default()).unwrap()
}

/// Two spectra sharing the constant eigenbasis `U`, hence commuting at
/// every frequency.
pub fn commuting_pair(m: usize, n_freq: usize, rng: &mut ChaCha8Rng) -> (GridSpectrum, GridSpectrum) {
    let u = random_unitary(m, rng);
    let mut channel = || {
        let a: f64 = rng.random_range(-0.8..0.8);
        let s: f64 = rng.random_range(0.3..3.0);
        move |w: f64| s / (1.0 - 2.0 * a * w.cos() + a * a)
    };
    let fx: Vec<_> = (0..m).map(|_| channel()).collect();
    let fy: Vec<_> = (0..m).map(|_| channel()).collect();
    let p = PsdPolicy::default();
    let build = |fs: &[_]| {
        GridSpectrum::from_fn(n_freq, &p, |w| {
            let vals: Vec<f64> = fs.iter().map(|f: &_| apply(f, w)).collect();
            Ok(HermitianMatrix::from_factors(u.as_ref(), &vals))
        })
        .unwrap()
    };
    (build(&fx), build(&fy))
}

fn apply<F: Fn(f64) -> f64>(f: &F, w: f64) -> f64 {
    f(w)
}

pub fn scalar_model(rng: &mut ChaCha8Rng) -> RationalSpectrum {
    let a: f64 = rng.random_range(-0.85..0.85);
    let b: f64 = rng.random_range(-0.9..0.9);
    let v: f64 = rng.random_range(0.2..5.0);
    RationalSpectrum::scalar(&[a], &[1.0, b], v).unwrap()
}

pub fn rel_diff(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}
