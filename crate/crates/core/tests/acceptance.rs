//! Prints one PASS/FAIL line per acceptance criterion. Exits non-zero only
//! when a criterion outside `KNOWN_FAILURES` fails.

mod common;

use std::path::Path;
use std::process::Command;
use std::time::Instant;

use common::*;
use faer::Mat;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spectral_w2::io::read_model;
use spectral_w2::oracle::build_block_toeplitz;
use spectral_w2::{
    alt_gap_profile, autocov_to_spectrum, convergence_diagnostic, estimate_welch, gelbrich_lower_bound, hellinger,
    spectral_w2, spectral_w2_scalar, spectrum_to_autocov, sqrt_psd, trace_sqrt_product, Autocovariance, GridSpectrum,
    HermitianMatrix, PsdPolicy, RationalSpectrum, WelchConfig, Window,
};

/// Criterion 3 asks for `hellinger <= spectral_w2`. The trace inequality
/// `tr[(AB)^{1/2}] >= tr[A^{1/2} B^{1/2}]` gives the opposite ordering, so
/// that clause fails on any non-commuting pair.
const KNOWN_FAILURES: &[usize] = &[3];

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn data(name: &str) -> std::path::PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn p() -> PsdPolicy {
    PsdPolicy::default()
}

fn acov(model: &RationalSpectrum) -> Autocovariance {
    model.autocovariance(1e-15).unwrap()
}

fn pd_pairs() -> Vec<(HermitianMatrix, HermitianMatrix)> {
    let mut rng = ChaCha8Rng::seed_from_u64(2002);
    [1, 2, 3, 8]
        .iter()
        .flat_map(|&m| (0..50).map(move |_| m).collect::<Vec<_>>())
        .map(|m| (random_pd(m, 1.5, &mut rng), random_pd(m, 1.5, &mut rng)))
        .collect()
}

fn oracle_case(x: &RationalSpectrum, y: &RationalSpectrum) -> (f64, f64, f64) {
    let pp = p();
    let start = Instant::now();
    let target = spectral_w2(&x.grid(8192, &pp).unwrap(), &y.grid(8192, &pp).unwrap(), &pp).unwrap().squared;
    let d = convergence_diagnostic(&acov(x), &acov(y), &[1024], target, &pp).unwrap();
    (rel_diff(d.last_value(), target), target, start.elapsed().as_secs_f64())
}

fn criterion_1() -> Outcome {
    let ar1 = RationalSpectrum::scalar(&[0.5], &[], 1.0).unwrap();
    let white = RationalSpectrum::scalar(&[], &[], 1.0).unwrap();
    let (e1, t1, s1) = oracle_case(&ar1, &white);
    let (vd, vr) = (read_model(&data("var1_diag.json")).unwrap(), read_model(&data("var1_rot.json")).unwrap());
    let (e2, t2, s2) = oracle_case(&vd, &vr);
    let commutes = spectral_w2(&vd.grid(64, &p()).unwrap(), &vr.grid(64, &p()).unwrap(), &p()).unwrap().commutation_residual;
    outcome(
        e1 <= 2e-3 && e2 <= 2e-3 && s1 < 60.0 && s2 < 60.0 && commutes > 1e-3,
        format!(
            "scalar rel err {e1:.2e} (target {t1:.6}, {s1:.1}s); m=2 rel err {e2:.2e} (target {t2:.6}, {s2:.1}s, commutator {commutes:.2e})"
        ),
    )
}

fn criterion_2(pairs: &[(HermitianMatrix, HermitianMatrix)]) -> Outcome {
    let worst = pairs
        .iter()
        .map(|(a, b)| rel_diff(trace_sqrt_product(a, b, &p()).unwrap(), sum_sqrt_eig_product(a, b)))
        .fold(0.0, f64::max);
    outcome(worst <= 1e-8, format!("{} pairs, worst rel diff {worst:.2e}", pairs.len()))
}

fn criterion_3(pairs: &[(HermitianMatrix, HermitianMatrix)]) -> Outcome {
    let pp = p();
    let worst_gap = pairs
        .iter()
        .map(|(a, b)| {
            let gap = trace_sqrt_product(a, b, &pp).unwrap() - trace_root_product(a, b, &pp);
            gap / (a.trace() + b.trace())
        })
        .fold(f64::INFINITY, f64::min);
    let gap_ok = worst_gap >= -1e-10;

    let mut rng = ChaCha8Rng::seed_from_u64(3003);
    let (mut h_le_w, mut w_le_h, mut worst_identity) = (0, 0, 0.0f64);
    for k in 0..50 {
        let m = [1, 2, 3][k % 3];
        let (x, y) = (random_grid(m, 128, &mut rng), random_grid(m, 128, &mut rng));
        let w = spectral_w2(&x, &y, &pp).unwrap();
        let h = hellinger(&x, &y, &pp).unwrap();
        let tol = 1e-12 * (x.mean_trace() + y.mean_trace());
        h_le_w += usize::from(h.squared <= w.squared + tol);
        w_le_h += usize::from(w.squared <= h.squared + tol);
        let gap = alt_gap_profile(&x, &y, &pp).unwrap().iter().sum::<f64>() / 128.0;
        worst_identity = worst_identity.max((h.squared - w.squared - 2.0 * gap).abs() / (x.mean_trace() + y.mean_trace()));
    }
    let order_ok = h_le_w == 50;

    let mut worst_eq = 0.0f64;
    let mut general_eq = 0.0f64;
    for k in 0..20 {
        let (x, y) = commuting_pair(1 + k % 4, 64, &mut rng);
        let w = spectral_w2(&x, &y, &pp).unwrap();
        let h = hellinger(&x, &y, &pp).unwrap();
        worst_eq = worst_eq.max(rel_diff(w.value, h.value));
        let general = general_w2_sq(&x, &y);
        general_eq = general_eq.max(rel_diff(general.sqrt(), h.value));
    }
    let eq_ok = worst_eq <= 1e-9 && general_eq <= 1e-9;

    println!(
        "  info: criterion 3 ordering as stated (hellinger <= spectral_w2) held on {h_le_w}/50 pairs; \
         corrected ordering (spectral_w2 <= hellinger) held on {w_le_h}/50; \
         max |H^2 - W2^2 - 2 mean gap| / scale = {worst_identity:.1e}"
    );
    outcome(
        gap_ok && order_ok && eq_ok,
        format!(
            "min gap/scale {worst_gap:.2e} ({}); hellinger <= w2 on {h_le_w}/50 ({}); commuting equality worst {worst_eq:.1e}, general path {general_eq:.1e} ({})",
            ok(gap_ok),
            ok(order_ok),
            ok(eq_ok)
        ),
    )
}

fn ok(b: bool) -> &'static str {
    if b {
        "ok"
    } else {
        "violated"
    }
}

/// Grid mean of `tr A + tr B - 2 Σ √λ(AB)` through general eigenvalues.
fn general_w2_sq(x: &GridSpectrum, y: &GridSpectrum) -> f64 {
    x.values()
        .iter()
        .zip(y.values())
        .map(|(a, b)| a.trace() + b.trace() - 2.0 * sum_sqrt_eig_product(a, b))
        .sum::<f64>()
        / x.n_freq() as f64
}

fn criterion_4() -> Outcome {
    let pp = p();
    let mut rng = ChaCha8Rng::seed_from_u64(4004);
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let (x, y) = (scalar_model(&mut rng).grid(1024, &pp).unwrap(), scalar_model(&mut rng).grid(1024, &pp).unwrap());
        let scale = x.mean_trace() + y.mean_trace();
        let matrix = spectral_w2(&x, &y, &pp).unwrap().squared;
        let closed = spectral_w2_scalar(&x, &y).unwrap().squared;
        let gelbrich = gelbrich_lower_bound(&x, &y, &pp).unwrap().squared;
        let general = general_w2_sq(&x, &y);
        for v in [closed, gelbrich, general] {
            worst = worst.max((v - matrix).abs() / scale);
        }
    }
    outcome(worst <= 1e-12, format!("20 scalar pairs, worst |diff| / mean trace {worst:.2e}"))
}

fn criterion_5() -> Outcome {
    let pp = p();
    let mut rng = ChaCha8Rng::seed_from_u64(5005);
    let d = |a: &GridSpectrum, b: &GridSpectrum| spectral_w2(a, b, &pp).unwrap().value;
    let (mut worst_sym, mut identity_ok, mut worst_tri) = (0.0f64, true, f64::NEG_INFINITY);
    for k in 0..100 {
        let m = [1, 2, 3][k % 3];
        let (x, y, z) = (random_grid(m, 64, &mut rng), random_grid(m, 64, &mut rng), random_grid(m, 64, &mut rng));
        let scale = x.mean_trace().max(y.mean_trace()).max(z.mean_trace()).sqrt();
        worst_sym = worst_sym.max(rel_diff(d(&x, &y), d(&y, &x)));
        identity_ok &= d(&x, &x) == 0.0 && d(&x, &y) > 0.0;
        worst_tri = worst_tri.max((d(&x, &z) - d(&x, &y) - d(&y, &z)) / scale);
    }
    outcome(
        worst_sym <= 1e-9 && identity_ok && worst_tri <= 1e-8,
        format!("symmetry {worst_sym:.1e}, identity {}, worst triangle excess / scale {worst_tri:.2e}", ok(identity_ok)),
    )
}

fn criterion_6() -> Outcome {
    let pp = p();
    let mut rows = Vec::new();
    let mut worst = 0.0f64;
    for name in ["ar1.json", "white.json", "ma1.json", "var1_diag.json", "var1_rot.json"] {
        let model = read_model(&data(name)).unwrap();
        let target = model.grid(8192, &pp).unwrap().mean_trace();
        let t = build_block_toeplitz(&acov(&model), 1024).unwrap();
        let err = rel_diff(t.matrix.trace() / 1025.0, target);
        worst = worst.max(err);
        rows.push(format!("{}={err:.1e}", name.trim_end_matches(".json")));
    }
    outcome(worst <= 1e-6, format!("i=1024 rel err {}", rows.join(" ")))
}

fn criterion_7(pairs: &[(HermitianMatrix, HermitianMatrix)]) -> Outcome {
    let pp = p();
    let mut rng = ChaCha8Rng::seed_from_u64(7007);
    let mut worst_rt = 0.0f64;
    for m in [1, 2, 3] {
        let lags: Vec<Mat<f64>> = (0..4)
            .map(|k| Mat::from_fn(m, m, |i, j| if k == 0 && i == j { 4.0 } else { rng.random_range(-0.4..0.4) }))
            .collect();
        let mut lags = lags;
        let r0 = lags[0].clone();
        lags[0] = Mat::from_fn(m, m, |i, j| 0.5 * (r0[(i, j)] + r0[(j, i)]));
        let a = Autocovariance::new(lags).unwrap();
        let spec = autocov_to_spectrum(&a, 64, &pp).unwrap().spectrum;
        let back = spectrum_to_autocov(&spec, 3).unwrap().autocov;
        for k in -3..=3isize {
            for i in 0..m {
                for j in 0..m {
                    worst_rt = worst_rt.max((back.entry(k, i, j) - a.entry(k, i, j)).abs());
                }
            }
        }
    }
    let worst_sqrt = pairs
        .iter()
        .map(|(a, _)| {
            let s = sqrt_psd(a, &pp).unwrap();
            let diff = s.as_mat() * s.as_mat() - a.as_mat();
            spectral_w2::hermitian::frobenius(diff.as_ref()) / a.frobenius_norm()
        })
        .fold(0.0, f64::max);
    let white = RationalSpectrum::scalar(&[], &[], 1.0).unwrap();
    let ts = white.simulate(1 << 16, 0, &mut ChaCha8Rng::seed_from_u64(7)).unwrap();
    let cfg = WelchConfig { segment_len: 256, overlap_frac: 0.5, window: Window::Hann };
    let level = estimate_welch(&ts, &cfg, &pp).unwrap().mean_trace();
    let welch_ok = (level - 1.0).abs() <= 0.05;
    outcome(
        worst_rt <= 1e-10 && worst_sqrt <= 1e-9 && welch_ok,
        format!("autocov round trip {worst_rt:.1e}, sqrt residual {worst_sqrt:.1e}, Welch white level {level:.4}"),
    )
}

fn bin_output(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_spectral-w2"))
        .current_dir(env!("CARGO_MANIFEST_DIR"))
        .args(args)
        .output()
        .expect("spawn binary");
    (out.status.code().unwrap_or(-1), String::from_utf8_lossy(&out.stdout).into_owned())
}

fn criterion_8() -> Outcome {
    let goldens: &[(&str, &[&str])] = &[
        ("dist_ar1_white.json", &["--n-freq", "64", "dist", "tests/data/ar1.json", "tests/data/white.json"]),
        (
            "dist_var1.csv",
            &["--n-freq", "32", "--format", "csv", "dist", "tests/data/var1_diag.json", "tests/data/var1_rot.json"],
        ),
        (
            "dist_gelbrich.json",
            &["--n-freq", "16", "dist", "--semantics", "gelbrich", "tests/data/ar1.json", "tests/data/ma1.json"],
        ),
        (
            "oracle_ar1_ma1.json",
            &["--n-freq", "256", "--horizons", "8,16,32", "oracle", "tests/data/ar1.json", "tests/data/ma1_autocov.json"],
        ),
        (
            "info.csv",
            &[
                "--format", "csv", "--n-freq", "64", "--segment-len", "16", "info", "tests/data/ar1.json",
                "tests/data/flat4.csv", "tests/data/short.csv",
            ],
        ),
    ];
    let mut bad = Vec::new();
    for (name, args) in goldens {
        let want = std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name))
            .unwrap_or_default();
        let (c1, o1) = bin_output(args);
        let (c2, o2) = bin_output(args);
        if c1 != 0 || c2 != 0 || o1 != o2 || o1 != want {
            bad.push(name.to_string());
        }
    }
    let estimate_dir = tempfile::tempdir().unwrap();
    let est = |f: &str| {
        let path = estimate_dir.path().join(f);
        let (c, _) = bin_output(&[
            "--seed", "7", "--segment-len", "16", "--out", path.to_str().unwrap(), "estimate", "tests/data/ar1.json",
            "--length", "2048",
        ]);
        (c, std::fs::read_to_string(path).unwrap_or_default())
    };
    let (e1, e2) = (est("a.csv"), est("b.csv"));
    let want = std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden/estimate_ar1.csv"))
        .unwrap_or_default();
    if e1.0 != 0 || e1 != e2 || e1.1 != want {
        bad.push("estimate_ar1.csv".into());
    }

    let failures: &[(i32, &[&str])] = &[
        (2, &["dist", "tests/data/missing.json", "tests/data/white.json"]),
        (3, &["dist", "tests/data/malformed.json", "tests/data/white.json"]),
        (4, &["dist", "tests/data/ar1.json", "tests/data/var1_diag.json"]),
        (4, &["--out", "/dev/null", "estimate", "tests/data/short.csv"]),
        (5, &["info", "tests/data/negative.csv"]),
        (4, &["info", "tests/data/unstable.json"]),
    ];
    for (want, args) in failures {
        let (got, _) = bin_output(args);
        if got != *want {
            bad.push(format!("{args:?} exited {got}, want {want}"));
        }
    }
    outcome(
        bad.is_empty(),
        format!("{} goldens, {} forced failures; mismatches: {}", goldens.len() + 1, failures.len(), if bad.is_empty() { "none".into() } else { bad.join(", ") }),
    )
}

fn main() {
    let pairs = pd_pairs();
    let results: Vec<(usize, Outcome)> = vec![
        (1, criterion_1()),
        (2, criterion_2(&pairs)),
        (3, criterion_3(&pairs)),
        (4, criterion_4()),
        (5, criterion_5()),
        (6, criterion_6()),
        (7, criterion_7(&pairs)),
        (8, criterion_8()),
    ];
    let mut unexpected = Vec::new();
    for (n, o) in &results {
        let tag = if o.pass { "PASS" } else { "FAIL" };
        let note = if !o.pass && KNOWN_FAILURES.contains(n) { " [known failure]" } else { "" };
        println!("criterion {n}: {tag}{note}  {}", o.detail);
        if !o.pass && !KNOWN_FAILURES.contains(n) {
            unexpected.push(*n);
        }
    }
    if !unexpected.is_empty() {
        eprintln!("unexpected failures: {unexpected:?}");
        std::process::exit(1);
    }
}
