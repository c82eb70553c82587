//! Finite-horizon oracle for the spectral formulas.
//!
//! For a horizon `i` the stacked vector `x_{0..i}` has the block-Toeplitz
//! covariance `Σx` with block `(r, s) = R(s - r)`. The per-step quantity
//! `tr[Σx + Σy - 2 (Σx^{1/2} Σy Σx^{1/2})^{1/2}] / (i + 1)` is evaluated
//! densely and compared with the spectral value as `i` grows.
//!
//! Nothing here is clever on purpose: every horizon is an independent dense
//! eigenproblem of size `(i + 1) m`.

use faer::Mat;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hermitian::{
    clamp_bures, eigh, eigvalsh, trace_sqrt_of_sandwich, trace_sqrt_product_cholesky, PsdDecomposition, PsdPolicy,
    SymmetricMatrix,
};
use crate::spectra::Autocovariance;

/// Default horizon schedule.
pub const DEFAULT_HORIZONS: [usize; 7] = [16, 32, 64, 128, 256, 512, 1024];

/// Largest block-Toeplitz dimension `(i + 1) m` the oracle accepts.
pub const MAX_TOEPLITZ_DIM: usize = 4096;

/// Label stored in every diagnostic: the fit model is an assumption, not a
/// proven rate.
pub const EXTRAPOLATION_MODEL: &str = "v(i) = L + c/(i+1), least squares on the last three horizons (working assumption)";

/// Covariance of the stacked vector `x_{0..i}`.
#[derive(Clone, Debug)]
pub struct BlockToeplitzCovariance {
    pub dim: usize,
    pub horizon: usize,
    pub matrix: SymmetricMatrix,
    pub min_eigenvalue: f64,
}

fn assemble(acov: &Autocovariance, horizon: usize) -> SymmetricMatrix {
    let m = acov.dim();
    let n = (horizon + 1) * m;
    let mat = Mat::from_fn(n, n, |row, col| {
        let (r, i) = (row / m, row % m);
        let (s, j) = (col / m, col % m);
        acov.entry(s as isize - r as isize, i, j)
    });
    // symmetric by construction since R(-k) = R(k)ᵀ
    SymmetricMatrix::hermitian_part(mat.as_ref())
}

fn check_size(dim: usize, horizon: usize) -> Result<()> {
    let n = (horizon + 1).saturating_mul(dim);
    if n > MAX_TOEPLITZ_DIM {
        return Err(Error::InvalidArgument(format!(
            "horizon {horizon} with dimension {dim} gives a {n}x{n} covariance (limit {MAX_TOEPLITZ_DIM})"
        )));
    }
    Ok(())
}

/// Assembles `Σ` for horizon `i`; lags beyond `acov.max_lag()` are zero.
pub fn build_block_toeplitz(acov: &Autocovariance, horizon: usize) -> Result<BlockToeplitzCovariance> {
    check_size(acov.dim(), horizon)?;
    let matrix = assemble(acov, horizon);
    let min_eigenvalue = eigvalsh(&matrix)?[0];
    if min_eigenvalue <= 0.0 {
        return Err(Error::NotPositiveDefinite {
            context: format!("block-Toeplitz covariance at horizon {horizon}"),
            min_eigenvalue,
        });
    }
    Ok(BlockToeplitzCovariance { dim: acov.dim(), horizon, matrix, min_eigenvalue })
}

/// Everything computed at one horizon, normalised by `i + 1`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HorizonStep {
    pub horizon: usize,
    pub w2_sq_per_step: f64,
    pub trace_x_per_step: f64,
    pub trace_y_per_step: f64,
    /// `tr[(Σx^{1/2} Σy Σx^{1/2})^{1/2}] / (i + 1)`.
    pub cross_sandwich_per_step: f64,
    /// Same trace through `Σx = L Lᵀ` and the eigenvalues of `Lᵀ Σy L`.
    pub cross_cholesky_per_step: f64,
    pub min_eigenvalue_x: f64,
    pub min_eigenvalue_y: f64,
}

fn check_pair(acx: &Autocovariance, acy: &Autocovariance, horizon: usize) -> Result<()> {
    if acx.dim() != acy.dim() {
        return Err(Error::DimensionMismatch { left: acx.dim(), right: acy.dim() });
    }
    check_size(acx.dim(), horizon)
}

fn not_pd(which: &str, horizon: usize, min_eigenvalue: f64) -> Error {
    Error::NotPositiveDefinite { context: format!("block-Toeplitz covariance of {which} at horizon {horizon}"), min_eigenvalue }
}

/// Evaluates one horizon.
pub fn horizon_step(acx: &Autocovariance, acy: &Autocovariance, horizon: usize, policy: &PsdPolicy) -> Result<HorizonStep> {
    check_pair(acx, acy, horizon)?;
    let sx = assemble(acx, horizon);
    let sy = assemble(acy, horizon);
    let steps = (horizon + 1) as f64;

    let eig_x = eigh(&sx)?;
    let min_eigenvalue_x = eig_x.min();
    if min_eigenvalue_x <= 0.0 {
        return Err(not_pd("x", horizon, min_eigenvalue_x));
    }
    let min_eigenvalue_y = eigvalsh(&sy)?[0];
    if min_eigenvalue_y <= 0.0 {
        return Err(not_pd("y", horizon, min_eigenvalue_y));
    }

    let (cross_sandwich, cross_cholesky) = if acx == acy {
        // tr[(Σ Σ)^{1/2}] = tr Σ exactly
        (sx.trace(), sx.trace())
    } else {
        let scale = eig_x.scale();
        let root_x = PsdDecomposition::from_eig(eig_x, policy, scale)?.sqrt();
        (trace_sqrt_of_sandwich(&root_x, &sy, policy)?, trace_sqrt_product_cholesky(&sx, &sy, policy)?)
    };
    let total = sx.trace() + sy.trace();
    let w2_sq = clamp_bures(total, cross_sandwich)?;

    Ok(HorizonStep {
        horizon,
        w2_sq_per_step: w2_sq / steps,
        trace_x_per_step: sx.trace() / steps,
        trace_y_per_step: sy.trace() / steps,
        cross_sandwich_per_step: cross_sandwich / steps,
        cross_cholesky_per_step: cross_cholesky / steps,
        min_eigenvalue_x,
        min_eigenvalue_y,
    })
}

/// `bures_w2_squared(Σx, Σy) / (i + 1)`.
pub fn finite_horizon_w2_sq_per_step(
    acx: &Autocovariance,
    acy: &Autocovariance,
    horizon: usize,
    policy: &PsdPolicy,
) -> Result<f64> {
    Ok(horizon_step(acx, acy, horizon, policy)?.w2_sq_per_step)
}

/// `tr[(Σx Σy)^{1/2}] / (i + 1)` through the two similarity paths.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceSqrtPerStep {
    pub sandwich: f64,
    pub cholesky: f64,
}

impl TraceSqrtPerStep {
    pub fn relative_difference(&self) -> f64 {
        (self.sandwich - self.cholesky).abs() / self.sandwich.abs().max(self.cholesky.abs()).max(f64::MIN_POSITIVE)
    }
}

pub fn trace_sqrt_product_per_step(
    acx: &Autocovariance,
    acy: &Autocovariance,
    horizon: usize,
    policy: &PsdPolicy,
) -> Result<TraceSqrtPerStep> {
    let step = horizon_step(acx, acy, horizon, policy)?;
    Ok(TraceSqrtPerStep { sandwich: step.cross_sandwich_per_step, cholesky: step.cross_cholesky_per_step })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceDiagnostic {
    pub horizons: Vec<usize>,
    pub per_step_values: Vec<f64>,
    pub spectral_target: f64,
    pub extrapolated_limit: f64,
    pub converged: bool,
    /// `min(λ_min Σx, λ_min Σy)` per horizon.
    pub min_eigenvalues: Vec<f64>,
    /// The last three values are not monotone beyond round-off, or fewer
    /// than three horizons were given.
    pub fit_degenerate: bool,
    pub extrapolation_model: String,
    pub steps: Vec<HorizonStep>,
}

impl ConvergenceDiagnostic {
    /// The value at the largest horizon.
    pub fn last_value(&self) -> f64 {
        self.per_step_values.last().copied().unwrap_or(f64::NAN)
    }
}

/// `|L - target| <= max(1e-3 target, 1e-8)`.
pub fn within_tolerance(limit: f64, target: f64) -> bool {
    (limit - target).abs() <= (1e-3 * target.abs()).max(1e-8)
}

pub fn validate_horizons(horizons: &[usize], dim: usize) -> Result<()> {
    if horizons.is_empty() {
        return Err(Error::InvalidArgument("horizon schedule is empty".into()));
    }
    if horizons.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument(format!("horizons must be strictly increasing, got {horizons:?}")));
    }
    check_size(dim, *horizons.last().unwrap())
}

/// Fits `v = L + c x`, `x = 1/(i+1)`, by least squares on the last three
/// points. Returns `(L, degenerate)`.
pub fn extrapolate(horizons: &[usize], values: &[f64]) -> (f64, bool) {
    let n = values.len();
    match n {
        0 => (f64::NAN, true),
        1 => (values[0], true),
        _ => {
            let k = n.min(3);
            let xs: Vec<f64> = horizons[n - k..].iter().map(|&i| 1.0 / (i + 1) as f64).collect();
            let vs = &values[n - k..];
            let mx = xs.iter().sum::<f64>() / k as f64;
            let mv = vs.iter().sum::<f64>() / k as f64;
            let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
            let sxv: f64 = xs.iter().zip(vs).map(|(x, v)| (x - mx) * (v - mv)).sum();
            let slope = if sxx > 0.0 { sxv / sxx } else { 0.0 };
            let limit = mv - slope * mx;
            let degenerate = if k < 3 {
                true
            } else {
                let noise = 1e-12 * vs.iter().fold(0.0f64, |m, v| m.max(v.abs()));
                let (d1, d2) = (vs[1] - vs[0], vs[2] - vs[1]);
                d1.abs() > noise && d2.abs() > noise && d1.signum() != d2.signum()
            };
            (limit, degenerate)
        }
    }
}

/// Runs every horizon (concurrently, one thread per horizon) and fits the
/// limit of the per-step values.
pub fn convergence_diagnostic(
    acx: &Autocovariance,
    acy: &Autocovariance,
    horizons: &[usize],
    spectral_target: f64,
    policy: &PsdPolicy,
) -> Result<ConvergenceDiagnostic> {
    if acx.dim() != acy.dim() {
        return Err(Error::DimensionMismatch { left: acx.dim(), right: acy.dim() });
    }
    validate_horizons(horizons, acx.dim())?;
    let results: Vec<Result<HorizonStep>> = std::thread::scope(|scope| {
        let handles: Vec<_> =
            horizons.iter().map(|&i| scope.spawn(move || horizon_step(acx, acy, i, policy))).collect();
        handles.into_iter().map(|h| h.join().expect("oracle worker panicked")).collect()
    });
    let steps = results.into_iter().collect::<Result<Vec<_>>>()?;

    let per_step_values: Vec<f64> = steps.iter().map(|s| s.w2_sq_per_step).collect();
    let (extrapolated_limit, fit_degenerate) = extrapolate(horizons, &per_step_values);
    Ok(ConvergenceDiagnostic {
        horizons: horizons.to_vec(),
        converged: within_tolerance(extrapolated_limit, spectral_target),
        min_eigenvalues: steps.iter().map(|s| s.min_eigenvalue_x.min(s.min_eigenvalue_y)).collect(),
        per_step_values,
        spectral_target,
        extrapolated_limit,
        fit_degenerate,
        extrapolation_model: EXTRAPOLATION_MODEL.to_string(),
        steps,
    })
}
