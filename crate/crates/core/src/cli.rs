//! Command-line front end behind the `spectral-w2` binary.
//!
//! ```text
//! spectral-w2 dist X Y [--semantics elliptical|gelbrich] [--oracle]
//! spectral-w2 estimate SOURCE --out grid.csv [--segment-len ..] [--length ..]
//! spectral-w2 oracle X Y [--max-lag K] [--bartlett]
//! spectral-w2 info SOURCE...
//! ```
//!
//! Sources are detected from their content (see [`crate::io::load_source`]).
//! Exit codes: 0 success, 1 numerical/internal failure, 2 file not found,
//! 3 parse or usage error, 4 dimension/precondition violation,
//! 5 not positive definite.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::distances::{hellinger, w2_with_semantics, DistanceReport, Semantics};
use crate::error::{Error, Result};
use crate::hermitian::PsdPolicy;
use crate::io::{self, fmt_f64, Source};
use crate::oracle::{convergence_diagnostic, validate_horizons, ConvergenceDiagnostic, DEFAULT_HORIZONS};
use crate::spectra::{
    autocov_to_spectrum, estimate_welch, spectrum_to_autocov, Autocovariance, GridSpectrum, SpectrumSummary,
    WelchConfig, Window, AUTOCOV_TRUNCATION_TOL,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Parser, Debug)]
#[command(name = "spectral-w2", version, about = "Spectral W2, Gelbrich and Hellinger distances between stationary processes")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct GlobalArgs {
    /// Frequency grid size for model and autocovariance sources (power of two).
    #[arg(long, global = true, default_value_t = 4096)]
    pub n_freq: usize,
    /// Relative eigenvalue floor.
    #[arg(long, global = true, default_value_t = 1e-12, allow_negative_numbers = true)]
    pub floor_eps: f64,
    /// Relative tolerance for negative eigenvalues before rejection.
    #[arg(long, global = true, default_value_t = 1e-10, allow_negative_numbers = true)]
    pub negativity_tol: f64,
    /// Oracle horizons, comma separated and strictly increasing.
    #[arg(long, global = true, value_delimiter = ',')]
    pub horizons: Option<Vec<usize>>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Seed for simulated series.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Output file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Welch segment length (power of two).
    #[arg(long, global = true, default_value_t = 256)]
    pub segment_len: usize,
    /// Welch overlap fraction in [0, 1).
    #[arg(long, global = true, default_value_t = 0.5)]
    pub overlap: f64,
    #[arg(long, global = true, default_value = "hann")]
    pub window: String,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Spectral W2 (or Gelbrich bound) and Hellinger distance between two sources.
    Dist {
        x: PathBuf,
        y: PathBuf,
        #[arg(long, default_value = "elliptical")]
        semantics: String,
        /// Attach a block-Toeplitz convergence diagnostic.
        #[arg(long)]
        oracle: bool,
    },
    /// Welch estimate of a series (or of a model simulated with --seed), written as a grid CSV.
    Estimate {
        source: PathBuf,
        /// Samples to simulate when the source is a model.
        #[arg(long, default_value_t = 1 << 16)]
        length: usize,
        #[arg(long, default_value_t = 1000)]
        burn_in: usize,
    },
    /// Block-Toeplitz convergence diagnostic between two sources.
    Oracle {
        x: PathBuf,
        y: PathBuf,
        /// Truncate both autocovariances at this lag.
        #[arg(long)]
        max_lag: Option<usize>,
        /// Apply a Bartlett taper after truncation.
        #[arg(long)]
        bartlett: bool,
    },
    /// Positive-definiteness margins and symmetry residuals of sources.
    Info {
        #[arg(required = true)]
        sources: Vec<PathBuf>,
    },
}

/// Validated settings shared by every subcommand.
#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    pub n_freq: usize,
    pub policy: PsdPolicy,
    pub horizons: Vec<usize>,
    pub format: Format,
    pub seed: u64,
    pub welch: WelchConfig,
}

impl RunConfig {
    pub fn from_args(g: &GlobalArgs) -> Result<Self> {
        if g.n_freq < 2 || !g.n_freq.is_power_of_two() {
            return Err(Error::InvalidArgument(format!("--n-freq must be a power of two >= 2, got {}", g.n_freq)));
        }
        let horizons = g.horizons.clone().unwrap_or_else(|| DEFAULT_HORIZONS.to_vec());
        if horizons.is_empty() || horizons.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidArgument(format!("--horizons must be strictly increasing, got {horizons:?}")));
        }
        let welch = WelchConfig { segment_len: g.segment_len, overlap_frac: g.overlap, window: g.window.parse::<Window>()? };
        welch.validate()?;
        Ok(Self {
            n_freq: g.n_freq,
            policy: PsdPolicy::new(g.floor_eps, g.negativity_tol)?,
            horizons,
            format: g.format,
            seed: g.seed,
            welch,
        })
    }
}

/// Process exit code for an error.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::FileNotFound(_) => 2,
        Error::Parse(_) | Error::InvalidArgument(_) => 3,
        Error::DimensionMismatch { .. }
        | Error::GridMismatch { .. }
        | Error::TooFewSegments { .. }
        | Error::GridTooCoarse { .. }
        | Error::LagTooLarge { .. }
        | Error::NonRealResidue { .. }
        | Error::NonHermitianInput { .. }
        | Error::UnstableAr { .. }
        | Error::SingularAr { .. } => 4,
        Error::NotPositiveDefinite { .. } | Error::IndefiniteInput { .. } => 5,
        Error::ConvergenceFailure | Error::NegativeDistance { .. } | Error::Io(_) => 1,
    }
}

/// Parses `args` (program name first), runs the command and returns the
/// exit code. Errors go to stderr.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

pub fn execute(cli: &Cli) -> Result<()> {
    let cfg = RunConfig::from_args(&cli.global)?;
    let out = cli.global.out.as_deref();
    match &cli.command {
        Command::Dist { x, y, semantics, oracle } => {
            let semantics: Semantics = semantics.parse()?;
            let output = cmd_dist(x, y, semantics, *oracle, &cfg)?;
            emit(out, &render_dist(&output, cfg.format)?)
        }
        Command::Estimate { source, length, burn_in } => {
            let Some(path) = out else {
                return Err(Error::InvalidArgument("estimate needs --out PATH for the grid CSV".into()));
            };
            let summary = cmd_estimate(source, *length, *burn_in, path, &cfg)?;
            emit(None, &io::to_json(&summary)?)
        }
        Command::Oracle { x, y, max_lag, bartlett } => {
            let output = cmd_oracle(x, y, *max_lag, *bartlett, &cfg)?;
            emit(out, &render_oracle(&output, cfg.format)?)
        }
        Command::Info { sources } => {
            let infos = cmd_info(sources, &cfg)?;
            emit(out, &render_info(&infos, cfg.format)?)
        }
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn to_grid_at(source: &Source, n_freq: usize, cfg: &RunConfig) -> Result<GridSpectrum> {
    match source {
        Source::Model(m) => m.grid(n_freq, &cfg.policy),
        Source::Autocov(a) => Ok(autocov_to_spectrum(a, n_freq, &cfg.policy)?.spectrum),
        Source::Grid(g) => Ok(g.clone()),
        Source::Series(s) => estimate_welch(s, &cfg.welch, &cfg.policy),
    }
}

/// Grids for both sources on a common frequency grid. Grids and series fix
/// the size; models and autocovariances are evaluated on it, or on
/// `--n-freq` when neither source fixes one.
pub fn resolve_pair(x: &Source, y: &Source, cfg: &RunConfig) -> Result<(GridSpectrum, GridSpectrum)> {
    if x.dim() != y.dim() {
        return Err(Error::DimensionMismatch { left: x.dim(), right: y.dim() });
    }
    let fixed = |s: &Source| -> Option<usize> {
        match s {
            Source::Grid(g) => Some(g.n_freq()),
            Source::Series(_) => Some(cfg.welch.segment_len),
            _ => None,
        }
    };
    let n = fixed(x).or(fixed(y)).unwrap_or(cfg.n_freq);
    let gx = to_grid_at(x, n, cfg)?;
    let gy = to_grid_at(y, n, cfg)?;
    if gx.n_freq() != gy.n_freq() {
        return Err(Error::GridMismatch { left: gx.n_freq(), right: gy.n_freq() });
    }
    Ok((gx, gy))
}

/// Autocovariance of a source for the oracle. Grids are inverted up to
/// `n_freq/2 - 1` lags; series are rejected.
pub fn to_autocov(source: &Source) -> Result<Autocovariance> {
    match source {
        Source::Model(m) => m.autocovariance(AUTOCOV_TRUNCATION_TOL),
        Source::Autocov(a) => Ok(a.clone()),
        Source::Grid(g) => Ok(spectrum_to_autocov(g, g.n_freq() / 2 - 1)?.autocov),
        Source::Series(_) => {
            Err(Error::InvalidArgument("the oracle needs a model, autocovariance or grid source, not a series".into()))
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DistOutput {
    pub sources: [&'static str; 2],
    pub semantics: Semantics,
    pub report: DistanceReport,
    pub hellinger_value: f64,
    pub hellinger_squared: f64,
    pub mean_alt_gap: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<ConvergenceDiagnostic>,
    #[serde(skip)]
    pub hellinger_per_freq: Vec<f64>,
}

pub fn cmd_dist(x: &Path, y: &Path, semantics: Semantics, oracle: bool, cfg: &RunConfig) -> Result<DistOutput> {
    let sx = io::load_source(x, &cfg.policy)?;
    let sy = io::load_source(y, &cfg.policy)?;
    let (gx, gy) = resolve_pair(&sx, &sy, cfg)?;
    let report = w2_with_semantics(&gx, &gy, &cfg.policy, semantics)?;
    let h = hellinger(&gx, &gy, &cfg.policy)?;
    let oracle = if oracle {
        let (ax, ay) = (to_autocov(&sx)?, to_autocov(&sy)?);
        validate_horizons(&cfg.horizons, ax.dim())?;
        Some(convergence_diagnostic(&ax, &ay, &cfg.horizons, report.squared, &cfg.policy)?)
    } else {
        None
    };
    Ok(DistOutput {
        sources: [sx.kind(), sy.kind()],
        semantics,
        mean_alt_gap: report.mean_alt_gap(),
        report,
        hellinger_value: h.value,
        hellinger_squared: h.squared,
        oracle,
        hellinger_per_freq: h.per_freq_trace,
    })
}

pub fn render_dist(o: &DistOutput, format: Format) -> Result<String> {
    match format {
        Format::Json => io::to_json(o),
        Format::Csv => {
            let mut s = String::from("omega_index,omega,w2_trace,hellinger_sq,alt_gap\n");
            let n = o.report.n_freq;
            for l in 0..n {
                s.push_str(&format!(
                    "{l},{},{},{},{}\n",
                    fmt_f64(crate::spectra::omega(l, n)),
                    fmt_f64(o.report.per_freq_trace[l]),
                    fmt_f64(o.hellinger_per_freq[l]),
                    fmt_f64(o.report.alt_gap[l])
                ));
            }
            Ok(s)
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct EstimateSummary {
    pub source: &'static str,
    pub samples: usize,
    pub dim: usize,
    pub n_freq: usize,
    pub segments: usize,
    pub welch: WelchConfig,
    pub flooring_count: usize,
    pub mean_trace: f64,
    pub real_symmetry: bool,
}

pub fn cmd_estimate(source: &Path, length: usize, burn_in: usize, out: &Path, cfg: &RunConfig) -> Result<EstimateSummary> {
    let src = io::load_source(source, &cfg.policy)?;
    let ts = match &src {
        Source::Series(ts) => ts.clone(),
        Source::Model(m) => {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            m.simulate(length, burn_in, &mut rng)?
        }
        _ => return Err(Error::InvalidArgument("estimate needs a time series or a model to simulate".into())),
    };
    let grid = estimate_welch(&ts, &cfg.welch, &cfg.policy)?;
    io::write_grid(out, &grid)?;
    Ok(EstimateSummary {
        source: src.kind(),
        samples: ts.len(),
        dim: grid.dim(),
        n_freq: grid.n_freq(),
        segments: cfg.welch.segment_count(ts.len()),
        welch: cfg.welch,
        flooring_count: grid.flooring_count(),
        mean_trace: grid.mean_trace(),
        real_symmetry: grid.is_real_symmetric(),
    })
}

/// Per-horizon trace check: `tr Σ / (i + 1)` against the grid mean of `tr Φ`.
#[derive(Clone, Debug, Serialize)]
pub struct TraceLimitRow {
    pub horizon: usize,
    pub trace_x_per_step: f64,
    pub trace_x_target: f64,
    pub trace_y_per_step: f64,
    pub trace_y_target: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct OracleOutput {
    pub sources: [&'static str; 2],
    pub max_lags: [usize; 2],
    pub bartlett: bool,
    pub diagnostic: ConvergenceDiagnostic,
    pub trace_limits: Vec<TraceLimitRow>,
}

pub fn cmd_oracle(x: &Path, y: &Path, max_lag: Option<usize>, bartlett: bool, cfg: &RunConfig) -> Result<OracleOutput> {
    let sx = io::load_source(x, &cfg.policy)?;
    let sy = io::load_source(y, &cfg.policy)?;
    let (gx, gy) = resolve_pair(&sx, &sy, cfg)?;
    let target = w2_with_semantics(&gx, &gy, &cfg.policy, Semantics::Elliptical)?.squared;
    let prepare = |s: &Source| -> Result<Autocovariance> {
        let mut a = to_autocov(s)?;
        if let Some(k) = max_lag {
            a = a.truncated(k);
        }
        if bartlett {
            a = a.with_bartlett_taper();
        }
        Ok(a)
    };
    let (ax, ay) = (prepare(&sx)?, prepare(&sy)?);
    validate_horizons(&cfg.horizons, ax.dim())?;
    let diagnostic = convergence_diagnostic(&ax, &ay, &cfg.horizons, target, &cfg.policy)?;
    let (tx, ty) = (gx.mean_trace(), gy.mean_trace());
    let trace_limits = diagnostic
        .steps
        .iter()
        .map(|s| TraceLimitRow {
            horizon: s.horizon,
            trace_x_per_step: s.trace_x_per_step,
            trace_x_target: tx,
            trace_y_per_step: s.trace_y_per_step,
            trace_y_target: ty,
        })
        .collect();
    Ok(OracleOutput { sources: [sx.kind(), sy.kind()], max_lags: [ax.max_lag(), ay.max_lag()], bartlett, diagnostic, trace_limits })
}

pub fn render_oracle(o: &OracleOutput, format: Format) -> Result<String> {
    match format {
        Format::Json => io::to_json(o),
        Format::Csv => {
            let mut s = String::from(
                "horizon,w2_sq_per_step,spectral_target,trace_x_per_step,trace_x_target,trace_y_per_step,trace_y_target,\
                 cross_sandwich_per_step,cross_cholesky_per_step,min_eigenvalue_x,min_eigenvalue_y\n",
            );
            for (step, row) in o.diagnostic.steps.iter().zip(&o.trace_limits) {
                let cells = [
                    step.w2_sq_per_step,
                    o.diagnostic.spectral_target,
                    row.trace_x_per_step,
                    row.trace_x_target,
                    row.trace_y_per_step,
                    row.trace_y_target,
                    step.cross_sandwich_per_step,
                    step.cross_cholesky_per_step,
                    step.min_eigenvalue_x,
                    step.min_eigenvalue_y,
                ];
                let cells: Vec<String> = cells.iter().map(|&v| fmt_f64(v)).collect();
                s.push_str(&format!("{},{}\n", step.horizon, cells.join(",")));
            }
            Ok(s)
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SourceInfo {
    pub path: String,
    pub kind: &'static str,
    pub dim: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ar_spectral_radius: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_lag: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    pub spectrum: SpectrumSummary,
}

pub fn cmd_info(sources: &[PathBuf], cfg: &RunConfig) -> Result<Vec<SourceInfo>> {
    sources
        .iter()
        .map(|path| {
            let src = io::load_source(path, &cfg.policy)?;
            let n = match &src {
                Source::Grid(g) => g.n_freq(),
                Source::Series(_) => cfg.welch.segment_len,
                _ => cfg.n_freq,
            };
            let grid = to_grid_at(&src, n, cfg)?;
            Ok(SourceInfo {
                path: path.display().to_string(),
                kind: src.kind(),
                dim: src.dim(),
                ar_spectral_radius: match &src {
                    Source::Model(m) => Some(m.ar_spectral_radius()?),
                    _ => None,
                },
                max_lag: match &src {
                    Source::Autocov(a) => Some(a.max_lag()),
                    _ => None,
                },
                samples: match &src {
                    Source::Series(s) => Some(s.len()),
                    _ => None,
                },
                spectrum: grid.summary()?,
            })
        })
        .collect()
}

pub fn render_info(infos: &[SourceInfo], format: Format) -> Result<String> {
    match format {
        Format::Json => io::to_json(infos),
        Format::Csv => {
            let mut s = String::from(
                "path,kind,dim,n_freq,min_eigenvalue,min_eigenvalue_index,max_eigenvalue,condition,mean_trace,\
                 flooring_count,symmetry_residual,real_symmetric\n",
            );
            for i in infos {
                let sp = &i.spectrum;
                s.push_str(&format!(
                    "{},{},{},{},{},{},{},{},{},{},{},{}\n",
                    i.path,
                    i.kind,
                    i.dim,
                    sp.n_freq,
                    fmt_f64(sp.min_eigenvalue),
                    sp.min_eigenvalue_index,
                    fmt_f64(sp.max_eigenvalue),
                    fmt_f64(sp.condition),
                    fmt_f64(sp.mean_trace),
                    sp.flooring_count,
                    fmt_f64(sp.symmetry.max_residual),
                    sp.symmetry.real_symmetric
                ));
            }
            Ok(s)
        }
    }
}
