//! File formats.
//!
//! - Grid spectrum CSV: header `omega_index,row,col,re,im`, one line per
//!   matrix entry, plus a sidecar `<stem>.meta.json` holding
//!   `{dim, n_freq, real_symmetry}`.
//! - Rational model JSON: [`RationalModelFile`].
//! - Autocovariance JSON: `{"dim": m, "lags": [R(0), R(1), ...]}` with
//!   row-major nested arrays.
//! - Time-series CSV: one row per sample, `m` columns, optional header.
//!
//! Floats are written with 17 significant digits so every value round-trips.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hermitian::{HermitianMatrix, PsdPolicy};
use crate::spectra::{Autocovariance, GridSpectrum, RationalModelFile, RationalSpectrum, TimeSeries};

pub const GRID_HEADER: [&str; 5] = ["omega_index", "row", "col", "re", "im"];

/// `x` with 17 significant digits.
pub fn fmt_f64(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        x.to_string()
    }
}

struct Sig17;

impl serde_json::ser::Formatter for Sig17 {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> std::io::Result<()> {
        writer.write_all(fmt_f64(value).as_bytes())
    }

    fn write_f32<W: ?Sized + Write>(&mut self, writer: &mut W, value: f32) -> std::io::Result<()> {
        self.write_f64(writer, value as f64)
    }
}

/// Compact JSON with 17-significant-digit floats and a trailing newline.
pub fn to_json<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, Sig17);
    value.serialize(&mut ser).map_err(|e| Error::Parse(e.to_string()))?;
    buf.push(b'\n');
    String::from_utf8(buf).map_err(|e| Error::Parse(e.to_string()))
}

fn read_to_string(path: &Path) -> Result<String> {
    if !path.exists() {
        return Err(Error::FileNotFound(path.display().to_string()));
    }
    Ok(fs::read_to_string(path)?)
}

fn parse_err(path: &Path, msg: impl std::fmt::Display) -> Error {
    Error::Parse(format!("{}: {msg}", path.display()))
}

/// Sidecar path `<stem>.meta.json` next to a grid CSV.
pub fn sidecar_path(csv: &Path) -> PathBuf {
    let stem = csv.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    csv.with_file_name(format!("{stem}.meta.json"))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridMeta {
    pub dim: usize,
    pub n_freq: usize,
    pub real_symmetry: bool,
}

pub fn grid_to_csv(spec: &GridSpectrum) -> String {
    let mut out = GRID_HEADER.join(",");
    out.push('\n');
    for (l, v) in spec.values().iter().enumerate() {
        for i in 0..spec.dim() {
            for j in 0..spec.dim() {
                let z = v.get(i, j);
                out.push_str(&format!("{l},{i},{j},{},{}\n", fmt_f64(z.re), fmt_f64(z.im)));
            }
        }
    }
    out
}

/// Writes the CSV and its sidecar; returns the sidecar path.
pub fn write_grid(path: &Path, spec: &GridSpectrum) -> Result<PathBuf> {
    fs::write(path, grid_to_csv(spec))?;
    let meta = GridMeta { dim: spec.dim(), n_freq: spec.n_freq(), real_symmetry: spec.is_real_symmetric() };
    let side = sidecar_path(path);
    fs::write(&side, to_json(&meta)?)?;
    Ok(side)
}

/// Reads a grid CSV; the sidecar, when present, must agree with the data.
pub fn read_grid(path: &Path, policy: &PsdPolicy) -> Result<GridSpectrum> {
    let text = read_to_string(path)?;
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
    let header = reader.headers().map_err(|e| parse_err(path, e))?.clone();
    if header.iter().collect::<Vec<_>>() != GRID_HEADER {
        return Err(parse_err(path, format!("expected header {}", GRID_HEADER.join(","))));
    }
    let mut entries = Vec::new();
    for (line, record) in reader.records().enumerate() {
        let record = record.map_err(|e| parse_err(path, e))?;
        let bad = |what: &str| parse_err(path, format!("row {}: bad {what}", line + 2));
        let idx = |k: usize, what: &str| record[k].parse::<usize>().map_err(|_| bad(what));
        let num = |k: usize, what: &str| record[k].parse::<f64>().map_err(|_| bad(what));
        entries.push((idx(0, "omega_index")?, idx(1, "row")?, idx(2, "col")?, Complex64::new(num(3, "re")?, num(4, "im")?)));
    }
    if entries.is_empty() {
        return Err(parse_err(path, "no grid entries"));
    }
    let n_freq = entries.iter().map(|e| e.0).max().unwrap() + 1;
    let dim = entries.iter().map(|e| e.1.max(e.2)).max().unwrap() + 1;
    if entries.len() != n_freq * dim * dim {
        return Err(parse_err(path, format!("expected {} entries for {n_freq} frequencies of {dim}x{dim}", n_freq * dim * dim)));
    }
    let mut cells: Vec<Option<Complex64>> = vec![None; n_freq * dim * dim];
    for (l, i, j, z) in entries {
        let slot = &mut cells[(l * dim + i) * dim + j];
        if slot.replace(z).is_some() {
            return Err(parse_err(path, format!("duplicate entry ({l},{i},{j})")));
        }
    }
    let side = sidecar_path(path);
    if side.exists() {
        let meta: GridMeta = serde_json::from_str(&fs::read_to_string(&side)?).map_err(|e| parse_err(&side, e))?;
        if meta.dim != dim {
            return Err(Error::DimensionMismatch { left: meta.dim, right: dim });
        }
        if meta.n_freq != n_freq {
            return Err(Error::GridMismatch { left: meta.n_freq, right: n_freq });
        }
    }
    let values = (0..n_freq)
        .map(|l| {
            let rows: Vec<Vec<Complex64>> =
                (0..dim).map(|i| (0..dim).map(|j| cells[(l * dim + i) * dim + j].unwrap()).collect()).collect();
            HermitianMatrix::from_rows(&rows)
        })
        .collect::<Result<Vec<_>>>()?;
    GridSpectrum::new(values, policy)
}

pub fn read_model(path: &Path) -> Result<RationalSpectrum> {
    let text = read_to_string(path)?;
    let file: RationalModelFile = serde_json::from_str(&text).map_err(|e| parse_err(path, e))?;
    RationalSpectrum::from_file(&file)
}

pub fn write_model(path: &Path, model: &RationalSpectrum) -> Result<()> {
    Ok(fs::write(path, to_json(&model.to_file())?)?)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AutocovFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    pub lags: Vec<Vec<Vec<f64>>>,
}

pub fn read_autocov(path: &Path) -> Result<Autocovariance> {
    let text = read_to_string(path)?;
    let file: AutocovFile = serde_json::from_str(&text).map_err(|e| parse_err(path, e))?;
    let acov = Autocovariance::from_rows(&file.lags)?;
    if let Some(dim) = file.dim {
        if dim != acov.dim() {
            return Err(Error::DimensionMismatch { left: dim, right: acov.dim() });
        }
    }
    Ok(acov)
}

pub fn write_autocov(path: &Path, acov: &Autocovariance) -> Result<()> {
    let file = AutocovFile { dim: Some(acov.dim()), lags: acov.to_rows() };
    Ok(fs::write(path, to_json(&file)?)?)
}

/// Reads a time-series CSV; a first line that does not parse as numbers is
/// taken as a header.
pub fn read_series(path: &Path) -> Result<TimeSeries> {
    let text = read_to_string(path)?;
    let mut reader = csv::ReaderBuilder::new().has_headers(false).trim(csv::Trim::All).from_reader(text.as_bytes());
    let mut samples: Vec<Vec<f64>> = Vec::new();
    for (line, record) in reader.records().enumerate() {
        let record = record.map_err(|e| parse_err(path, e))?;
        let parsed: std::result::Result<Vec<f64>, _> = record.iter().map(str::parse::<f64>).collect();
        match parsed {
            Ok(row) => {
                if let Some(first) = samples.first() {
                    if first.len() != row.len() {
                        return Err(parse_err(path, format!("row {} has {} columns, expected {}", line + 1, row.len(), first.len())));
                    }
                }
                samples.push(row);
            }
            Err(_) if line == 0 => continue,
            Err(e) => return Err(parse_err(path, format!("row {}: {e}", line + 1))),
        }
    }
    if samples.is_empty() {
        return Err(parse_err(path, "time series has no samples"));
    }
    TimeSeries::from_samples(&samples)
}

pub fn series_to_csv(ts: &TimeSeries) -> String {
    let mut out = String::new();
    for s in ts.samples() {
        let row: Vec<String> = s.iter().map(|&v| fmt_f64(v)).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

pub fn write_series(path: &Path, ts: &TimeSeries) -> Result<()> {
    Ok(fs::write(path, series_to_csv(ts))?)
}

/// What a file on disk describes.
#[derive(Clone, Debug)]
pub enum Source {
    Model(RationalSpectrum),
    Autocov(Autocovariance),
    Grid(GridSpectrum),
    Series(TimeSeries),
}

impl Source {
    pub fn kind(&self) -> &'static str {
        match self {
            Source::Model(_) => "model",
            Source::Autocov(_) => "autocov",
            Source::Grid(_) => "grid",
            Source::Series(_) => "series",
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Source::Model(m) => m.dim(),
            Source::Autocov(a) => a.dim(),
            Source::Grid(g) => g.dim(),
            Source::Series(s) => s.dim(),
        }
    }
}

/// Detects the format: JSON with `noise_cov` is a model, JSON with `lags`
/// an autocovariance; CSV starting with the grid header is a grid, any other
/// CSV a time series.
pub fn load_source(path: &Path, policy: &PsdPolicy) -> Result<Source> {
    let text = read_to_string(path)?;
    let is_json = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json")) || text.trim_start().starts_with('{');
    if is_json {
        let value: serde_json::Value = serde_json::from_str(&text).map_err(|e| parse_err(path, e))?;
        if value.get("noise_cov").is_some() {
            read_model(path).map(Source::Model)
        } else if value.get("lags").is_some() {
            read_autocov(path).map(Source::Autocov)
        } else {
            Err(parse_err(path, "JSON is neither a rational model (noise_cov) nor an autocovariance (lags)"))
        }
    } else if text.trim_start().starts_with(GRID_HEADER[0]) {
        read_grid(path, policy).map(Source::Grid)
    } else {
        read_series(path).map(Source::Series)
    }
}
