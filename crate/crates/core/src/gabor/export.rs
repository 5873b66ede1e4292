use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{GaborCoefficients, Spectrogram, SpectrogramSlice};
use crate::error::{Error, Result};
use crate::qlct2d::QLCTParams;
use crate::scalar::Real;
use crate::signal::{load, save, write_bytes, Grid2D};

pub const MANIFEST_FORMAT: &str = "qlct-gabor";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SliceEntry {
    pub y_index: [usize; 2],
    pub y: [f64; 2],
    pub file: String,
}

/// Index of a coefficient directory: one QSIG file per translation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GaborManifest {
    pub format: String,
    pub version: u32,
    pub signal_grid: Grid2D<f64>,
    pub omega_grid: Grid2D<f64>,
    pub y_grid: Grid2D<f64>,
    pub stride: usize,
    pub params: QLCTParams<f64>,
    pub window_norm_sq: f64,
    pub slices: Vec<SliceEntry>,
}

fn widen<T: Real>(g: &Grid2D<T>) -> Grid2D<f64> {
    Grid2D { n1: g.n1, n2: g.n2, dx1: g.dx1.as_f64(), dx2: g.dx2.as_f64(), x0_1: g.x0_1.as_f64(), x0_2: g.x0_2.as_f64() }
}

fn narrow<T: Real>(g: &Grid2D<f64>) -> Grid2D<T> {
    Grid2D { n1: g.n1, n2: g.n2, dx1: T::lit(g.dx1), dx2: T::lit(g.dx2), x0_1: T::lit(g.x0_1), x0_2: T::lit(g.x0_2) }
}

/// Writes `manifest.json` and `slice_<y1>_<y2>.qsig` files into `dir`
/// (created if missing). Returns the manifest path.
pub fn write_coefficients<T: Real>(g: &GaborCoefficients<T>, dir: impl AsRef<Path>) -> Result<PathBuf> {
    let dir = dir.as_ref();
    fs::create_dir_all(dir)?;
    let yg = g.y_grid();
    let mut slices = Vec::with_capacity(yg.len());
    for y1 in 0..yg.n1 {
        for y2 in 0..yg.n2 {
            let file = format!("slice_{y1}_{y2}.qsig");
            save(dir.join(&file), &g.slice_signal(y1, y2))?;
            let (a, b) = yg.coord(y1, y2);
            slices.push(SliceEntry { y_index: [y1, y2], y: [a.as_f64(), b.as_f64()], file });
        }
    }
    let p = g.params();
    let widen_p = |l: &crate::lct1d::LCTParams<T>| crate::lct1d::LCTParams {
        a: l.a.as_f64(),
        b: l.b.as_f64(),
        c: l.c.as_f64(),
        d: l.d.as_f64(),
    };
    let manifest = GaborManifest {
        format: MANIFEST_FORMAT.into(),
        version: 1,
        signal_grid: widen(g.signal_grid()),
        omega_grid: widen(g.omega_grid()),
        y_grid: widen(yg),
        stride: g.stride(),
        params: QLCTParams { a1: widen_p(&p.a1), a2: widen_p(&p.a2) },
        window_norm_sq: g.window_norm_sq().as_f64(),
        slices,
    };
    let path = dir.join("manifest.json");
    write_bytes(&path, serde_json::to_string_pretty(&manifest)?.as_bytes())?;
    Ok(path)
}

/// Reads a directory written by [`write_coefficients`].
pub fn read_coefficients<T: Real>(manifest_path: impl AsRef<Path>) -> Result<GaborCoefficients<T>> {
    let path = manifest_path.as_ref();
    let m: GaborManifest = serde_json::from_slice(&fs::read(path)?)?;
    if m.format != MANIFEST_FORMAT || m.version != 1 {
        return Err(Error::InvalidParameter(format!("{}: not a version-1 {MANIFEST_FORMAT} manifest", path.display())));
    }
    let dir = path.parent().unwrap_or(Path::new("."));
    let params = QLCTParams {
        a1: crate::lct1d::LCTParams { a: T::lit(m.params.a1.a), b: T::lit(m.params.a1.b), c: T::lit(m.params.a1.c), d: T::lit(m.params.a1.d) },
        a2: crate::lct1d::LCTParams { a: T::lit(m.params.a2.a), b: T::lit(m.params.a2.b), c: T::lit(m.params.a2.c), d: T::lit(m.params.a2.d) },
    };
    let params = QLCTParams::new(params.a1, params.a2)?;
    let signal_grid: Grid2D<T> = narrow(&m.signal_grid);
    let omega_grid: Grid2D<T> = narrow(&m.omega_grid);
    if m.slices.len() != m.y_grid.len() {
        return Err(Error::GridMismatch(format!("manifest lists {} slices for a {} translation grid", m.slices.len(), m.y_grid.len())));
    }
    let mut ordered: Vec<&SliceEntry> = m.slices.iter().collect();
    ordered.sort_by_key(|e| (e.y_index[0], e.y_index[1]));
    let mut coeffs = Vec::with_capacity(m.y_grid.len() * m.omega_grid.len());
    for (k, e) in ordered.iter().enumerate() {
        if e.y_index != [k / m.y_grid.n2, k % m.y_grid.n2] {
            return Err(Error::GridMismatch(format!("missing or duplicate slice near {:?}", e.y_index)));
        }
        let s = load::<T>(dir.join(&e.file))?;
        s.grid().ensure_same(&omega_grid)?;
        coeffs.extend_from_slice(s.samples());
    }
    GaborCoefficients::from_parts(signal_grid, params, T::lit(m.window_norm_sq), m.stride, coeffs)
}

/// Linear min–max normalization recorded next to a PGM image.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PgmSidecar {
    pub min: f64,
    pub max: f64,
    pub rows: usize,
    pub cols: usize,
    pub slice: SpectrogramSlice,
    pub axes: Grid2D<f64>,
}

/// Writes an 8-bit binary PGM (P5) and `<path>.json` with the normalization.
/// Pixel `v ↦ round(255·(v − min)/(max − min))`; a constant field maps to 0.
pub fn write_spectrogram_pgm(s: &Spectrogram, path: impl AsRef<Path>) -> Result<PathBuf> {
    let path = path.as_ref();
    let (rows, cols) = (s.axes.n1, s.axes.n2);
    let min = s.values.iter().copied().fold(f64::INFINITY, f64::min);
    let max = s.values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let span = max - min;
    let mut bytes = format!("P5\n{cols} {rows}\n255\n").into_bytes();
    bytes.extend(s.values.iter().map(|&v| if span > 0.0 { (255.0 * (v - min) / span).round() as u8 } else { 0 }));
    write_bytes(path, &bytes)?;
    let sidecar = PgmSidecar { min, max, rows, cols, slice: s.slice, axes: s.axes };
    let mut side = path.as_os_str().to_owned();
    side.push(".json");
    let side = PathBuf::from(side);
    write_bytes(&side, serde_json::to_string_pretty(&sidecar)?.as_bytes())?;
    Ok(side)
}

/// CSV with header `c1,c2,value`, one row per cell, row-major.
pub fn write_spectrogram_csv(s: &Spectrogram, path: impl AsRef<Path>) -> Result<()> {
    let mut w = csv::Writer::from_path(path.as_ref()).map_err(|e| Error::Csv { row: 0, msg: e.to_string() })?;
    let wrap = |e: csv::Error| Error::Csv { row: 0, msg: e.to_string() };
    w.write_record(["c1", "c2", "value"]).map_err(wrap)?;
    for k1 in 0..s.axes.n1 {
        for k2 in 0..s.axes.n2 {
            let (a, b) = s.axes.coord(k1, k2);
            w.write_record([format!("{a:e}"), format!("{b:e}"), format!("{:e}", s.get(k1, k2))]).map_err(wrap)?;
        }
    }
    w.flush()?;
    Ok(())
}
