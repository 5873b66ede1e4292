//! QSIG binary and CSV serialization.
//!
//! QSIG layout (little-endian): `"QSIG"`, u32 version, u32 n1, u32 n2,
//! f64 x0_1, f64 x0_2, f64 dx1, f64 dx2, then n1·n2 records of four f64
//! `(w, x, y, z)` with axis 1 outer.

use std::fs;
use std::io::Write;
use std::path::Path;

use super::{Grid2D, QSignal2D};
use crate::error::{Error, Result};
use crate::quat::Quaternion;
use crate::scalar::Real;

pub const QSIG_MAGIC: &[u8; 4] = b"QSIG";
pub const QSIG_VERSION: u32 = 1;
const HEADER_LEN: usize = 4 + 4 * 3 + 8 * 4;
const RECORD_LEN: usize = 32;

pub fn encode_qsig<T: Real>(signal: &QSignal2D<T>) -> Vec<u8> {
    let g = signal.grid();
    let mut out = Vec::with_capacity(HEADER_LEN + RECORD_LEN * g.len());
    out.extend_from_slice(QSIG_MAGIC);
    out.extend_from_slice(&QSIG_VERSION.to_le_bytes());
    out.extend_from_slice(&(g.n1 as u32).to_le_bytes());
    out.extend_from_slice(&(g.n2 as u32).to_le_bytes());
    for v in [g.x0_1, g.x0_2, g.dx1, g.dx2] {
        out.extend_from_slice(&v.as_f64().to_le_bytes());
    }
    for q in signal.samples() {
        for v in [q.w, q.x, q.y, q.z] {
            out.extend_from_slice(&v.as_f64().to_le_bytes());
        }
    }
    out
}

fn read_u32(b: &[u8], at: usize) -> u32 {
    u32::from_le_bytes(b[at..at + 4].try_into().unwrap())
}

fn read_f64(b: &[u8], at: usize) -> f64 {
    f64::from_le_bytes(b[at..at + 8].try_into().unwrap())
}

/// Decodes a QSIG byte buffer. `origin` only labels the bad-magic diagnostic.
pub fn decode_qsig<T: Real>(bytes: &[u8], origin: &Path) -> Result<QSignal2D<T>> {
    if bytes.len() < 4 || &bytes[..4] != QSIG_MAGIC {
        return Err(Error::BadMagic(origin.to_path_buf()));
    }
    if bytes.len() < HEADER_LEN {
        return Err(Error::Truncated { expected: HEADER_LEN, found: bytes.len() });
    }
    let version = read_u32(bytes, 4);
    if version != QSIG_VERSION {
        return Err(Error::UnsupportedVersion(version));
    }
    let (n1, n2) = (read_u32(bytes, 8) as u64, read_u32(bytes, 12) as u64);
    let expected = n1
        .checked_mul(n2)
        .and_then(|n| n.checked_mul(RECORD_LEN as u64))
        .and_then(|n| n.checked_add(HEADER_LEN as u64))
        .and_then(|n| usize::try_from(n).ok())
        .ok_or(Error::DimensionOverflow { n1, n2 })?;
    if bytes.len() < expected {
        return Err(Error::Truncated { expected, found: bytes.len() });
    }
    let x0_1 = read_f64(bytes, 16);
    let x0_2 = read_f64(bytes, 24);
    let dx1 = read_f64(bytes, 32);
    let dx2 = read_f64(bytes, 40);
    let grid = Grid2D::new(n1 as usize, n2 as usize, T::lit(dx1), T::lit(dx2), T::lit(x0_1), T::lit(x0_2))?;
    let mut samples = Vec::with_capacity(grid.len());
    for r in 0..grid.len() {
        let at = HEADER_LEN + r * RECORD_LEN;
        let v = [read_f64(bytes, at), read_f64(bytes, at + 8), read_f64(bytes, at + 16), read_f64(bytes, at + 24)];
        if v.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFiniteRecord(r));
        }
        samples.push(Quaternion::new(T::lit(v[0]), T::lit(v[1]), T::lit(v[2]), T::lit(v[3])));
    }
    QSignal2D::new(grid, samples)
}

pub fn save<T: Real>(path: impl AsRef<Path>, signal: &QSignal2D<T>) -> Result<()> {
    fs::write(path, encode_qsig(signal))?;
    Ok(())
}

pub fn load<T: Real>(path: impl AsRef<Path>) -> Result<QSignal2D<T>> {
    let path = path.as_ref();
    let bytes = fs::read(path)?;
    decode_qsig(&bytes, path)
}

/// Writes `x1,x2,qw,qx,qy,qz` rows in storage order.
pub fn export_csv<T: Real>(path: impl AsRef<Path>, signal: &QSignal2D<T>) -> Result<()> {
    let mut w = csv::Writer::from_writer(fs::File::create(path)?);
    w.write_record(["x1", "x2", "qw", "qx", "qy", "qz"]).map_err(csv_io)?;
    let g = signal.grid();
    for k1 in 0..g.n1 {
        for k2 in 0..g.n2 {
            let (x1, x2) = g.coord(k1, k2);
            let q = signal.get(k1, k2);
            let row = [x1, x2, q.w, q.x, q.y, q.z].map(|v| v.as_f64().to_string());
            w.write_record(&row).map_err(csv_io)?;
        }
    }
    w.flush()?;
    Ok(())
}

fn csv_io(e: csv::Error) -> Error {
    Error::Io(std::io::Error::other(e))
}

/// Reads a CSV written in the `x1,x2,qw,qx,qy,qz` layout and infers the grid.
pub fn import_csv<T: Real>(path: impl AsRef<Path>) -> Result<QSignal2D<T>> {
    let mut reader = csv::ReaderBuilder::new().has_headers(true).flexible(true).from_path(path.as_ref()).map_err(csv_io)?;
    let header = reader.headers().map_err(csv_io)?.clone();
    let want = ["x1", "x2", "qw", "qx", "qy", "qz"];
    if header.len() != 6 || header.iter().zip(want).any(|(a, b)| a.trim() != b) {
        return Err(Error::Csv { row: 1, msg: format!("expected header {}", want.join(",")) });
    }
    let mut rows: Vec<[f64; 6]> = Vec::new();
    for (i, rec) in reader.records().enumerate() {
        // header is row 1
        let row = i + 2;
        let rec = rec.map_err(|e| Error::Csv { row, msg: e.to_string() })?;
        if rec.len() != 6 {
            return Err(Error::Csv { row, msg: format!("expected 6 columns, found {}", rec.len()) });
        }
        let mut vals = [0.0f64; 6];
        for (c, field) in rec.iter().enumerate() {
            vals[c] = field
                .trim()
                .parse()
                .map_err(|_| Error::Csv { row, msg: format!("column {} is not a number: '{field}'", want[c]) })?;
            if !vals[c].is_finite() {
                return Err(Error::Csv { row, msg: format!("non-finite value in column {}", want[c]) });
            }
        }
        rows.push(vals);
    }
    if rows.len() < 4 {
        return Err(Error::Csv { row: rows.len() + 1, msg: "need at least a 2x2 grid".into() });
    }
    let n2 = rows.iter().take_while(|r| r[0] == rows[0][0]).count();
    if n2 < 2 || !rows.len().is_multiple_of(n2) {
        return Err(Error::Csv { row: n2 + 2, msg: "rows do not form a rectangular grid".into() });
    }
    let n1 = rows.len() / n2;
    let x0_1 = rows[0][0];
    let x0_2 = rows[0][1];
    let dx1 = (rows[(n1 - 1) * n2][0] - x0_1) / (n1 - 1) as f64;
    let dx2 = (rows[n2 - 1][1] - x0_2) / (n2 - 1) as f64;
    let grid = Grid2D::new(n1, n2, T::lit(dx1), T::lit(dx2), T::lit(x0_1), T::lit(x0_2))
        .map_err(|e| Error::Csv { row: 2, msg: e.to_string() })?;
    let mut samples = Vec::with_capacity(rows.len());
    for (i, r) in rows.iter().enumerate() {
        let (k1, k2) = (i / n2, i % n2);
        let (e1, e2) = (x0_1 + k1 as f64 * dx1, x0_2 + k2 as f64 * dx2);
        if (r[0] - e1).abs() > 1e-9 * dx1.max(e1.abs()) || (r[1] - e2).abs() > 1e-9 * dx2.max(e2.abs()) {
            return Err(Error::Csv { row: i + 2, msg: format!("non-uniform grid: ({}, {}) expected ({e1}, {e2})", r[0], r[1]) });
        }
        samples.push(Quaternion::new(T::lit(r[2]), T::lit(r[3]), T::lit(r[4]), T::lit(r[5])));
    }
    QSignal2D::new(grid, samples)
}

/// Writes `bytes` atomically enough for CLI use (create + write + flush).
pub(crate) fn write_bytes(path: &Path, bytes: &[u8]) -> Result<()> {
    let mut f = fs::File::create(path)?;
    f.write_all(bytes)?;
    f.flush()?;
    Ok(())
}
