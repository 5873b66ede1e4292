//! Uniformly sampled 2D quaternion signals and midpoint quadrature on them.

mod io;
mod window;

pub(crate) use io::write_bytes;
pub use io::{decode_qsig, encode_qsig, export_csv, import_csv, load, save, QSIG_MAGIC, QSIG_VERSION};
pub use window::{make_window, WindowKind, WindowSpec};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quat::Quaternion;
use crate::scalar::Real;

/// Relative tolerance used when comparing grid geometry.
const GRID_TOL: f64 = 1e-12;

/// One sampled axis: `x_k = x0 + k·dx`, `k = 0..n`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Grid1D<T> {
    pub n: usize,
    pub dx: T,
    pub x0: T,
}

impl<T: Real> Grid1D<T> {
    pub fn new(n: usize, dx: T, x0: T) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidGrid(format!("need at least 2 samples, got {n}")));
        }
        if !(dx > T::zero()) || !dx.is_finite() {
            return Err(Error::InvalidGrid(format!("spacing must be positive and finite, got {dx}")));
        }
        if !x0.is_finite() {
            return Err(Error::InvalidGrid(format!("origin must be finite, got {x0}")));
        }
        Ok(Grid1D { n, dx, x0 })
    }

    /// Grid symmetric about 0 with no sample at the origin: `x0 = −(n/2 − ½)·dx`.
    pub fn centered(n: usize, dx: T) -> Result<Self> {
        Self::new(n, dx, Self::centered_origin(n, dx))
    }

    pub(crate) fn centered_origin(n: usize, dx: T) -> T {
        -(T::lit(n as f64) / T::lit(2.0) - T::lit(0.5)) * dx
    }

    #[inline]
    pub fn coord(&self, k: usize) -> T {
        self.x0 + T::lit(k as f64) * self.dx
    }

    pub fn coords(&self) -> Vec<T> {
        (0..self.n).map(|k| self.coord(k)).collect()
    }

    pub fn is_centered(&self) -> bool {
        let c = Self::centered_origin(self.n, self.dx);
        (self.x0 - c).abs() <= T::lit(1e-9) * self.dx
    }

    pub fn extent(&self) -> T {
        T::lit(self.n as f64) * self.dx
    }

    pub fn approx_eq(&self, other: &Self) -> bool {
        let tol = T::lit(GRID_TOL);
        self.n == other.n
            && (self.dx - other.dx).abs() <= tol * self.dx.abs().max(other.dx.abs())
            && (self.x0 - other.x0).abs() <= tol * (self.dx + self.x0.abs())
    }
}

/// A 2D sampling grid; axis 1 is the outer (row) index.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Grid2D<T> {
    pub n1: usize,
    pub n2: usize,
    pub dx1: T,
    pub dx2: T,
    pub x0_1: T,
    pub x0_2: T,
}

impl<T: Real> Grid2D<T> {
    pub fn new(n1: usize, n2: usize, dx1: T, dx2: T, x0_1: T, x0_2: T) -> Result<Self> {
        Ok(Self::from_axes(Grid1D::new(n1, dx1, x0_1)?, Grid1D::new(n2, dx2, x0_2)?))
    }

    pub fn centered(n1: usize, n2: usize, dx1: T, dx2: T) -> Result<Self> {
        Ok(Self::from_axes(Grid1D::centered(n1, dx1)?, Grid1D::centered(n2, dx2)?))
    }

    /// Square centered grid with equal spacing on both axes.
    pub fn square(n: usize, dx: T) -> Result<Self> {
        Self::centered(n, n, dx, dx)
    }

    pub fn from_axes(a1: Grid1D<T>, a2: Grid1D<T>) -> Self {
        Grid2D { n1: a1.n, n2: a2.n, dx1: a1.dx, dx2: a2.dx, x0_1: a1.x0, x0_2: a2.x0 }
    }

    #[inline]
    pub fn axis1(&self) -> Grid1D<T> {
        Grid1D { n: self.n1, dx: self.dx1, x0: self.x0_1 }
    }

    #[inline]
    pub fn axis2(&self) -> Grid1D<T> {
        Grid1D { n: self.n2, dx: self.dx2, x0: self.x0_2 }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.n1 * self.n2
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    #[inline]
    pub fn cell_area(&self) -> T {
        self.dx1 * self.dx2
    }

    #[inline]
    pub fn index(&self, k1: usize, k2: usize) -> usize {
        k1 * self.n2 + k2
    }

    #[inline]
    pub fn coord(&self, k1: usize, k2: usize) -> (T, T) {
        (self.axis1().coord(k1), self.axis2().coord(k2))
    }

    pub fn is_centered(&self) -> bool {
        self.axis1().is_centered() && self.axis2().is_centered()
    }

    pub fn approx_eq(&self, other: &Self) -> bool {
        self.axis1().approx_eq(&other.axis1()) && self.axis2().approx_eq(&other.axis2())
    }

    pub(crate) fn ensure_same(&self, other: &Self) -> Result<()> {
        if self.approx_eq(other) {
            Ok(())
        } else {
            Err(Error::GridMismatch(format!("{self:?} vs {other:?}")))
        }
    }

    /// Same spacing, `m` extra cells on every side.
    pub fn padded(&self, m: usize) -> Self {
        let mm = T::lit(m as f64);
        Grid2D {
            n1: self.n1 + 2 * m,
            n2: self.n2 + 2 * m,
            dx1: self.dx1,
            dx2: self.dx2,
            x0_1: self.x0_1 - mm * self.dx1,
            x0_2: self.x0_2 - mm * self.dx2,
        }
    }
}

/// Quaternion samples on a [`Grid2D`], row-major with axis 1 outer.
#[derive(Clone, Debug, PartialEq)]
pub struct QSignal2D<T> {
    grid: Grid2D<T>,
    samples: Vec<Quaternion<T>>,
}

impl<T: Real> QSignal2D<T> {
    pub fn new(grid: Grid2D<T>, samples: Vec<Quaternion<T>>) -> Result<Self> {
        if samples.len() != grid.len() {
            return Err(Error::GridMismatch(format!(
                "{} samples for a {}x{} grid",
                samples.len(),
                grid.n1,
                grid.n2
            )));
        }
        Ok(QSignal2D { grid, samples })
    }

    pub(crate) fn from_parts(grid: Grid2D<T>, samples: Vec<Quaternion<T>>) -> Self {
        debug_assert_eq!(grid.len(), samples.len());
        QSignal2D { grid, samples }
    }

    pub fn zeros(grid: Grid2D<T>) -> Self {
        QSignal2D { grid, samples: vec![Quaternion::zero(); grid.len()] }
    }

    /// Evaluates `f` at every grid point in row-major order; rejects non-finite values.
    pub fn sample<F>(grid: Grid2D<T>, mut f: F) -> Result<Self>
    where
        F: FnMut(T, T) -> Quaternion<T>,
    {
        let mut samples = Vec::with_capacity(grid.len());
        for k1 in 0..grid.n1 {
            for k2 in 0..grid.n2 {
                let (x1, x2) = grid.coord(k1, k2);
                let q = f(x1, x2);
                if !q.is_finite() {
                    return Err(Error::NonFiniteSample { x1: x1.as_f64(), x2: x2.as_f64() });
                }
                samples.push(q);
            }
        }
        Ok(QSignal2D { grid, samples })
    }

    #[inline]
    pub fn grid(&self) -> &Grid2D<T> {
        &self.grid
    }

    #[inline]
    pub fn samples(&self) -> &[Quaternion<T>] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<Quaternion<T>> {
        self.samples
    }

    #[inline]
    pub fn get(&self, k1: usize, k2: usize) -> Quaternion<T> {
        self.samples[self.grid.index(k1, k2)]
    }

    pub fn map<F: Fn(Quaternion<T>) -> Quaternion<T>>(&self, f: F) -> Self {
        QSignal2D { grid: self.grid, samples: self.samples.iter().map(|&q| f(q)).collect() }
    }

    pub fn zip_with<F>(&self, other: &Self, f: F) -> Result<Self>
    where
        F: Fn(Quaternion<T>, Quaternion<T>) -> Quaternion<T>,
    {
        self.grid.ensure_same(&other.grid)?;
        let samples = self.samples.iter().zip(&other.samples).map(|(&a, &b)| f(a, b)).collect();
        Ok(QSignal2D { grid: self.grid, samples })
    }

    pub fn scaled(&self, s: T) -> Self {
        self.map(|q| q.scale(s))
    }

    /// Left multiplication by a quaternion constant.
    pub fn left_mul(&self, c: Quaternion<T>) -> Self {
        self.map(|q| c * q)
    }

    /// `Σ|f|²·dx1·dx2`.
    pub fn norm_sqr(&self) -> T {
        self.samples.iter().fold(T::zero(), |acc, q| acc + q.norm_sqr()) * self.grid.cell_area()
    }

    pub fn l2_norm(&self) -> T {
        self.norm_sqr().sqrt()
    }

    /// `(Σ|f|^p·dx1·dx2)^{1/p}`; `p = ∞` gives the max modulus.
    pub fn lp_norm(&self, p: T) -> T {
        if p.is_infinite() {
            return self.samples.iter().fold(T::zero(), |m, q| m.max(q.norm()));
        }
        let s = self.samples.iter().fold(T::zero(), |acc, q| acc + q.norm().powf(p));
        (s * self.grid.cell_area()).powf(T::one() / p)
    }

    pub fn is_finite(&self) -> bool {
        self.samples.iter().all(|q| q.is_finite())
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        self.samples
            .iter()
            .zip(&other.samples)
            .fold(T::zero(), |m, (&a, &b)| m.max(a.max_abs_diff(b)))
    }

    /// `‖self − other‖ / ‖other‖` in the quadrature L² norm.
    pub fn rel_l2_error(&self, reference: &Self) -> T {
        let num = self
            .samples
            .iter()
            .zip(&reference.samples)
            .fold(T::zero(), |acc, (&a, &b)| acc + (a - b).norm_sqr());
        let den = reference.samples.iter().fold(T::zero(), |acc, q| acc + q.norm_sqr());
        if den == T::zero() {
            num.sqrt()
        } else {
            (num / den).sqrt()
        }
    }

    /// Zero-padded shift by whole cells: `out[k] = f[k − m]`.
    pub fn translate_cells(&self, m1: isize, m2: isize) -> Self {
        let g = self.grid;
        let mut out = vec![Quaternion::zero(); g.len()];
        for k1 in 0..g.n1 {
            let s1 = k1 as isize - m1;
            if s1 < 0 || s1 >= g.n1 as isize {
                continue;
            }
            for k2 in 0..g.n2 {
                let s2 = k2 as isize - m2;
                if s2 < 0 || s2 >= g.n2 as isize {
                    continue;
                }
                out[g.index(k1, k2)] = self.samples[g.index(s1 as usize, s2 as usize)];
            }
        }
        QSignal2D { grid: g, samples: out }
    }

    /// `x ↦ f(x − y)` for a grid-aligned `y`, zero outside the grid.
    pub fn translate(&self, y: (T, T)) -> Result<Self> {
        let (m1, m2) = aligned_shift(&self.grid, y)?;
        Ok(self.translate_cells(m1, m2))
    }

    /// Embeds into a grid with `m` extra zero cells on every side.
    pub fn zero_padded(&self, m: usize) -> Self {
        let g = self.grid.padded(m);
        let mut out = vec![Quaternion::zero(); g.len()];
        for k1 in 0..self.grid.n1 {
            for k2 in 0..self.grid.n2 {
                out[g.index(k1 + m, k2 + m)] = self.get(k1, k2);
            }
        }
        QSignal2D { grid: g, samples: out }
    }

    /// Inverse of [`zero_padded`](Self::zero_padded): keeps the interior block.
    pub fn cropped(&self, m: usize) -> Result<Self> {
        let g = self.grid;
        if g.n1 < 2 * m + 2 || g.n2 < 2 * m + 2 {
            return Err(Error::InvalidGrid(format!("cannot crop {m} cells from {}x{}", g.n1, g.n2)));
        }
        let mm = T::lit(m as f64);
        let inner = Grid2D::new(
            g.n1 - 2 * m,
            g.n2 - 2 * m,
            g.dx1,
            g.dx2,
            g.x0_1 + mm * g.dx1,
            g.x0_2 + mm * g.dx2,
        )?;
        let mut out = Vec::with_capacity(inner.len());
        for k1 in 0..inner.n1 {
            for k2 in 0..inner.n2 {
                out.push(self.get(k1 + m, k2 + m));
            }
        }
        Ok(QSignal2D { grid: inner, samples: out })
    }
}

/// Converts a translation vector into whole-cell shifts, rejecting off-grid values.
pub(crate) fn aligned_shift<T: Real>(grid: &Grid2D<T>, y: (T, T)) -> Result<(isize, isize)> {
    let r1 = y.0 / grid.dx1;
    let r2 = y.1 / grid.dx2;
    let (n1, n2) = (r1.round(), r2.round());
    let tol = T::lit(1e-9);
    if !r1.is_finite() || !r2.is_finite() || (r1 - n1).abs() > tol || (r2 - n2).abs() > tol {
        return Err(Error::UnalignedTranslation {
            y1: y.0.as_f64(),
            y2: y.1.as_f64(),
            near1: (n1 * grid.dx1).as_f64(),
            near2: (n2 * grid.dx2).as_f64(),
        });
    }
    Ok((n1.as_f64() as isize, n2.as_f64() as isize))
}

/// `⟨f, g⟩ = Σ f·conj(g)·dx1·dx2`.
pub fn inner_product<T: Real>(f: &QSignal2D<T>, g: &QSignal2D<T>) -> Result<Quaternion<T>> {
    f.grid.ensure_same(&g.grid)?;
    let s: Quaternion<T> = f.samples.iter().zip(&g.samples).map(|(&a, &b)| a * b.conj()).sum();
    Ok(s * f.grid.cell_area())
}
