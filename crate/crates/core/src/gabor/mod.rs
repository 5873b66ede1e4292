//! Windowed (Gabor) two-sided QLCT.
//!
//! `G(ω, y) = L{ x ↦ f(x)·conj(φ(x − y)) }(ω)` for translations `y` on a
//! grid of whole-cell shifts.

mod export;

pub use export::{
    read_coefficients, write_coefficients, write_spectrogram_csv, write_spectrogram_pgm, GaborManifest, PgmSidecar,
    SliceEntry,
};

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qlct2d::{conjugate_grid, qlct_forward, Method, QLCTParams, QlctOperator};
use crate::quat::Quaternion;
use crate::scalar::Real;
use crate::signal::{aligned_shift, Grid1D, Grid2D, QSignal2D};
use crate::uncertainty::{Direction, InequalityReport};

/// Largest `n1·n2` analysed at stride 1 without `allow_large`.
pub const FULL_STORAGE_LIMIT: usize = 32 * 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AnalyzeOptions {
    pub stride: usize,
    pub method: Method,
    /// Lifts the stride-1 memory budget.
    pub allow_large: bool,
}

impl Default for AnalyzeOptions {
    fn default() -> Self {
        AnalyzeOptions { stride: 1, method: Method::Fast, allow_large: false }
    }
}

impl AnalyzeOptions {
    pub fn stride(stride: usize) -> Self {
        AnalyzeOptions { stride, ..Self::default() }
    }
}

/// Cell shift of translation index `m`: `m·stride − ⌊n/2⌋`.
#[inline]
fn shift_cells(n: usize, stride: usize, m: usize) -> isize {
    (m * stride) as isize - (n / 2) as isize
}

/// Translation grid of a signal grid: `y_m = (m·stride − ⌊n/2⌋)·dx`,
/// `m = 0..⌈n/stride⌉`, per axis. Always contains `y = 0`.
pub fn translation_grid<T: Real>(signal: &Grid2D<T>, stride: usize) -> Result<Grid2D<T>> {
    if stride == 0 {
        return Err(Error::InvalidParameter("stride must be positive".into()));
    }
    let axis = |n: usize, dx: T| {
        let s = T::lit(stride as f64);
        Grid1D::new(n.div_ceil(stride), s * dx, -T::lit((n / 2) as f64) * dx)
    };
    Ok(Grid2D::from_axes(axis(signal.n1, signal.dx1)?, axis(signal.n2, signal.dx2)?))
}

/// Full coefficient array, stored as one ω-slice per translation
/// (`[y1][y2][ω1][ω2]`, row-major).
#[derive(Clone, Debug, PartialEq)]
pub struct GaborCoefficients<T> {
    signal_grid: Grid2D<T>,
    omega_grid: Grid2D<T>,
    y_grid: Grid2D<T>,
    params: QLCTParams<T>,
    window_norm_sq: T,
    stride: usize,
    coeffs: Vec<Quaternion<T>>,
}

impl<T: Real> GaborCoefficients<T> {
    pub(crate) fn from_parts(
        signal_grid: Grid2D<T>,
        params: QLCTParams<T>,
        window_norm_sq: T,
        stride: usize,
        coeffs: Vec<Quaternion<T>>,
    ) -> Result<Self> {
        let omega_grid = conjugate_grid(&params, &signal_grid)?;
        let y_grid = translation_grid(&signal_grid, stride)?;
        if coeffs.len() != omega_grid.len() * y_grid.len() {
            return Err(Error::GridMismatch(format!(
                "{} coefficients for {} slices of {} frequencies",
                coeffs.len(),
                y_grid.len(),
                omega_grid.len()
            )));
        }
        Ok(GaborCoefficients { signal_grid, omega_grid, y_grid, params, window_norm_sq, stride, coeffs })
    }

    pub fn signal_grid(&self) -> &Grid2D<T> {
        &self.signal_grid
    }

    pub fn omega_grid(&self) -> &Grid2D<T> {
        &self.omega_grid
    }

    pub fn y_grid(&self) -> &Grid2D<T> {
        &self.y_grid
    }

    pub fn params(&self) -> &QLCTParams<T> {
        &self.params
    }

    pub fn window_norm_sq(&self) -> T {
        self.window_norm_sq
    }

    pub fn stride(&self) -> usize {
        self.stride
    }

    pub fn coeffs(&self) -> &[Quaternion<T>] {
        &self.coeffs
    }

    /// `dω1·dω2·dy1·dy2`.
    pub fn cell_volume(&self) -> T {
        self.omega_grid.cell_area() * self.y_grid.cell_area()
    }

    /// Flat index of `(ω1, ω2, y1, y2)`.
    #[inline]
    pub fn index(&self, w1: usize, w2: usize, y1: usize, y2: usize) -> usize {
        (y1 * self.y_grid.n2 + y2) * self.omega_grid.len() + w1 * self.omega_grid.n2 + w2
    }

    #[inline]
    pub fn get(&self, w1: usize, w2: usize, y1: usize, y2: usize) -> Quaternion<T> {
        self.coeffs[self.index(w1, w2, y1, y2)]
    }

    /// `(ω1, ω2, y1, y2)` of a flat index.
    pub fn unflatten(&self, idx: usize) -> (usize, usize, usize, usize) {
        let len = self.omega_grid.len();
        let (y, w) = (idx / len, idx % len);
        (w / self.omega_grid.n2, w % self.omega_grid.n2, y / self.y_grid.n2, y % self.y_grid.n2)
    }

    pub fn slice(&self, y1: usize, y2: usize) -> &[Quaternion<T>] {
        let len = self.omega_grid.len();
        let start = (y1 * self.y_grid.n2 + y2) * len;
        &self.coeffs[start..start + len]
    }

    pub fn slice_signal(&self, y1: usize, y2: usize) -> QSignal2D<T> {
        QSignal2D::from_parts(self.omega_grid, self.slice(y1, y2).to_vec())
    }

    /// `ΣΣ |G|²·dω·dy`.
    pub fn energy(&self) -> T {
        let s: T = self.coeffs.iter().fold(T::zero(), |acc, q| acc + q.norm_sqr());
        s * self.cell_volume()
    }

    pub fn scaled(&self, alpha: T) -> Self {
        let mut out = self.clone();
        out.coeffs.iter_mut().for_each(|q| *q *= alpha);
        out
    }

    pub fn map<F: Fn(Quaternion<T>) -> Quaternion<T>>(&self, f: F) -> Self {
        let mut out = self.clone();
        out.coeffs.iter_mut().for_each(|q| *q = f(*q));
        out
    }
}

/// `x ↦ f(x)·conj(φ(x − y))` for a whole-cell shift.
fn windowed_product<T: Real>(f: &QSignal2D<T>, phi: &QSignal2D<T>, m1: isize, m2: isize) -> Vec<Quaternion<T>> {
    let shifted = phi.translate_cells(m1, m2);
    f.samples().iter().zip(shifted.samples()).map(|(&a, &b)| a * b.conj()).collect()
}

/// ω-slice of the Gabor field at one grid-aligned translation `y`.
pub fn gabor_analyze_at<T: Real>(
    f: &QSignal2D<T>,
    phi: &QSignal2D<T>,
    y: (T, T),
    p: &QLCTParams<T>,
    method: Method,
) -> Result<QSignal2D<T>> {
    f.grid().ensure_same(phi.grid())?;
    let (m1, m2) = aligned_shift(f.grid(), y)?;
    let prod = QSignal2D::from_parts(*f.grid(), windowed_product(f, phi, m1, m2));
    qlct_forward(&prod, p, method)
}

/// One computed slice handed to a [`fold_slices`] callback.
pub struct SliceView<'a, T> {
    pub y_index: (usize, usize),
    pub y: (T, T),
    pub omega_grid: &'a Grid2D<T>,
    pub coeffs: &'a [Quaternion<T>],
}

/// Computes every slice on the (strided) translation grid in parallel and
/// reduces each with `op` without storing the field. Results are returned in
/// `(y1, y2)` row-major order regardless of scheduling.
pub fn fold_slices<T, R, F>(
    f: &QSignal2D<T>,
    phi: &QSignal2D<T>,
    p: &QLCTParams<T>,
    stride: usize,
    method: Method,
    op: F,
) -> Result<Vec<R>>
where
    T: Real,
    R: Send,
    F: Fn(SliceView<'_, T>) -> R + Sync,
{
    let grid = *f.grid();
    grid.ensure_same(phi.grid())?;
    let y_grid = translation_grid(&grid, stride)?;
    let operator = QlctOperator::forward(p, &grid, method)?;
    let omega_grid = *operator.output_grid();
    Ok((0..y_grid.len())
        .into_par_iter()
        .map(|idx| {
            let (y1, y2) = (idx / y_grid.n2, idx % y_grid.n2);
            let (m1, m2) = (shift_cells(grid.n1, stride, y1), shift_cells(grid.n2, stride, y2));
            let coeffs = operator.apply_samples(&windowed_product(f, phi, m1, m2));
            op(SliceView { y_index: (y1, y2), y: y_grid.coord(y1, y2), omega_grid: &omega_grid, coeffs: &coeffs })
        })
        .collect())
}

/// Full Gabor field on the translation grid selected by `opts.stride`.
pub fn gabor_analyze<T: Real>(
    f: &QSignal2D<T>,
    phi: &QSignal2D<T>,
    p: &QLCTParams<T>,
    opts: AnalyzeOptions,
) -> Result<GaborCoefficients<T>> {
    let g = f.grid();
    if opts.stride == 1 && g.len() > FULL_STORAGE_LIMIT && !opts.allow_large {
        return Err(Error::MemoryBudget { n1: g.n1, n2: g.n2 });
    }
    let slices = fold_slices(f, phi, p, opts.stride, opts.method, |v| v.coeffs.to_vec())?;
    GaborCoefficients::from_parts(*g, *p, phi.norm_sqr(), opts.stride, slices.concat())
}

/// Reconstructs `f` from a stride-1 field and the window used to compute it:
/// `f = ‖φ‖⁻²·Σ_y L⁻¹{G(·, y)}·φ(· − y)·dy`.
pub fn gabor_synthesize<T: Real>(g: &GaborCoefficients<T>, phi: &QSignal2D<T>, method: Method) -> Result<QSignal2D<T>> {
    if g.stride != 1 {
        return Err(Error::InvalidParameter(format!("synthesis needs stride 1 coefficients, got stride {}", g.stride)));
    }
    let grid = g.signal_grid;
    grid.ensure_same(phi.grid())?;
    let norm_sq = phi.norm_sqr();
    if (norm_sq - g.window_norm_sq).abs() > T::lit(1e-12) * T::one().max(g.window_norm_sq) {
        return Err(Error::InvalidWindow(format!(
            "window norm² {} does not match the analysis window ({})",
            norm_sq, g.window_norm_sq
        )));
    }
    let inverse = QlctOperator::inverse(&g.params, &grid, method)?;
    let y_grid = g.y_grid;
    let partials: Vec<Vec<Quaternion<T>>> = (0..y_grid.n1)
        .into_par_iter()
        .map(|y1| {
            let mut acc = vec![Quaternion::zero(); grid.len()];
            for y2 in 0..y_grid.n2 {
                let local = inverse.apply_samples(g.slice(y1, y2));
                let shifted = phi.translate_cells(shift_cells(grid.n1, 1, y1), shift_cells(grid.n2, 1, y2));
                for ((a, &l), &w) in acc.iter_mut().zip(&local).zip(shifted.samples()) {
                    *a += l * w;
                }
            }
            acc
        })
        .collect();
    let mut sum = vec![Quaternion::zero(); grid.len()];
    for part in &partials {
        for (s, &v) in sum.iter_mut().zip(part) {
            *s += v;
        }
    }
    let scale = y_grid.cell_area() / norm_sq;
    Ok(QSignal2D::from_parts(grid, sum.into_iter().map(|q| q * scale).collect()))
}

/// `ΣΣ|G|²dω dy` against `‖f‖²‖φ‖²`, streamed slice by slice at stride 1.
pub fn gabor_plancherel_check<T: Real>(
    f: &QSignal2D<T>,
    phi: &QSignal2D<T>,
    p: &QLCTParams<T>,
) -> Result<InequalityReport> {
    let energies = fold_slices(f, phi, p, 1, Method::Fast, |v| slice_energy(v.coeffs))?;
    let y_grid = translation_grid(f.grid(), 1)?;
    let cell = conjugate_grid(p, f.grid())?.cell_area() * y_grid.cell_area();
    let lhs = energies.iter().fold(T::zero(), |a, &e| a + e) * cell;
    let rhs = f.norm_sqr() * phi.norm_sqr();
    Ok(InequalityReport::new("gabor-plancherel", Direction::Equal, lhs.as_f64(), rhs.as_f64())
        .with_param("A1", p.a1.to_array().to_vec())
        .with_param("A2", p.a2.to_array().to_vec())
        .with_grid(f.grid()))
}

pub(crate) fn slice_energy<T: Real>(s: &[Quaternion<T>]) -> T {
    s.iter().fold(T::zero(), |acc, q| acc + q.norm_sqr())
}

/// Which 2D cut of `|G|²` to extract.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpectrogramSlice {
    /// `|G(·, ·, y1, y2)|²` over ω.
    FixY(usize, usize),
    /// `|G(ω1, ω2, ·, ·)|²` over y.
    FixOmega(usize, usize),
    /// `max_y |G|²` over ω.
    MaxOverY,
    /// `max_ω |G|²` over y.
    MaxOverOmega,
}

impl FromStr for SpectrogramSlice {
    type Err = Error;

    /// `fix_y:i,j`, `fix_omega:i,j`, `max_over_y` or `max_over_omega`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidParameter(format!("bad spectrogram slice '{s}'"));
        let pair = |rest: &str| -> Result<(usize, usize)> {
            let (a, b) = rest.split_once(',').ok_or_else(bad)?;
            Ok((a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?))
        };
        match s.split_once(':') {
            Some(("fix_y", rest)) => pair(rest).map(|(a, b)| SpectrogramSlice::FixY(a, b)),
            Some(("fix_omega", rest)) => pair(rest).map(|(a, b)| SpectrogramSlice::FixOmega(a, b)),
            None if s == "max_over_y" => Ok(SpectrogramSlice::MaxOverY),
            None if s == "max_over_omega" => Ok(SpectrogramSlice::MaxOverOmega),
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for SpectrogramSlice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpectrogramSlice::FixY(a, b) => write!(f, "fix_y:{a},{b}"),
            SpectrogramSlice::FixOmega(a, b) => write!(f, "fix_omega:{a},{b}"),
            SpectrogramSlice::MaxOverY => f.write_str("max_over_y"),
            SpectrogramSlice::MaxOverOmega => f.write_str("max_over_omega"),
        }
    }
}

/// Nonnegative 2D field with the grid of its two axes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Spectrogram {
    pub slice: SpectrogramSlice,
    pub axes: Grid2D<f64>,
    /// Row-major, `axes.n1 × axes.n2`.
    pub values: Vec<f64>,
}

impl Spectrogram {
    pub fn get(&self, k1: usize, k2: usize) -> f64 {
        self.values[k1 * self.axes.n2 + k2]
    }

    /// Row-major index and value of the largest entry (first on ties).
    pub fn argmax(&self) -> (usize, f64) {
        self.values
            .iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |(i, m), (k, &v)| if v > m { (k, v) } else { (i, m) })
    }
}

fn widen<T: Real>(g: &Grid2D<T>) -> Grid2D<f64> {
    Grid2D { n1: g.n1, n2: g.n2, dx1: g.dx1.as_f64(), dx2: g.dx2.as_f64(), x0_1: g.x0_1.as_f64(), x0_2: g.x0_2.as_f64() }
}

pub fn spectrogram<T: Real>(g: &GaborCoefficients<T>, slice: SpectrogramSlice) -> Result<Spectrogram> {
    let (wg, yg) = (g.omega_grid, g.y_grid);
    let out_of_range = |what: &str, a: usize, b: usize, n1: usize, n2: usize| {
        Error::OutOfRange(format!("{what} index ({a}, {b}) outside {n1}x{n2}"))
    };
    let (axes, values) = match slice {
        SpectrogramSlice::FixY(a, b) => {
            if a >= yg.n1 || b >= yg.n2 {
                return Err(out_of_range("translation", a, b, yg.n1, yg.n2));
            }
            (widen(&wg), g.slice(a, b).iter().map(|q| q.norm_sqr().as_f64()).collect())
        }
        SpectrogramSlice::FixOmega(a, b) => {
            if a >= wg.n1 || b >= wg.n2 {
                return Err(out_of_range("frequency", a, b, wg.n1, wg.n2));
            }
            let v = (0..yg.n1)
                .flat_map(|y1| (0..yg.n2).map(move |y2| (y1, y2)))
                .map(|(y1, y2)| g.get(a, b, y1, y2).norm_sqr().as_f64())
                .collect();
            (widen(&yg), v)
        }
        SpectrogramSlice::MaxOverY => {
            let mut v = vec![0.0f64; wg.len()];
            for y in 0..yg.len() {
                for (m, q) in v.iter_mut().zip(g.slice(y / yg.n2, y % yg.n2)) {
                    *m = m.max(q.norm_sqr().as_f64());
                }
            }
            (widen(&wg), v)
        }
        SpectrogramSlice::MaxOverOmega => {
            let v = (0..yg.len())
                .map(|y| g.slice(y / yg.n2, y % yg.n2).iter().fold(0.0f64, |m, q| m.max(q.norm_sqr().as_f64())))
                .collect();
            (widen(&yg), v)
        }
    };
    Ok(Spectrogram { slice, axes, values })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lct1d::LCTParams;
    use crate::signal::{make_window, WindowSpec};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::TAU;

    type Q = Quaternion<f64>;

    fn gauss(grid: Grid2D<f64>, s: f64) -> QSignal2D<f64> {
        QSignal2D::sample(grid, |a, b| Q::from_real((-(a * a + b * b) / (2.0 * s * s)).exp())).unwrap()
    }

    fn quat_gauss(grid: Grid2D<f64>) -> QSignal2D<f64> {
        QSignal2D::sample(grid, |a, b| Q::new(1.0, 0.3 * a, -0.2 * b, 0.1).scale((-(a * a + b * b) / 2.0).exp())).unwrap()
    }

    fn suite_grid(n: usize) -> Grid2D<f64> {
        Grid2D::square(n, (TAU / n as f64).sqrt()).unwrap()
    }

    #[test]
    fn translation_grid_layout() {
        let g = Grid2D::square(16, 0.5).unwrap();
        let y = translation_grid(&g, 1).unwrap();
        assert_eq!((y.n1, y.dx1, y.x0_1), (16, 0.5, -4.0));
        assert_eq!(y.coord(8, 8), (0.0, 0.0));
        let y3 = translation_grid(&g, 3).unwrap();
        assert_eq!((y3.n1, y3.dx1), (6, 1.5));
        assert!(translation_grid(&g, 0).is_err());
    }

    #[test]
    fn flat_window_at_zero_is_plain_transform() {
        let grid = Grid2D::square(8, 0.5).unwrap();
        let f = quat_gauss(grid);
        let one = QSignal2D::sample(grid, |_, _| Q::one()).unwrap();
        let p = QLCTParams::new(LCTParams::new(1.0, 2.0, 0.5, 2.0).unwrap(), LCTParams::fourier()).unwrap();
        let at = gabor_analyze_at(&f, &one, (0.0, 0.0), &p, Method::Fast).unwrap();
        assert!(at.max_abs_diff(&qlct_forward(&f, &p, Method::Fast).unwrap()) == 0.0);
        let z = gabor_analyze_at(&QSignal2D::zeros(grid), &one, (0.5, -1.0), &p, Method::Direct).unwrap();
        assert!(z.samples().iter().all(|q| *q == Q::zero()));
    }

    #[test]
    fn off_grid_translation_rejected() {
        let grid = Grid2D::square(8, 0.5).unwrap();
        let f = quat_gauss(grid);
        let e = gabor_analyze_at(&f, &f, (0.3, 0.0), &QLCTParams::fourier(), Method::Fast).unwrap_err();
        assert!(matches!(e, Error::UnalignedTranslation { .. }));
    }

    #[test]
    fn analyze_at_matches_defining_sum() {
        // literal sum of K^i(x1,ω1)·f(x)·conj(φ(x−y))·K^j(x2,ω2), window evaluated analytically
        let grid = Grid2D::square(10, 0.6).unwrap();
        let f = quat_gauss(grid);
        let spec = WindowSpec::gaussian(1.2, 0.9);
        let phi = make_window(&spec, &grid).unwrap();
        let p = QLCTParams::new(LCTParams::new(0.5, -1.5, 0.4, 0.8).unwrap(), LCTParams::fourier()).unwrap();
        let y = (1.2, -0.6);
        let got = gabor_analyze_at(&f, &phi, y, &p, Method::Fast).unwrap();
        let out = conjugate_grid(&p, &grid).unwrap();
        use crate::lct1d::{kernel_value, KernelSign};
        for u1 in 0..10 {
            for u2 in 0..10 {
                let (w1, w2) = out.coord(u1, u2);
                let mut acc = Q::zero();
                for k1 in 0..10 {
                    for k2 in 0..10 {
                        let (x1, x2) = grid.coord(k1, k2);
                        let (s1, s2) = (x1 - y.0, x2 - y.1);
                        let top = |x0: f64| x0 + 9.0 * 0.6 + 1e-9;
                        let inside = s1 >= grid.x0_1 - 1e-9 && s2 >= grid.x0_2 - 1e-9 && s1 <= top(grid.x0_1) && s2 <= top(grid.x0_2);
                        let w = if inside { spec.value(s1, s2) } else { 0.0 };
                        let ki = Q::from_i_complex(kernel_value(&p.a1, KernelSign::Plus, x1, w1));
                        let kj = Q::from_j_complex(kernel_value(&p.a2, KernelSign::Plus, x2, w2));
                        acc += ki * (f.get(k1, k2) * Q::from_real(w).conj()) * kj;
                    }
                }
                assert!(got.get(u1, u2).max_abs_diff(acc * grid.cell_area()) <= 1e-9);
            }
        }
    }

    #[test]
    fn slices_match_single_translation_analysis() {
        let grid = Grid2D::square(8, 0.5).unwrap();
        let f = quat_gauss(grid);
        let phi = make_window(&WindowSpec::gaussian(0.8, 0.8), &grid).unwrap();
        let p = QLCTParams::fourier();
        let full = gabor_analyze(&f, &phi, &p, AnalyzeOptions::default()).unwrap();
        assert_eq!(full.coeffs().len(), 8usize.pow(4));
        for y1 in 0..8 {
            for y2 in 0..8 {
                let y = full.y_grid().coord(y1, y2);
                let at = gabor_analyze_at(&f, &phi, y, &p, Method::Direct).unwrap();
                assert!(full.slice_signal(y1, y2).max_abs_diff(&at) <= 1e-9);
            }
        }
        let strided = gabor_analyze(&f, &phi, &p, AnalyzeOptions::stride(2)).unwrap();
        assert_eq!(strided.y_grid().n1, 4);
        for y1 in 0..4 {
            for y2 in 0..4 {
                assert_eq!(strided.slice(y1, y2), full.slice(2 * y1, 2 * y2));
            }
        }
        let idx = full.index(3, 5, 6, 1);
        assert_eq!(full.unflatten(idx), (3, 5, 6, 1));
    }

    #[test]
    fn memory_budget_is_explicit() {
        let grid = Grid2D::square(40, 0.3).unwrap();
        let f = gauss(grid, 1.0);
        let e = gabor_analyze(&f, &f, &QLCTParams::fourier(), AnalyzeOptions::default()).unwrap_err();
        assert!(matches!(e, Error::MemoryBudget { n1: 40, n2: 40 }));
        assert!(gabor_analyze(&f, &f, &QLCTParams::fourier(), AnalyzeOptions::stride(4)).is_ok());
    }

    #[test]
    fn gaussian_field_peaks_at_origin() {
        let grid = suite_grid(16);
        let f = gauss(grid, 1.0);
        let full = gabor_analyze(&f, &f, &QLCTParams::fourier(), AnalyzeOptions::default()).unwrap();
        let (idx, _) = full
            .coeffs()
            .iter()
            .enumerate()
            .fold((0, -1.0), |(i, m), (k, q)| if q.norm_sqr() > m { (k, q.norm_sqr()) } else { (i, m) });
        let (w1, w2, y1, y2) = full.unflatten(idx);
        let (a, b) = full.omega_grid().coord(w1, w2);
        assert!(a.abs() < full.omega_grid().dx1 && b.abs() < full.omega_grid().dx2);
        assert_eq!(full.y_grid().coord(y1, y2), (0.0, 0.0));
        // decreasing away from the peak along a y axis and an ω axis
        for k in 8..15 {
            assert!(full.get(w1, w2, k + 1, 8).norm() < full.get(w1, w2, k, 8).norm());
        }
        for k in w1..15 {
            assert!(full.get(k + 1, w2, 8, 8).norm() < full.get(k, w2, 8, 8).norm());
        }
    }

    #[test]
    fn plancherel_ratio() {
        let grid = suite_grid(32);
        let f = quat_gauss(grid);
        let phi = gauss(grid, 1.0);
        let r = gabor_plancherel_check(&f, &phi, &QLCTParams::fourier()).unwrap();
        assert!((0.98..=1.02).contains(&r.ratio), "{}", r.ratio);
        let z = gabor_plancherel_check(&QSignal2D::zeros(grid), &phi, &QLCTParams::fourier()).unwrap();
        assert_eq!((z.lhs, z.rhs, z.ratio), (0.0, 0.0, 1.0));
        let mut cell = vec![Q::zero(); grid.len()];
        cell[grid.index(16, 16)] = Q::one();
        let tiny = QSignal2D::new(grid, cell).unwrap();
        let r = gabor_plancherel_check(&f, &tiny, &QLCTParams::fourier()).unwrap();
        assert!((r.ratio - 1.0).abs() <= 5e-2);
    }

    #[test]
    fn synthesis_round_trip_and_linearity() {
        let grid = suite_grid(16);
        let f = quat_gauss(grid);
        let phi = gauss(grid, 1.0);
        let p = QLCTParams::new(LCTParams::new(1.0, 2.0, 0.5, 2.0).unwrap(), LCTParams::fourier()).unwrap();
        let g = gabor_analyze(&f, &phi, &p, AnalyzeOptions::default()).unwrap();
        let back = gabor_synthesize(&g, &phi, Method::Fast).unwrap();
        assert!(back.rel_l2_error(&f) <= 1e-2, "{}", back.rel_l2_error(&f));
        let twice = gabor_synthesize(&g.scaled(-2.5), &phi, Method::Fast).unwrap();
        assert!(twice.max_abs_diff(&back.scaled(-2.5)) <= 1e-12);
        let zero = gabor_synthesize(&g.scaled(0.0), &phi, Method::Fast).unwrap();
        assert!(zero.samples().iter().all(|q| *q == Q::zero()));
    }

    #[test]
    fn synthesis_rejects_bad_inputs() {
        let grid = Grid2D::square(8, 0.5).unwrap();
        let f = quat_gauss(grid);
        let phi = gauss(grid, 1.0);
        let p = QLCTParams::fourier();
        let g2 = gabor_analyze(&f, &phi, &p, AnalyzeOptions::stride(2)).unwrap();
        assert!(matches!(gabor_synthesize(&g2, &phi, Method::Fast), Err(Error::InvalidParameter(_))));
        let g = gabor_analyze(&f, &phi, &p, AnalyzeOptions::default()).unwrap();
        assert!(matches!(gabor_synthesize(&g, &phi.scaled(1.001), Method::Fast), Err(Error::InvalidWindow(_))));
    }

    #[test]
    fn spectrogram_cuts() {
        let grid = Grid2D::square(8, 0.5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let f = QSignal2D::sample(grid, |_, _| Q::new(rng.random(), rng.random(), rng.random(), rng.random())).unwrap();
        let one = QSignal2D::sample(grid, |_, _| Q::one()).unwrap();
        let p = QLCTParams::fourier();
        let g = gabor_analyze(&f, &one, &p, AnalyzeOptions::default()).unwrap();
        let plain = qlct_forward(&f, &p, Method::Fast).unwrap();
        // y = 0 is index (4, 4)
        let s = spectrogram(&g, SpectrogramSlice::FixY(4, 4)).unwrap();
        for (v, q) in s.values.iter().zip(plain.samples()) {
            assert_eq!(*v, q.norm_sqr());
        }
        for slice in [SpectrogramSlice::FixOmega(1, 2), SpectrogramSlice::MaxOverY, SpectrogramSlice::MaxOverOmega] {
            assert!(spectrogram(&g, slice).unwrap().values.iter().all(|v| *v >= 0.0));
        }
        assert!(matches!(spectrogram(&g, SpectrogramSlice::FixY(8, 0)), Err(Error::OutOfRange(_))));
        assert!(matches!(spectrogram(&g, SpectrogramSlice::FixOmega(0, 9)), Err(Error::OutOfRange(_))));
        for s in ["fix_y:1,2", "fix_omega:0,3", "max_over_y", "max_over_omega"] {
            assert_eq!(s.parse::<SpectrogramSlice>().unwrap().to_string(), s);
        }
        assert!("fix_y:1".parse::<SpectrogramSlice>().is_err());
    }

    #[test]
    fn shifted_impulse_peaks_at_its_translation_cell() {
        let grid = Grid2D::square(8, 0.5).unwrap();
        let mut s = vec![Q::zero(); 64];
        s[grid.index(5, 2)] = Q::one();
        let f = QSignal2D::new(grid, s).unwrap();
        // window centred on a sample so the maximiser is unique
        let phi = make_window(&WindowSpec::gaussian(0.6, 0.6).centered_at(0.25, 0.25), &grid).unwrap();
        let g = gabor_analyze(&f, &phi, &QLCTParams::fourier(), AnalyzeOptions::default()).unwrap();
        let spec = spectrogram(&g, SpectrogramSlice::MaxOverOmega).unwrap();
        let (idx, _) = spec.argmax();
        let (y1, y2) = g.y_grid().coord(idx / 8, idx % 8);
        let (x1, x2) = grid.coord(5, 2);
        assert_eq!((y1, y2), (x1 - 0.25, x2 - 0.25));
    }
}
