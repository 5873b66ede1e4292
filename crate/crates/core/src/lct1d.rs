//! One-axis linear canonical transform in a single complex plane.
//!
//! For `b ≠ 0` the kernel is
//! `K(x, w) = (2π|b|)^{-1/2} · exp(i·s/2·[(a/b)x² − (2/b)xw + (d/b)w² − (π/2)·sgn b])`
//! with `s = ±1`. For `b = 0` the transform degenerates to
//! `F(u) = √|d| · exp(i·s·(cd/2)u²) · f(d·u)`.
//!
//! Two evaluation routes exist for `b ≠ 0`: [`lct_direct`] sums the kernel
//! literally, and [`ChirpPlan`] factors it into chirp · DFT · chirp. Under the
//! matched-sampling contract `dx·dw = 2π|b|/N` on centered grids the two agree
//! to rounding.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_complex::Complex;
use rustfft::{Fft, FftDirection, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::signal::Grid1D;

/// Tolerance on `ad − bc = 1` for matrices built in code.
pub const UNIMODULAR_TOL: f64 = 1e-12;

/// Real 2×2 matrix `[[a, b], [c, d]]` with unit determinant.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LCTParams<T> {
    pub a: T,
    pub b: T,
    pub c: T,
    pub d: T,
}

impl<T: Real> LCTParams<T> {
    pub fn new(a: T, b: T, c: T, d: T) -> Result<Self> {
        Self::with_tolerance(a, b, c, d, T::lit(UNIMODULAR_TOL), "A")
    }

    /// Like [`new`](Self::new) with an explicit determinant tolerance; `name`
    /// labels the diagnostic.
    pub fn with_tolerance(a: T, b: T, c: T, d: T, tol: T, name: &str) -> Result<Self> {
        let p = LCTParams { a, b, c, d };
        let det = p.det();
        if !(a.is_finite() && b.is_finite() && c.is_finite() && d.is_finite()) || (det - T::one()).abs() > tol {
            return Err(Error::NotUnimodular { name: name.to_string(), det: det.as_f64() });
        }
        Ok(p)
    }

    /// `(0, 1, −1, 0)`: the Fourier kernel up to a constant phase.
    pub fn fourier() -> Self {
        LCTParams { a: T::zero(), b: T::one(), c: -T::one(), d: T::zero() }
    }

    pub fn identity() -> Self {
        LCTParams { a: T::one(), b: T::zero(), c: T::zero(), d: T::one() }
    }

    /// `(cos θ, sin θ, −sin θ, cos θ)`.
    pub fn fractional(theta: T) -> Self {
        let (s, c) = theta.sin_cos();
        LCTParams { a: c, b: s, c: -s, d: c }
    }

    #[inline]
    pub fn det(&self) -> T {
        self.a * self.d - self.b * self.c
    }

    /// `(d, −b, −c, a)`.
    pub fn inverse(&self) -> Self {
        LCTParams { a: self.d, b: -self.b, c: -self.c, d: self.a }
    }

    #[inline]
    pub fn is_degenerate(&self) -> bool {
        self.b == T::zero()
    }

    pub fn to_array(&self) -> [f64; 4] {
        [self.a.as_f64(), self.b.as_f64(), self.c.as_f64(), self.d.as_f64()]
    }
}

impl<T: Real> fmt::Display for LCTParams<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{},{}", self.a, self.b, self.c, self.d)
    }
}

/// Parses `a,b,c,d`; the determinant is not checked here.
impl<T: Real> FromStr for LCTParams<T> {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let v: Vec<f64> = s
            .split(',')
            .map(|t| t.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| Error::InvalidParameter(format!("expected four comma-separated numbers, got '{s}'")))?;
        if v.len() != 4 {
            return Err(Error::InvalidParameter(format!("expected four entries, got {}", v.len())));
        }
        Ok(LCTParams { a: T::lit(v[0]), b: T::lit(v[1]), c: T::lit(v[2]), d: T::lit(v[3]) })
    }
}

/// Selects the kernel (`Plus`) or its complex conjugate (`Minus`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum KernelSign {
    Plus,
    Minus,
}

impl KernelSign {
    #[inline]
    pub fn value<T: Real>(self) -> T {
        match self {
            KernelSign::Plus => T::one(),
            KernelSign::Minus => -T::one(),
        }
    }

    pub fn flip(self) -> Self {
        match self {
            KernelSign::Plus => KernelSign::Minus,
            KernelSign::Minus => KernelSign::Plus,
        }
    }
}

fn sgn<T: Real>(b: T) -> T {
    if b < T::zero() {
        -T::one()
    } else {
        T::one()
    }
}

/// `K^{±}(x, w)` for either branch of `b`.
pub fn kernel_value<T: Real>(p: &LCTParams<T>, sign: KernelSign, x: T, w: T) -> Complex<T> {
    let s = sign.value::<T>();
    let half = T::lit(0.5);
    if p.is_degenerate() {
        let amp = p.d.abs().sqrt();
        return Complex::from_polar(amp, s * half * p.c * p.d * w * w);
    }
    let b = p.b;
    let amp = T::one() / (T::TAU() * b.abs()).sqrt();
    let two = T::lit(2.0);
    let phase = half * ((p.a / b) * x * x - (two / b) * x * w + (p.d / b) * w * w - T::FRAC_PI_2() * sgn(b));
    Complex::from_polar(amp, s * phase)
}

/// Output grid paired with `grid` by the transform `p`.
///
/// For `b ≠ 0` this is the matched-sampling grid `dw = 2π|b|/(N·dx)`; for
/// `b = 0` it is the scaled grid `du = dx/|d|` on which `d·u` lands on input
/// samples. Both are centered.
pub fn conjugate_grid<T: Real>(p: &LCTParams<T>, grid: &Grid1D<T>) -> Result<Grid1D<T>> {
    let n = grid.n;
    if p.is_degenerate() {
        if p.d == T::zero() {
            return Err(Error::InvalidParameter("b = 0 requires d != 0".into()));
        }
        Grid1D::centered(n, grid.dx / p.d.abs())
    } else {
        Grid1D::centered(n, matched_spacing(p.b, n, grid.dx))
    }
}

fn matched_spacing<T: Real>(b: T, n: usize, dx: T) -> T {
    T::TAU() * b.abs() / (T::lit(n as f64) * dx)
}

/// `F(w_m) = Σ_n K^{±}(x_n, w_m)·f(x_n)·dx` by literal summation, `O(N·M)`.
pub fn lct_direct<T: Real>(
    p: &LCTParams<T>,
    sign: KernelSign,
    input: &[Complex<T>],
    from: &Grid1D<T>,
    to: &Grid1D<T>,
) -> Result<Vec<Complex<T>>> {
    if p.is_degenerate() {
        return Err(Error::DegenerateB);
    }
    check_len(input, from)?;
    let xs = from.coords();
    Ok((0..to.n)
        .map(|m| {
            let w = to.coord(m);
            let acc = xs
                .iter()
                .zip(input)
                .fold(Complex::new(T::zero(), T::zero()), |acc, (&x, &f)| acc + kernel_value(p, sign, x, w) * f);
            acc * from.dx
        })
        .collect())
}

/// `g(x_n) = Σ_m K^{±}(x_n, w_m)·F(w_m)·dw`: the sum over the kernel's second
/// argument. With `KernelSign::Minus` this is the inverse transform.
pub fn lct_adjoint_direct<T: Real>(
    p: &LCTParams<T>,
    sign: KernelSign,
    input: &[Complex<T>],
    from: &Grid1D<T>,
    to: &Grid1D<T>,
) -> Result<Vec<Complex<T>>> {
    if p.is_degenerate() {
        return Err(Error::DegenerateB);
    }
    check_len(input, from)?;
    let ws = from.coords();
    Ok((0..to.n)
        .map(|n| {
            let x = to.coord(n);
            let acc = ws
                .iter()
                .zip(input)
                .fold(Complex::new(T::zero(), T::zero()), |acc, (&w, &f)| acc + kernel_value(p, sign, x, w) * f);
            acc * from.dx
        })
        .collect())
}

/// Fast forward transform; see [`ChirpPlan`].
pub fn lct_fast<T: Real>(
    p: &LCTParams<T>,
    sign: KernelSign,
    input: &[Complex<T>],
    from: &Grid1D<T>,
    to: &Grid1D<T>,
) -> Result<Vec<Complex<T>>> {
    check_len(input, from)?;
    Ok(ChirpPlan::forward(p, sign, from, to)?.apply(input))
}

/// Fast counterpart of [`lct_adjoint_direct`].
pub fn lct_adjoint_fast<T: Real>(
    p: &LCTParams<T>,
    sign: KernelSign,
    input: &[Complex<T>],
    from: &Grid1D<T>,
    to: &Grid1D<T>,
) -> Result<Vec<Complex<T>>> {
    check_len(input, from)?;
    Ok(ChirpPlan::adjoint(p, sign, from, to)?.apply(input))
}

/// Inverse transform (conjugate kernel, summed over the frequency variable).
pub fn ilct_fast<T: Real>(p: &LCTParams<T>, input: &[Complex<T>], from: &Grid1D<T>, to: &Grid1D<T>) -> Result<Vec<Complex<T>>> {
    lct_adjoint_fast(p, KernelSign::Minus, input, from, to)
}

pub fn ilct_direct<T: Real>(p: &LCTParams<T>, input: &[Complex<T>], from: &Grid1D<T>, to: &Grid1D<T>) -> Result<Vec<Complex<T>>> {
    lct_adjoint_direct(p, KernelSign::Minus, input, from, to)
}

fn check_len<T: Real>(input: &[Complex<T>], grid: &Grid1D<T>) -> Result<()> {
    if input.len() != grid.n {
        return Err(Error::GridMismatch(format!("{} samples for a {}-point grid", input.len(), grid.n)));
    }
    Ok(())
}

/// Precomputed chirp · DFT · chirp factorization of the `b ≠ 0` kernel.
///
/// With `x_n = (n − c)·dx`, `w_k = (k − c)·dw`, `c = (N − 1)/2` and
/// `dx·dw = 2π|b|/N`, the cross term `exp(−i·s·x_n·w_k/b)` equals
/// `exp(−iσ2π(n−c)(k−c)/N)` with `σ = s·sgn b`, which splits into a length-N
/// DFT and two index-linear phase ramps. The ramps are reduced modulo 2π in
/// integer arithmetic before conversion to `T`.
#[derive(Clone)]
pub struct ChirpPlan<T: Real> {
    pre: Vec<Complex<T>>,
    post: Vec<Complex<T>>,
    fft: Arc<dyn Fft<T>>,
}

impl<T: Real> fmt::Debug for ChirpPlan<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ChirpPlan").field("n", &self.pre.len()).finish()
    }
}

impl<T: Real> ChirpPlan<T> {
    /// Plan for `F(w) = Σ_x K(x, w) f(x) dx` from `from` (x) onto `to` (w).
    pub fn forward(p: &LCTParams<T>, sign: KernelSign, from: &Grid1D<T>, to: &Grid1D<T>) -> Result<Self> {
        let half = T::lit(0.5);
        Self::build(p, sign, half * p.a / p.b, half * p.d / p.b, from, to)
    }

    /// Plan for `g(x) = Σ_w K(x, w) F(w) dw` from `from` (w) onto `to` (x).
    pub fn adjoint(p: &LCTParams<T>, sign: KernelSign, from: &Grid1D<T>, to: &Grid1D<T>) -> Result<Self> {
        let half = T::lit(0.5);
        Self::build(p, sign, half * p.d / p.b, half * p.a / p.b, from, to)
    }

    fn build(p: &LCTParams<T>, sign: KernelSign, in_chirp: T, out_chirp: T, from: &Grid1D<T>, to: &Grid1D<T>) -> Result<Self> {
        if p.is_degenerate() {
            return Err(Error::DegenerateB);
        }
        let n = from.n;
        if to.n != n {
            return Err(Error::GridMismatch(format!("fast path needs equal lengths, got {n} and {}", to.n)));
        }
        if !from.is_centered() || !to.is_centered() {
            return Err(Error::GridMismatch("fast path needs centered grids".into()));
        }
        let required = matched_spacing(p.b, n, from.dx);
        if (to.dx - required).abs() > T::lit(1e-9) * required {
            return Err(Error::UnmatchedSampling { required_dw: required.as_f64(), got_dw: to.dx.as_f64() });
        }

        let s = sign.value::<T>();
        let positive = (sign == KernelSign::Plus) == (p.b > T::zero());
        let sigma = if positive { T::one() } else { -T::one() };
        let nn = n as u64;
        let pi_over_n = T::PI() / T::lit(n as f64);
        // angle of exp(iσπ(N−1)k/N), reduced mod 2π
        let ramp = |k: usize| -> T { sigma * pi_over_n * T::lit((((nn - 1) * k as u64) % (2 * nn)) as f64) };
        let offset = T::lit((((nn - 1) * (nn - 1)) % (4 * nn)) as f64);
        let const_phase = -sigma * pi_over_n * T::lit(0.5) * offset - s * T::FRAC_PI_4() * sgn(p.b);
        let amp = T::one() / (T::TAU() * p.b.abs()).sqrt();

        let pre = (0..n)
            .map(|k| {
                let x = from.coord(k);
                Complex::from_polar(from.dx, s * in_chirp * x * x + ramp(k))
            })
            .collect();
        let post = (0..n)
            .map(|k| {
                let w = to.coord(k);
                Complex::from_polar(amp, s * out_chirp * w * w + ramp(k) + const_phase)
            })
            .collect();
        let direction = if positive { FftDirection::Forward } else { FftDirection::Inverse };
        let fft = FftPlanner::new().plan_fft(n, direction);
        Ok(ChirpPlan { pre, post, fft })
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.pre.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.pre.is_empty()
    }

    pub fn scratch_len(&self) -> usize {
        self.fft.get_inplace_scratch_len()
    }

    /// Transforms `data` in place. `scratch` must hold [`scratch_len`](Self::scratch_len) elements.
    pub fn process(&self, data: &mut [Complex<T>], scratch: &mut [Complex<T>]) {
        for (v, &c) in data.iter_mut().zip(&self.pre) {
            *v = *v * c;
        }
        self.fft.process_with_scratch(data, scratch);
        for (v, &c) in data.iter_mut().zip(&self.post) {
            *v = *v * c;
        }
    }

    pub fn apply(&self, input: &[Complex<T>]) -> Vec<Complex<T>> {
        let mut data = input.to_vec();
        let mut scratch = vec![Complex::new(T::zero(), T::zero()); self.scratch_len()];
        self.process(&mut data, &mut scratch);
        data
    }
}

/// Index map and chirp of the `b = 0` branch: `out[k] = amp·e^{iφ_k}·in[src_k]`
/// (`src_k = None` means the scaled point lies outside the input grid).
#[derive(Clone, Debug)]
pub struct ScaleChirp<T> {
    pub amp: T,
    pub src: Vec<Option<usize>>,
    pub phase: Vec<T>,
}

impl<T: Real> ScaleChirp<T> {
    pub fn new(p: &LCTParams<T>, sign: KernelSign, from: &Grid1D<T>, to: &Grid1D<T>) -> Result<Self> {
        if !p.is_degenerate() {
            return Err(Error::NonDegenerateB);
        }
        if p.d == T::zero() {
            return Err(Error::InvalidParameter("b = 0 requires d != 0".into()));
        }
        let s = sign.value::<T>();
        let half = T::lit(0.5);
        let tol = T::lit(1e-9);
        let mut src = Vec::with_capacity(to.n);
        let mut phase = Vec::with_capacity(to.n);
        for k in 0..to.n {
            let u = to.coord(k);
            let target = p.d * u;
            let r = (target - from.x0) / from.dx;
            let rr = r.round();
            if (r - rr).abs() > tol {
                return Err(Error::OffGridScale {
                    value: target.as_f64(),
                    admissible: format!("centered grids with du = dx/|d| = {}", (from.dx / p.d.abs()).as_f64()),
                });
            }
            let idx = rr.as_f64();
            src.push(if idx >= 0.0 && (idx as usize) < from.n { Some(idx as usize) } else { None });
            phase.push(s * half * p.c * p.d * u * u);
        }
        Ok(ScaleChirp { amp: p.d.abs().sqrt(), src, phase })
    }

    pub fn apply(&self, input: &[Complex<T>]) -> Vec<Complex<T>> {
        self.src
            .iter()
            .zip(&self.phase)
            .map(|(s, &ph)| match s {
                Some(i) => Complex::from_polar(self.amp, ph) * input[*i],
                None => Complex::new(T::zero(), T::zero()),
            })
            .collect()
    }
}

/// `b = 0` branch: `F(u) = √|d|·exp(±i(cd/2)u²)·f(d·u)` by exact index mapping.
pub fn lct_scale_chirp<T: Real>(
    p: &LCTParams<T>,
    sign: KernelSign,
    input: &[Complex<T>],
    from: &Grid1D<T>,
    to: &Grid1D<T>,
) -> Result<Vec<Complex<T>>> {
    check_len(input, from)?;
    Ok(ScaleChirp::new(p, sign, from, to)?.apply(input))
}
