//! Two-sided quaternion linear canonical transform.
//!
//! `F(u) = Σ_t K^i_{A1}(t1, u1) · f(t) · K^j_{A2}(t2, u2) · dt`, with the axis-1
//! kernel embedded in the i-plane on the left and the axis-2 kernel embedded in
//! the j-plane on the right. Axes with `b = 0` use the scale-chirp form with
//! the same left/right placement.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lct1d::{self, ChirpPlan, KernelSign, LCTParams, ScaleChirp};
use crate::quat::{ComplexPair, Quaternion};
use crate::scalar::Real;
use crate::signal::{Grid1D, Grid2D, QSignal2D};
use crate::uncertainty::{Direction, InequalityReport};

/// Matrices of the two axes: `a1` drives the left i-kernel, `a2` the right j-kernel.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QLCTParams<T> {
    pub a1: LCTParams<T>,
    pub a2: LCTParams<T>,
}

impl<T: Real> QLCTParams<T> {
    /// Validates both matrices to the default determinant tolerance.
    pub fn new(a1: LCTParams<T>, a2: LCTParams<T>) -> Result<Self> {
        let tol = T::lit(lct1d::UNIMODULAR_TOL);
        LCTParams::with_tolerance(a1.a, a1.b, a1.c, a1.d, tol, "A1")?;
        LCTParams::with_tolerance(a2.a, a2.b, a2.c, a2.d, tol, "A2")?;
        Ok(QLCTParams { a1, a2 })
    }

    pub fn fourier() -> Self {
        QLCTParams { a1: LCTParams::fourier(), a2: LCTParams::fourier() }
    }

    /// `|b1·b2|`.
    pub fn b_product(&self) -> T {
        (self.a1.b * self.a2.b).abs()
    }
}

/// Evaluation route.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    #[default]
    Fast,
    Direct,
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fast" => Ok(Method::Fast),
            "direct" => Ok(Method::Direct),
            _ => Err(Error::InvalidParameter(format!("method must be 'fast' or 'direct', got '{s}'"))),
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Fast => "fast",
            Method::Direct => "direct",
        })
    }
}

/// Output grid of the forward transform on `grid`, per axis as in
/// [`lct1d::conjugate_grid`].
pub fn conjugate_grid<T: Real>(p: &QLCTParams<T>, grid: &Grid2D<T>) -> Result<Grid2D<T>> {
    Ok(Grid2D::from_axes(lct1d::conjugate_grid(&p.a1, &grid.axis1())?, lct1d::conjugate_grid(&p.a2, &grid.axis2())?))
}

pub fn qlct_forward<T: Real>(f: &QSignal2D<T>, p: &QLCTParams<T>, method: Method) -> Result<QSignal2D<T>> {
    match method {
        Method::Fast => qlct_forward_fast(f, p),
        Method::Direct => qlct_forward_direct(f, p),
    }
}

/// Reconstructs the signal on `signal_grid` from coefficients on the conjugate grid.
pub fn qlct_inverse<T: Real>(
    big_f: &QSignal2D<T>,
    p: &QLCTParams<T>,
    signal_grid: &Grid2D<T>,
    method: Method,
) -> Result<QSignal2D<T>> {
    check_spectral_grid(big_f.grid(), p, signal_grid)?;
    match method {
        Method::Fast => QlctPlan::inverse(p, signal_grid)?.execute(big_f),
        Method::Direct => DirectOp::inverse(p, signal_grid)?.execute(big_f),
    }
}

fn check_spectral_grid<T: Real>(g: &Grid2D<T>, p: &QLCTParams<T>, signal_grid: &Grid2D<T>) -> Result<()> {
    let want = conjugate_grid(p, signal_grid)?;
    if !want.approx_eq(g) {
        return Err(Error::GridMismatch(format!(
            "coefficients are on {}x{} (du = {}, {}), expected the conjugate grid (du = {}, {})",
            g.n1, g.n2, g.dx1, g.dx2, want.dx1, want.dx2
        )));
    }
    Ok(())
}

/// Literal quadruple sum (or its scale-chirp reduction on `b = 0` axes).
pub fn qlct_forward_direct<T: Real>(f: &QSignal2D<T>, p: &QLCTParams<T>) -> Result<QSignal2D<T>> {
    DirectOp::forward(p, f.grid())?.execute(f)
}

/// Symplectic-split realization over 1D chirp-FFT transforms.
pub fn qlct_forward_fast<T: Real>(f: &QSignal2D<T>, p: &QLCTParams<T>) -> Result<QSignal2D<T>> {
    QlctPlan::forward(p, f.grid())?.execute(f)
}

/// Energy before and after the forward transform.
pub fn qlct_plancherel_check<T: Real>(f: &QSignal2D<T>, p: &QLCTParams<T>, method: Method) -> Result<InequalityReport> {
    let big = qlct_forward(f, p, method)?;
    let lhs = f.norm_sqr().as_f64();
    let rhs = big.norm_sqr().as_f64();
    Ok(InequalityReport::new("plancherel", Direction::Equal, lhs, rhs)
        .with_param("method", method.to_string())
        .with_param("A1", p.a1.to_array().to_vec())
        .with_param("A2", p.a2.to_array().to_vec())
        .with_grid(f.grid()))
}

enum LeftOp<T: Real> {
    Kernel(ChirpPlan<T>),
    Scale(ScaleChirp<T>),
}

enum RightOp<T: Real> {
    Kernel { plus: ChirpPlan<T>, minus: ChirpPlan<T> },
    Scale(ScaleChirp<T>),
}

/// Precomputed fast transform between two fixed grids, reusable across signals.
pub struct QlctPlan<T: Real> {
    input: Grid2D<T>,
    output: Grid2D<T>,
    left: LeftOp<T>,
    right: RightOp<T>,
    scratch_len: usize,
}

impl<T: Real> QlctPlan<T> {
    /// Forward plan from `grid` onto its conjugate grid.
    pub fn forward(p: &QLCTParams<T>, grid: &Grid2D<T>) -> Result<Self> {
        let out = conjugate_grid(p, grid)?;
        let (x1, x2, u1, u2) = (grid.axis1(), grid.axis2(), out.axis1(), out.axis2());
        let left = if p.a1.is_degenerate() {
            LeftOp::Scale(ScaleChirp::new(&p.a1, KernelSign::Plus, &x1, &u1)?)
        } else {
            LeftOp::Kernel(ChirpPlan::forward(&p.a1, KernelSign::Plus, &x1, &u1)?)
        };
        let right = if p.a2.is_degenerate() {
            RightOp::Scale(ScaleChirp::new(&p.a2, KernelSign::Plus, &x2, &u2)?)
        } else {
            RightOp::Kernel {
                plus: ChirpPlan::forward(&p.a2, KernelSign::Plus, &x2, &u2)?,
                minus: ChirpPlan::forward(&p.a2, KernelSign::Minus, &x2, &u2)?,
            }
        };
        Ok(Self::assemble(*grid, out, left, right))
    }

    /// Inverse plan from the conjugate grid of `signal_grid` back onto `signal_grid`.
    pub fn inverse(p: &QLCTParams<T>, signal_grid: &Grid2D<T>) -> Result<Self> {
        let spec = conjugate_grid(p, signal_grid)?;
        let (x1, x2, u1, u2) = (signal_grid.axis1(), signal_grid.axis2(), spec.axis1(), spec.axis2());
        let left = if p.a1.is_degenerate() {
            LeftOp::Scale(ScaleChirp::new(&p.a1.inverse(), KernelSign::Plus, &u1, &x1)?)
        } else {
            LeftOp::Kernel(ChirpPlan::adjoint(&p.a1, KernelSign::Minus, &u1, &x1)?)
        };
        // the conjugate j-kernel e^{−jβ} swaps the roles of the ± planes
        let right = if p.a2.is_degenerate() {
            RightOp::Scale(ScaleChirp::new(&p.a2.inverse(), KernelSign::Plus, &u2, &x2)?)
        } else {
            RightOp::Kernel {
                plus: ChirpPlan::adjoint(&p.a2, KernelSign::Minus, &u2, &x2)?,
                minus: ChirpPlan::adjoint(&p.a2, KernelSign::Plus, &u2, &x2)?,
            }
        };
        Ok(Self::assemble(spec, *signal_grid, left, right))
    }

    fn assemble(input: Grid2D<T>, output: Grid2D<T>, left: LeftOp<T>, right: RightOp<T>) -> Self {
        let mut scratch_len = 0;
        if let LeftOp::Kernel(c) = &left {
            scratch_len = scratch_len.max(c.scratch_len());
        }
        if let RightOp::Kernel { plus, minus } = &right {
            scratch_len = scratch_len.max(plus.scratch_len()).max(minus.scratch_len());
        }
        QlctPlan { input, output, left, right, scratch_len }
    }

    pub fn input_grid(&self) -> &Grid2D<T> {
        &self.input
    }

    pub fn output_grid(&self) -> &Grid2D<T> {
        &self.output
    }

    pub fn execute(&self, f: &QSignal2D<T>) -> Result<QSignal2D<T>> {
        self.input.ensure_same(f.grid())?;
        Ok(QSignal2D::from_parts(self.output, self.execute_samples(f.samples())))
    }

    /// Row-major samples in, row-major samples out.
    pub(crate) fn execute_samples(&self, samples: &[Quaternion<T>]) -> Vec<Quaternion<T>> {
        let (n1, n2) = (self.input.n1, self.input.n2);
        let zero = Complex::new(T::zero(), T::zero());
        let mut qa: Vec<Complex<T>> = samples.iter().map(|q| Complex::new(q.w, q.x)).collect();
        let mut qb: Vec<Complex<T>> = samples.iter().map(|q| Complex::new(q.y, q.z)).collect();
        let mut scratch = vec![zero; self.scratch_len];

        // axis 1: left i-kernel, qa and qb transform independently
        let mut col = vec![zero; n1];
        for plane in [&mut qa, &mut qb] {
            for k2 in 0..n2 {
                for k1 in 0..n1 {
                    col[k1] = plane[k1 * n2 + k2];
                }
                let out = match &self.left {
                    LeftOp::Kernel(plan) => {
                        plan.process(&mut col, &mut scratch);
                        None
                    }
                    LeftOp::Scale(sc) => Some(sc.apply(&col)),
                };
                let src = out.as_deref().unwrap_or(&col);
                for k1 in 0..n1 {
                    plane[k1 * n2 + k2] = src[k1];
                }
            }
        }

        // axis 2: right j-kernel
        let mut out = Vec::with_capacity(n1 * n2);
        let half = T::lit(0.5);
        let i = Complex::new(T::zero(), T::one());
        let mut z1 = vec![zero; n2];
        let mut z2 = vec![zero; n2];
        for k1 in 0..n1 {
            let ra = &qa[k1 * n2..(k1 + 1) * n2];
            let rb = &qb[k1 * n2..(k1 + 1) * n2];
            match &self.right {
                RightOp::Kernel { plus, minus } => {
                    for k in 0..n2 {
                        z1[k] = ra[k] + i * rb[k];
                        z2[k] = ra[k] - i * rb[k];
                    }
                    plus.process(&mut z1, &mut scratch);
                    minus.process(&mut z2, &mut scratch);
                    for k in 0..n2 {
                        let fa = (z1[k] + z2[k]) * half;
                        let fb = -i * (z1[k] - z2[k]) * half;
                        out.push(ComplexPair::new(fa, fb).into());
                    }
                }
                RightOp::Scale(sc) => {
                    for k in 0..n2 {
                        let q = match sc.src[k] {
                            Some(s) => ComplexPair::new(ra[s] * sc.amp, rb[s] * sc.amp).mul_exp_j(sc.phase[k]).into(),
                            None => Quaternion::zero(),
                        };
                        out.push(q);
                    }
                }
            }
        }
        out
    }
}

/// Per-axis operator of the literal evaluation.
enum DirectAxis<T> {
    /// `table[in * n_out + out]` already embedded in the axis plane, with the
    /// quadrature weight of the summed variable.
    Dense { table: Vec<Quaternion<T>>, n_out: usize, weight: T },
    /// Index map with the chirp embedded in the axis plane.
    Scale { src: Vec<Option<usize>>, factor: Vec<Quaternion<T>> },
}

struct DirectOp<T> {
    input: Grid2D<T>,
    output: Grid2D<T>,
    left: DirectAxis<T>,
    right: DirectAxis<T>,
}

fn dense_axis<T: Real>(
    p: &LCTParams<T>,
    sign: KernelSign,
    from: &Grid1D<T>,
    to: &Grid1D<T>,
    summing_first_arg: bool,
    embed: fn(Complex<T>) -> Quaternion<T>,
) -> DirectAxis<T> {
    let mut table = Vec::with_capacity(from.n * to.n);
    for a in 0..from.n {
        for b in 0..to.n {
            let (s, t) = (from.coord(a), to.coord(b));
            let k = if summing_first_arg { lct1d::kernel_value(p, sign, s, t) } else { lct1d::kernel_value(p, sign, t, s) };
            table.push(embed(k));
        }
    }
    DirectAxis::Dense { table, n_out: to.n, weight: from.dx }
}

fn scale_axis<T: Real>(sc: ScaleChirp<T>, embed: fn(Complex<T>) -> Quaternion<T>) -> DirectAxis<T> {
    let factor = sc.phase.iter().map(|&ph| embed(Complex::from_polar(sc.amp, ph))).collect();
    DirectAxis::Scale { src: sc.src, factor }
}

impl<T: Real> DirectOp<T> {
    fn forward(p: &QLCTParams<T>, grid: &Grid2D<T>) -> Result<Self> {
        let out = conjugate_grid(p, grid)?;
        let (x1, x2, u1, u2) = (grid.axis1(), grid.axis2(), out.axis1(), out.axis2());
        let left = if p.a1.is_degenerate() {
            scale_axis(ScaleChirp::new(&p.a1, KernelSign::Plus, &x1, &u1)?, Quaternion::from_i_complex)
        } else {
            dense_axis(&p.a1, KernelSign::Plus, &x1, &u1, true, Quaternion::from_i_complex)
        };
        let right = if p.a2.is_degenerate() {
            scale_axis(ScaleChirp::new(&p.a2, KernelSign::Plus, &x2, &u2)?, Quaternion::from_j_complex)
        } else {
            dense_axis(&p.a2, KernelSign::Plus, &x2, &u2, true, Quaternion::from_j_complex)
        };
        Ok(DirectOp { input: *grid, output: out, left, right })
    }

    fn inverse(p: &QLCTParams<T>, signal_grid: &Grid2D<T>) -> Result<Self> {
        let spec = conjugate_grid(p, signal_grid)?;
        let (x1, x2, u1, u2) = (signal_grid.axis1(), signal_grid.axis2(), spec.axis1(), spec.axis2());
        let left = if p.a1.is_degenerate() {
            scale_axis(ScaleChirp::new(&p.a1.inverse(), KernelSign::Plus, &u1, &x1)?, Quaternion::from_i_complex)
        } else {
            dense_axis(&p.a1, KernelSign::Minus, &u1, &x1, false, Quaternion::from_i_complex)
        };
        let right = if p.a2.is_degenerate() {
            scale_axis(ScaleChirp::new(&p.a2.inverse(), KernelSign::Plus, &u2, &x2)?, Quaternion::from_j_complex)
        } else {
            dense_axis(&p.a2, KernelSign::Minus, &u2, &x2, false, Quaternion::from_j_complex)
        };
        Ok(DirectOp { input: spec, output: *signal_grid, left, right })
    }

    fn execute(&self, f: &QSignal2D<T>) -> Result<QSignal2D<T>> {
        self.input.ensure_same(f.grid())?;
        Ok(QSignal2D::from_parts(self.output, self.execute_samples(f.samples())))
    }

    fn execute_samples(&self, s: &[Quaternion<T>]) -> Vec<Quaternion<T>> {
        let (n1, n2) = (self.input.n1, self.input.n2);
        let (m1, m2) = (self.output.n1, self.output.n2);
        match (&self.left, &self.right) {
            (
                DirectAxis::Dense { table: ki, n_out: o1, weight: w1 },
                DirectAxis::Dense { table: kj, n_out: o2, weight: w2 },
            ) => {
                let w = *w1 * *w2;
                let mut out = Vec::with_capacity(m1 * m2);
                for u1 in 0..m1 {
                    for u2 in 0..m2 {
                        let mut acc = Quaternion::zero();
                        for t1 in 0..n1 {
                            let left = ki[t1 * o1 + u1];
                            for t2 in 0..n2 {
                                acc += left * s[t1 * n2 + t2] * kj[t2 * o2 + u2];
                            }
                        }
                        out.push(acc * w);
                    }
                }
                out
            }
            _ => {
                // one axis is a scale map: apply the two sides in turn
                let mut mid = vec![Quaternion::zero(); m1 * n2];
                for u1 in 0..m1 {
                    for t2 in 0..n2 {
                        mid[u1 * n2 + t2] = match &self.left {
                            DirectAxis::Dense { table, n_out, weight } => {
                                let acc: Quaternion<T> = (0..n1).map(|t1| table[t1 * n_out + u1] * s[t1 * n2 + t2]).sum();
                                acc * *weight
                            }
                            DirectAxis::Scale { src, factor } => match src[u1] {
                                Some(t1) => factor[u1] * s[t1 * n2 + t2],
                                None => Quaternion::zero(),
                            },
                        };
                    }
                }
                let mut out = Vec::with_capacity(m1 * m2);
                for u1 in 0..m1 {
                    let row = &mid[u1 * n2..(u1 + 1) * n2];
                    for u2 in 0..m2 {
                        out.push(match &self.right {
                            DirectAxis::Dense { table, n_out, weight } => {
                                let acc: Quaternion<T> = (0..n2).map(|t2| row[t2] * table[t2 * n_out + u2]).sum();
                                acc * *weight
                            }
                            DirectAxis::Scale { src, factor } => match src[u2] {
                                Some(t2) => row[t2] * factor[u2],
                                None => Quaternion::zero(),
                            },
                        });
                    }
                }
                out
            }
        }
    }
}

/// A forward or inverse transform fixed to one grid pair, by either method.
pub struct QlctOperator<T: Real>(OperatorKind<T>);

enum OperatorKind<T: Real> {
    Fast(QlctPlan<T>),
    Direct(DirectOp<T>),
}

impl<T: Real> QlctOperator<T> {
    pub fn forward(p: &QLCTParams<T>, grid: &Grid2D<T>, method: Method) -> Result<Self> {
        Ok(QlctOperator(match method {
            Method::Fast => OperatorKind::Fast(QlctPlan::forward(p, grid)?),
            Method::Direct => OperatorKind::Direct(DirectOp::forward(p, grid)?),
        }))
    }

    pub fn inverse(p: &QLCTParams<T>, signal_grid: &Grid2D<T>, method: Method) -> Result<Self> {
        Ok(QlctOperator(match method {
            Method::Fast => OperatorKind::Fast(QlctPlan::inverse(p, signal_grid)?),
            Method::Direct => OperatorKind::Direct(DirectOp::inverse(p, signal_grid)?),
        }))
    }

    pub fn input_grid(&self) -> &Grid2D<T> {
        match &self.0 {
            OperatorKind::Fast(p) => &p.input,
            OperatorKind::Direct(d) => &d.input,
        }
    }

    pub fn output_grid(&self) -> &Grid2D<T> {
        match &self.0 {
            OperatorKind::Fast(p) => &p.output,
            OperatorKind::Direct(d) => &d.output,
        }
    }

    pub fn apply(&self, f: &QSignal2D<T>) -> Result<QSignal2D<T>> {
        match &self.0 {
            OperatorKind::Fast(p) => p.execute(f),
            OperatorKind::Direct(d) => d.execute(f),
        }
    }

    /// Row-major samples on the input grid to row-major samples on the output grid.
    pub(crate) fn apply_samples(&self, s: &[Quaternion<T>]) -> Vec<Quaternion<T>> {
        match &self.0 {
            OperatorKind::Fast(p) => p.execute_samples(s),
            OperatorKind::Direct(d) => d.execute_samples(s),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quat::Axis;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::{FRAC_PI_4, TAU};

    type Q = Quaternion<f64>;

    fn lp(a: f64, b: f64, c: f64, d: f64) -> LCTParams<f64> {
        LCTParams::new(a, b, c, d).unwrap()
    }

    fn random_signal(seed: u64, n: usize, dx: f64) -> QSignal2D<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let grid = Grid2D::square(n, dx).unwrap();
        QSignal2D::sample(grid, |_, _| {
            Q::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        })
        .unwrap()
    }

    fn gaussian(n: usize, dx: f64) -> QSignal2D<f64> {
        let grid = Grid2D::square(n, dx).unwrap();
        QSignal2D::sample(grid, |a, b| Q::new(1.0, 0.5 * a, -0.25 * b, 0.1 * a * b).scale((-(a * a + b * b) / 2.0).exp())).unwrap()
    }

    fn param_sets() -> Vec<QLCTParams<f64>> {
        vec![
            QLCTParams::new(lp(1.0, 2.0, 0.5, 2.0), LCTParams::fourier()).unwrap(),
            QLCTParams::fourier(),
            QLCTParams::new(lp(0.5, -1.5, 0.4, 0.8), lp(0.8, 1.2, -0.5, 0.5)).unwrap(),
        ]
    }

    #[test]
    fn impulse_gives_rank_one_kernel_product() {
        let p = param_sets()[2];
        let grid = Grid2D::square(8, 0.5).unwrap();
        let mut s = vec![Q::zero(); 64];
        s[grid.index(3, 5)] = Q::from_real(1.0 / grid.cell_area());
        let f = QSignal2D::new(grid, s).unwrap();
        let big = qlct_forward_direct(&f, &p).unwrap();
        let out = big.grid();
        let (t1, t2) = grid.coord(3, 5);
        for u1 in 0..8 {
            for u2 in 0..8 {
                let (w1, w2) = out.coord(u1, u2);
                let want = Q::from_i_complex(lct1d::kernel_value(&p.a1, KernelSign::Plus, t1, w1))
                    * Q::from_j_complex(lct1d::kernel_value(&p.a2, KernelSign::Plus, t2, w2));
                assert!(big.get(u1, u2).max_abs_diff(want) < 1e-15);
            }
        }
    }

    /// `(1/2π)·e^{−iπ/4}·Σ e^{−i x1 u1}·f(x)·e^{−j x2 u2}·dx·e^{−jπ/4}`, coded from scratch.
    fn two_sided_qft(f: &QSignal2D<f64>, out: &Grid2D<f64>) -> QSignal2D<f64> {
        let g = f.grid();
        let pre = Q::exp_axis(Axis::I, -FRAC_PI_4);
        let post = Q::exp_axis(Axis::J, -FRAC_PI_4);
        QSignal2D::sample(*out, |u1, u2| {
            let mut acc = Q::zero();
            for k1 in 0..g.n1 {
                for k2 in 0..g.n2 {
                    let (x1, x2) = g.coord(k1, k2);
                    acc += Q::exp_axis(Axis::I, -x1 * u1) * f.get(k1, k2) * Q::exp_axis(Axis::J, -x2 * u2);
                }
            }
            pre * acc * post * (g.cell_area() / TAU)
        })
        .unwrap()
    }

    #[test]
    fn fourier_case_reduces_to_two_sided_qft() {
        let f = random_signal(11, 12, 0.4);
        let p = QLCTParams::fourier();
        let out = conjugate_grid(&p, f.grid()).unwrap();
        let oracle = two_sided_qft(&f, &out);
        assert!(qlct_forward_direct(&f, &p).unwrap().max_abs_diff(&oracle) <= 1e-12);
        assert!(qlct_forward_fast(&f, &p).unwrap().max_abs_diff(&oracle) <= 1e-12);
    }

    #[test]
    fn fast_matches_direct_including_negative_b() {
        for (i, p) in param_sets().iter().enumerate() {
            for seed in 0..3 {
                let f = random_signal(100 * i as u64 + seed, 16, 0.3);
                let d = qlct_forward_direct(&f, p).unwrap();
                let q = qlct_forward_fast(&f, p).unwrap();
                assert!(d.max_abs_diff(&q) <= 1e-9, "{i}: {}", d.max_abs_diff(&q));
            }
        }
    }

    #[test]
    fn degenerate_axes_match_between_methods() {
        let cases = [
            QLCTParams::new(lp(1.0, 0.0, 0.6, 1.0), LCTParams::fourier()).unwrap(),
            QLCTParams::new(lp(1.0, 2.0, 0.5, 2.0), lp(-1.0, 0.0, 0.3, -1.0)).unwrap(),
            QLCTParams::new(lp(1.0, 0.0, 0.2, 1.0), lp(1.0, 0.0, -0.4, 1.0)).unwrap(),
        ];
        for p in &cases {
            let f = random_signal(5, 10, 0.5);
            let d = qlct_forward_direct(&f, p).unwrap();
            let q = qlct_forward_fast(&f, p).unwrap();
            assert!(d.max_abs_diff(&q) <= 1e-9);
            for m in [Method::Fast, Method::Direct] {
                let back = qlct_inverse(&qlct_forward(&f, p, m).unwrap(), p, f.grid(), m).unwrap();
                assert!(back.max_abs_diff(&f) <= 1e-12);
            }
        }
    }

    #[test]
    fn chirp_axis_acts_on_the_correct_side() {
        // A1 = pure chirp, A2 = identity: F = e^{i c u1²/2} · f
        let p = QLCTParams::new(lp(1.0, 0.0, 0.6, 1.0), LCTParams::identity()).unwrap();
        let f = random_signal(9, 6, 0.5);
        let big = qlct_forward_fast(&f, &p).unwrap();
        for k1 in 0..6 {
            for k2 in 0..6 {
                let (u1, _) = f.grid().coord(k1, k2);
                let want = Q::exp_axis(Axis::I, 0.3 * u1 * u1) * f.get(k1, k2);
                assert!(big.get(k1, k2).max_abs_diff(want) < 1e-14);
            }
        }
        let p = QLCTParams::new(LCTParams::identity(), lp(1.0, 0.0, 0.6, 1.0)).unwrap();
        let big = qlct_forward_fast(&f, &p).unwrap();
        for k1 in 0..6 {
            for k2 in 0..6 {
                let (_, u2) = f.grid().coord(k1, k2);
                let want = f.get(k1, k2) * Q::exp_axis(Axis::J, 0.3 * u2 * u2);
                assert!(big.get(k1, k2).max_abs_diff(want) < 1e-14);
            }
        }
    }

    #[test]
    fn kernel_order_matters() {
        // the same sum with the kernels swapped onto the wrong sides
        let f = random_signal(21, 8, 0.5);
        let p = param_sets()[0];
        let big = qlct_forward_direct(&f, &p).unwrap();
        let out = big.grid();
        let g = f.grid();
        let swapped = QSignal2D::sample(*out, |w1, w2| {
            let mut acc = Q::zero();
            for k1 in 0..g.n1 {
                for k2 in 0..g.n2 {
                    let (x1, x2) = g.coord(k1, k2);
                    let ki = Q::from_i_complex(lct1d::kernel_value(&p.a1, KernelSign::Plus, x1, w1));
                    let kj = Q::from_j_complex(lct1d::kernel_value(&p.a2, KernelSign::Plus, x2, w2));
                    acc += kj * f.get(k1, k2) * ki;
                }
            }
            acc * g.cell_area()
        })
        .unwrap();
        assert!(big.max_abs_diff(&swapped) > 1e-3);
    }

    #[test]
    fn i_plane_even_input_mixes_into_j_part() {
        // qb = 0, even in x2, Fourier kernel on axis 2: Fb = −Fa and both even in u2
        let grid = Grid2D::square(16, 0.4f64).unwrap();
        let f = QSignal2D::sample(grid, |a, b| Q::new((-(a - 0.3).powi(2) - b * b).exp(), a * (-(a * a) - 2.0 * b * b).exp(), 0.0, 0.0)).unwrap();
        let p = QLCTParams::new(lp(1.0, 2.0, 0.5, 2.0), LCTParams::fourier()).unwrap();
        let d = qlct_forward_direct(&f, &p).unwrap();
        let q = qlct_forward_fast(&f, &p).unwrap();
        assert!(d.max_abs_diff(&q) <= 1e-9);
        for k1 in 0..16 {
            for k2 in 0..16 {
                let v = ComplexPair::from(q.get(k1, k2));
                let m = ComplexPair::from(q.get(k1, 15 - k2));
                assert!((v.qb + v.qa).norm() < 1e-12);
                assert!((v.qa - m.qa).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn linear_in_real_scalars() {
        let p = param_sets()[2];
        let f = random_signal(1, 16, 0.3);
        let h = random_signal(2, 16, 0.3);
        let mix = f.zip_with(&h, |a, b| a * 1.7 - b * 0.4).unwrap();
        let lhs = qlct_forward_fast(&mix, &p).unwrap();
        let (ff, hh) = (qlct_forward_fast(&f, &p).unwrap(), qlct_forward_fast(&h, &p).unwrap());
        let rhs = ff.zip_with(&hh, |a, b| a * 1.7 - b * 0.4).unwrap();
        assert!(lhs.max_abs_diff(&rhs) <= 1e-12);
    }

    #[test]
    fn gaussian_modulus_is_symmetric() {
        let n = 32;
        let dx = (TAU / n as f64).sqrt();
        let grid = Grid2D::square(n, dx).unwrap();
        let f = QSignal2D::sample(grid, |a, b| Q::from_real((-(a * a + b * b) / 2.0).exp())).unwrap();
        let big = qlct_forward_fast(&f, &QLCTParams::fourier()).unwrap();
        for k1 in 0..n {
            for k2 in 0..n {
                let (u1, u2) = big.grid().coord(k1, k2);
                let m = big.get(k1, k2).norm();
                assert!((m - big.get(n - 1 - k1, n - 1 - k2).norm()).abs() <= 1e-10);
                assert!((m - (-(u1 * u1 + u2 * u2) / 2.0).exp()).abs() <= 1e-6);
            }
        }
    }

    #[test]
    fn round_trips_both_methods() {
        let n = 24;
        for p in param_sets() {
            let f = gaussian(n, (TAU / n as f64).sqrt() * 1.2);
            for m in [Method::Fast, Method::Direct] {
                let big = qlct_forward(&f, &p, m).unwrap();
                let back = qlct_inverse(&big, &p, f.grid(), m).unwrap();
                assert!(back.rel_l2_error(&f) <= 1e-8, "{m}");
                let again = qlct_forward(&back, &p, m).unwrap();
                assert!(again.rel_l2_error(&big) <= 1e-8);
            }
        }
    }

    #[test]
    fn impulse_round_trip() {
        let p = param_sets()[0];
        let grid = Grid2D::square(16, 0.5).unwrap();
        let mut s = vec![Q::zero(); 256];
        s[grid.index(4, 11)] = Q::new(1.0, -2.0, 0.5, 3.0);
        let f = QSignal2D::new(grid, s).unwrap();
        let back = qlct_inverse(&qlct_forward_fast(&f, &p).unwrap(), &p, &grid, Method::Fast).unwrap();
        assert!(back.rel_l2_error(&f) <= 1e-8);
    }

    #[test]
    fn inverse_rejects_wrong_grid() {
        let p = QLCTParams::fourier();
        let f = random_signal(0, 8, 0.5);
        assert!(matches!(qlct_inverse(&f, &p, f.grid(), Method::Fast), Err(Error::GridMismatch(_))));
    }

    #[test]
    fn plancherel_report() {
        let f = gaussian(64, 0.25);
        let r = qlct_plancherel_check(&f, &QLCTParams::fourier(), Method::Fast).unwrap();
        assert!((0.999..=1.001).contains(&r.ratio));
        let z = QSignal2D::zeros(*f.grid());
        let r = qlct_plancherel_check(&z, &QLCTParams::fourier(), Method::Fast).unwrap();
        assert_eq!((r.lhs, r.rhs, r.ratio), (0.0, 0.0, 1.0));
    }

    #[test]
    fn params_validate_and_parse_method() {
        let bad = LCTParams { a: 1.0, b: 1.0, c: 1.0, d: 1.0 };
        match QLCTParams::new(LCTParams::fourier(), bad) {
            Err(e) => assert!(e.to_string().contains("det(A2) != 1")),
            Ok(_) => panic!(),
        }
        assert_eq!("direct".parse::<Method>().unwrap(), Method::Direct);
        assert!("slow".parse::<Method>().is_err());
    }
}
