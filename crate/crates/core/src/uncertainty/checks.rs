use std::f64::consts::{LN_2, PI, TAU};

use crate::error::{Error, Result};
use crate::gabor::{fold_slices, translation_grid, GaborCoefficients, SliceView};
use crate::qlct2d::{conjugate_grid, qlct_forward, Method, QLCTParams, QlctOperator};
use crate::quat::Quaternion;
use crate::scalar::Real;
use crate::signal::{Grid2D, QSignal2D};

use super::mask::RegionMask;
use super::report::{Direction, InequalityReport};

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// `D = ψ(1/2) − ln π` with `ψ(1/2) = −γ − 2 ln 2`.
pub fn log_constant_d() -> f64 {
    -EULER_GAMMA - 2.0 * LN_2 - PI.ln()
}

/// Weight selector for [`moment`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MomentKind {
    Omega,
    Y,
    Joint,
}

/// `ΣΣ w(ω, y)·|G|²·dω·dy` with `w = |ω|^{2s}`, `|y|^{2s}` or `|(ω, y)|^{2s}`.
pub fn moment<T: Real>(g: &GaborCoefficients<T>, which: MomentKind, s: T) -> Result<T> {
    check_s(s)?;
    let (wg, yg) = (g.omega_grid(), g.y_grid());
    let w2 = squared_radii(wg);
    let mut acc = T::zero();
    for y in 0..yg.len() {
        let (a, b) = yg.coord(y / yg.n2, y % yg.n2);
        let ry = a * a + b * b;
        for (q, &rw) in g.slice(y / yg.n2, y % yg.n2).iter().zip(&w2) {
            let r = match which {
                MomentKind::Omega => rw,
                MomentKind::Y => ry,
                MomentKind::Joint => rw + ry,
            };
            acc = acc + r.powf(s) * q.norm_sqr();
        }
    }
    Ok(acc * g.cell_volume())
}

fn check_s<T: Real>(s: T) -> Result<()> {
    if !(s > T::zero()) || !s.is_finite() {
        return Err(Error::InvalidParameter(format!("moment order s must be positive, got {s}")));
    }
    Ok(())
}

fn squared_radii<T: Real>(g: &Grid2D<T>) -> Vec<T> {
    (0..g.len())
        .map(|k| {
            let (a, b) = g.coord(k / g.n2, k % g.n2);
            a * a + b * b
        })
        .collect()
}

fn require_nonzero<T: Real>(f: &QSignal2D<T>, what: &str) -> Result<()> {
    if !(f.norm_sqr() > T::zero()) {
        return Err(Error::InvalidParameter(format!("{what} must be nonzero")));
    }
    Ok(())
}

/// Streams the stride-1 field and sums a per-slice reduction in translation order.
fn stream<T, const K: usize, F>(f: &QSignal2D<T>, phi: &QSignal2D<T>, p: &QLCTParams<T>, op: F) -> Result<[T; K]>
where
    T: Real,
    F: Fn(&SliceView<'_, T>) -> [T; K] + Sync,
{
    let parts = fold_slices(f, phi, p, 1, Method::Fast, |v| op(&v))?;
    let mut acc = [T::zero(); K];
    for part in parts {
        for (a, v) in acc.iter_mut().zip(part) {
            *a = *a + v;
        }
    }
    Ok(acc)
}

fn cell_volume<T: Real>(f: &QSignal2D<T>, p: &QLCTParams<T>) -> Result<T> {
    Ok(conjugate_grid(p, f.grid())?.cell_area() * translation_grid(f.grid(), 1)?.cell_area())
}

fn base_report<T: Real>(
    name: &str,
    dir: Direction,
    lhs: f64,
    rhs: f64,
    f: &QSignal2D<T>,
    p: &QLCTParams<T>,
) -> InequalityReport {
    InequalityReport::new(name, dir, lhs, rhs)
        .with_param("b1b2", p.b_product().as_f64())
        .with_param("A1", p.a1.to_array().to_vec())
        .with_param("A2", p.a2.to_array().to_vec())
        .with_grid(f.grid())
}

/// Minimiser of `h(t) = ½(t^{2s}A + t^{−2s}B)` and its value.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AmGm {
    pub t_star: f64,
    pub min_value: f64,
    pub sqrt_ab: f64,
    /// `|h(t*) − √(AB)| / √(AB)`.
    pub rel_err: f64,
    /// `h(t*·(1 ± 1e−3)) ≥ h(t*)`.
    pub is_local_min: bool,
}

pub fn am_gm(a: f64, b: f64, s: f64) -> AmGm {
    let h = |t: f64| 0.5 * (t.powf(2.0 * s) * a + t.powf(-2.0 * s) * b);
    let t_star = (b / a).powf(1.0 / (4.0 * s));
    let min_value = h(t_star);
    let sqrt_ab = (a * b).sqrt();
    AmGm {
        t_star,
        min_value,
        sqrt_ab,
        rel_err: (min_value - sqrt_ab).abs() / sqrt_ab,
        is_local_min: h(t_star * 1.001) >= min_value && h(t_star * 0.999) >= min_value,
    }
}

/// `√(M_ω)·√(M_y)` against `‖f‖·‖φ‖`, plus the optimal-dilation AM–GM step.
pub fn heisenberg_check<T: Real>(f: &QSignal2D<T>, phi: &QSignal2D<T>, p: &QLCTParams<T>, s: T) -> Result<InequalityReport> {
    check_s(s)?;
    require_nonzero(f, "signal")?;
    require_nonzero(phi, "window")?;
    let w2 = squared_radii(&conjugate_grid(p, f.grid())?);
    let [mw, my] = stream(f, phi, p, |v| {
        let ry = (v.y.0 * v.y.0 + v.y.1 * v.y.1).powf(s);
        let (mut a, mut e) = (T::zero(), T::zero());
        for (q, &r) in v.coeffs.iter().zip(&w2) {
            let m = q.norm_sqr();
            a = a + r.powf(s) * m;
            e = e + m;
        }
        [a, ry * e]
    })?;
    let cell = cell_volume(f, p)?;
    let (mw, my) = ((mw * cell).as_f64(), (my * cell).as_f64());
    let lhs = mw.sqrt() * my.sqrt();
    let rhs = (f.l2_norm() * phi.l2_norm()).as_f64();
    let ag = am_gm(mw, my, s.as_f64());
    Ok(base_report("heisenberg", Direction::LhsGeRhs, lhs, rhs, f, p)
        .with_param("s", s.as_f64())
        .with_param("moment_omega", mw)
        .with_param("moment_y", my)
        .with_param("t_star", ag.t_star)
        .with_param("am_gm_min", ag.min_value)
        .with_param("am_gm_sqrt_ab", ag.sqrt_ab)
        .with_param("am_gm_rel_err", ag.rel_err)
        .with_param("am_gm_is_min", ag.is_local_min)
        .with_note("existential constant: margin uses C = 1 and is not asserted"))
}

fn reject_origin<T: Real>(g: &Grid2D<T>, what: &str) -> Result<()> {
    for k in 0..g.len() {
        let (a, b) = g.coord(k / g.n2, k % g.n2);
        if a == T::zero() && b == T::zero() {
            return Err(Error::InvalidGrid(format!("{what} grid has a sample at the origin, where ln|{what}| is undefined")));
        }
    }
    Ok(())
}

fn ln_b<T: Real>(p: &QLCTParams<T>) -> Result<f64> {
    if p.a1.is_degenerate() || p.a2.is_degenerate() {
        return Err(Error::InvalidParameter("ln|b| needs b1, b2 != 0".into()));
    }
    Ok(0.5 * (p.a1.b.abs().as_f64().ln() + p.a2.b.abs().as_f64().ln()))
}

fn log_weighted_energy<T: Real>(f: &QSignal2D<T>) -> T {
    let g = f.grid();
    let half = T::lit(0.5);
    let s = f.samples().iter().enumerate().fold(T::zero(), |acc, (k, q)| {
        let (a, b) = g.coord(k / g.n2, k % g.n2);
        acc + half * (a * a + b * b).ln() * q.norm_sqr()
    });
    s * g.cell_area()
}

/// `‖φ‖²∫ln|x||f|² + ∬ln|ω||G|²` against `‖φ‖²(D + ln|b|)‖f‖²`, with
/// `ln|b| = ½(ln|b1| + ln|b2|)`.
pub fn log_check<T: Real>(f: &QSignal2D<T>, phi: &QSignal2D<T>, p: &QLCTParams<T>) -> Result<InequalityReport> {
    let omega = conjugate_grid(p, f.grid())?;
    reject_origin(f.grid(), "x")?;
    reject_origin(&omega, "ω")?;
    let lnb = ln_b(p)?;
    let half = T::lit(0.5);
    let lw: Vec<T> = squared_radii(&omega).into_iter().map(|r| half * r.ln()).collect();
    let [lg] = stream(f, phi, p, |v| [v.coeffs.iter().zip(&lw).fold(T::zero(), |a, (q, &l)| a + l * q.norm_sqr())])?;
    let phi2 = phi.norm_sqr().as_f64();
    let x_term = phi2 * log_weighted_energy(f).as_f64();
    let w_term = (lg * cell_volume(f, p)?).as_f64();
    let d = log_constant_d();
    let rhs = phi2 * (d + lnb) * f.norm_sqr().as_f64();
    Ok(base_report("log", Direction::LhsGeRhs, x_term + w_term, rhs, f, p)
        .with_param("D", d)
        .with_param("ln_b", lnb)
        .with_param("b1", p.a1.b.abs().as_f64())
        .with_param("b2", p.a2.b.abs().as_f64())
        .with_param("x_term", x_term)
        .with_param("omega_term", w_term))
}

/// `∬ ln|x|·|L⁻¹{G(·, y)}(x)|² dx dy` against `‖φ‖²∫ln|x||f|² dx`.
pub fn lemma_log_identity_check<T: Real>(f: &QSignal2D<T>, phi: &QSignal2D<T>, p: &QLCTParams<T>) -> Result<InequalityReport> {
    reject_origin(f.grid(), "x")?;
    let grid = *f.grid();
    let inverse = QlctOperator::inverse(p, &grid, Method::Fast)?;
    let half = T::lit(0.5);
    let lx: Vec<T> = squared_radii(&grid).into_iter().map(|r| half * r.ln()).collect();
    let [acc] = stream(f, phi, p, |v| {
        let back: Vec<Quaternion<T>> = inverse.apply_samples(v.coeffs);
        [back.iter().zip(&lx).fold(T::zero(), |a, (q, &l)| a + l * q.norm_sqr())]
    })?;
    let dy = translation_grid(&grid, 1)?.cell_area();
    let lhs = (acc * grid.cell_area() * dy).as_f64();
    let rhs = (phi.norm_sqr() * log_weighted_energy(f)).as_f64();
    let gap = if rhs == 0.0 && lhs == 0.0 { 0.0 } else { (lhs - rhs).abs() / rhs.abs() };
    Ok(base_report("lemma-log", Direction::Equal, lhs, rhs, f, p).with_param("relative_gap", gap))
}

/// `∬|G|^{p′}` against the stated bound `(2/p′)^{1/p′}(2π)^{−p′}|b1b2|^{1−p′/2}‖f‖^{p′}‖φ‖^{p′}`.
pub fn lieb_check<T: Real>(f: &QSignal2D<T>, phi: &QSignal2D<T>, p: &QLCTParams<T>, p_prime: T) -> Result<InequalityReport> {
    let pp = p_prime.as_f64();
    if !(pp > 1.0 && pp <= 2.0) {
        return Err(Error::InvalidParameter(format!("p' must lie in (1, 2], got {pp}")));
    }
    require_nonzero(f, "signal")?;
    require_nonzero(phi, "window")?;
    let half = p_prime * T::lit(0.5);
    let [acc] = stream(f, phi, p, |v| [v.coeffs.iter().fold(T::zero(), |a, q| a + q.norm_sqr().powf(half))])?;
    let lhs = (acc * cell_volume(f, p)?).as_f64();
    let b = p.b_product().as_f64();
    let factor = b.powf(1.0 - pp / 2.0) * (f.l2_norm().as_f64() * phi.l2_norm().as_f64()).powf(pp);
    let stated = (2.0 / pp).powf(1.0 / pp) / TAU.powf(pp);
    let empirical = lhs / factor;
    let mut r = base_report("lieb", Direction::LhsLeRhs, lhs, stated * factor, f, p)
        .with_constant(empirical)
        .with_param("p_prime", pp)
        .with_param("stated_constant", stated)
        .with_note("existential constant: margin uses the stated constant and is not asserted");
    if (pp - 2.0).abs() < 1e-12 {
        r = r.with_param("stated_constant_inconsistent", true).with_note(format!(
            "p' = 2: lhs = |f|^2 |phi|^2 by Plancherel (empirical constant {empirical:.6}), \
             but the stated constant is {stated:.6}; the stated bound contradicts Plancherel"
        ));
    }
    Ok(r)
}

fn conjugate_exponent(p: f64) -> f64 {
    if p == 1.0 {
        f64::INFINITY
    } else {
        p / (p - 1.0)
    }
}

/// `sup|G|` against `|b1b2|^{−1/2}(2π)^{−1}‖f‖_q‖φ‖_p`, `1/p + 1/q = 1`.
pub fn young_sup_check<T: Real>(f: &QSignal2D<T>, phi: &QSignal2D<T>, p: &QLCTParams<T>, holder_p: T) -> Result<InequalityReport> {
    let hp = holder_p.as_f64();
    if !(hp >= 1.0) || !hp.is_finite() {
        return Err(Error::InvalidParameter(format!("Hölder exponent must be >= 1, got {hp}")));
    }
    let hq = conjugate_exponent(hp);
    let lhs = field_sup(f, phi, p)?.as_f64();
    let rhs = p.b_product().as_f64().powf(-0.5) / TAU * f.lp_norm(T::lit(hq)).as_f64() * phi.lp_norm(holder_p).as_f64();
    Ok(base_report("young", Direction::LhsLeRhs, lhs, rhs, f, p).with_param("p", hp).with_param("q", hq))
}

fn field_sup<T: Real>(f: &QSignal2D<T>, phi: &QSignal2D<T>, p: &QLCTParams<T>) -> Result<T> {
    let maxima = fold_slices(f, phi, p, 1, Method::Fast, |v| v.coeffs.iter().fold(T::zero(), |m, q| m.max(q.norm())))?;
    Ok(maxima.into_iter().fold(T::zero(), T::max))
}

/// Componentwise norm `(∫(Σ_c |L f_c|)^{pp})^{1/pp}` against
/// `|b1b2|^{−1/2+1/pp}(2π)^{−1}‖f‖_p`, `1/p + 1/pp = 1`.
pub fn hausdorff_young_check<T: Real>(f: &QSignal2D<T>, p: &QLCTParams<T>, holder_p: T, pp: T) -> Result<InequalityReport> {
    let (hp, hpp) = (holder_p.as_f64(), pp.as_f64());
    if !(1.0..=2.0).contains(&hp) || (1.0 / hp + 1.0 / hpp - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidParameter(format!("need p in [1, 2] and 1/p + 1/p' = 1, got p = {hp}, p' = {hpp}")));
    }
    let comps: [fn(&Quaternion<T>) -> T; 4] = [|q| q.w, |q| q.x, |q| q.y, |q| q.z];
    let mut total: Option<Vec<T>> = None;
    let mut omega = None;
    for c in comps {
        let fc = f.map(|q| Quaternion::from_real(c(&q)));
        let big = qlct_forward(&fc, p, Method::Fast)?;
        omega = Some(*big.grid());
        let t = total.get_or_insert_with(|| vec![T::zero(); big.samples().len()]);
        for (acc, q) in t.iter_mut().zip(big.samples()) {
            *acc = *acc + q.norm();
        }
    }
    let omega = omega.expect("four components");
    let sum = total.unwrap_or_default().iter().fold(T::zero(), |a, &v| a + v.powf(pp)) * omega.cell_area();
    let lhs = sum.as_f64().powf(1.0 / hpp);
    let rhs = p.b_product().as_f64().powf(-0.5 + 1.0 / hpp) / TAU * f.lp_norm(holder_p).as_f64();
    Ok(base_report("hausdorff-young", Direction::LhsLeRhs, lhs, rhs, f, p)
        .with_param("p", hp)
        .with_param("p_prime", hpp)
        .with_note("recorded only: the stated constant is inconsistent with Plancherel at p = 2"))
}

/// `‖f‖‖φ‖` against `(1 − m)^{−1/2}(∬_{Σᶜ}|G|²)^{1/2}` for `0 < m(Σ) < 1`.
pub fn concentration_check<T: Real>(
    g: &GaborCoefficients<T>,
    mask: &RegionMask,
    f_norm: f64,
    phi_norm: f64,
) -> Result<InequalityReport> {
    mask.check_shape(g)?;
    let m = mask.measure();
    if !(m > 0.0 && m < 1.0) {
        return Err(Error::InvalidParameter(format!("mask measure must lie in (0, 1), got {m}")));
    }
    let outside = g
        .coeffs()
        .iter()
        .zip(mask.cells())
        .filter(|(_, &c)| !c)
        .fold(0.0, |a, (q, _)| a + q.norm_sqr().as_f64())
        * g.cell_volume().as_f64();
    let rhs = outside.sqrt() / (1.0 - m).sqrt();
    Ok(InequalityReport::new("concentration", Direction::LhsLeRhs, f_norm * phi_norm, rhs)
        .with_param("measure", m)
        .with_param("b1b2", g.params().b_product().as_f64())
        .with_param("complement_energy", outside)
        .with_grid(g.signal_grid()))
}

/// `2π√|b1b2|(1 − ε)` against `m(Σ)` for a mask capturing at least `1 − ε`
/// of the energy of a field with `‖f‖ = ‖φ‖ = 1`.
pub fn epsilon_concentration_check<T: Real>(g: &GaborCoefficients<T>, mask: &RegionMask, epsilon: f64) -> Result<InequalityReport> {
    mask.check_shape(g)?;
    if !(0.0..=1.0).contains(&epsilon) {
        return Err(Error::InvalidParameter(format!("epsilon must lie in [0, 1], got {epsilon}")));
    }
    let captured = g
        .coeffs()
        .iter()
        .zip(mask.cells())
        .filter(|(_, &c)| c)
        .fold(0.0, |a, (q, _)| a + q.norm_sqr().as_f64())
        * g.cell_volume().as_f64();
    if captured < 1.0 - epsilon - 1e-12 {
        return Err(Error::Hypothesis(format!("mask captures {captured:.6} of the energy, below 1 - epsilon = {}", 1.0 - epsilon)));
    }
    let b = g.params().b_product().as_f64();
    let lhs = TAU * b.sqrt() * (1.0 - epsilon);
    Ok(InequalityReport::new("eps-concentration", Direction::LhsLeRhs, lhs, mask.measure())
        .with_param("epsilon", epsilon)
        .with_param("captured", captured)
        .with_param("cells", mask.count())
        .with_param("b1b2", b)
        .with_grid(g.signal_grid()))
}

/// `‖f‖‖φ‖` against `(∬|(ω, y)|^{2s}|G|²)^{1/2}`; the ratio is the empirical constant.
pub fn moment_concentration_check<T: Real>(f: &QSignal2D<T>, phi: &QSignal2D<T>, p: &QLCTParams<T>, s: T) -> Result<InequalityReport> {
    check_s(s)?;
    require_nonzero(f, "signal")?;
    require_nonzero(phi, "window")?;
    let w2 = squared_radii(&conjugate_grid(p, f.grid())?);
    let [joint] = stream(f, phi, p, |v| {
        let ry = v.y.0 * v.y.0 + v.y.1 * v.y.1;
        [v.coeffs.iter().zip(&w2).fold(T::zero(), |a, (q, &r)| a + (r + ry).powf(s) * q.norm_sqr())]
    })?;
    let joint = (joint * cell_volume(f, p)?).as_f64();
    let lhs = (f.l2_norm() * phi.l2_norm()).as_f64();
    Ok(base_report("moment-concentration", Direction::LhsLeRhs, lhs, joint.sqrt(), f, p)
        .with_param("s", s.as_f64())
        .with_param("joint_moment", joint)
        .with_note("existential constant: margin uses C = 1 and is not asserted"))
}
