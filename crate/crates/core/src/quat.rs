//! Hamilton quaternions and the symplectic complex-pair view.

use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_complex::Complex;

use crate::scalar::Real;

/// A Hamilton quaternion `w + x i + y j + z k`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Quaternion<T> {
    pub w: T,
    pub x: T,
    pub y: T,
    pub z: T,
}

/// Imaginary axis used by the kernel phases.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axis {
    I,
    J,
}

impl<T: Real> Quaternion<T> {
    #[inline]
    pub const fn new(w: T, x: T, y: T, z: T) -> Self {
        Quaternion { w, x, y, z }
    }

    #[inline]
    pub fn zero() -> Self {
        Self::new(T::zero(), T::zero(), T::zero(), T::zero())
    }

    #[inline]
    pub fn one() -> Self {
        Self::from_real(T::one())
    }

    #[inline]
    pub fn i() -> Self {
        Self::new(T::zero(), T::one(), T::zero(), T::zero())
    }

    #[inline]
    pub fn j() -> Self {
        Self::new(T::zero(), T::zero(), T::one(), T::zero())
    }

    #[inline]
    pub fn k() -> Self {
        Self::new(T::zero(), T::zero(), T::zero(), T::one())
    }

    #[inline]
    pub fn from_real(w: T) -> Self {
        Self::new(w, T::zero(), T::zero(), T::zero())
    }

    /// Embeds a complex number of the i-plane.
    #[inline]
    pub fn from_i_complex(c: Complex<T>) -> Self {
        Self::new(c.re, c.im, T::zero(), T::zero())
    }

    /// Embeds a complex number into the j-plane: `re + im j`.
    #[inline]
    pub fn from_j_complex(c: Complex<T>) -> Self {
        Self::new(c.re, T::zero(), c.im, T::zero())
    }

    /// Negates the pure part.
    #[inline]
    pub fn conj(self) -> Self {
        Self::new(self.w, -self.x, -self.y, -self.z)
    }

    #[inline]
    pub fn norm_sqr(self) -> T {
        self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z
    }

    #[inline]
    pub fn norm(self) -> T {
        self.norm_sqr().sqrt()
    }

    #[inline]
    pub fn is_finite(self) -> bool {
        self.w.is_finite() && self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    #[inline]
    pub fn scale(self, s: T) -> Self {
        Self::new(self.w * s, self.x * s, self.y * s, self.z * s)
    }

    /// `cos θ + axis · sin θ`.
    #[inline]
    pub fn exp_axis(axis: Axis, theta: T) -> Self {
        let (s, c) = theta.sin_cos();
        match axis {
            Axis::I => Self::new(c, s, T::zero(), T::zero()),
            Axis::J => Self::new(c, T::zero(), s, T::zero()),
        }
    }

    /// Largest componentwise absolute difference.
    pub fn max_abs_diff(self, other: Self) -> T {
        let d = self - other;
        d.w.abs().max(d.x.abs()).max(d.y.abs()).max(d.z.abs())
    }

    #[inline]
    pub fn to_pair(self) -> ComplexPair<T> {
        ComplexPair::from(self)
    }
}

impl<T: Real> Add for Quaternion<T> {
    type Output = Self;
    #[inline]
    fn add(self, o: Self) -> Self {
        Self::new(self.w + o.w, self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl<T: Real> Sub for Quaternion<T> {
    type Output = Self;
    #[inline]
    fn sub(self, o: Self) -> Self {
        Self::new(self.w - o.w, self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl<T: Real> Neg for Quaternion<T> {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        Self::new(-self.w, -self.x, -self.y, -self.z)
    }
}

/// Hamilton product.
impl<T: Real> Mul for Quaternion<T> {
    type Output = Self;
    #[inline]
    fn mul(self, q: Self) -> Self {
        let p = self;
        Self::new(
            p.w * q.w - p.x * q.x - p.y * q.y - p.z * q.z,
            p.w * q.x + p.x * q.w + p.y * q.z - p.z * q.y,
            p.w * q.y - p.x * q.z + p.y * q.w + p.z * q.x,
            p.w * q.z + p.x * q.y - p.y * q.x + p.z * q.w,
        )
    }
}

impl<T: Real> Mul<T> for Quaternion<T> {
    type Output = Self;
    #[inline]
    fn mul(self, s: T) -> Self {
        self.scale(s)
    }
}

impl<T: Real> Div<T> for Quaternion<T> {
    type Output = Self;
    #[inline]
    fn div(self, s: T) -> Self {
        Self::new(self.w / s, self.x / s, self.y / s, self.z / s)
    }
}

impl<T: Real> AddAssign for Quaternion<T> {
    #[inline]
    fn add_assign(&mut self, o: Self) {
        *self = *self + o;
    }
}

impl<T: Real> SubAssign for Quaternion<T> {
    #[inline]
    fn sub_assign(&mut self, o: Self) {
        *self = *self - o;
    }
}

impl<T: Real> MulAssign<T> for Quaternion<T> {
    #[inline]
    fn mul_assign(&mut self, s: T) {
        *self = self.scale(s);
    }
}

impl<T: Real> Sum for Quaternion<T> {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::zero(), |acc, q| acc + q)
    }
}

/// `q = qa + qb·j` with `qa = w + x i` and `qb = y + z i`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct ComplexPair<T> {
    pub qa: Complex<T>,
    pub qb: Complex<T>,
}

impl<T: Real> ComplexPair<T> {
    #[inline]
    pub fn new(qa: Complex<T>, qb: Complex<T>) -> Self {
        ComplexPair { qa, qb }
    }

    /// Right multiplication by `e^{jθ}` carried out in the pair representation:
    /// `(qa + qb j)(cos θ + j sin θ) = (qa cos θ − qb sin θ) + (qa sin θ + qb cos θ) j`.
    #[inline]
    pub fn mul_exp_j(self, theta: T) -> Self {
        let (s, c) = theta.sin_cos();
        ComplexPair::new(self.qa * c - self.qb * s, self.qa * s + self.qb * c)
    }

    /// Left multiplication by an i-plane complex number: `c(qa + qb j) = c qa + c qb j`.
    #[inline]
    pub fn left_mul_i(self, c: Complex<T>) -> Self {
        ComplexPair::new(c * self.qa, c * self.qb)
    }
}

impl<T: Real> From<Quaternion<T>> for ComplexPair<T> {
    #[inline]
    fn from(q: Quaternion<T>) -> Self {
        ComplexPair::new(Complex::new(q.w, q.x), Complex::new(q.y, q.z))
    }
}

impl<T: Real> From<ComplexPair<T>> for Quaternion<T> {
    #[inline]
    fn from(p: ComplexPair<T>) -> Self {
        Quaternion::new(p.qa.re, p.qa.im, p.qb.re, p.qb.im)
    }
}
