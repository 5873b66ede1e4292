use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{Grid2D, QSignal2D};
use crate::error::{Error, Result};
use crate::quat::Quaternion;
use crate::scalar::Real;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum WindowKind<T> {
    Gaussian { sigma: (T, T) },
    Rect { half: (T, T) },
    Hann { half: (T, T) },
}

/// A real, separable analysis window.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WindowSpec<T> {
    pub kind: WindowKind<T>,
    pub center: (T, T),
}

impl<T: Real> WindowSpec<T> {
    pub fn gaussian(s1: T, s2: T) -> Self {
        WindowSpec { kind: WindowKind::Gaussian { sigma: (s1, s2) }, center: (T::zero(), T::zero()) }
    }

    pub fn rect(h1: T, h2: T) -> Self {
        WindowSpec { kind: WindowKind::Rect { half: (h1, h2) }, center: (T::zero(), T::zero()) }
    }

    pub fn hann(h1: T, h2: T) -> Self {
        WindowSpec { kind: WindowKind::Hann { half: (h1, h2) }, center: (T::zero(), T::zero()) }
    }

    pub fn centered_at(mut self, c1: T, c2: T) -> Self {
        self.center = (c1, c2);
        self
    }

    pub fn validate(&self) -> Result<()> {
        let (a, b, what) = match self.kind {
            WindowKind::Gaussian { sigma } => (sigma.0, sigma.1, "sigma"),
            WindowKind::Rect { half } | WindowKind::Hann { half } => (half.0, half.1, "half-width"),
        };
        if !(a > T::zero() && b > T::zero() && a.is_finite() && b.is_finite()) {
            return Err(Error::InvalidWindow(format!("{what} must be positive, got ({a}, {b})")));
        }
        if !(self.center.0.is_finite() && self.center.1.is_finite()) {
            return Err(Error::InvalidWindow("center must be finite".into()));
        }
        Ok(())
    }

    /// Continuous window value at `(x1, x2)`.
    pub fn value(&self, x1: T, x2: T) -> T {
        let (u, v) = (x1 - self.center.0, x2 - self.center.1);
        match self.kind {
            WindowKind::Gaussian { sigma } => {
                let two = T::lit(2.0);
                (-(u * u) / (two * sigma.0 * sigma.0) - (v * v) / (two * sigma.1 * sigma.1)).exp()
            }
            WindowKind::Rect { half } => {
                if u.abs() < half.0 && v.abs() < half.1 {
                    T::one()
                } else {
                    T::zero()
                }
            }
            WindowKind::Hann { half } => hann_1d(u, half.0) * hann_1d(v, half.1),
        }
    }
}

fn hann_1d<T: Real>(u: T, half: T) -> T {
    if u.abs() > half {
        return T::zero();
    }
    let half_one = T::lit(0.5);
    half_one * (T::one() + (T::PI() * u / half).cos())
}

/// Samples a window onto `grid` as a scalar-part-only signal.
pub fn make_window<T: Real>(spec: &WindowSpec<T>, grid: &Grid2D<T>) -> Result<QSignal2D<T>> {
    spec.validate()?;
    let w = QSignal2D::sample(*grid, |a, b| Quaternion::from_real(spec.value(a, b)))?;
    if !(w.norm_sqr() > T::zero()) {
        return Err(Error::InvalidWindow("window has zero norm on this grid".into()));
    }
    Ok(w)
}

/// Parses `kind:key=val[,key=val...]`; a key may take one or two values,
/// e.g. `gaussian:sigma=1.0,1.0,center=0,0.5`.
impl<T: Real> FromStr for WindowSpec<T> {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |m: String| Error::InvalidWindow(m);
        let (kind, rest) = s.split_once(':').ok_or_else(|| bad(format!("expected kind:key=val, got '{s}'")))?;
        let mut params: Vec<(String, Vec<f64>)> = Vec::new();
        for tok in rest.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let (key, val) = match tok.split_once('=') {
                Some((k, v)) => (Some(k.trim()), v.trim()),
                None => (None, tok),
            };
            let v: f64 = val.parse().map_err(|_| bad(format!("bad number '{val}'")))?;
            match key {
                Some(k) => params.push((k.to_string(), vec![v])),
                None => params
                    .last_mut()
                    .ok_or_else(|| bad(format!("value '{val}' without a key")))?
                    .1
                    .push(v),
            }
        }
        let pair = |key: &str| -> Result<Option<(T, T)>> {
            match params.iter().find(|(k, _)| k == key) {
                None => Ok(None),
                Some((_, v)) if v.len() == 1 => Ok(Some((T::lit(v[0]), T::lit(v[0])))),
                Some((_, v)) if v.len() == 2 => Ok(Some((T::lit(v[0]), T::lit(v[1])))),
                Some((_, v)) => Err(bad(format!("'{key}' takes 1 or 2 values, got {}", v.len()))),
            }
        };
        for (k, _) in &params {
            if !matches!(k.as_str(), "sigma" | "half" | "center") {
                return Err(bad(format!("unknown key '{k}'")));
            }
        }
        let need = |key: &str| pair(key)?.ok_or_else(|| bad(format!("{kind} window needs '{key}'")));
        let kind = match kind.trim() {
            "gaussian" => WindowKind::Gaussian { sigma: need("sigma")? },
            "rect" => WindowKind::Rect { half: need("half")? },
            "hann" => WindowKind::Hann { half: need("half")? },
            other => return Err(bad(format!("unknown window kind '{other}'"))),
        };
        let center = pair("center")?.unwrap_or((T::zero(), T::zero()));
        let spec = WindowSpec { kind, center };
        spec.validate()?;
        Ok(spec)
    }
}

impl<T: Real> fmt::Display for WindowSpec<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (name, key, v) = match self.kind {
            WindowKind::Gaussian { sigma } => ("gaussian", "sigma", sigma),
            WindowKind::Rect { half } => ("rect", "half", half),
            WindowKind::Hann { half } => ("hann", "half", half),
        };
        write!(f, "{name}:{key}={},{},center={},{}", v.0, v.1, self.center.0, self.center.1)
    }
}
