use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::scalar::Real;
use crate::signal::Grid2D;

/// Which side of a comparison is expected to be larger.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Direction {
    /// `lhs ≥ rhs`; margin = lhs − rhs.
    #[serde(rename = "lhs>=rhs")]
    LhsGeRhs,
    /// `lhs ≤ rhs`; margin = rhs − lhs.
    #[serde(rename = "lhs<=rhs")]
    LhsLeRhs,
    /// `lhs = rhs`; margin = −|lhs − rhs|.
    #[serde(rename = "lhs=rhs")]
    Equal,
}

impl Direction {
    pub fn margin(self, lhs: f64, rhs: f64) -> f64 {
        match self {
            Direction::LhsGeRhs => lhs - rhs,
            Direction::LhsLeRhs => rhs - lhs,
            Direction::Equal => -(lhs - rhs).abs(),
        }
    }
}

/// Both sides of one numerical inequality or identity, plus context.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InequalityReport {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    /// Positive when the relation holds.
    pub margin: f64,
    /// `lhs / rhs`, and 1 when both vanish.
    pub ratio: f64,
    pub empirical_constant: f64,
    pub direction: Direction,
    pub params: Map<String, Value>,
    pub grid: Map<String, Value>,
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

pub fn ratio_of(lhs: f64, rhs: f64) -> f64 {
    if lhs == 0.0 && rhs == 0.0 {
        1.0
    } else {
        lhs / rhs
    }
}

impl InequalityReport {
    /// The empirical constant defaults to the ratio.
    pub fn new(name: impl Into<String>, direction: Direction, lhs: f64, rhs: f64) -> Self {
        let ratio = ratio_of(lhs, rhs);
        InequalityReport {
            name: name.into(),
            lhs,
            rhs,
            margin: direction.margin(lhs, rhs),
            ratio,
            empirical_constant: ratio,
            direction,
            params: Map::new(),
            grid: Map::new(),
            seed: None,
            notes: Vec::new(),
        }
    }

    pub fn with_constant(mut self, c: f64) -> Self {
        self.empirical_constant = c;
        self
    }

    pub fn with_param(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.params.insert(key.to_string(), value.into());
        self
    }

    pub fn with_grid<T: Real>(mut self, g: &Grid2D<T>) -> Self {
        self.grid.insert("n1".into(), g.n1.into());
        self.grid.insert("n2".into(), g.n2.into());
        self.grid.insert("dx1".into(), g.dx1.as_f64().into());
        self.grid.insert("dx2".into(), g.dx2.as_f64().into());
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    /// `margin ≥ −tol`.
    pub fn holds(&self, tol: f64) -> bool {
        self.margin >= -tol
    }

    pub fn param_f64(&self, key: &str) -> Option<f64> {
        self.params.get(key).and_then(Value::as_f64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn margin_follows_direction() {
        let r = InequalityReport::new("x", Direction::LhsGeRhs, 3.0, 2.0);
        assert_eq!(r.margin, 1.0);
        assert_eq!(r.ratio, 1.5);
        let r = InequalityReport::new("x", Direction::LhsLeRhs, 3.0, 2.0);
        assert_eq!(r.margin, -1.0);
        assert!(!r.holds(0.5));
        let r = InequalityReport::new("x", Direction::Equal, 2.0, 3.0);
        assert_eq!(r.margin, -1.0);
    }

    #[test]
    fn zero_over_zero_is_one() {
        let r = InequalityReport::new("z", Direction::Equal, 0.0, 0.0);
        assert_eq!(r.ratio, 1.0);
        assert_eq!(r.margin, 0.0);
    }

    #[test]
    fn json_shape() {
        let g = Grid2D::square(8, 0.5f64).unwrap();
        let r = InequalityReport::new("young", Direction::LhsLeRhs, 1.0, 2.0)
            .with_param("p", 2.0)
            .with_grid(&g)
            .with_seed(7);
        let v: Value = serde_json::to_value(&r).unwrap();
        for key in ["name", "lhs", "rhs", "margin", "ratio", "empirical_constant", "params", "grid", "seed"] {
            assert!(v.get(key).is_some(), "{key}");
        }
        assert_eq!(v["direction"], "lhs<=rhs");
        assert!(v.get("notes").is_none());
        let back: InequalityReport = serde_json::from_value(v).unwrap();
        assert_eq!(back, r);
    }
}
