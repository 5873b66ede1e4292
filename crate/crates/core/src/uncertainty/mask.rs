use rand::seq::index::sample;
use rand::Rng;

use crate::error::{Error, Result};
use crate::gabor::GaborCoefficients;
use crate::scalar::Real;

/// Subset of the `(ω, y)` cells of a Gabor field, in the field's flat layout.
#[derive(Clone, Debug, PartialEq)]
pub struct RegionMask {
    cells: Vec<bool>,
    cell_volume: f64,
}

impl RegionMask {
    pub fn empty<T: Real>(g: &GaborCoefficients<T>) -> Self {
        RegionMask { cells: vec![false; g.coeffs().len()], cell_volume: g.cell_volume().as_f64() }
    }

    pub fn from_fn<T: Real, F>(g: &GaborCoefficients<T>, mut pred: F) -> Self
    where
        F: FnMut(usize, usize, usize, usize) -> bool,
    {
        let cells = (0..g.coeffs().len())
            .map(|i| {
                let (w1, w2, y1, y2) = g.unflatten(i);
                pred(w1, w2, y1, y2)
            })
            .collect();
        RegionMask { cells, cell_volume: g.cell_volume().as_f64() }
    }

    /// `round(measure / cell volume)` cells drawn uniformly without replacement.
    pub fn random<T: Real, R: Rng + ?Sized>(g: &GaborCoefficients<T>, measure: f64, rng: &mut R) -> Result<Self> {
        let mut m = Self::empty(g);
        let k = (measure / m.cell_volume).round() as usize;
        if k > m.cells.len() {
            return Err(Error::InvalidParameter(format!("measure {measure} exceeds the domain volume {}", m.total_volume())));
        }
        for i in sample(rng, m.cells.len(), k) {
            m.cells[i] = true;
        }
        Ok(m)
    }

    /// The `count` cells of largest `|G|²` (lower index first on ties).
    pub fn top_cells<T: Real>(g: &GaborCoefficients<T>, count: usize) -> Self {
        let mut m = Self::empty(g);
        for i in descending_energy(g).into_iter().take(count) {
            m.cells[i] = true;
        }
        m
    }

    /// Smallest greedy mask, largest `|G|²` first, whose captured energy
    /// `Σ_mask |G|²·cell` reaches `target`. Returns `None` if the whole field
    /// falls short.
    pub fn greedy_capture<T: Real>(g: &GaborCoefficients<T>, target: f64) -> Option<Self> {
        let mut m = Self::empty(g);
        let cell = m.cell_volume;
        let mut captured = 0.0;
        if target <= 0.0 {
            return Some(m);
        }
        for i in descending_energy(g) {
            m.cells[i] = true;
            captured += g.coeffs()[i].norm_sqr().as_f64() * cell;
            if captured >= target {
                return Some(m);
            }
        }
        None
    }

    pub fn cells(&self) -> &[bool] {
        &self.cells
    }

    pub fn count(&self) -> usize {
        self.cells.iter().filter(|&&c| c).count()
    }

    pub fn cell_volume(&self) -> f64 {
        self.cell_volume
    }

    /// `count · dω1·dω2·dy1·dy2`.
    pub fn measure(&self) -> f64 {
        self.count() as f64 * self.cell_volume
    }

    pub fn total_volume(&self) -> f64 {
        self.cells.len() as f64 * self.cell_volume
    }

    pub(crate) fn check_shape<T: Real>(&self, g: &GaborCoefficients<T>) -> Result<()> {
        if self.cells.len() != g.coeffs().len() {
            return Err(Error::GridMismatch(format!("mask has {} cells, field has {}", self.cells.len(), g.coeffs().len())));
        }
        Ok(())
    }
}

fn descending_energy<T: Real>(g: &GaborCoefficients<T>) -> Vec<usize> {
    let e: Vec<T> = g.coeffs().iter().map(|q| q.norm_sqr()).collect();
    let mut idx: Vec<usize> = (0..e.len()).collect();
    idx.sort_by(|&a, &b| e[b].partial_cmp(&e[a]).unwrap_or(std::cmp::Ordering::Equal).then(a.cmp(&b)));
    idx
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gabor::{gabor_analyze, AnalyzeOptions};
    use crate::qlct2d::QLCTParams;
    use crate::quat::Quaternion;
    use crate::signal::{Grid2D, QSignal2D};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn field() -> GaborCoefficients<f64> {
        let grid = Grid2D::square(8, 0.6f64).unwrap();
        let f = QSignal2D::sample(grid, |a, b| Quaternion::from_real((-(a * a + b * b) / 2.0).exp())).unwrap();
        gabor_analyze(&f, &f, &QLCTParams::fourier(), AnalyzeOptions::default()).unwrap()
    }

    #[test]
    fn measure_counts_cells() {
        let g = field();
        let m = RegionMask::from_fn(&g, |w1, _, y1, _| w1 == 0 && y1 == 0);
        assert_eq!(m.count(), 64);
        assert!((m.measure() - 64.0 * g.cell_volume()).abs() < 1e-15);
        assert!(m.measure() <= m.total_volume());
        assert_eq!(RegionMask::empty(&g).measure(), 0.0);
    }

    #[test]
    fn random_mask_is_seeded() {
        let g = field();
        let a = RegionMask::random(&g, 0.5, &mut ChaCha8Rng::seed_from_u64(3)).unwrap();
        let b = RegionMask::random(&g, 0.5, &mut ChaCha8Rng::seed_from_u64(3)).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.count(), (0.5 / g.cell_volume()).round() as usize);
        assert!(RegionMask::random(&g, 1e9, &mut ChaCha8Rng::seed_from_u64(3)).is_err());
    }

    #[test]
    fn greedy_capture_is_monotone() {
        let g = field();
        let total = g.energy();
        let mut last = 0;
        for frac in [0.5, 0.7, 0.9, 0.99] {
            let m = RegionMask::greedy_capture(&g, frac * total).unwrap();
            assert!(m.count() >= last);
            last = m.count();
            let top = RegionMask::top_cells(&g, m.count());
            assert_eq!(top, m);
        }
        assert!(RegionMask::greedy_capture(&g, 2.0 * total).is_none());
    }
}
