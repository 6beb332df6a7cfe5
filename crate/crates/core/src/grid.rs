use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Uniform one-dimensional grid `start + i·step`, `i = 0..count`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid1D {
    start: f64,
    step: f64,
    count: usize,
}

impl Grid1D {
    pub fn new(start: f64, step: f64, count: usize) -> Result<Self> {
        if !(step > 0.0 && step.is_finite()) {
            return Err(Error::validation(format!(
                "grid step must be positive, got {step}"
            )));
        }
        if count < 2 {
            return Err(Error::validation(format!(
                "grid needs at least 2 samples, got {count}"
            )));
        }
        if !start.is_finite() {
            return Err(Error::validation("grid start must be finite"));
        }
        Ok(Self { start, step, count })
    }

    /// `count` samples spanning `[start, end]` inclusive.
    pub fn spanning(start: f64, end: f64, count: usize) -> Result<Self> {
        if count < 2 || !(end > start) {
            return Err(Error::validation(format!(
                "cannot span [{start}, {end}] with {count} samples"
            )));
        }
        Self::new(start, (end - start) / (count - 1) as f64, count)
    }

    pub fn start(&self) -> f64 {
        self.start
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn end(&self) -> f64 {
        self.at(self.count - 1)
    }

    #[inline]
    pub fn at(&self, i: usize) -> f64 {
        self.start + i as f64 * self.step
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.count).map(|i| self.at(i)).collect()
    }

    /// Index of the cell containing `x` (clamped) and the fractional offset in it.
    pub fn locate(&self, x: f64) -> (usize, f64) {
        let s = (x - self.start) / self.step;
        let last = self.count - 2;
        if s <= 0.0 {
            return (0, s);
        }
        let i = (s.floor() as usize).min(last);
        (i, s - i as f64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn samples_are_multiply_add() {
        let g = Grid1D::new(0.25, 0.003, 1000).unwrap();
        for i in [0, 1, 17, 999] {
            assert_eq!(g.at(i), 0.25 + i as f64 * 0.003);
        }
        assert_eq!(g.end(), 0.25 + 999.0 * 0.003);
    }

    #[test]
    fn rejects_degenerate_grids() {
        assert!(Grid1D::new(0.0, 0.0, 10).is_err());
        assert!(Grid1D::new(0.0, 1.0, 1).is_err());
        assert!(Grid1D::spanning(1.0, 1.0, 4).is_err());
    }

    #[test]
    fn locate_clamps() {
        let g = Grid1D::spanning(0.0, 1.0, 11).unwrap();
        assert_eq!(g.locate(-1.0).0, 0);
        let (i, f) = g.locate(0.55);
        assert_eq!(i, 5);
        assert!((f - 0.5).abs() < 1e-12);
        let (i, f) = g.locate(1.0);
        assert_eq!(i, 9);
        assert!((f - 1.0).abs() < 1e-12);
    }
}
