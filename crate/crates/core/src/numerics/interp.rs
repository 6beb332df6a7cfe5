//! Interpolation on uniform grids.

use crate::grid::Grid1D;

/// Piecewise-linear interpolant, clamped to the end values outside the grid.
#[derive(Debug, Clone)]
pub struct LinearInterp {
    grid: Grid1D,
    values: Vec<f64>,
}

impl LinearInterp {
    pub fn new(grid: Grid1D, values: Vec<f64>) -> Self {
        assert_eq!(grid.count(), values.len(), "sample count mismatch");
        Self { grid, values }
    }

    pub fn eval(&self, x: f64) -> f64 {
        let (i, t) = self.grid.locate(x);
        let t = t.clamp(0.0, 1.0);
        self.values[i] * (1.0 - t) + self.values[i + 1] * t
    }
}

/// Cubic spline with prescribed end slopes.
#[derive(Debug, Clone)]
pub struct ClampedSpline {
    grid: Grid1D,
    values: Vec<f64>,
    second: Vec<f64>,
}

impl ClampedSpline {
    pub fn new(grid: Grid1D, values: Vec<f64>, slope0: f64, slope_end: f64) -> Self {
        let n = values.len();
        assert_eq!(grid.count(), n, "sample count mismatch");
        let h = grid.step();
        // Tridiagonal system for the second derivatives (Thomas algorithm).
        let mut diag = vec![0.0; n];
        let mut rhs = vec![0.0; n];
        let off = h / 6.0;
        diag[0] = h / 3.0;
        rhs[0] = (values[1] - values[0]) / h - slope0;
        for i in 1..n - 1 {
            diag[i] = 2.0 * h / 3.0;
            rhs[i] = (values[i + 1] - 2.0 * values[i] + values[i - 1]) / h;
        }
        diag[n - 1] = h / 3.0;
        rhs[n - 1] = slope_end - (values[n - 1] - values[n - 2]) / h;
        for i in 1..n {
            let m = off / diag[i - 1];
            diag[i] -= m * off;
            rhs[i] -= m * rhs[i - 1];
        }
        let mut second = vec![0.0; n];
        second[n - 1] = rhs[n - 1] / diag[n - 1];
        for i in (0..n - 1).rev() {
            second[i] = (rhs[i] - off * second[i + 1]) / diag[i];
        }
        Self {
            grid,
            values,
            second,
        }
    }

    /// Value and first derivative at `x` (cubic extrapolation outside the grid).
    pub fn eval(&self, x: f64) -> (f64, f64) {
        let h = self.grid.step();
        let (i, t) = self.grid.locate(x);
        let a = 1.0 - t;
        let (y0, y1) = (self.values[i], self.values[i + 1]);
        let (m0, m1) = (self.second[i], self.second[i + 1]);
        let v = a * y0 + t * y1 + ((a * a * a - a) * m0 + (t * t * t - t) * m1) * h * h / 6.0;
        let d = (y1 - y0) / h + ((1.0 - 3.0 * a * a) * m0 + (3.0 * t * t - 1.0) * m1) * h / 6.0;
        (v, d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_reproduces_lines() {
        let g = Grid1D::spanning(0.0, 2.0, 5).unwrap();
        let li = LinearInterp::new(g, g.points().iter().map(|x| 3.0 * x - 1.0).collect());
        assert!((li.eval(0.77) - 1.31).abs() < 1e-14);
        assert_eq!(li.eval(-1.0), -1.0);
        assert_eq!(li.eval(5.0), 5.0);
    }

    #[test]
    fn clamped_spline_is_exact_for_cubics() {
        let p = |x: f64| 1.0 + x - 0.5 * x * x + 0.2 * x * x * x;
        let dp = |x: f64| 1.0 - x + 0.6 * x * x;
        let g = Grid1D::spanning(0.0, 3.0, 7).unwrap();
        let s = ClampedSpline::new(
            g,
            g.points().iter().map(|&x| p(x)).collect(),
            dp(0.0),
            dp(3.0),
        );
        for x in [0.0, 0.13, 1.1, 2.49, 3.0] {
            let (v, d) = s.eval(x);
            assert!((v - p(x)).abs() < 1e-12, "{x}");
            assert!((d - dp(x)).abs() < 1e-12, "{x}");
        }
    }
}
