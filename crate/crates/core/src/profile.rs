//! Sampled radius, area and potential profiles of a duct on `[0, ℓ]`.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::grid::Grid1D;
use crate::numerics::interp::LinearInterp;

/// Second-order one-sided first derivative at the start of `v`.
fn one_sided_slope(v0: f64, v1: f64, v2: f64, h: f64) -> f64 {
    (-3.0 * v0 + 4.0 * v1 - v2) / (2.0 * h)
}

fn check_positive(values: &[f64], what: &str) -> Result<()> {
    if let Some((i, v)) = values
        .iter()
        .enumerate()
        .find(|(_, v)| !(**v > 0.0 && v.is_finite()))
    {
        return Err(Error::validation(format!(
            "{what} must be positive and finite, sample {i} is {v}"
        )));
    }
    Ok(())
}

/// Duct radius `r(x)` sampled on a uniform grid over `[0, ℓ]`, with end slopes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadiusProfile {
    grid: Grid1D,
    values: Vec<f64>,
    slope0: f64,
    slope_l: f64,
}

impl RadiusProfile {
    pub fn new(grid: Grid1D, values: Vec<f64>, slope0: f64, slope_l: f64) -> Result<Self> {
        if grid.count() != values.len() {
            return Err(Error::validation(format!(
                "grid has {} samples but {} radii were given",
                grid.count(),
                values.len()
            )));
        }
        check_positive(&values, "radius")?;
        if !(slope0.is_finite() && slope_l.is_finite()) {
            return Err(Error::validation("end slopes must be finite"));
        }
        Ok(Self {
            grid,
            values,
            slope0,
            slope_l,
        })
    }

    /// Builds a profile from samples alone, estimating the end slopes with
    /// second-order one-sided differences.
    pub fn from_samples(grid: Grid1D, values: Vec<f64>) -> Result<Self> {
        if values.len() < 3 {
            return Err(Error::validation(
                "need at least 3 samples to estimate end slopes",
            ));
        }
        let h = grid.step();
        let n = values.len();
        let s0 = one_sided_slope(values[0], values[1], values[2], h);
        let sl = -one_sided_slope(values[n - 1], values[n - 2], values[n - 3], h);
        Self::new(grid, values, s0, sl)
    }

    /// Samples `r` (with derivative `dr`) at `count` points on `[0, ell]`.
    pub fn from_fn(
        ell: f64,
        count: usize,
        r: impl Fn(f64) -> f64,
        dr: impl Fn(f64) -> f64,
    ) -> Result<Self> {
        let grid = Grid1D::spanning(0.0, ell, count)?;
        let values = grid.points().into_iter().map(&r).collect();
        Self::new(grid, values, dr(0.0), dr(ell))
    }

    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn slope0(&self) -> f64 {
        self.slope0
    }

    pub fn slope_l(&self) -> f64 {
        self.slope_l
    }

    pub fn length(&self) -> f64 {
        self.grid.end()
    }

    pub fn r0(&self) -> f64 {
        self.values[0]
    }

    pub fn r_l(&self) -> f64 {
        *self.values.last().unwrap()
    }

    /// Linear interpolation inside `[0, ℓ]`, linear extension beyond `ℓ`.
    pub fn eval(&self, x: f64) -> f64 {
        if x >= self.length() {
            extend_radius(self, x)
        } else {
            let (i, t) = self.grid.locate(x);
            let t = t.clamp(0.0, 1.0);
            self.values[i] * (1.0 - t) + self.values[i + 1] * t
        }
    }

    pub fn to_area(&self) -> AreaFunction {
        let values = self.values.iter().map(|r| PI * r * r).collect();
        AreaFunction {
            grid: self.grid,
            values,
            slope0: 2.0 * PI * self.r0() * self.slope0,
            slope_l: 2.0 * PI * self.r_l() * self.slope_l,
        }
    }

    /// Resamples onto `count` uniform points by linear interpolation; end
    /// slopes are carried over unchanged.
    pub fn resample(&self, count: usize) -> Result<Self> {
        let grid = Grid1D::spanning(0.0, self.length(), count)?;
        let li = LinearInterp::new(self.grid, self.values.clone());
        let values = grid.points().into_iter().map(|x| li.eval(x)).collect();
        Self::new(grid, values, self.slope0, self.slope_l)
    }

    /// Max-norm distance to another profile on this profile's grid.
    pub fn max_distance(&self, other: &RadiusProfile) -> f64 {
        let li = LinearInterp::new(other.grid, other.values.clone());
        self.grid
            .points()
            .iter()
            .zip(&self.values)
            .map(|(&x, &v)| (v - li.eval(x)).abs())
            .fold(0.0, f64::max)
    }

    /// Max-norm relative error of this profile against `reference`, both
    /// evaluated on this profile's grid.
    pub fn max_relative_error(&self, reference: &RadiusProfile) -> f64 {
        let scale = reference.values.iter().copied().fold(0.0, f64::max);
        self.max_distance(reference) / scale
    }
}

/// `r′(ℓ)(x − ℓ) + r(ℓ)`, the straight continuation of the duct past the lips.
pub fn extend_radius(profile: &RadiusProfile, x_beyond: f64) -> f64 {
    profile.slope_l * (x_beyond - profile.length()) + profile.r_l()
}

/// Cross-sectional area `A(x) = π r(x)²` with end slopes `A′`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AreaFunction {
    grid: Grid1D,
    values: Vec<f64>,
    slope0: f64,
    slope_l: f64,
}

impl AreaFunction {
    pub fn new(grid: Grid1D, values: Vec<f64>, slope0: f64, slope_l: f64) -> Result<Self> {
        if grid.count() != values.len() {
            return Err(Error::validation("area sample count does not match grid"));
        }
        check_positive(&values, "area")?;
        Ok(Self {
            grid,
            values,
            slope0,
            slope_l,
        })
    }

    /// Area samples with end slopes estimated by one-sided differences.
    pub fn from_samples(grid: Grid1D, values: Vec<f64>) -> Result<Self> {
        if values.len() < 3 {
            // Two points describe a straight taper; its slope is exact.
            let s = (values[1] - values[0]) / grid.step();
            return Self::new(grid, values, s, s);
        }
        let h = grid.step();
        let n = values.len();
        let s0 = one_sided_slope(values[0], values[1], values[2], h);
        let sl = -one_sided_slope(values[n - 1], values[n - 2], values[n - 3], h);
        Self::new(grid, values, s0, sl)
    }

    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn slope0(&self) -> f64 {
        self.slope0
    }

    pub fn slope_l(&self) -> f64 {
        self.slope_l
    }

    pub fn length(&self) -> f64 {
        self.grid.end()
    }

    pub fn to_radius(&self) -> RadiusProfile {
        let values: Vec<f64> = self.values.iter().map(|a| (a / PI).sqrt()).collect();
        let (r0, rl) = (values[0], *values.last().unwrap());
        RadiusProfile {
            grid: self.grid,
            values,
            slope0: self.slope0 / (2.0 * PI * r0),
            slope_l: self.slope_l / (2.0 * PI * rl),
        }
    }

    pub fn max_relative_error(&self, reference: &AreaFunction) -> f64 {
        let li = LinearInterp::new(reference.grid, reference.values.clone());
        self.grid
            .points()
            .iter()
            .zip(&self.values)
            .map(|(&x, &v)| {
                let r = li.eval(x);
                (v - r).abs() / r
            })
            .fold(0.0, f64::max)
    }
}

/// Schrödinger potential `q(x)` on `[0, ℓ]` (zero beyond) and boundary parameter `cot θ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PotentialProfile {
    grid: Grid1D,
    values: Vec<f64>,
    cot_theta: f64,
}

impl PotentialProfile {
    pub fn new(grid: Grid1D, values: Vec<f64>, cot_theta: f64) -> Result<Self> {
        if grid.count() != values.len() {
            return Err(Error::validation(
                "potential sample count does not match grid",
            ));
        }
        if values.iter().any(|v| !v.is_finite()) || !cot_theta.is_finite() {
            return Err(Error::validation("potential samples must be finite"));
        }
        Ok(Self {
            grid,
            values,
            cot_theta,
        })
    }

    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn cot_theta(&self) -> f64 {
        self.cot_theta
    }

    pub fn length(&self) -> f64 {
        self.grid.end()
    }

    /// `∫₀^ℓ q` by the trapezoid rule.
    pub fn integral(&self) -> f64 {
        crate::numerics::quad::trapezoid(&self.values, self.grid.step())
    }

    /// Root-mean-square difference to another potential on this grid.
    pub fn l2_distance(&self, other: &PotentialProfile) -> f64 {
        let li = LinearInterp::new(other.grid, other.values.clone());
        let sq: Vec<f64> = self
            .grid
            .points()
            .iter()
            .zip(&self.values)
            .map(|(&x, &v)| (v - li.eval(x)).powi(2))
            .collect();
        (crate::numerics::quad::trapezoid(&sq, self.grid.step()) / self.length()).sqrt()
    }

    pub fn l2_norm(&self) -> f64 {
        let sq: Vec<f64> = self.values.iter().map(|v| v * v).collect();
        (crate::numerics::quad::trapezoid(&sq, self.grid.step()) / self.length()).sqrt()
    }
}

/// `q = r″/r` by centered second differences (second-order one-sided at the
/// ends) and `cot θ = −r′(0)/r(0)`.
pub fn potential_from_radius(profile: &RadiusProfile) -> Result<PotentialProfile> {
    let r = &profile.values;
    let n = r.len();
    if n < 4 {
        return Err(Error::validation(
            "need at least 4 radius samples to form r″",
        ));
    }
    check_positive(r, "radius")?;
    let h2 = profile.grid.step().powi(2);
    let mut q = vec![0.0; n];
    q[0] = (2.0 * r[0] - 5.0 * r[1] + 4.0 * r[2] - r[3]) / h2 / r[0];
    for i in 1..n - 1 {
        q[i] = (r[i + 1] - 2.0 * r[i] + r[i - 1]) / h2 / r[i];
    }
    q[n - 1] = (2.0 * r[n - 1] - 5.0 * r[n - 2] + 4.0 * r[n - 3] - r[n - 4]) / h2 / r[n - 1];
    PotentialProfile::new(profile.grid, q, -profile.slope0 / profile.r0())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn radius_area_round_trip() {
        let g = Grid1D::spanning(0.0, 2.0, 9).unwrap();
        let r = RadiusProfile::new(g, vec![1.0; 9], 0.0, 0.0).unwrap();
        let a = r.to_area();
        assert!(a.values().iter().all(|v| (v - PI).abs() < 1e-15));
        let a4 = AreaFunction::new(g, vec![4.0 * PI; 9], 0.0, 0.0).unwrap();
        assert!(a4
            .to_radius()
            .values()
            .iter()
            .all(|v| (v - 2.0).abs() < 1e-15));

        let r = RadiusProfile::from_fn(
            3.0,
            31,
            |x| 0.7 + 0.2 * (x * 1.3).sin(),
            |x| 0.26 * (x * 1.3).cos(),
        )
        .unwrap();
        let back = r.to_area().to_radius();
        for (u, v) in r.values().iter().zip(back.values()) {
            assert!(((u - v) / u).abs() < 1e-14);
        }
        assert!((back.slope0() - r.slope0()).abs() < 1e-14);
        assert!((back.slope_l() - r.slope_l()).abs() < 1e-14);
    }

    #[test]
    fn rejects_nonpositive_samples() {
        let g = Grid1D::spanning(0.0, 1.0, 3).unwrap();
        assert!(RadiusProfile::new(g, vec![1.0, 0.0, 1.0], 0.0, 0.0).is_err());
        assert!(AreaFunction::new(g, vec![1.0, -1.0, 1.0], 0.0, 0.0).is_err());
    }

    #[test]
    fn straight_extension() {
        let g = Grid1D::spanning(0.0, 4.0, 5).unwrap();
        let p = RadiusProfile::new(g, vec![1.0, 1.2, 1.5, 1.8, 2.0], 0.2, 0.5).unwrap();
        assert!((extend_radius(&p, 5.0) - 2.5).abs() < 1e-15);
        let flat = RadiusProfile::new(g, vec![1.0; 5], 0.0, 0.0).unwrap();
        assert_eq!(extend_radius(&flat, 100.0), 1.0);
        let closing = RadiusProfile::new(g, vec![1.0; 5], 0.0, -0.25).unwrap();
        assert!(extend_radius(&closing, 8.0).abs() < 1e-15);
    }

    #[test]
    fn linear_radius_has_zero_potential() {
        let a = 0.05;
        let r = RadiusProfile::from_fn(16.0, 161, |x| 0.8 * (1.0 + a * x), |_| 0.8 * a).unwrap();
        let q = potential_from_radius(&r).unwrap();
        assert!(q.values().iter().all(|v| v.abs() < 1e-10));
        assert!((q.cot_theta() + a).abs() < 1e-14);
    }

    #[test]
    fn cosh_radius_has_unit_potential() {
        let r = RadiusProfile::from_fn(1.0, 201, f64::cosh, f64::sinh).unwrap();
        let q = potential_from_radius(&r).unwrap();
        assert!(q.values().iter().all(|v| (v - 1.0).abs() < 1e-4));
        assert_eq!(q.cot_theta(), 0.0);
    }

    #[test]
    fn gaussian_bump_second_derivative_is_second_order() {
        let r = |x: f64| 1.0 + 0.3 * (-(x - 8.0).powi(2)).exp();
        let d2 = |x: f64| 0.3 * (4.0 * (x - 8.0).powi(2) - 2.0) * (-(x - 8.0).powi(2)).exp();
        let dr = |x: f64| -0.6 * (x - 8.0) * (-(x - 8.0).powi(2)).exp();
        let err = |n: usize| {
            let p = RadiusProfile::from_fn(16.0, n, r, dr).unwrap();
            let q = potential_from_radius(&p).unwrap();
            p.grid()
                .points()
                .iter()
                .zip(q.values())
                .map(|(&x, v)| (v - d2(x) / r(x)).abs())
                .fold(0.0, f64::max)
        };
        let (e1, e2) = (err(321), err(641));
        let order = (e1 / e2).log2();
        assert!(order > 1.9 && order < 2.1, "observed order {order}");
    }

    #[test]
    fn one_sided_end_slopes_are_second_order() {
        let g = Grid1D::spanning(0.0, 1.0, 101).unwrap();
        let r = RadiusProfile::from_samples(g, g.points().iter().map(|x| 1.0 + x * x).collect())
            .unwrap();
        assert!(r.slope0().abs() < 1e-12);
        assert!((r.slope_l() - 2.0).abs() < 1e-12);
    }
}
