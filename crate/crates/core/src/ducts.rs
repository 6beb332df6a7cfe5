//! Closed-form duct shapes and exactly solvable Jost functions, used to
//! generate synthetic data and as reference solutions.

use num_complex::Complex64;
use std::f64::consts::PI;
use std::sync::Arc;

use crate::consts::PhysicalConstants;
use crate::direct::{AreaModel, JostFunction, PotentialModel};
use crate::error::{Error, Result};
use crate::grid::Grid1D;
use crate::profile::RadiusProfile;

type RadiusFn = dyn Fn(f64) -> [f64; 3] + Send + Sync;

/// A duct whose radius and its first two derivatives are known in closed form.
#[derive(Clone)]
pub struct AnalyticDuct {
    ell: f64,
    nodes: usize,
    radius: Arc<RadiusFn>,
}

impl std::fmt::Debug for AnalyticDuct {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("AnalyticDuct")
            .field("ell", &self.ell)
            .finish_non_exhaustive()
    }
}

impl AnalyticDuct {
    /// `radius(x)` must return `[r, r′, r″]`.
    pub fn new(ell: f64, radius: impl Fn(f64) -> [f64; 3] + Send + Sync + 'static) -> Result<Self> {
        if !(ell > 0.0) {
            return Err(Error::validation("duct length must be positive"));
        }
        let duct = Self {
            ell,
            nodes: 129,
            radius: Arc::new(radius),
        };
        for i in 0..=256 {
            let x = ell * i as f64 / 256.0;
            let [r, _, _] = duct.rdd(x);
            if !(r > 0.0) {
                return Err(Error::validation(format!(
                    "radius is not positive at x = {x}"
                )));
            }
        }
        Ok(duct)
    }

    pub fn uniform(r0: f64, ell: f64) -> Result<Self> {
        Self::new(ell, move |_| [r0, 0.0, 0.0])
    }

    /// `r(x) = r₀(1 + a x)`.
    pub fn linear(r0: f64, a: f64, ell: f64) -> Result<Self> {
        Self::new(ell, move |x| [r0 * (1.0 + a * x), r0 * a, 0.0])
    }

    /// The duct whose potential is the constant `v` on `(0, ℓ)` with boundary
    /// parameter `cot θ`, i.e. `r = r₀ φ(0, x)`.
    pub fn constant_potential(r0: f64, v: f64, cot_theta: f64, ell: f64) -> Result<Self> {
        Self::new(ell, move |x| {
            let (c, s) = trig_pair(v, x);
            // φ = c − cot θ · s,  φ′ = v s − cot θ · c   (since c′ = v s, s′ = c)
            let phi = c - cot_theta * s;
            let dphi = v * s - cot_theta * c;
            [r0 * phi, r0 * dphi, r0 * v * phi]
        })
    }

    /// `r(x) = r₀[1 + amp·exp(−(x − center)²/width²)]`.
    pub fn gaussian_bump(r0: f64, amp: f64, center: f64, width: f64, ell: f64) -> Result<Self> {
        Self::new(ell, move |x| {
            let u = (x - center) / width;
            let e = (-u * u).exp();
            let d1 = -2.0 * u / width * e;
            let d2 = (4.0 * u * u - 2.0) / (width * width) * e;
            [r0 * (1.0 + amp * e), r0 * amp * d1, r0 * amp * d2]
        })
    }

    /// `r(x) = r₀[1 + a x + Σ bₙ sin(nπx/ℓ)]`, a smooth profile with a
    /// chosen lip slope; convenient for randomized fixtures.
    pub fn sine_series(r0: f64, a: f64, coeffs: Vec<f64>, ell: f64) -> Result<Self> {
        Self::new(ell, move |x| {
            let mut v = [1.0 + a * x, a, 0.0];
            for (i, b) in coeffs.iter().enumerate() {
                let w = (i + 1) as f64 * PI / ell;
                v[0] += b * (w * x).sin();
                v[1] += b * w * (w * x).cos();
                v[2] -= b * w * w * (w * x).sin();
            }
            [r0 * v[0], r0 * v[1], r0 * v[2]]
        })
    }

    /// Uses `count` output nodes for ODE integration (the integrator still adapts between them).
    pub fn with_nodes(mut self, count: usize) -> Self {
        self.nodes = count.max(2);
        self
    }

    pub fn rdd(&self, x: f64) -> [f64; 3] {
        (self.radius)(x)
    }

    pub fn r(&self, x: f64) -> f64 {
        self.rdd(x)[0]
    }

    pub fn slope(&self, x: f64) -> f64 {
        self.rdd(x)[1]
    }

    /// Samples the radius at `count` uniform points, with exact end slopes.
    pub fn sample(&self, count: usize) -> Result<RadiusProfile> {
        RadiusProfile::from_fn(self.ell, count, |x| self.r(x), |x| self.slope(x))
    }

    /// `P∞ = cμ/(π r(0) r(ℓ))`.
    pub fn p_inf(&self, consts: &PhysicalConstants) -> f64 {
        consts.c_mu() / (PI * self.r(0.0) * self.r(self.ell))
    }
}

/// `(cos κx, sin(κx)/κ)` for `κ² = −v`, written without branch choices.
fn trig_pair(v: f64, x: f64) -> (f64, f64) {
    if v > 0.0 {
        let s = v.sqrt();
        ((s * x).cosh(), (s * x).sinh() / s)
    } else if v < 0.0 {
        let s = (-v).sqrt();
        ((s * x).cos(), (s * x).sin() / s)
    } else {
        (1.0, x)
    }
}

impl PotentialModel for AnalyticDuct {
    fn length(&self) -> f64 {
        self.ell
    }

    fn cot_theta(&self) -> f64 {
        let [r, dr, _] = self.rdd(0.0);
        -dr / r
    }

    fn q(&self, x: f64) -> f64 {
        let [r, _, d2] = self.rdd(x.clamp(0.0, self.ell));
        d2 / r
    }

    fn nodes(&self) -> Vec<f64> {
        Grid1D::spanning(0.0, self.ell, self.nodes)
            .unwrap()
            .points()
    }
}

impl AreaModel for AnalyticDuct {
    fn length(&self) -> f64 {
        self.ell
    }

    fn area(&self, x: f64) -> f64 {
        let r = self.r(x);
        PI * r * r
    }

    fn area_slope_at_end(&self) -> f64 {
        let [r, dr, _] = self.rdd(self.ell);
        2.0 * PI * r * dr
    }

    fn nodes(&self) -> Vec<f64> {
        Grid1D::spanning(0.0, self.ell, self.nodes)
            .unwrap()
            .points()
    }
}

/// `cos(κL)` and `sin(κL)/κ` as entire functions of `κ²`.
fn cos_sinc(kappa2: Complex64, len: f64) -> (Complex64, Complex64) {
    let z = kappa2 * len * len;
    if z.norm() < 1e-4 {
        let c = 1.0 - z / 2.0 + z * z / 24.0;
        let s = (1.0 - z / 6.0 + z * z / 120.0) * len;
        (c, s)
    } else {
        let kappa = kappa2.sqrt();
        ((kappa * len).cos(), (kappa * len).sin() / kappa)
    }
}

/// Jost function of the potential equal to `v` on `(0, ℓ)` and zero beyond,
/// evaluated in closed form.
#[derive(Debug, Clone, Copy)]
pub struct ConstantPotentialJost {
    pub v: f64,
    pub cot_theta: f64,
    pub ell: f64,
}

impl ConstantPotentialJost {
    /// `(f(k, 0), f′(k, 0))`.
    pub fn jost_at_origin(&self, k: Complex64) -> (Complex64, Complex64) {
        let i = Complex64::i();
        let kappa2 = k * k - self.v;
        let (c, s) = cos_sinc(kappa2, self.ell);
        let e = (i * k * self.ell).exp();
        (e * (c - i * k * s), e * (kappa2 * s + i * k * c))
    }

    /// Regular solution `φ(k, x)` with `φ(k,0) = 1`, `φ′(k,0) = −cot θ`, for `x ≤ ℓ`.
    pub fn regular(&self, k: Complex64, x: f64) -> Complex64 {
        let (c, s) = cos_sinc(k * k - self.v, x);
        c - self.cot_theta * s
    }
}

impl JostFunction for ConstantPotentialJost {
    fn eval(&self, k: Complex64) -> Complex64 {
        let (f0, df0) = self.jost_at_origin(k);
        -Complex64::i() * (df0 + self.cot_theta * f0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_potential_duct_matches_its_potential() {
        let d = AnalyticDuct::constant_potential(0.1, 1.0 / 200.0, -1.0, 16.0).unwrap();
        for x in [0.0, 3.3, 16.0] {
            assert!((d.q(x) - 1.0 / 200.0).abs() < 1e-15);
        }
        assert!((d.cot_theta() + 1.0).abs() < 1e-15);
        // φ(0,x) = r/r₀ for the closed-form regular solution
        let j = ConstantPotentialJost {
            v: 1.0 / 200.0,
            cot_theta: -1.0,
            ell: 16.0,
        };
        let phi = j.regular(Complex64::new(0.0, 0.0), 9.0);
        assert!((phi.re - d.r(9.0) / 0.1).abs() < 1e-12);
    }

    #[test]
    fn example_plateau_value() {
        let d = AnalyticDuct::constant_potential(0.1, 1.0 / 200.0, -1.0, 16.0).unwrap();
        let p = d.p_inf(&PhysicalConstants::default());
        assert!((p - 61.3665148926).abs() < 1e-8, "{p}");
    }

    #[test]
    fn closed_form_jost_is_entire_near_kappa_zero() {
        let j = ConstantPotentialJost {
            v: 0.04,
            cot_theta: 0.3,
            ell: 2.0,
        };
        let k0 = Complex64::new(0.2, 0.0);
        let a = j.eval(k0 * (1.0 + 1e-7));
        let b = j.eval(k0 * (1.0 - 1e-7));
        assert!((a - b).norm() < 1e-6);
    }

    #[test]
    fn rejects_collapsing_duct() {
        assert!(AnalyticDuct::linear(1.0, -0.1, 16.0).is_err());
    }
}
