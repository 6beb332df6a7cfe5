//! Forward problem: Jost function, regular solution and the absolute pressure
//! at the open end of a duct.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::consts::PhysicalConstants;
use crate::error::{Error, Result};
use crate::grid::Grid1D;
use crate::numerics::interp::ClampedSpline;
use crate::numerics::ode::{integrate, Tolerance};
use crate::profile::{AreaFunction, PotentialProfile, RadiusProfile};
use crate::spectrum::PressureSpectrum;

/// A potential supported on `[0, ℓ]` together with its boundary parameter.
pub trait PotentialModel: Sync {
    fn length(&self) -> f64;
    fn cot_theta(&self) -> f64;
    /// `q(x)` for `x ∈ [0, ℓ]`.
    fn q(&self, x: f64) -> f64;
    /// Ascending integration nodes on `[0, ℓ]`; solutions are reported there.
    fn nodes(&self) -> Vec<f64>;
}

impl PotentialModel for PotentialProfile {
    fn length(&self) -> f64 {
        PotentialProfile::length(self)
    }

    fn cot_theta(&self) -> f64 {
        PotentialProfile::cot_theta(self)
    }

    fn q(&self, x: f64) -> f64 {
        let (i, t) = self.grid().locate(x);
        let t = t.clamp(0.0, 1.0);
        let v = self.values();
        v[i] * (1.0 - t) + v[i + 1] * t
    }

    fn nodes(&self) -> Vec<f64> {
        self.grid().points()
    }
}

/// A cross-sectional area on `[0, ℓ]`.
pub trait AreaModel: Sync {
    fn length(&self) -> f64;
    fn area(&self, x: f64) -> f64;
    /// `A′(ℓ)`.
    fn area_slope_at_end(&self) -> f64;
    /// Ascending integration nodes on `[0, ℓ]`.
    fn nodes(&self) -> Vec<f64>;
}

/// Sampled area interpolated by a cubic spline clamped to the stored end slopes.
#[derive(Debug, Clone)]
pub struct SplineArea {
    grid: Grid1D,
    spline: ClampedSpline,
    slope_l: f64,
}

impl SplineArea {
    pub fn new(area: &AreaFunction) -> Self {
        Self {
            grid: *area.grid(),
            spline: ClampedSpline::new(
                *area.grid(),
                area.values().to_vec(),
                area.slope0(),
                area.slope_l(),
            ),
            slope_l: area.slope_l(),
        }
    }
}

impl AreaModel for SplineArea {
    fn length(&self) -> f64 {
        self.grid.end()
    }

    fn area(&self, x: f64) -> f64 {
        self.spline.eval(x).0
    }

    fn area_slope_at_end(&self) -> f64 {
        self.slope_l
    }

    fn nodes(&self) -> Vec<f64> {
        self.grid.points()
    }
}

/// Anything that can evaluate a Jost function at a complex wavenumber.
pub trait JostFunction: Sync {
    fn eval(&self, k: Complex64) -> Complex64;

    /// `dF/dk` by a central difference (the function is entire).
    fn derivative(&self, k: Complex64) -> Complex64 {
        let d = 1e-5 * (1.0 + k.norm());
        (self.eval(k + d) - self.eval(k - d)) / (2.0 * d)
    }
}

impl<F: Fn(Complex64) -> Complex64 + Sync> JostFunction for F {
    fn eval(&self, k: Complex64) -> Complex64 {
        self(k)
    }
}

/// Jost function evaluated by integrating the Schrödinger equation for a potential model.
#[derive(Debug, Clone, Copy)]
pub struct PotentialJost<'a, P: PotentialModel>(pub &'a P);

impl<P: PotentialModel> JostFunction for PotentialJost<'_, P> {
    fn eval(&self, k: Complex64) -> Complex64 {
        jost_from_potential(self.0, k)
            .map(|j| j.value)
            .unwrap_or(Complex64::new(f64::NAN, f64::NAN))
    }
}

fn schrodinger_rhs<P: PotentialModel>(
    model: &P,
    k2: Complex64,
) -> impl Fn(f64, &[f64; 4]) -> [f64; 4] + '_ {
    move |x, y| {
        let a = model.q(x) - k2.re;
        let b = k2.im;
        // f'' = (q − k²) f
        [y[2], y[3], a * y[0] + b * y[1], a * y[1] - b * y[0]]
    }
}

fn cplx(y: &[f64; 4]) -> (Complex64, Complex64) {
    (Complex64::new(y[0], y[1]), Complex64::new(y[2], y[3]))
}

/// Jost solution `(f(k,x), f′(k,x))` at the model's nodes (ascending x),
/// integrated backward from `f(k,ℓ) = e^{ikℓ}`, `f′(k,ℓ) = ik e^{ikℓ}`.
pub fn jost_solution<P: PotentialModel>(
    model: &P,
    k: Complex64,
) -> Result<Vec<(Complex64, Complex64)>> {
    let e = (Complex64::i() * k * model.length()).exp();
    Ok(scaled_jost_solution(model, k)?
        .iter()
        .rev()
        .map(|y| {
            let (f, d) = cplx(y);
            (f * e, d * e)
        })
        .collect())
}

/// Jost solution divided by `e^{ikℓ}`, at the nodes in descending x order.
/// Starting from unit data keeps the absolute tolerance meaningful when
/// `|e^{ikℓ}|` is far from one.
fn scaled_jost_solution<P: PotentialModel>(model: &P, k: Complex64) -> Result<Vec<[f64; 4]>> {
    let d = Complex64::i() * k;
    let nodes: Vec<f64> = model.nodes().into_iter().rev().collect();
    integrate(
        schrodinger_rhs(model, k * k),
        [1.0, 0.0, d.re, d.im],
        &nodes,
        &Tolerance::default(),
    )
}

/// Jost function value with the Jost solution data at the origin.
#[derive(Debug, Clone, Copy)]
pub struct JostEval {
    pub value: Complex64,
    pub f0: Complex64,
    pub df0: Complex64,
}

/// `F(k) = −i[f′(k,0) + cot θ f(k,0)]`, valid for complex `k`.
pub fn jost_from_potential<P: PotentialModel>(model: &P, k: Complex64) -> Result<JostEval> {
    let e = (Complex64::i() * k * model.length()).exp();
    let sol = scaled_jost_solution(model, k)?;
    let (f0, df0) = cplx(sol.last().unwrap());
    let (f0, df0) = (f0 * e, df0 * e);
    Ok(JostEval {
        value: -Complex64::i() * (df0 + model.cot_theta() * f0),
        f0,
        df0,
    })
}

/// Regular solution `(φ(k,x), φ′(k,x))` at the model's nodes, with
/// `φ(k,0) = 1`, `φ′(k,0) = −cot θ`.
pub fn regular_solution<P: PotentialModel>(
    model: &P,
    k: Complex64,
) -> Result<Vec<(Complex64, Complex64)>> {
    let sol = integrate(
        schrodinger_rhs(model, k * k),
        [1.0, 0.0, -model.cot_theta(), 0.0],
        &model.nodes(),
        &Tolerance::default(),
    )?;
    Ok(sol.iter().map(cplx).collect())
}

/// Regular solution for real `k² = lambda` (e.g. `k = iβ` gives `lambda = −β²`),
/// returning `[φ, φ′, ∫₀ˣ φ²]` at the model's nodes.
pub fn regular_solution_real<P: PotentialModel>(model: &P, lambda: f64) -> Result<Vec<[f64; 3]>> {
    integrate(
        |x, y: &[f64; 3]| [y[1], (model.q(x) - lambda) * y[0], y[0] * y[0]],
        [1.0, -model.cot_theta(), 0.0],
        &model.nodes(),
        &Tolerance::default(),
    )
}

/// Normalized pressure and volume velocity at `x = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WebsterState {
    pub p_tilde: Complex64,
    pub v_tilde: Complex64,
}

/// Integrates the first-order Webster system from the lips (`P̃ = 1`,
/// `Ṽ = [A(ℓ) + A′(ℓ)/(2ik)]/(cμ)`) back to the glottis.
pub fn forward_webster<A: AreaModel>(
    area: &A,
    k: f64,
    consts: &PhysicalConstants,
) -> Result<WebsterState> {
    if !(k > 0.0) {
        return Err(Error::validation(format!(
            "Webster solve needs k > 0, got {k}"
        )));
    }
    let ell = area.length();
    // Work with W = cμ Ṽ so that P′ = −ikW/A and W′ = −ikAP.
    let w_l =
        Complex64::new(area.area(ell), 0.0) + area.area_slope_at_end() / (2.0 * Complex64::i() * k);
    let nodes: Vec<f64> = area.nodes().into_iter().rev().collect();
    let sol = integrate(
        |x, y: &[f64; 4]| {
            let a = area.area(x);
            [k * y[3] / a, -k * y[2] / a, k * a * y[1], -k * a * y[0]]
        },
        [1.0, 0.0, w_l.re, w_l.im],
        &nodes,
        &Tolerance::default(),
    )?;
    let (p, w) = cplx(sol.last().unwrap());
    Ok(WebsterState {
        p_tilde: p,
        v_tilde: w / consts.c_mu(),
    })
}

/// `|P(k, ℓ)| = 1/|Ṽ(k, 0)|` on a k-grid, for any area model.
pub fn pressure_values<A: AreaModel>(
    area: &A,
    kgrid: &Grid1D,
    consts: &PhysicalConstants,
) -> Result<Vec<f64>> {
    kgrid
        .points()
        .par_iter()
        .map(|&k| forward_webster(area, k, consts).map(|s| 1.0 / s.v_tilde.norm()))
        .collect()
}

/// Pressure spectrum of a sampled area function; `P∞` comes from the end radii.
pub fn pressure_spectrum(
    area: &AreaFunction,
    kgrid: &Grid1D,
    consts: &PhysicalConstants,
) -> Result<PressureSpectrum> {
    let model = SplineArea::new(area);
    let values = pressure_values(&model, kgrid, consts)?;
    let radius = area.to_radius();
    let p_inf = p_infinity_from_radius(&radius, consts);
    PressureSpectrum::with_plateau(*kgrid, values, p_inf, Some(area.length()))
}

/// Pressure spectrum of an area model whose end radii are known.
pub fn pressure_spectrum_model<A: AreaModel>(
    area: &A,
    kgrid: &Grid1D,
    consts: &PhysicalConstants,
) -> Result<PressureSpectrum> {
    let values = pressure_values(area, kgrid, consts)?;
    let ell = area.length();
    let p_inf = consts.c_mu() / (area.area(0.0) * area.area(ell)).sqrt();
    PressureSpectrum::with_plateau(*kgrid, values, p_inf, Some(ell))
}

/// `|P| = P∞ k/|F(k)|` for a Jost function given directly.
pub fn spectrum_from_jost<J: JostFunction>(
    jost: &J,
    kgrid: &Grid1D,
    p_inf: f64,
    ell: f64,
) -> Result<PressureSpectrum> {
    let values: Vec<f64> = kgrid
        .points()
        .par_iter()
        .map(|&k| p_inf * k / jost.eval(Complex64::new(k, 0.0)).norm())
        .collect();
    PressureSpectrum::with_plateau(*kgrid, values, p_inf, Some(ell))
}

/// `P∞ = cμ/(π r(0) r(ℓ))`.
pub fn p_infinity_from_radius(profile: &RadiusProfile, consts: &PhysicalConstants) -> f64 {
    consts.c_mu() / (PI * profile.r0() * profile.r_l())
}

/// Large-k prediction of `|P(k,ℓ)|²/P∞²`:
/// `1 − [cot²θ − q(0⁺)/2 + (q(ℓ⁻)/2) cos 2kℓ]/k²`.
pub fn asymptotic_tail<P: PotentialModel>(model: &P, k: f64) -> f64 {
    let ell = model.length();
    let c = model.cot_theta();
    1.0 - (c * c - model.q(0.0) / 2.0 + model.q(ell) / 2.0 * (2.0 * k * ell).cos()) / (k * k)
}

/// Bound state `k = iβ` of a potential with its norming constants.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundState {
    pub beta: f64,
    /// Gel'fand–Levitan norming constant `g`.
    pub g: f64,
    /// Marchenko norming constant `m`.
    pub m: f64,
}

/// Jost function samples on a real grid plus the potential's bound states.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct JostData {
    pub kgrid: Grid1D,
    pub f_values: Vec<Complex64>,
    pub bound_states: Vec<BoundState>,
    pub source_potential: PotentialProfile,
}

impl JostData {
    /// Largest violation of `F(−k) = −F(k)*` over the grid, evaluating
    /// `F(−k)` independently.
    pub fn symmetry_defect(&self) -> f64 {
        self.kgrid
            .points()
            .par_iter()
            .zip(&self.f_values)
            .map(|(&k, f)| {
                let fm = PotentialJost(&self.source_potential).eval(Complex64::new(-k, 0.0));
                (fm + f.conj()).norm() / f.norm()
            })
            .reduce(|| 0.0, f64::max)
    }
}

/// Evaluates `F` on a real grid and locates bound states on `(0, beta_max]`.
pub fn jost_data(potential: &PotentialProfile, kgrid: &Grid1D, beta_max: f64) -> Result<JostData> {
    let f_values = kgrid
        .points()
        .par_iter()
        .map(|&k| jost_from_potential(potential, Complex64::new(k, 0.0)).map(|j| j.value))
        .collect::<Result<Vec<_>>>()?;
    let bound_states = bound_states(potential, beta_max)?;
    Ok(JostData {
        kgrid: *kgrid,
        f_values,
        bound_states,
        source_potential: potential.clone(),
    })
}

/// `iF(iβ) = f′(iβ,0) + cot θ f(iβ,0)`, real for real potentials.
fn bound_state_function<P: PotentialModel>(model: &P, beta: f64) -> Result<f64> {
    let j = jost_from_potential(model, Complex64::new(0.0, beta))?;
    Ok((Complex64::i() * j.value).re)
}

/// Zeros of `F` on the positive imaginary axis up to `beta_max`, with norming
/// constants `g = ‖φ(iβ)‖⁻¹` and `m = ‖f(iβ)‖⁻¹` over the half line.
pub fn bound_states<P: PotentialModel>(model: &P, beta_max: f64) -> Result<Vec<BoundState>> {
    let n = 2000;
    let betas: Vec<f64> = (1..=n).map(|i| beta_max * i as f64 / n as f64).collect();
    let vals = betas
        .par_iter()
        .map(|&b| bound_state_function(model, b))
        .collect::<Result<Vec<_>>>()?;
    let ell = model.length();
    let mut out = Vec::new();
    for i in 1..n {
        if vals[i - 1].signum() == vals[i].signum() {
            continue;
        }
        let beta =
            crate::spectral::bisect(|b| bound_state_function(model, b), betas[i - 1], betas[i])?;
        let phi = regular_solution_real(model, -beta * beta)?;
        let last = phi.last().unwrap();
        let g2 = 1.0 / (last[2] + last[0] * last[0] / (2.0 * beta));
        let f = jost_solution(model, Complex64::new(0.0, beta))?;
        let nodes = model.nodes();
        let f2: Vec<f64> = f.iter().map(|(v, _)| v.re * v.re).collect();
        let tail = (-2.0 * beta * ell).exp() / (2.0 * beta);
        let m2 = 1.0 / (trapezoid_nodes(&nodes, &f2) + tail);
        out.push(BoundState {
            beta,
            g: g2.sqrt(),
            m: m2.sqrt(),
        });
    }
    Ok(out)
}

/// Trapezoid rule on arbitrary ascending nodes.
fn trapezoid_nodes(x: &[f64], y: &[f64]) -> f64 {
    x.windows(2)
        .zip(y.windows(2))
        .map(|(xs, ys)| 0.5 * (xs[1] - xs[0]) * (ys[0] + ys[1]))
        .sum()
}

/// `f(0,x)φ′(0,x) − f′(0,x)φ(0,x)` at the model's nodes.
pub fn zero_energy_wronskian<P: PotentialModel>(model: &P) -> Result<Vec<f64>> {
    let f = jost_solution(model, Complex64::new(0.0, 0.0))?;
    let phi = regular_solution(model, Complex64::new(0.0, 0.0))?;
    Ok(f.iter()
        .zip(&phi)
        .map(|((f, df), (p, dp))| (f * dp - df * p).re)
        .collect())
}
