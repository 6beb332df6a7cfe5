//! From the modulus of the Jost function to the no-bound-state Jost function,
//! its eligible resonances, and the norming constants of the bound states
//! that can be attached to them.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::direct::{
    jost_from_potential, jost_solution, regular_solution_real, JostFunction, PotentialJost,
    PotentialModel,
};
use crate::error::{Error, Result};
use crate::grid::Grid1D;
use crate::numerics::lowk::LowKModulus;
use crate::spectrum::PressureSpectrum;

/// Bisection for a sign change of `f` on `[a, b]`, to near machine precision.
pub fn bisect(f: impl Fn(f64) -> Result<f64>, mut a: f64, mut b: f64) -> Result<f64> {
    let mut fa = f(a)?;
    let fb = f(b)?;
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(Error::numerical(format!("no sign change on [{a}, {b}]")));
    }
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let fm = f(m)?;
        if fm == 0.0 {
            return Ok(m);
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    Ok(0.5 * (a + b))
}

/// `|F(k)| = k P∞/|P(k, ℓ)|` on the spectrum's grid.
pub fn modulus_of_jost(spectrum: &PressureSpectrum) -> Result<Vec<f64>> {
    let p_inf = spectrum.p_inf();
    if !(p_inf > 0.0) {
        return Err(Error::validation("P∞ must be positive"));
    }
    spectrum
        .kgrid()
        .points()
        .iter()
        .zip(spectrum.values())
        .map(|(&k, &p)| {
            if p > 0.0 {
                Ok(k * p_inf / p)
            } else {
                Err(Error::validation(format!(
                    "zero pressure at k = {k}: data is corrupt"
                )))
            }
        })
        .collect()
}

/// How far past `k_max` the outer-function tail is integrated numerically.
pub const OUTER_TAIL_EXTENSION: f64 = 10.0;

/// The no-bound-state Jost function sampled on the real k-grid.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OuterJost {
    pub kgrid: Grid1D,
    pub values: Vec<Complex64>,
    /// Parameter `σ` of the factor `k + iσ` split off near `k = 0`.
    pub sigma: f64,
}

/// Reconstructs `F̊(k) = |F(k)| e^{iφ(k)}` with
/// `φ(k) = (2k/π) PV∫₀^∞ log|t/F(t)| /(t² − k²) dt`.
///
/// The logarithmic behaviour at `t = 0` is removed analytically through a
/// factor `k + iσ` fitted to the low-k modulus; the remainder is integrated
/// by subtracting the singularity on the data grid, and past `k_max` through
/// the spectrum's fitted tail model.
pub fn outer_jost(spectrum: &PressureSpectrum) -> Result<OuterJost> {
    let kgrid = *spectrum.kgrid();
    let h = kgrid.step();
    if (kgrid.start() - h).abs() > 1e-9 * h {
        return Err(Error::validation(
            "outer-function reconstruction needs a k-grid of the form j·Δk, j = 1..n",
        ));
    }
    let modulus = modulus_of_jost(spectrum)?;
    let n = modulus.len();
    let k: Vec<f64> = kgrid.points();

    // |F|² ≈ F₀² + D²k² + O(k⁴) near the origin gives σ = F₀/D. Any σ > 0
    // removes the logarithm when F(0) ≠ 0; matching the curvature keeps the
    // remainder flat, which needs |F| to grow near 0.
    let sq: Vec<f64> = modulus.iter().map(|m| m * m).collect();
    let (intercept, slope) = match LowKModulus::fit(&k, &sq) {
        Some(fit) => {
            let [a0, a1, _] = fit.coefficients();
            (a0, a1)
        }
        None => (sq[0] - k[0] * k[0], 1.0),
    };
    let sigma = if intercept > 0.0 {
        (intercept / if slope > 0.0 { slope } else { 1.0 }).sqrt()
    } else {
        0.0
    };
    // A zero of F̊ this close to the origin is indistinguishable from F̊(0) = 0.
    let sigma = if sigma < 1e-6 * k[0] { 0.0 } else { sigma };

    // R(t) on nodes t_0 = 0, t_1..t_n.
    let mut r = vec![0.0; n + 1];
    for j in 0..n {
        let l = (k[j] / modulus[j]).ln();
        r[j + 1] = l - (k[j] / (k[j] * k[j] + sigma * sigma).sqrt()).ln();
    }
    r[0] = if n >= 2 {
        (4.0 * r[1] - r[2]) / 3.0
    } else {
        r[1]
    };
    let big_k = k[n - 1];

    // Past k_max, R follows the spectrum's tail model; it is integrated
    // numerically out to OUTER_TAIL_EXTENSION·k_max and by its leading
    // 1/t² term beyond.
    let r_model = |t: f64| {
        0.5 * (1.0 + spectrum.tail_model(t)).ln() + 0.5 * (sigma * sigma / (t * t)).ln_1p()
    };
    let far_k = OUTER_TAIL_EXTENSION * big_k;
    let n_ext = ((far_k - big_k) / h).ceil() as usize;
    let h_ext = (far_k - big_k) / n_ext as f64;
    let ext: Vec<(f64, f64)> = (0..=n_ext)
        .map(|m| {
            let t = big_k + m as f64 * h_ext;
            (t, r_model(t))
        })
        .collect();
    let c_far = 0.5 * (spectrum.tail_c() + sigma * sigma);
    let dr_model_k = (-3.0 * ext[0].1 + 4.0 * ext[1].1 - ext[2].1) / (2.0 * h_ext);

    let dr = |i: usize| -> f64 {
        if i == n {
            (3.0 * r[n] - 4.0 * r[n - 1] + r[n - 2]) / (2.0 * h)
        } else {
            (r[i + 1] - r[i - 1]) / (2.0 * h)
        }
    };

    let values: Vec<Complex64> = (1..=n)
        .into_par_iter()
        .map(|i| {
            let kk = i as f64 * h;
            let rk = r[i];
            let mut acc = 0.0;
            for (j, rj) in r.iter().enumerate().take(n + 1) {
                let w = if j == 0 || j == n { 0.5 } else { 1.0 };
                let t = j as f64 * h;
                let v = if j == i {
                    dr(i) / (2.0 * kk)
                } else {
                    (rj - rk) / (t * t - kk * kk)
                };
                acc += w * v;
            }
            let i1 = acc * h;
            // ∫_K^∞ (R(t) − R(k))/(t² − k²) dt, written with a subtraction
            // constant that is the model value near K (where the integrand
            // would otherwise blow up) and zero further down, where the model
            // is not meaningful.
            let rm_k = if 2.0 * kk > big_k { r_model(kk) } else { 0.0 };
            let mut near = 0.0;
            for (m, &(t, rm)) in ext.iter().enumerate() {
                let w = if m == 0 || m == n_ext { 0.5 } else { 1.0 };
                let v = if i == n && m == 0 {
                    dr_model_k / (2.0 * kk)
                } else {
                    (rm - rm_k) / (t * t - kk * kk)
                };
                near += w * v;
            }
            let far = c_far / (3.0 * far_k.powi(3))
                - rm_k * ((far_k + kk) / (far_k - kk)).ln() / (2.0 * kk);
            let mismatch = if i == n {
                0.0
            } else {
                (rm_k - rk) * ((big_k + kk) / (big_k - kk)).ln() / (2.0 * kk)
            };
            let tails = near * h_ext + far + mismatch;
            let phase = sigma.atan2(kk) + 2.0 * kk / PI * (i1 + tails);
            Complex64::from_polar(modulus[i - 1], phase)
        })
        .collect();
    Ok(OuterJost {
        kgrid,
        values,
        sigma,
    })
}

/// Which of the four mutually exclusive zero-energy configurations a duct falls into.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scenario {
    /// No bound state, `r′(ℓ) > 0`.
    NoBoundPositiveSlope,
    /// No bound state, `r′(ℓ) = 0` (so `F(0) = 0`).
    NoBoundZeroSlope,
    /// One bound state; `φ(0,·)` has one zero, `f(0,·)` none.
    OneBoundPhiZero,
    /// One bound state; both `φ(0,·)` and `f(0,·)` have one zero.
    OneBoundBothZero,
}

impl Scenario {
    pub fn label(&self) -> &'static str {
        match self {
            Scenario::NoBoundPositiveSlope => "no_bound_positive_slope",
            Scenario::NoBoundZeroSlope => "no_bound_zero_slope",
            Scenario::OneBoundPhiZero => "one_bound_phi_zero",
            Scenario::OneBoundBothZero => "one_bound_both_zero",
        }
    }

    pub fn bound_states(&self) -> usize {
        match self {
            Scenario::NoBoundPositiveSlope | Scenario::NoBoundZeroSlope => 0,
            _ => 1,
        }
    }
}

fn sign_changes(values: impl Iterator<Item = f64>) -> usize {
    let mut last = 0.0f64;
    let mut count = 0;
    for v in values {
        if v != 0.0 {
            if last != 0.0 && v.signum() != last.signum() {
                count += 1;
            }
            last = v;
        }
    }
    count
}

/// Zero-energy diagnostics of a potential.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZeroEnergyCounts {
    /// Sign changes of `φ(0,·)` on `[0, ∞)` including its straight extension.
    pub z_phi: usize,
    /// Sign changes of `f(0,·)` on `[0, ℓ)`.
    pub z_f: usize,
    /// `H(0) = −iF(0)`, equal to `r′(ℓ)/r(0)` for a duct.
    pub h0: f64,
}

pub fn zero_energy_counts<P: PotentialModel>(model: &P) -> Result<ZeroEnergyCounts> {
    let phi = regular_solution_real(model, 0.0)?;
    let last = phi.last().unwrap();
    let mut z_phi = sign_changes(phi.iter().map(|p| p[0]));
    // straight continuation φ(ℓ) + φ′(ℓ)(x − ℓ) crosses zero once iff the signs differ
    if last[0] != 0.0 && last[1] != 0.0 && last[0].signum() != last[1].signum() {
        z_phi += 1;
    }
    let f = jost_solution(model, Complex64::new(0.0, 0.0))?;
    let z_f = sign_changes(f[..f.len() - 1].iter().map(|(v, _)| v.re));
    let j = jost_from_potential(model, Complex64::new(0.0, 0.0))?;
    let h0 = (-Complex64::i() * j.value).re;
    Ok(ZeroEnergyCounts { z_phi, z_f, h0 })
}

/// Classifies a potential into one of the four zero-energy scenarios;
/// `zero_tol` decides when `H(0)` counts as zero.
pub fn classify_scenario<P: PotentialModel>(model: &P, zero_tol: f64) -> Result<Scenario> {
    let c = zero_energy_counts(model)?;
    let s = match (c.z_phi, c.z_f) {
        (0, 0) if c.h0.abs() <= zero_tol => Scenario::NoBoundZeroSlope,
        (0, 0) if c.h0 > 0.0 => Scenario::NoBoundPositiveSlope,
        (1, 0) => Scenario::OneBoundPhiZero,
        (1, 1) => Scenario::OneBoundBothZero,
        _ => {
            return Err(Error::numerical(format!(
                "zero counts Z_φ = {}, Z_f = {}, H(0) = {} fit no admissible scenario",
                c.z_phi, c.z_f, c.h0
            )))
        }
    };
    if s.bound_states() == 1 && c.h0 >= zero_tol {
        return Err(Error::numerical(format!(
            "bound-state scenario requires H(0) < 0, found {}",
            c.h0
        )));
    }
    Ok(s)
}

/// Eligible resonances of the no-bound-state Jost function and the
/// norming constants of the bound states they give rise to.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResonanceReport {
    pub m_count: usize,
    pub betas: Vec<f64>,
    pub g_sq: Vec<f64>,
    pub m_sq: Vec<f64>,
    /// Scenario of the no-bound-state candidate.
    pub scenario: Scenario,
    pub beta_max: f64,
    /// Set when no zero was bracketed but `g` is still rising towards zero at `beta_max`.
    pub unbracketed_zero_hint: bool,
}

/// Default search bound `5·max(1/ℓ, |cot θ̊|)`.
pub fn default_beta_max<P: PotentialModel>(model: &P) -> f64 {
    5.0 * (1.0 / model.length()).max(model.cot_theta().abs())
}

/// `g(β) = iF̊(−iβ)`, real for real potentials.
fn resonance_function<P: PotentialModel>(model: &P, beta: f64) -> Result<f64> {
    let j = jost_from_potential(model, Complex64::new(0.0, -beta))?;
    Ok((Complex64::i() * j.value).re)
}

/// Scans `g(β) = iF̊(−iβ)` on `(0, beta_max]` and keeps the zeros with `g′ > 0`.
pub fn find_eligible_resonances<P: PotentialModel>(
    model: &P,
    beta_max: f64,
) -> Result<ResonanceReport> {
    if !(beta_max > 0.0) {
        return Err(Error::validation("beta_max must be positive"));
    }
    let n = 2000;
    let step = beta_max / n as f64;
    let betas: Vec<f64> = (1..=n).map(|i| i as f64 * step).collect();
    let g = betas
        .par_iter()
        .map(|&b| resonance_function(model, b))
        .collect::<Result<Vec<_>>>()?;

    let mut found = Vec::new();
    for i in 1..n {
        if g[i - 1] < 0.0 && g[i] >= 0.0 {
            let b = bisect(|b| resonance_function(model, b), betas[i - 1], betas[i])?;
            found.push(b);
        }
    }
    let unbracketed_zero_hint = found.is_empty() && g[n - 1] < 0.0 && g[n - 1] > g[n - 2];

    let mut g_sq = Vec::new();
    let mut m_sq = Vec::new();
    for &b in &found {
        g_sq.push(gl_norming_constant(model, b)?);
        let fj = BoundStateJost::new(PotentialJost(model), b);
        m_sq.push(marchenko_norming_constant(&fj, b)?);
    }
    let scenario = classify_scenario(model, 1e-3 / model.length())?;
    Ok(ResonanceReport {
        m_count: found.len(),
        betas: found,
        g_sq,
        m_sq,
        scenario,
        beta_max,
        unbracketed_zero_hint,
    })
}

/// `Fⱼ(k) = (k − iβ)/(k + iβ) · F̊(k)`: moves the zero at `−iβ` to `+iβ`.
#[derive(Debug, Clone)]
pub struct BoundStateJost<J: JostFunction> {
    pub outer: J,
    pub beta: f64,
}

impl<J: JostFunction> BoundStateJost<J> {
    pub fn new(outer: J, beta: f64) -> Self {
        Self { outer, beta }
    }
}

impl<J: JostFunction> JostFunction for BoundStateJost<J> {
    fn eval(&self, k: Complex64) -> Complex64 {
        let ib = Complex64::new(0.0, self.beta);
        if (k + ib).norm() < 1e-9 * (1.0 + self.beta) {
            // removable singularity: F̊ vanishes at −iβ
            return -2.0 * ib * self.outer.derivative(-ib);
        }
        (k - ib) / (k + ib) * self.outer.eval(k)
    }
}

/// Gel'fand–Levitan norming constant from `φ̊(iβ, ℓ)` and `∫₀^ℓ φ̊(iβ, y)² dy`:
/// `g² = 2β/[φ̊(iβ,ℓ)² − 2β∫φ̊²]`.
pub fn gl_norming_from_values(phi_l: f64, int_phi_sq: f64, beta: f64) -> Result<f64> {
    let den = phi_l * phi_l - 2.0 * beta * int_phi_sq;
    if !(den > 0.0) || !(beta > 0.0) {
        return Err(Error::numerical(format!(
            "norming-constant denominator {den} is not positive: β = {beta} is not an eligible resonance"
        )));
    }
    Ok(2.0 * beta / den)
}

/// Gel'fand–Levitan norming constant `g²` for the potential `q̊` at `β`.
pub fn gl_norming_constant<P: PotentialModel>(model: &P, beta: f64) -> Result<f64> {
    let phi = regular_solution_real(model, -beta * beta)?;
    let last = phi.last().unwrap();
    gl_norming_from_values(last[0], last[2], beta)
}

/// Marchenko norming constant `m² = iFⱼ(−iβ)/Fⱼ′(iβ)`, derivative by a central
/// difference along the imaginary axis.
pub fn marchenko_norming_constant<J: JostFunction>(fj: &J, beta: f64) -> Result<f64> {
    if !(beta > 1e-8) {
        return Err(Error::validation(format!(
            "β = {beta} is too close to zero"
        )));
    }
    let d = 1e-4 * beta;
    let up = fj.eval(Complex64::new(0.0, beta + d));
    let dn = fj.eval(Complex64::new(0.0, beta - d));
    let deriv = (up - dn) / Complex64::new(0.0, 2.0 * d);
    let scale = fj.eval(Complex64::new(beta, 0.0)).norm() / beta;
    if deriv.norm() < 1e-10 * scale.max(1.0) {
        return Err(Error::numerical(
            "Jost derivative vanishes at iβ: zero is not simple",
        ));
    }
    let num = Complex64::i() * fj.eval(Complex64::new(0.0, -beta));
    Ok((num / deriv).re)
}

/// `g² = −4β² m²/Fⱼ(−iβ)²`.
pub fn gl_from_marchenko<J: JostFunction>(fj: &J, beta: f64, m_sq: f64) -> f64 {
    let f = fj.eval(Complex64::new(0.0, -beta));
    (-4.0 * beta * beta * m_sq / (f * f)).re
}

/// `S(k) = −F(−k)/F(k)`.
pub fn scattering_matrix<J: JostFunction>(jost: &J, k: &[f64]) -> Result<Vec<Complex64>> {
    k.iter()
        .map(|&k| {
            let f = jost.eval(Complex64::new(k, 0.0));
            if f.norm() == 0.0 {
                return Err(Error::numerical(format!(
                    "Jost function vanishes at k = {k}"
                )));
            }
            Ok(-jost.eval(Complex64::new(-k, 0.0)) / f)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profile::PotentialProfile;

    fn free(cot: f64) -> PotentialProfile {
        let g = Grid1D::spanning(0.0, 16.0, 161).unwrap();
        PotentialProfile::new(g, vec![0.0; 161], cot).unwrap()
    }

    fn linear_duct_spectrum(a: f64) -> PressureSpectrum {
        let g = Grid1D::new(0.003, 0.003, 1000).unwrap();
        let v = g
            .points()
            .iter()
            .map(|k| 20.0 * k / (k * k + a * a).sqrt())
            .collect();
        PressureSpectrum::from_samples(g, v, Some(16.0)).unwrap()
    }

    #[test]
    fn modulus_of_linear_duct() {
        let s = linear_duct_spectrum(0.05);
        let m = modulus_of_jost(&s).unwrap();
        for (k, v) in s.kgrid().points().iter().zip(&m) {
            assert!((v - (k * k + 0.0025f64).sqrt()).abs() < 1e-6 * v);
        }
        let flat = PressureSpectrum::from_samples(*s.kgrid(), vec![7.0; 1000], None).unwrap();
        let m = modulus_of_jost(&flat).unwrap();
        assert!(m
            .iter()
            .zip(flat.kgrid().points())
            .all(|(v, k)| (v - k).abs() < 1e-12));
    }

    #[test]
    fn outer_function_of_linear_duct() {
        let a = 0.05;
        let s = linear_duct_spectrum(a);
        let o = outer_jost(&s).unwrap();
        assert!((o.sigma - a).abs() < 1e-6);
        for (k, f) in s.kgrid().points().iter().zip(&o.values) {
            let e = Complex64::new(*k, a);
            assert!((f - e).norm() < 1e-6 * e.norm(), "k={k}: {f}");
        }
    }

    #[test]
    fn outer_function_of_flat_spectrum_is_k() {
        let g = Grid1D::new(0.003, 0.003, 1000).unwrap();
        let s = PressureSpectrum::from_samples(g, vec![3.0; 1000], None).unwrap();
        let o = outer_jost(&s).unwrap();
        for (k, f) in g.points().iter().zip(&o.values) {
            assert!((f - k).norm() < 1e-9 * k);
        }
    }

    #[test]
    fn free_potential_resonance() {
        let a = 0.05;
        let rep = find_eligible_resonances(&free(-a), 5.0 * 0.0625).unwrap();
        assert_eq!(rep.m_count, 1);
        assert!((rep.betas[0] - a).abs() < 1e-8);
        assert!((rep.g_sq[0] - 2.0 * a).abs() < 1e-6);
        assert!((rep.m_sq[0] - 2.0 * a).abs() < 1e-5);
        assert_eq!(rep.scenario, Scenario::NoBoundPositiveSlope);
    }

    #[test]
    fn bound_state_jost_of_free_potential() {
        let a = 0.05;
        let outer = |k: Complex64| k + Complex64::new(0.0, a);
        let f1 = BoundStateJost::new(outer, a);
        for k in [0.3, 1.0, 2.0] {
            let e = Complex64::new(k, -a);
            assert!((f1.eval(Complex64::new(k, 0.0)) - e).norm() < 1e-12);
        }
        let m2 = marchenko_norming_constant(&f1, a).unwrap();
        assert!((m2 - 2.0 * a).abs() < 1e-8);
        assert!((gl_from_marchenko(&f1, a, m2) - 2.0 * a).abs() < 1e-8);
        // β → 0⁺ leaves F̊ unchanged away from k = 0
        let f0 = BoundStateJost::new(outer, 1e-12);
        assert!(
            (f0.eval(Complex64::new(0.7, 0.0)) - outer(Complex64::new(0.7, 0.0))).norm() < 1e-10
        );
        assert!(marchenko_norming_constant(&f0, 1e-12).is_err());
    }

    #[test]
    fn bound_state_factor_is_unimodular() {
        let outer = |k: Complex64| k * k + Complex64::new(0.3, 0.1) * k + 1.0;
        let f1 = BoundStateJost::new(outer, 0.2);
        for i in 0..100 {
            let k = Complex64::new(-5.0 + 0.1 * i as f64 + 0.013, 0.0);
            assert!((f1.eval(k).norm() - outer(k).norm()).abs() < 1e-12 * outer(k).norm());
        }
    }

    #[test]
    fn gl_norming_guard() {
        assert!(gl_norming_from_values(1.0, 1.0, 1.0).is_err());
        assert!((gl_norming_from_values(1.0, 0.25, 1.0).unwrap() - 4.0).abs() < 1e-15);
    }

    #[test]
    fn scattering_matrix_examples() {
        let a = 0.3;
        let f = |k: Complex64| k + Complex64::new(0.0, a);
        let k: Vec<f64> = (1..10).map(|i| i as f64 * 0.2).collect();
        let s = scattering_matrix(&f, &k).unwrap();
        for (k, s) in k.iter().zip(&s) {
            let e = Complex64::new(*k, -a) / Complex64::new(*k, a);
            assert!((s - e).norm() < 1e-14);
        }
        let s = scattering_matrix(&|k: Complex64| k, &k).unwrap();
        assert!(s.iter().all(|v| (v - 1.0).norm() < 1e-14));
    }

    #[test]
    fn scenarios_of_linear_ducts() {
        let a = 0.05;
        // r̊ = 1 + ax: cot θ = −a, q = 0
        assert_eq!(
            classify_scenario(&free(-a), 1e-6).unwrap(),
            Scenario::NoBoundPositiveSlope
        );
        // r₁ = 1 − ax: cot θ = +a
        assert_eq!(
            classify_scenario(&free(a), 1e-6).unwrap(),
            Scenario::OneBoundPhiZero
        );
        // uniform
        assert_eq!(
            classify_scenario(&free(0.0), 1e-6).unwrap(),
            Scenario::NoBoundZeroSlope
        );
    }
}
