//! Time-domain inversion: the cosine-transform kernel `B(t)` of the pressure
//! data and layer stripping of the wave equation `[r² w_x]_x = r² w_tt`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::consts::PhysicalConstants;
use crate::error::{Error, Result};
use crate::grid::Grid1D;
use crate::numerics::lowk::{refined_nodes, taper, LowKModulus, LOW_K_NODES};
use crate::numerics::quad::{cosine_tail_inverse_square, cumulative_trapezoid};
use crate::profile::RadiusProfile;
use crate::spectrum::PressureSpectrum;

/// How far past `k_max` the tail model is integrated numerically.
pub const TAIL_EXTENSION: f64 = 10.0;

/// `B(t)` sampled on `t_j = j·h`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BKernel {
    pub tgrid: Grid1D,
    pub values: Vec<f64>,
}

impl BKernel {
    pub fn step(&self) -> f64 {
        self.tgrid.step()
    }

    /// `B(j·h)`.
    pub fn at(&self, j: usize) -> f64 {
        self.values[j]
    }
}

/// `B(t) = (2/π)∫₀^∞ [|P|²/P∞² − 1] cos kt dk` at `t = j·h`, `j = 0..count`.
///
/// The data band is integrated by the trapezoid rule (the `k = 0` node is
/// filled by even extrapolation), after splitting off a tapered low-k model
/// of `|F|²` that is integrated on a fine sub-grid. Beyond `k_max` the spectrum's tail model is
/// integrated numerically out to [`TAIL_EXTENSION`]`·k_max` and its leading
/// `(C + D cos 2kℓ)/k²` term analytically from there on.
pub fn b_kernel(spectrum: &PressureSpectrum, h: f64, count: usize) -> Result<BKernel> {
    let kgrid = spectrum.kgrid();
    let dk = kgrid.step();
    if (kgrid.start() - dk).abs() > 1e-9 * dk {
        return Err(Error::validation(
            "B kernel needs a k-grid of the form j·Δk, j = 1..n",
        ));
    }
    let p_inf = spectrum.p_inf();
    let n = kgrid.count();
    let mut g = Vec::with_capacity(n + 1);
    g.push(0.0);
    for v in spectrum.values() {
        g.push((v / p_inf).powi(2) - 1.0);
    }
    g[0] = if n >= 2 {
        (4.0 * g[1] - g[2]) / 3.0
    } else {
        g[1]
    };

    // Near k = 0 the integrand k²/|F|² − 1 can change on a scale shorter
    // than Δk; a fitted |F|², flat near 0 and tapered to zero at LOW_K_NODES·Δk, carries that
    // part on a fine sub-grid and the trapezoid rule only sees the smooth remainder.
    let points = kgrid.points();
    let modulus_sq: Vec<f64> = points
        .iter()
        .zip(spectrum.values())
        .map(|(k, v)| (k * p_inf / v).powi(2))
        .collect();
    let mut refined = Vec::new();
    if let Some(low) = LowKModulus::fit(&points, &modulus_sq) {
        let model = |k: f64| taper(k, dk) * low.pressure_excess(k);
        // The taper is 1 at k = 0, so the remainder there is the (smooth,
        // untapered) fit residual, extrapolated evenly.
        let residual = |i: usize| g[i] - low.pressure_excess(i as f64 * dk);
        let r0 = (4.0 * residual(1) - residual(2)) / 3.0;
        for (i, gi) in g.iter_mut().enumerate().take(LOW_K_NODES).skip(1) {
            *gi -= model(i as f64 * dk);
        }
        g[0] = r0;
        refined = refined_nodes(dk, low.width())
            .into_iter()
            .map(|(k, w)| (k, w * model(k)))
            .collect();
    }

    let kmax = kgrid.end();
    let (c, d) = (spectrum.tail_c(), spectrum.tail_d());
    let ell = spectrum.ell().unwrap_or(0.0);
    let k_far = TAIL_EXTENSION * kmax;
    let n_ext = ((k_far - kmax) / dk).ceil() as usize;
    let dk_ext = (k_far - kmax) / n_ext as f64;
    let ext: Vec<f64> = (0..=n_ext)
        .map(|i| spectrum.tail_model(kmax + i as f64 * dk_ext))
        .collect();

    let tgrid = Grid1D::new(0.0, h, count)?;
    let values = (0..count)
        .into_par_iter()
        .map(|j| {
            let t = j as f64 * h;
            let mut acc = 0.5 * (g[0] + g[n] * (kmax * t).cos());
            for (i, gi) in g.iter().enumerate().take(n).skip(1) {
                acc += gi * (i as f64 * dk * t).cos();
            }
            acc += refined
                .iter()
                .map(|(k, wg)| wg * (k * t).cos())
                .sum::<f64>()
                / dk;
            let mut near = 0.5 * (ext[0] * (kmax * t).cos() + ext[n_ext] * (k_far * t).cos());
            for (i, e) in ext.iter().enumerate().take(n_ext).skip(1) {
                near += e * ((kmax + i as f64 * dk_ext) * t).cos();
            }
            let mut far = c * cosine_tail_inverse_square(k_far, t);
            if d != 0.0 {
                far += 0.5
                    * d
                    * (cosine_tail_inverse_square(k_far, 2.0 * ell + t)
                        + cosine_tail_inverse_square(k_far, 2.0 * ell - t));
            }
            2.0 / PI * (acc * dk + near * dk_ext + far)
        })
        .collect();
    Ok(BKernel { tgrid, values })
}

/// Layer stripping on the characteristic grid `Δx = Δt = h`, with `h` the
/// kernel step and `layers = ℓ/h`. Returns `r(xᵢ)/r(0)` for `i = 0..=layers`.
///
/// `w(0,t) = 1 + ∫₀ᵗ B`, `w_x(0,t) = 0`; each new layer comes from the
/// centred scheme
/// `w_{i+1}^j (1 + hζ′ᵢ) = w_i^{j+1} + w_i^{j−1} − w_{i−1}^j (1 − hζ′ᵢ)`,
/// `ζ = log r`, with `ζ′ᵢ` taken from the diagonal samples `w(x,x) = r(0)/r(x)`
/// of layers `i−1` and `i+1`; the diagonal equation is solved by Newton's method.
pub fn downward_continuation(b: &BKernel, layers: usize) -> Result<Vec<f64>> {
    let need = 2 * layers + 1;
    if b.values.len() < need {
        return Err(Error::validation(format!(
            "B kernel has {} samples, layer stripping to depth {layers} needs {need}",
            b.values.len()
        )));
    }
    if layers < 1 {
        return Err(Error::validation("need at least one layer"));
    }
    let h = b.step();
    let top = 2 * layers;
    let mut prev = cumulative_trapezoid(&b.values[..need], h);
    prev.iter_mut().for_each(|v| *v += 1.0);
    let mut ratio = Vec::with_capacity(layers + 1);
    ratio.push(1.0);

    // first layer from the Neumann condition at x = 0
    let mut cur = vec![f64::NAN; need];
    for j in 1..top {
        cur[j] = 0.5 * (prev[j + 1] + prev[j - 1]);
    }
    check_diagonal(cur[1], 1)?;
    ratio.push(1.0 / cur[1]);

    for i in 1..layers {
        let s = cur[i + 2] + cur[i];
        let w = prev[i + 1];
        let log_prev = prev[i - 1].ln();
        let mut d = s - w;
        check_diagonal(d, i + 1)?;
        for _ in 0..50 {
            let c = 0.5 * (log_prev - d.ln());
            let f = d * (1.0 + c) - s + w * (1.0 - c);
            let df = 0.5 + c + w / (2.0 * d);
            let step = f / df;
            d -= step;
            check_diagonal(d, i + 1)?;
            if step.abs() <= 1e-15 * d.abs() {
                break;
            }
        }
        let c = 0.5 * (log_prev - d.ln());
        let mut next = vec![f64::NAN; need];
        next[i + 1] = d;
        for j in i + 2..top - i {
            next[j] = (cur[j + 1] + cur[j - 1] - prev[j] * (1.0 - c)) / (1.0 + c);
        }
        ratio.push(1.0 / d);
        prev = std::mem::replace(&mut cur, next);
    }
    Ok(ratio)
}

fn check_diagonal(d: f64, layer: usize) -> Result<()> {
    if !(d > 0.0 && d.is_finite()) {
        return Err(Error::numerical(format!(
            "diagonal trace w(x,x) = {d} at layer {layer}: reconstruction left the class of admissible ducts \
             (data inconsistent with r′(ℓ) ≥ 0 or too noisy)"
        )));
    }
    Ok(())
}

/// Time-domain reconstruction with its lip-slope diagnostic.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeDomainResult {
    pub radius: RadiusProfile,
    /// Set when the recovered slope at the lips is negative beyond round-off,
    /// contradicting the `r′(ℓ) ≥ 0` hypothesis of the method.
    pub negative_lip_slope: bool,
}

/// `r(x) = [r(x)/r(0)]·√(cμ/(πP∞))/√(r(ℓ)/r(0))`.
pub fn rescale_radius(
    normalized: &[f64],
    ell: f64,
    p_inf: f64,
    consts: &PhysicalConstants,
) -> Result<TimeDomainResult> {
    let n = normalized.len();
    if n < 3 {
        return Err(Error::validation("need at least 3 samples to rescale"));
    }
    let lip = normalized[n - 1];
    if !(lip > 0.0) {
        return Err(Error::numerical(format!(
            "non-positive lip ratio r(ℓ)/r(0) = {lip}"
        )));
    }
    let scale = (consts.c_mu() / (PI * p_inf)).sqrt() / lip.sqrt();
    let values: Vec<f64> = normalized.iter().map(|v| v * scale).collect();
    let grid = Grid1D::spanning(0.0, ell, n)?;
    let radius = RadiusProfile::from_samples(grid, values)?;
    let negative_lip_slope = radius.slope_l() < -1e-6 * radius.r_l() / grid.step();
    Ok(TimeDomainResult {
        radius,
        negative_lip_slope,
    })
}

/// Full time-domain inversion on `[0, ell]` with `layers` depth steps.
pub fn invert(
    spectrum: &PressureSpectrum,
    ell: f64,
    layers: usize,
    consts: &PhysicalConstants,
) -> Result<TimeDomainResult> {
    let h = ell / layers as f64;
    let b = b_kernel(spectrum, h, 2 * layers + 1)?;
    let ratio = downward_continuation(&b, layers)?;
    rescale_radius(&ratio, ell, spectrum.p_inf(), consts)
}

/// Default relative curvature threshold for [`detect_length`].
pub const LENGTH_THRESHOLD: f64 = 0.03;

/// Fraction of the search interval at its far end in which a detected
/// length is rejected as undetermined.
const LENGTH_GUARD: f64 = 0.05;

/// Estimates an unknown duct length: reconstruct `r/r(0)` on the enlarged
/// interval `(0, ell_max)` and return the point past which `r″/r(0)` stays
/// below `threshold` times its maximum.
pub fn detect_length(
    spectrum: &PressureSpectrum,
    ell_max: f64,
    layers: usize,
    threshold: f64,
) -> Result<f64> {
    let h = ell_max / layers as f64;
    let b = b_kernel(spectrum, h, 2 * layers + 1)?;
    let ratio = downward_continuation(&b, layers)?;
    let d2: Vec<f64> = (1..layers)
        .map(|i| ((ratio[i + 1] - 2.0 * ratio[i] + ratio[i - 1]) / (h * h)).abs())
        .collect();
    let peak = d2.iter().copied().fold(0.0, f64::max);
    if peak == 0.0 {
        return Err(Error::numerical(
            "reconstructed profile has no curvature; length is undetermined",
        ));
    }
    let last = d2.iter().rposition(|v| *v > threshold * peak).unwrap();
    // d2[m] belongs to node m + 1; the jump in curvature lies within one step after it
    let ell = ((last + 1) as f64 + 0.5) * h;
    if ell > ell_max - LENGTH_GUARD * ell_max {
        return Err(Error::numerical(format!(
            "curvature persists to the end of the search interval (0, {ell_max}); length is undetermined"
        )));
    }
    Ok(ell)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn exp_kernel(a: f64, h: f64, count: usize) -> BKernel {
        let tgrid = Grid1D::new(0.0, h, count).unwrap();
        let values = tgrid.points().iter().map(|t| -a * (-a * t).exp()).collect();
        BKernel { tgrid, values }
    }

    #[test]
    fn flat_spectrum_has_zero_kernel() {
        let g = Grid1D::new(0.003, 0.003, 1000).unwrap();
        let s = PressureSpectrum::from_samples(g, vec![5.0; 1000], Some(16.0)).unwrap();
        let b = b_kernel(&s, 0.08, 401).unwrap();
        assert!(b.values.iter().all(|v| v.abs() < 1e-12));
        let ratio = downward_continuation(&b, 200).unwrap();
        assert!(ratio.iter().all(|v| (v - 1.0).abs() < 1e-12));
    }

    #[test]
    fn linear_duct_kernel_is_exponential() {
        // a = 0.0008 puts the dip of k²/(k² + a²) inside the first Δk.
        for a in [0.05, 0.0008] {
            let g = Grid1D::new(0.003, 0.003, 1000).unwrap();
            let v = g
                .points()
                .iter()
                .map(|k| 10.0 * k / (k * k + a * a).sqrt())
                .collect();
            let s = PressureSpectrum::from_samples(g, v, Some(16.0)).unwrap();
            let b = b_kernel(&s, 0.08, 401).unwrap();
            for (t, v) in b.tgrid.points().iter().zip(&b.values) {
                assert!((v + a * (-a * t).exp()).abs() < 2e-7, "a={a}, t={t}: {v}");
            }
        }
    }

    #[test]
    fn exponential_kernel_gives_linear_duct() {
        let a = 0.05;
        let err = |layers: usize| {
            let h = 16.0 / layers as f64;
            let ratio = downward_continuation(&exp_kernel(a, h, 2 * layers + 1), layers).unwrap();
            ratio
                .iter()
                .enumerate()
                .map(|(i, r)| (r - (1.0 + a * i as f64 * h)).abs())
                .fold(0.0, f64::max)
        };
        let (e1, e2) = (err(100), err(200));
        assert!(e2 < 1e-4, "{e2}");
        let order = (e1 / e2).log2();
        assert!(order > 1.8, "observed order {order}");
    }

    #[test]
    fn rescaled_radius_satisfies_plateau_identity() {
        let consts = PhysicalConstants::default();
        let ratio: Vec<f64> = (0..=100).map(|i| 1.0 + 0.008 * i as f64).collect();
        let res = rescale_radius(&ratio, 16.0, 30.0, &consts).unwrap();
        let r = &res.radius;
        assert!((PI * r.r0() * r.r_l() * 30.0 - consts.c_mu()).abs() < 1e-12 * consts.c_mu());
        assert!(!res.negative_lip_slope);
        let flat = rescale_radius(&[1.0; 5], 1.0, 30.0, &consts).unwrap();
        let expect = (consts.c_mu() / (PI * 30.0)).sqrt();
        assert!(flat
            .radius
            .values()
            .iter()
            .all(|v| (v - expect).abs() < 1e-14));
        assert!(rescale_radius(&[1.0, 1.0, -0.1], 1.0, 30.0, &consts).is_err());
    }
}
