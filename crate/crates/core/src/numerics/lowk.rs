//! Low-wavenumber models of the Jost function.
//!
//! `F(k)` is entire and varies on the scale `1/ℓ`, but quantities built from
//! it — `|P|²/P∞² = k²/|F|²` and `S = F*/F` — change on the much shorter scale
//! `|F(0)|` near the origin when the lip slope is small. Fitting `F` (or
//! `|F|²`) by a short polynomial on the first few samples lets that region
//! be integrated on a fine sub-grid instead of the data grid.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Samples used for the fit; the models are used on `[0, LOW_K_NODES·Δk]`.
pub const LOW_K_NODES: usize = 16;

/// The taper is 1 on `[0, TAPER_START·Δk]` and rolls off to 0 at `LOW_K_NODES·Δk`.
const TAPER_START: usize = 4;

/// Simpson sub-intervals per panel of the graded quadrature.
const PANEL_SUBDIVISIONS: usize = 32;

/// Least squares in the scaled variable `u = (k/k_end)²`; `powers(u)` gives one row.
fn least_squares(rows: Vec<Vec<f64>>, rhs: Vec<f64>) -> Option<Vec<f64>> {
    let m = rows.len();
    let n = rows.first()?.len();
    let a = DMatrix::from_fn(m, n, |i, j| rows[i][j]);
    let svd = a.svd(true, true);
    let x = svd.solve(&DVector::from_vec(rhs), 1e-14).ok()?;
    x.iter()
        .all(|v| v.is_finite())
        .then(|| x.iter().copied().collect())
}

fn scaled_powers(k: f64, k_end: f64, n: usize) -> Vec<f64> {
    let u = (k / k_end).powi(2);
    (0..n)
        .scan(1.0, |p, _| {
            let v = *p;
            *p *= u;
            Some(v)
        })
        .collect()
}

/// Undoes the scaling: coefficient `j` of `u^j` becomes that of `k^{2j}`.
fn unscale(c: &[f64], k_end: f64) -> [f64; 3] {
    let s = k_end * k_end;
    [c[0], c[1] / s, c[2] / (s * s)]
}

fn on_interval(k_end: f64) -> impl Iterator<Item = f64> {
    let n = LOW_K_NODES * PANEL_SUBDIVISIONS;
    (0..=n).map(move |i| k_end * i as f64 / n as f64)
}

/// `|F(k)|² ≈ a₀ + a₁k² + a₂k⁴` near the origin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LowKModulus {
    coeffs: [f64; 3],
    k_end: f64,
}

impl LowKModulus {
    /// Fits the first [`LOW_K_NODES`] samples of `|F|²` on `k_j = j·Δk`.
    /// Returns `None` if there are too few samples or the fit is not
    /// positive on the fitted interval.
    pub fn fit(k: &[f64], modulus_sq: &[f64]) -> Option<Self> {
        if k.len() < 2 * LOW_K_NODES || modulus_sq.len() < LOW_K_NODES {
            return None;
        }
        let k_end = k[LOW_K_NODES - 1];
        let rows = k[..LOW_K_NODES]
            .iter()
            .map(|&k| scaled_powers(k, k_end, 3))
            .collect();
        let c = unscale(
            &least_squares(rows, modulus_sq[..LOW_K_NODES].to_vec())?,
            k_end,
        );
        // A dip narrower than a thousandth of Δk carries no weight: F(0) = 0.
        let a0 = if c[0] > (1e-3 * k[0]).powi(2) * c[1].abs() {
            c[0]
        } else {
            0.0
        };
        let model = Self {
            coeffs: [a0, c[1], c[2]],
            k_end,
        };
        on_interval(k_end)
            .skip(1)
            .all(|k| model.eval(k) > 0.0)
            .then_some(model)
    }

    /// `[a₀, a₁, a₂]`.
    pub fn coefficients(&self) -> [f64; 3] {
        self.coeffs
    }

    pub fn eval(&self, k: f64) -> f64 {
        let k2 = k * k;
        self.coeffs[0] + k2 * (self.coeffs[1] + k2 * self.coeffs[2])
    }

    /// Modelled `k²/|F|² − 1`; at `k = 0` the limit `−1` (or `1/a₁ − 1` when `F(0) = 0`).
    pub fn pressure_excess(&self, k: f64) -> f64 {
        if k == 0.0 {
            return if self.coeffs[0] > 0.0 {
                -1.0
            } else {
                1.0 / self.coeffs[1] - 1.0
            };
        }
        k * k / self.eval(k) - 1.0
    }

    /// Width `√(a₀/a₁)` of the dip at the origin (0 when `F(0) = 0`).
    pub fn width(&self) -> f64 {
        if self.coeffs[0] > 0.0 && self.coeffs[1] > 0.0 {
            (self.coeffs[0] / self.coeffs[1]).sqrt()
        } else {
            0.0
        }
    }

    pub fn k_end(&self) -> f64 {
        self.k_end
    }
}

/// `F(k) ≈ i(b₀ + b₂k² + b₄k⁴) + k(c₁ + c₃k² + c₅k⁴)` near the origin (real
/// part odd, imaginary part even, as `F(−k) = −F(k)*` requires).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LowKJost {
    even: [f64; 3],
    odd: [f64; 3],
    k_end: f64,
}

impl LowKJost {
    /// Fits the first [`LOW_K_NODES`] samples of `F` on `k_j = j·Δk`.
    /// Returns `None` if there are too few samples or the model vanishes on
    /// the fitted interval.
    pub fn fit(k: &[f64], f: &[Complex64]) -> Option<Self> {
        if k.len() < 2 * LOW_K_NODES || f.len() < LOW_K_NODES {
            return None;
        }
        let k_end = k[LOW_K_NODES - 1];
        let ks = &k[..LOW_K_NODES];
        let rows = || ks.iter().map(|&k| scaled_powers(k, k_end, 3)).collect();
        let even = least_squares(rows(), f[..LOW_K_NODES].iter().map(|v| v.im).collect())?;
        let odd = least_squares(rows(), ks.iter().zip(f).map(|(k, v)| v.re / k).collect())?;
        let model = Self {
            even: unscale(&even, k_end),
            odd: unscale(&odd, k_end),
            k_end,
        };
        on_interval(k_end)
            .all(|k| model.eval(k).norm() > 0.0)
            .then_some(model)
    }

    pub fn eval(&self, k: f64) -> Complex64 {
        let k2 = k * k;
        let poly = |c: &[f64; 3]| c[0] + k2 * (c[1] + k2 * c[2]);
        Complex64::new(k * poly(&self.odd), poly(&self.even))
    }

    /// Modelled `S(k) = F(k)*/F(k)`.
    pub fn scattering(&self, k: f64) -> Complex64 {
        let f = self.eval(k);
        f.conj() / f
    }

    /// Scale `|F(0)/F′(0)|` on which `S` turns over at the origin.
    pub fn width(&self) -> f64 {
        if self.odd[0] != 0.0 {
            (self.even[0] / self.odd[0]).abs()
        } else {
            0.0
        }
    }

    pub fn k_end(&self) -> f64 {
        self.k_end
    }
}

/// Cut-off for splitting a low-k model off the data: 1 on
/// `[0, TAPER_START·Δk]`, a raised-cosine roll-off to 0 at `LOW_K_NODES·Δk`.
///
/// The narrow structure at the origin lies entirely on the plateau, and the
/// roll-off is long and smooth, so both the tapered model and the remainder
/// can be integrated without a kink in either.
pub fn taper(k: f64, dk: f64) -> f64 {
    let start = TAPER_START as f64 * dk;
    let end = LOW_K_NODES as f64 * dk;
    if k <= start {
        1.0
    } else if k >= end {
        0.0
    } else {
        0.5 * (1.0 + (PI * (k - start) / (end - start)).cos())
    }
}

/// Composite Simpson nodes and weights on `[0, LOW_K_NODES·Δk]`, on panels
/// `[0, s], [s, 2s], [2s, 4s], …` with `s = min(width, Δk)/4`, doubling up
/// to a width of `Δk`, so that a feature of the given width at the origin is
/// resolved.
pub fn refined_nodes(dk: f64, width: f64) -> Vec<(f64, f64)> {
    let end = LOW_K_NODES as f64 * dk;
    let first = if width > 0.0 { width.min(dk) } else { dk } / 4.0;
    let mut edges = vec![0.0];
    let mut e = first;
    while e < end {
        edges.push(e);
        e += e.min(dk);
    }
    edges.push(end);
    let mut nodes = Vec::with_capacity((edges.len() - 1) * (PANEL_SUBDIVISIONS + 1));
    for pair in edges.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        let step = (b - a) / PANEL_SUBDIVISIONS as f64;
        for i in 0..=PANEL_SUBDIVISIONS {
            let w = if i == 0 || i == PANEL_SUBDIVISIONS {
                1.0
            } else if i % 2 == 1 {
                4.0
            } else {
                2.0
            };
            nodes.push((a + i as f64 * step, w * step / 3.0));
        }
    }
    nodes
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid() -> Vec<f64> {
        (1..=40).map(|j| 0.003 * j as f64).collect()
    }

    #[test]
    fn modulus_fit_is_exact_for_quadratics_in_k_squared() {
        let k = grid();
        let m: Vec<f64> = k
            .iter()
            .map(|k| 1e-5 + 0.9 * k * k + 0.2 * k.powi(4))
            .collect();
        let fit = LowKModulus::fit(&k, &m).unwrap();
        for kk in [0.0f64, 0.001, 0.01, 0.02] {
            let want = 1e-5 + 0.9 * kk * kk + 0.2 * kk.powi(4);
            assert!((fit.eval(kk) - want).abs() < 1e-12);
        }
        assert_eq!(fit.pressure_excess(0.0), -1.0);
    }

    #[test]
    fn jost_fit_reproduces_linear_duct() {
        let k = grid();
        let a = 0.002;
        let f: Vec<Complex64> = k.iter().map(|&k| Complex64::new(k, a)).collect();
        let fit = LowKJost::fit(&k, &f).unwrap();
        for kk in [0.0, 0.0005, 0.01] {
            assert!((fit.eval(kk) - Complex64::new(kk, a)).norm() < 1e-12);
        }
        assert!((fit.scattering(0.0) + 1.0).norm() < 1e-12);
    }

    #[test]
    fn simpson_nodes_integrate_cubics() {
        let dk = 0.003;
        let kend = dk * LOW_K_NODES as f64;
        let s: f64 = refined_nodes(dk, 1e-4)
            .iter()
            .map(|(k, w)| w * k.powi(3))
            .sum();
        assert!((s - kend.powi(4) / 4.0).abs() < 1e-15);
    }

    #[test]
    fn refined_nodes_resolve_narrow_dips() {
        let dk = 0.003;
        let kend = dk * LOW_K_NODES as f64;
        for a in [0.05, 1e-3, 1e-5] {
            let s: f64 = refined_nodes(dk, a)
                .iter()
                .map(|(k, w)| w * a / (k * k + a * a))
                .sum();
            let exact = (kend / a).atan();
            assert!((s / exact - 1.0).abs() < 1e-7, "a={a}: {s} vs {exact}");
        }
    }

    #[test]
    fn taper_is_flat_then_rolls_off() {
        let dk = 0.003;
        assert_eq!(taper(0.0, dk), 1.0);
        assert_eq!(taper(4.0 * dk, dk), 1.0);
        assert!((taper(10.0 * dk, dk) - 0.5).abs() < 1e-12);
        assert_eq!(taper(LOW_K_NODES as f64 * dk, dk), 0.0);
    }
}
