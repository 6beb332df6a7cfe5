//! Sampled absolute pressure at the open end and its high-frequency plateau.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::Grid1D;

/// Fraction of the highest-k samples used to fit the plateau and tail.
pub const TAIL_FRACTION: f64 = 0.25;

/// `|P(k, ℓ)|` on a uniform k-grid over `(0, k_max]` with a fitted tail model.
///
/// The tail is fitted in the reciprocal form `P∞²/|P|² = |F(k)|²/k²`, which is
/// exactly `1 + cot²θ/k²` for a straight duct. Writing
/// `P∞²/|P|² = 1 − N(k)/k²`, the numerator
/// `N(k) = C + D cos 2kℓ + S sin 2kℓ/k + (E + G cos 2kℓ)/k²`
/// carries the large-k expansion; to leading order
/// `|P|²/P∞² ≈ 1 + (C + D cos 2kℓ)/k²`. The oscillatory terms are fitted only
/// when the duct length is known.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PressureSpectrum {
    kgrid: Grid1D,
    values: Vec<f64>,
    p_inf: f64,
    tail: TailCoefficients,
    ell: Option<f64>,
}

/// Coefficients of the tail numerator `N(k)`; see [`PressureSpectrum`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct TailCoefficients {
    pub c: f64,
    pub d: f64,
    pub s: f64,
    pub e: f64,
    pub g: f64,
}

impl TailCoefficients {
    /// `N(k)` for a duct of length `ell` (oscillatory terms vanish without one).
    pub fn numerator(&self, k: f64, ell: Option<f64>) -> f64 {
        let (cs, sn) = ell.map_or((0.0, 0.0), |l| (2.0 * k * l).cos_sin());
        self.c + self.d * cs + self.s * sn / k + (self.e + self.g * cs) / (k * k)
    }
}

trait CosSin {
    fn cos_sin(self) -> (f64, f64);
}

impl CosSin for f64 {
    fn cos_sin(self) -> (f64, f64) {
        let (s, c) = self.sin_cos();
        (c, s)
    }
}

/// Least-squares fit of `1/|P|² = P∞⁻²[1 − N(k)/k²]` over the top of the band.
/// Returns `(P∞², N)`; when `p_inf` is given the plateau is held fixed.
fn fit_tail(
    k: &[f64],
    p: &[f64],
    ell: Option<f64>,
    p_inf: Option<f64>,
) -> Result<(f64, TailCoefficients)> {
    let n = k.len();
    let start = n - ((n as f64 * TAIL_FRACTION).ceil() as usize).clamp(3.min(n), n);
    let rows = n - start;
    type Column = Box<dyn Fn(f64) -> f64>;
    let mut cols: Vec<Column> = Vec::new();
    if p_inf.is_none() {
        cols.push(Box::new(|_| 1.0));
    }
    cols.push(Box::new(|k| k.powi(-2)));
    cols.push(Box::new(|k| k.powi(-4)));
    if let Some(l) = ell {
        cols.push(Box::new(move |k| (2.0 * k * l).cos() * k.powi(-2)));
        cols.push(Box::new(move |k| (2.0 * k * l).sin() * k.powi(-3)));
        cols.push(Box::new(move |k| (2.0 * k * l).cos() * k.powi(-4)));
    }
    if rows < 2 * cols.len() {
        return Err(Error::validation(
            "spectrum too short to fit the high-frequency tail",
        ));
    }
    let a = DMatrix::from_fn(rows, cols.len(), |i, j| cols[j](k[start + i]));
    let b = DVector::from_fn(rows, |i, _| {
        let y = 1.0 / (p[start + i] * p[start + i]);
        match p_inf {
            Some(pi) => y - 1.0 / (pi * pi),
            None => y,
        }
    });
    let sol = a
        .svd(true, true)
        .solve(&b, 1e-14)
        .map_err(|e| Error::numerical(format!("tail fit failed: {e}")))?;
    let (u0, rest) = match p_inf {
        Some(pi) => (1.0 / (pi * pi), sol.as_slice()),
        None => (sol[0], &sol.as_slice()[1..]),
    };
    if !(u0 > 0.0) {
        return Err(Error::numerical("fitted pressure plateau is not positive"));
    }
    let coef = |i: usize| rest.get(i).map_or(0.0, |v| -v / u0);
    let tail = TailCoefficients {
        c: coef(0),
        e: coef(1),
        d: coef(2),
        s: coef(3),
        g: coef(4),
    };
    Ok((1.0 / u0, tail))
}

impl PressureSpectrum {
    /// Wraps measured samples, estimating `P∞` and the tail constants from the
    /// top quarter of the band. Supplying the duct length adds the `cos 2kℓ`
    /// term of the large-k expansion to the fit.
    pub fn from_samples(kgrid: Grid1D, values: Vec<f64>, ell: Option<f64>) -> Result<Self> {
        Self::validate(&kgrid, &values)?;
        let k = kgrid.points();
        let (p2, tail) = fit_tail(&k, &values, ell, None)?;
        Ok(Self {
            kgrid,
            values,
            p_inf: p2.sqrt(),
            tail,
            ell,
        })
    }

    /// Wraps samples whose plateau is known exactly; only the tail constants are fitted.
    pub fn with_plateau(
        kgrid: Grid1D,
        values: Vec<f64>,
        p_inf: f64,
        ell: Option<f64>,
    ) -> Result<Self> {
        Self::validate(&kgrid, &values)?;
        if !(p_inf > 0.0) {
            return Err(Error::validation("P∞ must be positive"));
        }
        let k = kgrid.points();
        let (_, tail) = fit_tail(&k, &values, ell, Some(p_inf))?;
        Ok(Self {
            kgrid,
            values,
            p_inf,
            tail,
            ell,
        })
    }

    fn validate(kgrid: &Grid1D, values: &[f64]) -> Result<()> {
        if kgrid.count() != values.len() {
            return Err(Error::validation(
                "spectrum sample count does not match k-grid",
            ));
        }
        if !(kgrid.start() > 0.0) {
            return Err(Error::validation("spectrum k-grid must start above k = 0"));
        }
        if let Some((i, v)) = values
            .iter()
            .enumerate()
            .find(|(_, v)| !(**v > 0.0 && v.is_finite()))
        {
            return Err(Error::validation(format!(
                "pressure modulus must be positive for k > 0; sample {i} is {v}"
            )));
        }
        Ok(())
    }

    pub fn kgrid(&self) -> &Grid1D {
        &self.kgrid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn p_inf(&self) -> f64 {
        self.p_inf
    }

    /// Leading tail constant `C` in `|P|²/P∞² ≈ 1 + (C + D cos 2kℓ)/k²`.
    pub fn tail_c(&self) -> f64 {
        self.tail.c
    }

    /// Leading oscillatory tail amplitude `D`.
    pub fn tail_d(&self) -> f64 {
        self.tail.d
    }

    pub fn tail(&self) -> &TailCoefficients {
        &self.tail
    }

    pub fn ell(&self) -> Option<f64> {
        self.ell
    }

    pub fn k_max(&self) -> f64 {
        self.kgrid.end()
    }

    /// Same samples scaled by a positive factor (changes only `P∞`).
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        let values = self.values.iter().map(|v| v * factor).collect();
        Self::from_samples(self.kgrid, values, self.ell)
    }

    /// The tail model `|P|²/P∞² − 1` at wavenumber `k`.
    pub fn tail_model(&self, k: f64) -> f64 {
        let num = self.tail.numerator(k, self.ell);
        num / (k * k - num)
    }

    /// Largest deviation of `|P|²/P∞² − 1` from the tail model over the fitted band.
    pub fn tail_residual(&self) -> f64 {
        let n = self.values.len();
        let start = n - ((n as f64 * TAIL_FRACTION).ceil() as usize).min(n);
        (start..n)
            .map(|i| {
                let k = self.kgrid.at(i);
                let y = (self.values[i] / self.p_inf).powi(2) - 1.0;
                (y - self.tail_model(k)).abs()
            })
            .fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn linear_duct_spectrum(a: f64, p_inf: f64) -> (Grid1D, Vec<f64>) {
        let g = Grid1D::new(0.003, 0.003, 1000).unwrap();
        let v = g
            .points()
            .iter()
            .map(|k| p_inf * k / (k * k + a * a).sqrt())
            .collect();
        (g, v)
    }

    #[test]
    fn plateau_and_tail_of_linear_duct() {
        let (g, v) = linear_duct_spectrum(0.05, 13.0);
        let s = PressureSpectrum::from_samples(g, v, Some(16.0)).unwrap();
        assert!((s.p_inf() - 13.0).abs() < 1e-10);
        assert!((s.tail_c() + 0.0025).abs() < 1e-10);
        assert!(s.tail_d().abs() < 1e-10);
        assert!(s.tail_residual() < 1e-12);
    }

    #[test]
    fn oscillatory_tail_is_captured() {
        let g = Grid1D::new(0.003, 0.003, 1000).unwrap();
        let (c, d, l) = (-0.3, 0.01, 16.0);
        let v: Vec<f64> = g
            .points()
            .iter()
            .map(|k| 50.0 * (k * k / (k * k - c - d * (2.0 * k * l).cos())).sqrt())
            .collect();
        let s = PressureSpectrum::from_samples(g, v.clone(), Some(l)).unwrap();
        assert!((s.p_inf() - 50.0).abs() < 1e-9);
        assert!((s.tail_d() - d).abs() < 1e-9);
        let fixed = PressureSpectrum::with_plateau(g, v, 50.0, Some(l)).unwrap();
        assert!((fixed.tail_c() - c).abs() < 1e-9);
    }

    #[test]
    fn rejects_zero_pressure() {
        let (g, mut v) = linear_duct_spectrum(0.05, 13.0);
        v[10] = 0.0;
        assert!(PressureSpectrum::from_samples(g, v, None).is_err());
        let g0 = Grid1D::new(0.0, 0.003, 1000).unwrap();
        assert!(PressureSpectrum::from_samples(g0, vec![1.0; 1000], None).is_err());
    }
}
