use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Sound speed and air density, in cm/s and g/cm³.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalConstants {
    pub c: f64,
    pub mu: f64,
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self {
            c: 34300.0,
            mu: 0.0012,
        }
    }
}

impl PhysicalConstants {
    pub fn new(c: f64, mu: f64) -> Result<Self> {
        if !(c > 0.0 && c.is_finite()) {
            return Err(Error::validation(format!(
                "sound speed must be positive, got {c}"
            )));
        }
        if !(mu > 0.0 && mu.is_finite()) {
            return Err(Error::validation(format!(
                "air density must be positive, got {mu}"
            )));
        }
        Ok(Self { c, mu })
    }

    /// The product `c·mu` that sets the pressure scale.
    pub fn c_mu(&self) -> f64 {
        self.c * self.mu
    }
}

/// Angular wavenumber (rad/cm) of a frequency given in Hz.
pub fn k_from_frequency(nu: f64, consts: &PhysicalConstants) -> f64 {
    2.0 * std::f64::consts::PI * nu / consts.c
}

/// Inverse of [`k_from_frequency`].
pub fn frequency_from_k(k: f64, consts: &PhysicalConstants) -> f64 {
    k * consts.c / (2.0 * std::f64::consts::PI)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn audible_band_edges() {
        let consts = PhysicalConstants::default();
        assert_eq!(k_from_frequency(0.0, &consts), 0.0);
        assert!((k_from_frequency(20.0, &consts) - 0.0037).abs() < 5e-5);
        assert!((k_from_frequency(20000.0, &consts) - 3.664).abs() < 1e-3);
        let k = k_from_frequency(440.0, &consts);
        assert!((frequency_from_k(k, &consts) - 440.0).abs() < 1e-9);
    }

    #[test]
    fn rejects_nonpositive_constants() {
        assert!(PhysicalConstants::new(0.0, 1.0).is_err());
        assert!(PhysicalConstants::new(1.0, -1.0).is_err());
        assert!(PhysicalConstants::new(34300.0, 0.0012).is_ok());
    }
}
