//! The set of duct profiles compatible with one pressure spectrum.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::consts::PhysicalConstants;
use crate::error::{Error, Result};
use crate::grid::Grid1D;
use crate::profile::RadiusProfile;
use crate::spectral::ResonanceReport;

/// A candidate obtained by attaching a bound state at `k = iβ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundCandidate {
    pub beta: f64,
    pub g_sq: f64,
    pub m_sq: f64,
    pub cot_theta: f64,
    /// Zero-energy regular solution `φⱼ(0, x)` on the x-grid (proportional to the radius).
    pub phi0: Vec<f64>,
    /// Scaled radius; `None` when the candidate is inadmissible.
    pub radius: Option<RadiusProfile>,
    /// `rⱼ(ℓ) > 0`.
    pub admissible: bool,
}

/// The no-bound-state radius plus one candidate per eligible resonance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CandidateSet {
    pub no_bound: RadiusProfile,
    pub with_bound: Vec<BoundCandidate>,
    pub m_count: usize,
    pub report: ResonanceReport,
    pub p_inf: f64,
    pub ell: f64,
}

impl CandidateSet {
    /// All admissible radii, the no-bound-state one first.
    pub fn admissible_radii(&self) -> Vec<&RadiusProfile> {
        std::iter::once(&self.no_bound)
            .chain(self.with_bound.iter().filter_map(|c| c.radius.as_ref()))
            .collect()
    }

    /// Smallest max-norm distance between two admissible candidates.
    pub fn min_separation(&self) -> f64 {
        let radii = self.admissible_radii();
        let mut best = f64::INFINITY;
        for i in 0..radii.len() {
            for j in i + 1..radii.len() {
                best = best.min(radii[i].max_distance(radii[j]));
            }
        }
        best
    }

    /// Fails if two candidates coincide to within `1e−6·‖r̊‖`.
    pub fn check_distinct(&self) -> Result<()> {
        let norm = self.no_bound.values().iter().copied().fold(0.0, f64::max);
        if self.min_separation() <= 1e-6 * norm {
            return Err(Error::numerical("two reconstructed candidates coincide"));
        }
        Ok(())
    }
}

/// `r(x) = √(cμ/(πP∞φ(0,ℓ)))·φ(0,x)`; `None` when `φ(0,ℓ) ≤ 0` or `φ` is not
/// positive throughout.
pub fn scale_regular_solution(
    phi0: &[f64],
    ell: f64,
    p_inf: f64,
    consts: &PhysicalConstants,
) -> Result<Option<RadiusProfile>> {
    let phi_l = *phi0.last().unwrap();
    if !(phi_l > 0.0) || phi0.iter().any(|v| !(*v > 0.0)) {
        return Ok(None);
    }
    let s = (consts.c_mu() / (PI * p_inf * phi_l)).sqrt();
    let grid = Grid1D::spanning(0.0, ell, phi0.len())?;
    let values = phi0.iter().map(|v| v * s).collect();
    Ok(Some(RadiusProfile::from_samples(grid, values)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scaling_reproduces_plateau() {
        let consts = PhysicalConstants::default();
        let phi: Vec<f64> = (0..=160).map(|i| 1.0 + 0.05 * i as f64 * 0.1).collect();
        let r = scale_regular_solution(&phi, 16.0, 12.0, &consts)
            .unwrap()
            .unwrap();
        assert!((PI * r.r0() * r.r_l() * 12.0 / consts.c_mu() - 1.0).abs() < 1e-12);
        let bad: Vec<f64> = (0..=160).map(|i| 1.0 - 0.08 * i as f64 * 0.1).collect();
        assert!(scale_regular_solution(&bad, 16.0, 12.0, &consts)
            .unwrap()
            .is_none());
    }
}
