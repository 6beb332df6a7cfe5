//! Gel'fand–Levitan inversion: from `B(t)` (and optionally one bound state)
//! to the transformation kernel `h(x, y)`, the potential, the boundary
//! parameter and the regular solution; candidate enumeration on top of it.

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::candidates::{scale_regular_solution, BoundCandidate, CandidateSet};
use crate::consts::PhysicalConstants;
use crate::error::{Error, Result};
use crate::grid::Grid1D;
use crate::numerics::quad::{cumulative_trapezoid, trapezoid};
use crate::profile::{PotentialProfile, RadiusProfile};
use crate::spectral::{default_beta_max, find_eligible_resonances};
use crate::spectrum::PressureSpectrum;
use crate::time_domain::{b_kernel, BKernel};

/// Kernel `G(x,y) = ½[B(x+y) + B(|x−y|)] + g² cosh βx cosh βy`.
#[derive(Debug, Clone)]
pub struct GlKernelSpec {
    pub b: BKernel,
    /// Optional bound state `(β, g²)`.
    pub bound_state: Option<(f64, f64)>,
}

impl GlKernelSpec {
    /// `G(xᵢ, xⱼ)` on the kernel's grid.
    pub fn at(&self, i: usize, j: usize) -> f64 {
        let mut g = 0.5 * (self.b.at(i + j) + self.b.at(i.abs_diff(j)));
        if let Some((beta, g_sq)) = self.bound_state {
            let h = self.b.step();
            g += g_sq * (beta * i as f64 * h).cosh() * (beta * j as f64 * h).cosh();
        }
        g
    }
}

/// Solution of the discretized Gel'fand–Levitan equation on `xᵢ = i·h`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GlSolution {
    pub grid: Grid1D,
    /// `h_table[i][j] = h(xᵢ, yⱼ)` for `j ≤ i`.
    pub h_table: Vec<Vec<f64>>,
    pub potential: PotentialProfile,
    /// `φ(0, xᵢ)`.
    pub phi0: Vec<f64>,
}

impl GlSolution {
    pub fn cot_theta(&self) -> f64 {
        self.potential.cot_theta()
    }

    /// `φ(k, xᵢ) = cos kxᵢ + ∫₀^{xᵢ} h(xᵢ,y) cos ky dy` for real `k`.
    pub fn phi_real(&self, k: f64) -> Vec<f64> {
        self.transform(|y| (k * y).cos())
    }

    /// `φ(iβ, xᵢ)`, the continuation with `cos ky → cosh βy`.
    pub fn phi_imag(&self, beta: f64) -> Vec<f64> {
        self.transform(|y| (beta * y).cosh())
    }

    fn transform(&self, basis: impl Fn(f64) -> f64 + Sync) -> Vec<f64> {
        let h = self.grid.step();
        let b: Vec<f64> = (0..self.grid.count())
            .map(|j| basis(j as f64 * h))
            .collect();
        self.h_table
            .iter()
            .enumerate()
            .map(|(i, row)| {
                let prod: Vec<f64> = row.iter().zip(&b).map(|(u, v)| u * v).collect();
                b[i] + trapezoid(&prod, h)
            })
            .collect()
    }

    /// Largest residual of the discretized integral equation.
    pub fn residual(&self, spec: &GlKernelSpec) -> f64 {
        let h = self.grid.step();
        self.h_table
            .par_iter()
            .enumerate()
            .map(|(i, row)| {
                (0..=i)
                    .map(|j| {
                        let integrand: Vec<f64> = (0..=i).map(|m| row[m] * spec.at(m, j)).collect();
                        (row[j] + spec.at(i, j) + trapezoid(&integrand, h)).abs()
                    })
                    .fold(0.0, f64::max)
            })
            .reduce(|| 0.0, f64::max)
    }
}

/// Solves `h(x,y) + G(x,y) + ∫₀ˣ h(x,z) G(z,y) dz = 0` for every `xᵢ`,
/// `i = 0..=n`, by trapezoid Nyström discretization on the kernel's grid.
pub fn solve_gl(spec: &GlKernelSpec, n: usize) -> Result<GlSolution> {
    if spec.b.values.len() < 2 * n + 1 {
        return Err(Error::validation(format!(
            "kernel has {} samples; {n} x-steps need {}",
            spec.b.values.len(),
            2 * n + 1
        )));
    }
    if n < 3 {
        return Err(Error::validation("need at least 3 x-steps"));
    }
    let h = spec.b.step();
    let h_table: Vec<Vec<f64>> = (0..=n)
        .into_par_iter()
        .map(|i| {
            let m = i + 1;
            let w = |j: usize| {
                if i == 0 {
                    0.0
                } else if j == 0 || j == i {
                    0.5 * h
                } else {
                    h
                }
            };
            let a = DMatrix::from_fn(
                m,
                m,
                |j, z| if j == z { 1.0 } else { 0.0 } + w(z) * spec.at(z, j),
            );
            let rhs = DVector::from_fn(m, |j, _| -spec.at(i, j));
            a.lu()
                .solve(&rhs)
                .map(|v| v.as_slice().to_vec())
                .ok_or_else(|| {
                    Error::numerical(format!(
                        "singular Gel'fand–Levitan system at x = {}",
                        i as f64 * h
                    ))
                })
        })
        .collect::<Result<_>>()?;

    let grid = Grid1D::new(0.0, h, n + 1)?;
    let diag: Vec<f64> = (0..=n).map(|i| h_table[i][i]).collect();
    let mut q = vec![0.0; n + 1];
    q[0] = 2.0 * (-3.0 * diag[0] + 4.0 * diag[1] - diag[2]) / (2.0 * h);
    for i in 1..n {
        q[i] = 2.0 * (diag[i + 1] - diag[i - 1]) / (2.0 * h);
    }
    q[n] = 2.0 * (3.0 * diag[n] - 4.0 * diag[n - 1] + diag[n - 2]) / (2.0 * h);
    let potential = PotentialProfile::new(grid, q, -diag[0])?;
    let phi0 = h_table.iter().map(|row| 1.0 + trapezoid(row, h)).collect();
    Ok(GlSolution {
        grid,
        h_table,
        potential,
        phi0,
    })
}

/// `r̊(x) = √(cμ/(πP∞φ̊(0,ℓ)))·φ̊(0,x)`.
pub fn radius_no_bound(
    sol: &GlSolution,
    p_inf: f64,
    consts: &PhysicalConstants,
) -> Result<RadiusProfile> {
    scale_regular_solution(&sol.phi0, sol.grid.end(), p_inf, consts)?.ok_or_else(|| {
        Error::numerical(format!(
            "no-bound-state regular solution is not positive (φ̊(0,ℓ) = {}): data inconsistent with a duct",
            sol.phi0.last().unwrap()
        ))
    })
}

/// Darboux transform adding a bound state at `iβ` with norming constant `g²`:
/// returns `(cot θⱼ, φⱼ(0,·))` with `cot θⱼ = cot θ̊ + g²` and
/// `φⱼ = φ̊ − g² φ̊(iβ) ∫₀ˣ φ̊(0)φ̊(iβ) / (1 + g² ∫₀ˣ φ̊(iβ)²)`.
pub fn darboux(sol: &GlSolution, beta: f64, g_sq: f64) -> (f64, Vec<f64>) {
    darboux_from_values(
        &sol.phi0,
        &sol.phi_imag(beta),
        sol.grid.step(),
        sol.cot_theta(),
        g_sq,
    )
}

/// Darboux transform on sampled `φ̊(0,·)` and `φ̊(iβ,·)`.
pub fn darboux_from_values(
    phi0: &[f64],
    phi_b: &[f64],
    h: f64,
    cot_theta: f64,
    g_sq: f64,
) -> (f64, Vec<f64>) {
    assert!(g_sq >= 0.0, "norming constant must be non-negative");
    let cross: Vec<f64> = phi0.iter().zip(phi_b).map(|(a, b)| a * b).collect();
    let sq: Vec<f64> = phi_b.iter().map(|b| b * b).collect();
    let ic = cumulative_trapezoid(&cross, h);
    let is = cumulative_trapezoid(&sq, h);
    let phi_j = (0..phi0.len())
        .map(|i| phi0[i] - g_sq * phi_b[i] * ic[i] / (1.0 + g_sq * is[i]))
        .collect();
    (cot_theta + g_sq, phi_j)
}

/// `2β∫₀^ℓ φ̊(0)φ̊(iβ) < φ̊(0,ℓ)φ̊(iβ,ℓ)`.
pub fn admissible(phi0: &[f64], phi_b: &[f64], beta: f64, h: f64) -> bool {
    let cross: Vec<f64> = phi0.iter().zip(phi_b).map(|(a, b)| a * b).collect();
    2.0 * beta * trapezoid(&cross, h) < phi0.last().unwrap() * phi_b.last().unwrap()
}

/// How bound-state candidates are built.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundRoute {
    /// Darboux transform of the no-bound-state solution.
    Darboux,
    /// A second Gel'fand–Levitan solve with the bound-state term in the kernel.
    Kernel,
}

/// Discretization and search settings shared by the inversion routes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InversionOptions {
    pub ell: f64,
    /// Number of x-steps on `[0, ℓ]`.
    pub nx: usize,
    /// Upper end of the resonance search; `None` uses `5·max(1/ℓ, |cot θ̊|)`.
    pub beta_max: Option<f64>,
    pub bound_route: BoundRoute,
    pub consts: PhysicalConstants,
}

impl InversionOptions {
    pub fn new(ell: f64, nx: usize) -> Self {
        Self {
            ell,
            nx,
            beta_max: None,
            bound_route: BoundRoute::Darboux,
            consts: PhysicalConstants::default(),
        }
    }
}

/// No-bound-state Gel'fand–Levitan solve directly from a spectrum.
pub fn solve_no_bound(
    spectrum: &PressureSpectrum,
    opts: &InversionOptions,
) -> Result<(GlKernelSpec, GlSolution)> {
    let h = opts.ell / opts.nx as f64;
    let spec = GlKernelSpec {
        b: b_kernel(spectrum, h, 2 * opts.nx + 1)?,
        bound_state: None,
    };
    let sol = solve_gl(&spec, opts.nx)?;
    Ok((spec, sol))
}

/// Full pipeline: kernel, no-bound solve, resonance search, one candidate
/// per eligible resonance, scaling and admissibility.
pub fn enumerate_candidates(
    spectrum: &PressureSpectrum,
    opts: &InversionOptions,
) -> Result<CandidateSet> {
    let (spec, sol) = solve_no_bound(spectrum, opts)?;
    let p_inf = spectrum.p_inf();
    let no_bound = radius_no_bound(&sol, p_inf, &opts.consts)?;
    let beta_max = opts
        .beta_max
        .unwrap_or_else(|| default_beta_max(&sol.potential));
    let report = find_eligible_resonances(&sol.potential, beta_max)?;
    let h = sol.grid.step();

    let with_bound = report
        .betas
        .par_iter()
        .zip(&report.g_sq)
        .zip(&report.m_sq)
        .map(|((&beta, &g_sq), &m_sq)| {
            let phi_b = sol.phi_imag(beta);
            let (cot_theta, phi0) = match opts.bound_route {
                BoundRoute::Darboux => {
                    darboux_from_values(&sol.phi0, &phi_b, h, sol.cot_theta(), g_sq)
                }
                BoundRoute::Kernel => {
                    let spec_j = GlKernelSpec {
                        b: spec.b.clone(),
                        bound_state: Some((beta, g_sq)),
                    };
                    let s = solve_gl(&spec_j, opts.nx)?;
                    (s.cot_theta(), s.phi0)
                }
            };
            let flag = admissible(&sol.phi0, &phi_b, beta, h);
            let radius = scale_regular_solution(&phi0, opts.ell, p_inf, &opts.consts)?;
            Ok(BoundCandidate {
                beta,
                g_sq,
                m_sq,
                cot_theta,
                admissible: flag && radius.is_some(),
                phi0,
                radius,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let set = CandidateSet {
        no_bound,
        m_count: report.m_count,
        with_bound,
        report,
        p_inf,
        ell: opts.ell,
    };
    if set.admissible_radii().len() > 1 {
        set.check_distinct()?;
    }
    Ok(set)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kernel(values: Vec<f64>, h: f64) -> BKernel {
        BKernel {
            tgrid: Grid1D::new(0.0, h, values.len()).unwrap(),
            values,
        }
    }

    #[test]
    fn zero_kernel() {
        let spec = GlKernelSpec {
            b: kernel(vec![0.0; 81], 0.1),
            bound_state: None,
        };
        let sol = solve_gl(&spec, 40).unwrap();
        assert!(sol.h_table.iter().flatten().all(|v| *v == 0.0));
        assert_eq!(sol.cot_theta(), 0.0);
        let phi = sol.phi_real(1.3);
        for (i, p) in phi.iter().enumerate() {
            assert!((p - (1.3 * i as f64 * 0.1).cos()).abs() < 1e-15);
        }
    }

    #[test]
    fn exponential_kernel_has_constant_solution() {
        let a = 0.05;
        let n = 160;
        let h = 16.0 / n as f64;
        let b = kernel(
            (0..=2 * n)
                .map(|j| -a * (-a * j as f64 * h).exp())
                .collect(),
            h,
        );
        let spec = GlKernelSpec {
            b,
            bound_state: None,
        };
        let sol = solve_gl(&spec, n).unwrap();
        assert!((sol.cot_theta() + a).abs() < 1e-4);
        assert!(sol.potential.values().iter().all(|q| q.abs() < 1e-4));
        for (i, p) in sol.phi0.iter().enumerate() {
            assert!((p - (1.0 + a * i as f64 * h)).abs() < 1e-4);
        }
        assert!(sol.residual(&spec) < 1e-12);
    }

    #[test]
    fn rank_one_kernel_matches_closed_form() {
        // G = g² cosh βx cosh βy alone: h(x,y) = −g² cosh βx cosh βy/(1 + g²∫₀ˣ cosh²)
        let (beta, g_sq) = (0.1, 0.08);
        let n = 200;
        let h = 10.0 / n as f64;
        let spec = GlKernelSpec {
            b: kernel(vec![0.0; 2 * n + 1], h),
            bound_state: Some((beta, g_sq)),
        };
        let sol = solve_gl(&spec, n).unwrap();
        for i in [0, 50, 120, 200] {
            let x = i as f64 * h;
            let int = x / 2.0 + (2.0 * beta * x).sinh() / (4.0 * beta);
            for j in [0, i / 2, i] {
                let y = j as f64 * h;
                let exact = -g_sq * (beta * x).cosh() * (beta * y).cosh() / (1.0 + g_sq * int);
                assert!(
                    (sol.h_table[i][j] - exact).abs() < 1e-4 * exact.abs(),
                    "{i},{j}"
                );
            }
        }
    }

    #[test]
    fn darboux_on_free_solution() {
        // φ̊(0,x) = 1 + ax, φ̊(ia,x) = e^{ax}, g² = 2a → φ₁(0,x) = 1 − ax
        let a = 0.05;
        let n = 1600;
        let h = 16.0 / n as f64;
        let x: Vec<f64> = (0..=n).map(|i| i as f64 * h).collect();
        let phi0: Vec<f64> = x.iter().map(|x| 1.0 + a * x).collect();
        let phib: Vec<f64> = x.iter().map(|x| (a * x).exp()).collect();
        let (cot, phi1) = darboux_from_values(&phi0, &phib, h, -a, 2.0 * a);
        assert!((cot - a).abs() < 1e-15);
        for (x, p) in x.iter().zip(&phi1) {
            assert!((p - (1.0 - a * x)).abs() < 1e-5);
        }
        let (_, same) = darboux_from_values(&phi0, &phib, h, -a, 0.0);
        assert_eq!(same, phi0);
        assert!(admissible(&phi0, &phib, a, h));
        // aℓ ≥ 1: r₁ = 1 − ax reaches zero inside the duct
        let a2 = 0.07;
        let phi0: Vec<f64> = x.iter().map(|x| 1.0 + a2 * x).collect();
        let phib: Vec<f64> = x.iter().map(|x| (a2 * x).exp()).collect();
        assert!(!admissible(&phi0, &phib, a2, h));
    }
}
