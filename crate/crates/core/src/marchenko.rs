//! Marchenko inversion: from the scattering matrix `S(k) = −F(−k)/F(k)` (and
//! optionally one bound state) to the Jost-solution kernel `K(x, y)`, the
//! potential, the boundary parameter and the regular solution.
//!
//! For a duct of length `ℓ` the potential vanishes beyond `ℓ`, so
//! `K(x, ·)` is supported on `[x, 2ℓ − x]`; the semi-infinite integral is
//! truncated a margin past that point.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::candidates::{scale_regular_solution, BoundCandidate, CandidateSet};
use crate::error::{Error, Result};
use crate::gelfand_levitan::InversionOptions;
use crate::grid::Grid1D;
use crate::numerics::lowk::{refined_nodes, taper, LowKJost, LOW_K_NODES};
use crate::numerics::quad::{cosine_tail_inverse_square, trapezoid};
use crate::profile::PotentialProfile;
use crate::spectral::{default_beta_max, find_eligible_resonances, outer_jost, scattering_matrix};
use crate::spectrum::PressureSpectrum;

/// Truncation margin past `2ℓ − x`, as a fraction of `ℓ`.
pub const TRUNCATION_MARGIN: f64 = 0.1;

/// Wavenumbers at which `cot θ` is read off the reconstructed Jost solution.
const COT_PROBES: [f64; 3] = [0.9, 1.0, 1.1];

/// Input of the Marchenko kernel: `S(k)` on `k_j = j·Δk` and an optional bound state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MarchenkoKernelSpec {
    pub kgrid: Grid1D,
    pub s_values: Vec<Complex64>,
    /// Optional bound state `(β, m²)`.
    pub bound_state: Option<(f64, f64)>,
    /// Optional `(D, ℓ)` of the large-k behaviour `S − S_α ≈ iD sin(2kℓ)/k²`,
    /// with `D` the oscillatory amplitude of the pressure tail.
    pub oscillatory_tail: Option<(f64, f64)>,
    /// Fitted `F` near `k = 0`, used to resolve `S` there on a fine sub-grid.
    pub low_k: Option<LowKJost>,
}

impl MarchenkoKernelSpec {
    /// Builds the spec from Jost-function samples on the real grid.
    pub fn from_jost_values(
        kgrid: Grid1D,
        f_values: &[Complex64],
        bound_state: Option<(f64, f64)>,
    ) -> Result<Self> {
        if f_values.len() != kgrid.count() {
            return Err(Error::validation("Jost samples do not match the k-grid"));
        }
        let s_values = kgrid
            .points()
            .iter()
            .zip(f_values)
            .map(|(&k, f)| {
                if f.norm() == 0.0 {
                    Err(Error::numerical(format!(
                        "Jost function vanishes at k = {k}"
                    )))
                } else {
                    // F(−k) = −conj F(k) for real potentials
                    Ok(f.conj() / f)
                }
            })
            .collect::<Result<_>>()?;
        Ok(Self {
            kgrid,
            s_values,
            bound_state,
            oscillatory_tail: None,
            low_k: LowKJost::fit(&kgrid.points(), f_values),
        })
    }

    /// Largest deviation of `|S(k)|` from one.
    pub fn unitarity_defect(&self) -> f64 {
        self.s_values
            .iter()
            .map(|s| (s.norm() - 1.0).abs())
            .fold(0.0, f64::max)
    }
}

/// `M(y)` sampled on `y_j = j·h`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MarchenkoKernel {
    pub ygrid: Grid1D,
    pub values: Vec<f64>,
    /// Parameter `α` of the reference `S_α(k) = (k − iα)/(k + iα)` removed before quadrature.
    pub alpha: f64,
}

impl MarchenkoKernel {
    pub fn step(&self) -> f64 {
        self.ygrid.step()
    }

    pub fn at(&self, j: usize) -> f64 {
        self.values[j]
    }
}

/// `S(k) → (k − iα)/(k + iα)` at large `k` with `α = Im F(k)` averaged over
/// the top quarter of the band (`F(k) = k + iα + O(1/k)`).
fn reference_alpha(spec: &MarchenkoKernelSpec) -> f64 {
    // S = conj F/F = e^{−2i arg F}; for F ≈ k + iα, arg F ≈ α/k.
    let k = spec.kgrid.points();
    let n = k.len();
    let start = n - (n / 4).max(1);
    let sum: f64 = (start..n)
        .map(|i| {
            let arg = -0.5 * spec.s_values[i].arg();
            k[i] * arg.tan()
        })
        .sum();
    sum / (n - start) as f64
}

/// `M(y) = (1/2π)∫(S(k) − 1)e^{iky}dk + m²e^{−βy}` on `y_j = j·h`, `j < count`.
///
/// The reference `S_α = (k − iα)/(k + iα)`, whose transform is
/// `2αe^{αy}` for `α < 0` and zero otherwise, is subtracted so that the
/// remaining integrand decays like `1/k²`; that remainder is integrated by the
/// trapezoid rule on the data grid (with a tapered low-k model of `F` split
/// off and integrated on a fine sub-grid) and, past `k_max`, analytically from the
/// oscillatory tail when one is supplied.
pub fn marchenko_kernel(
    spec: &MarchenkoKernelSpec,
    h: f64,
    count: usize,
) -> Result<MarchenkoKernel> {
    let kgrid = spec.kgrid;
    let dk = kgrid.step();
    if (kgrid.start() - dk).abs() > 1e-9 * dk {
        return Err(Error::validation(
            "Marchenko kernel needs a k-grid of the form j·Δk, j = 1..n",
        ));
    }
    let n = kgrid.count();
    if n < 3 {
        return Err(Error::validation("need at least 3 scattering samples"));
    }
    let alpha = reference_alpha(spec);
    let reference = |k: f64| Complex64::new(k, -alpha) / Complex64::new(k, alpha);
    let mut g: Vec<Complex64> = Vec::with_capacity(n + 1);
    g.push(Complex64::new(0.0, 0.0));
    for (j, s) in spec.s_values.iter().enumerate() {
        g.push(s - reference((j + 1) as f64 * dk));
    }
    g[0] = (4.0 * g[1] - g[2]) / 3.0;

    // Near k = 0, S = F*/F turns over on the scale |F(0)|, which may be
    // shorter than Δk; the fitted F, flat near 0 and tapered to zero at LOW_K_NODES·Δk,
    // carries that part on a fine sub-grid.
    let mut refined = Vec::new();
    if let Some(low) = &spec.low_k {
        let fitted = |k: f64| low.scattering(k) - reference(k);
        let model = |k: f64| taper(k, dk) * fitted(k);
        // The taper is 1 at k = 0, so the remainder there is the (smooth,
        // untapered) fit residual, extrapolated evenly.
        let residual = |i: usize| g[i] - fitted(i as f64 * dk);
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

    let ygrid = Grid1D::new(0.0, h, count)?;
    let values = (0..count)
        .into_par_iter()
        .map(|j| {
            let y = j as f64 * h;
            let mut acc = 0.5 * (g[0].re + (g[n] * Complex64::cis(n as f64 * dk * y)).re);
            for (i, gi) in g.iter().enumerate().take(n).skip(1) {
                acc += (gi * Complex64::cis(i as f64 * dk * y)).re;
            }
            acc += refined
                .iter()
                .map(|(k, wg)| (wg * Complex64::cis(k * y)).re)
                .sum::<f64>()
                / dk;
            let mut m = acc * dk / PI;
            if let Some((d, ell)) = spec.oscillatory_tail {
                let kmax = n as f64 * dk;
                m -= d / (2.0 * PI)
                    * (cosine_tail_inverse_square(kmax, (2.0 * ell - y).abs())
                        - cosine_tail_inverse_square(kmax, 2.0 * ell + y));
            }
            if alpha < 0.0 {
                m += 2.0 * alpha * (alpha * y).exp();
            }
            if let Some((beta, m_sq)) = spec.bound_state {
                m += m_sq * (-beta * y).exp();
            }
            m
        })
        .collect();
    Ok(MarchenkoKernel {
        ygrid,
        values,
        alpha,
    })
}

/// Solution of the truncated Marchenko equation on `xᵢ = i·h`, `i = 0..=n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MarchenkoSolution {
    pub grid: Grid1D,
    /// `k_rows[i][m] = K(xᵢ, xᵢ + m·h)`.
    pub k_rows: Vec<Vec<f64>>,
    pub potential: PotentialProfile,
    /// `φ(0, xᵢ)`.
    pub phi0: Vec<f64>,
    /// Largest residual of the discretized equation.
    pub residual: f64,
}

impl MarchenkoSolution {
    pub fn cot_theta(&self) -> f64 {
        self.potential.cot_theta()
    }

    /// `f(k, xᵢ) = e^{ikxᵢ} + ∫ K(xᵢ, y)e^{iky}dy`.
    pub fn jost_solution(&self, k: f64) -> Vec<Complex64> {
        jost_rows(&self.k_rows, self.grid.step(), k)
    }

    /// `φ(k, xᵢ)` for real `k ≠ 0`: the real combination `a f + conj(a f)`
    /// with `φ(k,0) = 1` and `φ′(k,0) = −cot θ`.
    pub fn phi_real(&self, k: f64) -> Vec<f64> {
        let f = self.jost_solution(k);
        let (f0, df0) = (f[0], jost_slope_at_origin(&f, self.grid.step(), k));
        let cot = self.cot_theta();
        let det = f0 * df0.conj() - df0 * f0.conj();
        let a = (df0.conj() + cot * f0.conj()) / det;
        f.iter().map(|fi| 2.0 * (a * fi).re).collect()
    }

    /// Jost function `F(k) = −i[f′(k,0) + cot θ f(k,0)]` of the reconstruction.
    pub fn jost_function(&self, k: f64) -> Complex64 {
        let f = self.jost_solution(k);
        let df0 = jost_slope_at_origin(&f, self.grid.step(), k);
        -Complex64::i() * (df0 + self.cot_theta() * f[0])
    }
}

fn one_sided<T>(a: T, b: T, c: T, h: f64) -> T
where
    T: std::ops::Mul<f64, Output = T> + std::ops::Add<Output = T> + std::ops::Sub<Output = T>,
{
    (b * 4.0 - a * 3.0 - c) * (0.5 / h)
}

/// `f′(k,0)` from samples `f(k, i·h)`: the envelope `f e^{−ikx}` is smooth,
/// so it is differenced instead of the oscillating `f`.
fn jost_slope_at_origin(f: &[Complex64], h: f64, k: f64) -> Complex64 {
    let env = |i: usize| f[i] * Complex64::cis(-k * i as f64 * h);
    Complex64::new(0.0, k) * f[0] + one_sided(env(0), env(1), env(2), h)
}

fn jost_rows(rows: &[Vec<f64>], h: f64, k: f64) -> Vec<Complex64> {
    rows.iter()
        .enumerate()
        .map(|(i, row)| {
            let x = i as f64 * h;
            let re: Vec<f64> = row
                .iter()
                .enumerate()
                .map(|(m, v)| v * (k * (x + m as f64 * h)).cos())
                .collect();
            let im: Vec<f64> = row
                .iter()
                .enumerate()
                .map(|(m, v)| v * (k * (x + m as f64 * h)).sin())
                .collect();
            Complex64::cis(k * x) + Complex64::new(trapezoid(&re, h), trapezoid(&im, h))
        })
        .collect()
}

/// Solves `K(x,y) + M(x+y) + ∫ₓ^{L(x)} K(x,z)M(z+y)dz = 0` for `y ∈ [x, L(x)]`,
/// `L(x) = 2ℓ − x + margin`, on `xᵢ = i·h`, `i = 0..=n`, `ℓ = n·h`.
///
/// The boundary parameter is read off the reconstructed Jost solution at a
/// few wavenumbers from `F(k) = −i[f′ + cot θ f](k,0)` against the data
/// Jost function `f_data`; the zero-energy regular solution is assembled from
/// the two zero-energy solutions `u = f(0,·)` and `v = −i∂ₖf(0,·)`.
pub fn solve_marchenko(
    kernel: &MarchenkoKernel,
    n: usize,
    f_data: impl Fn(f64) -> Complex64,
) -> Result<MarchenkoSolution> {
    if n < 3 {
        return Err(Error::validation("need at least 3 x-steps"));
    }
    let h = kernel.step();
    let margin = (TRUNCATION_MARGIN * n as f64).ceil() as usize;
    let needed = 4 * n + 2 * margin + 1;
    if kernel.values.len() < needed {
        return Err(Error::validation(format!(
            "kernel has {} samples; {n} x-steps need {needed}",
            kernel.values.len()
        )));
    }
    let solved: Vec<(Vec<f64>, f64)> = (0..=n)
        .into_par_iter()
        .map(|i| {
            let count = 2 * (n - i) + margin + 1;
            let w = |m: usize| if m == 0 || m == count - 1 { 0.5 * h } else { h };
            let a = DMatrix::from_fn(count, count, |j, m| {
                let id = if j == m { 1.0 } else { 0.0 };
                id + w(m) * kernel.at(2 * i + m + j)
            });
            let rhs = DVector::from_fn(count, |j, _| -kernel.at(2 * i + j));
            let sol = a.clone().lu().solve(&rhs).ok_or_else(|| {
                Error::numerical(format!("singular Marchenko system at x = {}", i as f64 * h))
            })?;
            let residual = (a * &sol - rhs).amax();
            Ok((sol.as_slice().to_vec(), residual))
        })
        .collect::<Result<_>>()?;
    let residual = solved.iter().map(|s| s.1).fold(0.0, f64::max);
    let k_rows: Vec<Vec<f64>> = solved.into_iter().map(|s| s.0).collect();

    let grid = Grid1D::new(0.0, h, n + 1)?;
    let diag: Vec<f64> = k_rows.iter().map(|r| r[0]).collect();
    let mut q = vec![0.0; n + 1];
    q[0] = -2.0 * one_sided(diag[0], diag[1], diag[2], h);
    for i in 1..n {
        q[i] = -2.0 * (diag[i + 1] - diag[i - 1]) / (2.0 * h);
    }
    q[n] = 2.0 * one_sided(diag[n], diag[n - 1], diag[n - 2], h);

    // cot θ = −Re[F conj f′(k,0)]/k with the data Jost function F.
    let mut cot = 0.0;
    for &k in &COT_PROBES {
        let f = jost_rows(&k_rows[..3], h, k);
        let df0 = jost_slope_at_origin(&f, h, k);
        cot -= (f_data(k) * df0.conj()).re / k;
    }
    cot /= COT_PROBES.len() as f64;

    let u: Vec<f64> = k_rows.iter().map(|r| 1.0 + trapezoid(r, h)).collect();
    let v: Vec<f64> = k_rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let x = i as f64 * h;
            let ry: Vec<f64> = r
                .iter()
                .enumerate()
                .map(|(m, k)| k * (x + m as f64 * h))
                .collect();
            x + trapezoid(&ry, h)
        })
        .collect();
    let du0 = one_sided(u[0], u[1], u[2], h);
    let dv0 = one_sided(v[0], v[1], v[2], h);
    let wronskian = u[0] * dv0 - du0 * v[0];
    let (cu, cv) = (
        (dv0 + cot * v[0]) / wronskian,
        (du0 + cot * u[0]) / wronskian,
    );
    let phi0 = u.iter().zip(&v).map(|(u, v)| cu * u - cv * v).collect();

    Ok(MarchenkoSolution {
        grid,
        k_rows,
        potential: PotentialProfile::new(grid, q, cot)?,
        phi0,
        residual,
    })
}

/// Samples needed on the y-grid for `nx` x-steps.
pub fn kernel_len(nx: usize) -> usize {
    4 * nx + 2 * (TRUNCATION_MARGIN * nx as f64).ceil() as usize + 1
}

/// Marchenko solve for the Jost samples `f_values` (on the spectrum's k-grid)
/// with an optional bound state `(β, m²)`.
pub fn solve_from_jost(
    kgrid: Grid1D,
    f_values: &[Complex64],
    bound_state: Option<(f64, f64)>,
    oscillatory_tail: Option<(f64, f64)>,
    opts: &InversionOptions,
) -> Result<MarchenkoSolution> {
    let mut spec = MarchenkoKernelSpec::from_jost_values(kgrid, f_values, bound_state)?;
    spec.oscillatory_tail = oscillatory_tail;
    let h = opts.ell / opts.nx as f64;
    let kernel = marchenko_kernel(&spec, h, kernel_len(opts.nx))?;
    let lookup = |k: f64| {
        let (i, t) = kgrid.locate(k);
        f_values[i] * (1.0 - t) + f_values[i + 1] * t
    };
    solve_marchenko(&kernel, opts.nx, lookup)
}

/// Full Marchenko pipeline: outer function, no-bound solve, resonance search
/// on the recovered potential, and one bound-state solve per eligible resonance
/// with `Fⱼ(k) = (k − iβ)/(k + iβ)·F̊(k)` and the Marchenko norming constant.
pub fn enumerate_candidates(
    spectrum: &PressureSpectrum,
    opts: &InversionOptions,
) -> Result<CandidateSet> {
    let outer = outer_jost(spectrum)?;
    let kgrid = outer.kgrid;
    let tail = spectrum.ell().map(|ell| (spectrum.tail_d(), ell));
    let sol = solve_from_jost(kgrid, &outer.values, None, tail, opts)?;
    let p_inf = spectrum.p_inf();
    let no_bound =
        scale_regular_solution(&sol.phi0, opts.ell, p_inf, &opts.consts)?.ok_or_else(|| {
            Error::numerical(
                "no-bound-state regular solution is not positive: data inconsistent with a duct",
            )
        })?;
    let beta_max = opts
        .beta_max
        .unwrap_or_else(|| default_beta_max(&sol.potential));
    let report = find_eligible_resonances(&sol.potential, beta_max)?;

    let with_bound = report
        .betas
        .iter()
        .zip(&report.g_sq)
        .zip(&report.m_sq)
        .map(|((&beta, &g_sq), &m_sq)| {
            let f_j: Vec<Complex64> = kgrid
                .points()
                .iter()
                .zip(&outer.values)
                .map(|(&k, f)| Complex64::new(k, -beta) / Complex64::new(k, beta) * f)
                .collect();
            let s = solve_from_jost(kgrid, &f_j, Some((beta, m_sq)), tail, opts)?;
            let radius = scale_regular_solution(&s.phi0, opts.ell, p_inf, &opts.consts)?;
            Ok(BoundCandidate {
                beta,
                g_sq,
                m_sq,
                cot_theta: s.cot_theta(),
                admissible: radius.is_some(),
                phi0: s.phi0,
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

/// `S(k)` of a Jost function on a real grid, re-exported for convenience.
pub fn scattering_values<J: crate::direct::JostFunction>(
    jost: &J,
    kgrid: &Grid1D,
) -> Result<Vec<Complex64>> {
    scattering_matrix(jost, &kgrid.points())
}
