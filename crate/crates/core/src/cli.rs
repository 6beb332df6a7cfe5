//! Command-line front end: run configuration, the `forward`, `inverse` and
//! `roundtrip` commands, and the files they write.
//!
//! Every command writes into an output directory and leaves a
//! `manifest.json` there recording the configuration, grids and tolerances
//! needed to reproduce the run. Environment variables are never consulted.

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::consts::PhysicalConstants;
use crate::direct::pressure_spectrum;
use crate::error::{Error, Result};
use crate::gelfand_levitan::{self, InversionOptions};
use crate::grid::Grid1D;
use crate::io::{self, Report};
use crate::marchenko;
use crate::numerics::ode::Tolerance;
use crate::profile::RadiusProfile;
use crate::spectrum::{PressureSpectrum, TAIL_FRACTION};
use crate::time_domain::{self, LENGTH_THRESHOLD};

/// Upper end of the search interval when the duct length is detected from the data (cm).
pub const AUTO_ELL_MAX: f64 = 24.0;

/// Layers used on the enlarged interval when detecting the length.
pub const AUTO_LAYERS: usize = 960;

/// Inversion route.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    /// Gel'fand–Levitan integral equation.
    Gl,
    /// Marchenko integral equation.
    Marchenko,
    /// Time-domain layer stripping (unique branch, needs r′(ℓ) ≥ 0).
    Timedomain,
}

/// Duct length: a value in cm or `auto` (detect from the data).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LengthSpec {
    Known(f64),
    Auto,
}

impl FromStr for LengthSpec {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        if s.eq_ignore_ascii_case("auto") {
            return Ok(LengthSpec::Auto);
        }
        match s.parse::<f64>() {
            Ok(v) if v > 0.0 && v.is_finite() => Ok(LengthSpec::Known(v)),
            _ => Err(format!(
                "expected a positive length in cm or `auto`, got `{s}`"
            )),
        }
    }
}

/// Everything a run depends on.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub consts: PhysicalConstants,
    /// `None`: take the length from the area table (forward) — required for inverse.
    pub ell: Option<LengthSpec>,
    pub dk: f64,
    pub nk: usize,
    pub nx: usize,
    pub method: Method,
    pub beta_max: Option<f64>,
    pub allow_negative_lip_slope: bool,
    pub out: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            consts: PhysicalConstants::default(),
            ell: None,
            dk: 0.003,
            nk: 1000,
            nx: 400,
            method: Method::Gl,
            beta_max: None,
            allow_negative_lip_slope: false,
            out: PathBuf::from("out"),
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.dk > 0.0 && self.dk.is_finite()) {
            return Err(Error::validation("--dk must be positive"));
        }
        if self.nk < 16 {
            return Err(Error::validation("--nk must be at least 16"));
        }
        if self.nx < 8 {
            return Err(Error::validation("--nx must be at least 8"));
        }
        if let Some(b) = self.beta_max {
            if !(b > 0.0 && b.is_finite()) {
                return Err(Error::validation("--beta-max must be positive"));
            }
        }
        Ok(())
    }

    pub fn kgrid(&self) -> Result<Grid1D> {
        Grid1D::new(self.dk, self.dk, self.nk)
    }

    fn options(&self, ell: f64) -> InversionOptions {
        InversionOptions {
            beta_max: self.beta_max,
            consts: self.consts,
            ..InversionOptions::new(ell, self.nx)
        }
    }
}

/// Fixed numerical tolerances, recorded in every manifest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub ode_rtol: f64,
    pub ode_atol: f64,
    pub tail_fraction: f64,
    pub length_threshold: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        let ode = Tolerance::default();
        Self {
            ode_rtol: ode.rtol,
            ode_atol: ode.atol,
            tail_fraction: TAIL_FRACTION,
            length_threshold: LENGTH_THRESHOLD,
        }
    }
}

/// `manifest.json`: what was run, on what, and what it produced.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub command: String,
    pub version: String,
    pub config: RunConfig,
    pub input: PathBuf,
    pub kgrid: Grid1D,
    /// Length actually used (given, read from the table, or detected).
    pub ell: f64,
    pub xgrid: Grid1D,
    pub tolerances: Tolerances,
    pub outputs: Vec<PathBuf>,
}

fn write_manifest(
    cfg: &RunConfig,
    command: &str,
    input: &Path,
    kgrid: Grid1D,
    ell: f64,
    outputs: Vec<PathBuf>,
) -> Result<()> {
    let manifest = Manifest {
        command: command.to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        config: cfg.clone(),
        input: input.to_path_buf(),
        kgrid,
        ell,
        xgrid: Grid1D::spanning(0.0, ell, cfg.nx + 1)?,
        tolerances: Tolerances::default(),
        outputs,
    };
    io::write_json(&cfg.out.join("manifest.json"), &manifest)
}

/// Summary written by `forward` as `forward.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ForwardSummary {
    pub p_inf: f64,
    pub ell: f64,
    pub k_max: f64,
    pub tail_c: f64,
    pub tail_d: f64,
}

/// Forward solve of an area table; writes `spectrum.csv` and `forward.json`.
pub fn cmd_forward(cfg: &RunConfig, area_path: &Path) -> Result<PressureSpectrum> {
    cfg.validate()?;
    let ell = match cfg.ell {
        Some(LengthSpec::Known(l)) => Some(l),
        Some(LengthSpec::Auto) => {
            return Err(Error::validation(
                "--ell auto applies to inversion; forward reads ℓ from the table",
            ))
        }
        None => None,
    };
    let area = io::ingest_area_table(area_path, ell, cfg.nx + 1)?;
    let kgrid = cfg.kgrid()?;
    let spectrum = pressure_spectrum(&area, &kgrid, &cfg.consts)?;
    std::fs::create_dir_all(&cfg.out)?;
    let spectrum_path = cfg.out.join("spectrum.csv");
    io::write_spectrum_csv(&spectrum_path, &kgrid, spectrum.values())?;
    let summary_path = cfg.out.join("forward.json");
    io::write_json(
        &summary_path,
        &ForwardSummary {
            p_inf: spectrum.p_inf(),
            ell: area.length(),
            k_max: kgrid.end(),
            tail_c: spectrum.tail_c(),
            tail_d: spectrum.tail_d(),
        },
    )?;
    write_manifest(
        cfg,
        "forward",
        area_path,
        kgrid,
        area.length(),
        vec![spectrum_path, summary_path],
    )?;
    Ok(spectrum)
}

/// Result of an inversion: one radius per admissible candidate (the
/// no-bound-state one first) and the report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InverseOutcome {
    pub ell: f64,
    /// `(candidate index, radius)`; index 0 is the no-bound-state candidate,
    /// index `j` the one attached at the `j`-th eligible resonance.
    pub candidates: Vec<(usize, RadiusProfile)>,
    pub report: Report,
}

/// Inversion of a spectrum table with the configured method.
///
/// Writes `candidate_<j>.csv` for each admissible candidate, `report.json`,
/// `radii.csv` (all candidates side by side) and `pressure.csv`.
pub fn cmd_inverse(cfg: &RunConfig, spectrum_path: &Path) -> Result<InverseOutcome> {
    cfg.validate()?;
    let (kgrid, values) = io::read_spectrum_csv(spectrum_path)?;
    let ell = match cfg.ell {
        Some(LengthSpec::Known(l)) => l,
        Some(LengthSpec::Auto) => {
            let blind = PressureSpectrum::from_samples(kgrid, values.clone(), None)?;
            time_domain::detect_length(&blind, AUTO_ELL_MAX, AUTO_LAYERS, LENGTH_THRESHOLD)?
        }
        None => {
            return Err(Error::validation(
                "inversion needs --ell <cm> or --ell auto",
            ))
        }
    };
    let spectrum = PressureSpectrum::from_samples(kgrid, values, Some(ell))?;
    let outcome = invert_spectrum(cfg, &spectrum, ell)?;

    std::fs::create_dir_all(&cfg.out)?;
    let mut outputs = Vec::new();
    for (j, r) in &outcome.candidates {
        let p = cfg.out.join(format!("candidate_{j}.csv"));
        io::write_radius_csv(&p, r)?;
        outputs.push(p);
    }
    let p = cfg.out.join("report.json");
    io::write_json(&p, &outcome.report)?;
    outputs.push(p);
    let p = cfg.out.join("radii.csv");
    write_radii_table(&p, &outcome.candidates)?;
    outputs.push(p);
    let p = cfg.out.join("pressure.csv");
    io::write_spectrum_csv(&p, &kgrid, spectrum.values())?;
    outputs.push(p);
    write_manifest(cfg, "inverse", spectrum_path, kgrid, ell, outputs)?;
    Ok(outcome)
}

/// Dispatches on the method without touching the file system.
pub fn invert_spectrum(
    cfg: &RunConfig,
    spectrum: &PressureSpectrum,
    ell: f64,
) -> Result<InverseOutcome> {
    let opts = cfg.options(ell);
    let set = match cfg.method {
        Method::Gl => gelfand_levitan::enumerate_candidates(spectrum, &opts)?,
        Method::Marchenko => marchenko::enumerate_candidates(spectrum, &opts)?,
        Method::Timedomain => {
            let td = time_domain::invert(spectrum, ell, cfg.nx, &cfg.consts)?;
            if td.negative_lip_slope && !cfg.allow_negative_lip_slope {
                return Err(Error::validation(format!(
                    "reconstructed lip slope r′(ℓ) = {:.3e} < 0: the time-domain method assumes r′(ℓ) ≥ 0 \
                     (use --method gl or marchenko, or --allow-negative-lip-slope)",
                    td.radius.slope_l()
                )));
            }
            let report = Report {
                m_count: None,
                betas: vec![],
                g_sq: vec![],
                m_sq: vec![],
                scenario: None,
                admissible: vec![true],
                p_inf: spectrum.p_inf(),
                ell,
            };
            return Ok(InverseOutcome {
                ell,
                candidates: vec![(0, td.radius)],
                report,
            });
        }
    };
    let candidates = std::iter::once((0, set.no_bound.clone()))
        .chain(
            set.with_bound
                .iter()
                .enumerate()
                .filter_map(|(j, c)| c.radius.clone().map(|r| (j + 1, r))),
        )
        .collect();
    Ok(InverseOutcome {
        ell,
        candidates,
        report: Report::from_candidates(&set),
    })
}

fn write_radii_table(path: &Path, candidates: &[(usize, RadiusProfile)]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    let mut header = vec!["x_cm".to_string()];
    header.extend(candidates.iter().map(|(j, _)| format!("radius_cm_{j}")));
    w.write_record(&header)?;
    if let Some((_, first)) = candidates.first() {
        for (i, x) in first.grid().points().iter().enumerate() {
            let mut row = vec![format!("{x:.16e}")];
            row.extend(
                candidates
                    .iter()
                    .map(|(_, r)| format!("{:.16e}", r.values()[i])),
            );
            w.write_record(&row)?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Error of one candidate against the input radius.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CandidateError {
    pub index: usize,
    /// `‖r − r_in‖₂/‖r_in‖₂`.
    pub l2_relative: f64,
    /// `max|r − r_in|/max r_in`.
    pub max_relative: f64,
    /// Set on the candidate closest to the input.
    pub matches_input: bool,
}

/// `roundtrip.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoundtripReport {
    pub method: Method,
    pub ell: f64,
    pub p_inf: f64,
    pub candidates: Vec<CandidateError>,
    pub report: Report,
}

impl RoundtripReport {
    /// Error of the candidate that matches the input.
    pub fn best(&self) -> &CandidateError {
        self.candidates
            .iter()
            .find(|c| c.matches_input)
            .expect("at least one candidate")
    }
}

/// Forward solve, inversion with the configured method, and comparison of
/// every candidate with the input radius. Writes the files of both steps
/// plus `roundtrip.json`.
pub fn cmd_roundtrip(cfg: &RunConfig, area_path: &Path) -> Result<RoundtripReport> {
    let forward_cfg = RunConfig {
        ell: match cfg.ell {
            Some(LengthSpec::Auto) => None,
            other => other,
        },
        ..cfg.clone()
    };
    cmd_forward(&forward_cfg, area_path)?;
    let truth_ell = io::read_json::<ForwardSummary>(&cfg.out.join("forward.json"))?.ell;
    let inverse_cfg = RunConfig {
        ell: Some(cfg.ell.unwrap_or(LengthSpec::Known(truth_ell))),
        ..cfg.clone()
    };
    let outcome = cmd_inverse(&inverse_cfg, &cfg.out.join("spectrum.csv"))?;

    let input = io::ingest_area_table(area_path, Some(truth_ell), cfg.nx + 1)?.to_radius();
    let mut candidates: Vec<CandidateError> = outcome
        .candidates
        .iter()
        .map(|(j, r)| CandidateError {
            index: *j,
            l2_relative: l2_relative(r, &input),
            max_relative: r.max_relative_error(&input),
            matches_input: false,
        })
        .collect();
    if let Some(best) = candidates
        .iter_mut()
        .min_by(|a, b| a.max_relative.total_cmp(&b.max_relative))
    {
        best.matches_input = true;
    }
    let report = RoundtripReport {
        method: cfg.method,
        ell: outcome.ell,
        p_inf: outcome.report.p_inf,
        candidates,
        report: outcome.report,
    };
    io::write_json(&cfg.out.join("roundtrip.json"), &report)?;
    Ok(report)
}

fn l2_relative(r: &RadiusProfile, reference: &RadiusProfile) -> f64 {
    let h = reference.grid().step();
    let diff: Vec<f64> = reference
        .grid()
        .points()
        .iter()
        .zip(reference.values())
        .map(|(&x, v)| (r.eval(x) - v).powi(2))
        .collect();
    let norm: Vec<f64> = reference.values().iter().map(|v| v * v).collect();
    (crate::numerics::quad::trapezoid(&diff, h) / crate::numerics::quad::trapezoid(&norm, h)).sqrt()
}

/// `vtract` command line.
#[derive(Debug, Parser)]
#[command(
    name = "vtract",
    version,
    about = "Vocal-tract radius from the absolute pressure at the lips, and back"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Pressure spectrum of an area table.
    Forward {
        /// Two-column table x (cm), A(x) (cm²).
        area: PathBuf,
        #[command(flatten)]
        opts: Flags,
    },
    /// Candidate radius profiles from a spectrum table.
    Inverse {
        /// CSV with header k_rad_per_cm,abs_pressure.
        spectrum: PathBuf,
        #[command(flatten)]
        opts: Flags,
    },
    /// Forward solve, inversion and comparison with the input.
    Roundtrip {
        area: PathBuf,
        #[command(flatten)]
        opts: Flags,
    },
}

#[derive(Debug, Args)]
pub struct Flags {
    /// Inversion route.
    #[arg(long, value_enum, default_value = "gl")]
    pub method: Method,
    /// Wavenumber step (rad/cm).
    #[arg(long, default_value_t = 0.003)]
    pub dk: f64,
    /// Number of wavenumbers.
    #[arg(long, default_value_t = 1000)]
    pub nk: usize,
    /// Number of x-steps on [0, ℓ].
    #[arg(long, default_value_t = 400)]
    pub nx: usize,
    /// Duct length in cm, or `auto`.
    #[arg(long)]
    pub ell: Option<LengthSpec>,
    /// Upper end of the resonance search.
    #[arg(long)]
    pub beta_max: Option<f64>,
    /// Output directory.
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
    /// Let the time-domain method proceed when the reconstructed lip slope is negative.
    #[arg(long)]
    pub allow_negative_lip_slope: bool,
}

impl Flags {
    pub fn config(&self) -> RunConfig {
        RunConfig {
            consts: PhysicalConstants::default(),
            ell: self.ell,
            dk: self.dk,
            nk: self.nk,
            nx: self.nx,
            method: self.method,
            beta_max: self.beta_max,
            allow_negative_lip_slope: self.allow_negative_lip_slope,
            out: self.out.clone(),
        }
    }
}

/// Runs a parsed command line and prints a short summary.
pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Forward { area, opts } => {
            let s = cmd_forward(&opts.config(), &area)?;
            println!(
                "P∞ = {:.6}  ({} wavenumbers up to {:.4} rad/cm)",
                s.p_inf(),
                s.values().len(),
                s.k_max()
            );
        }
        Command::Inverse { spectrum, opts } => {
            let o = cmd_inverse(&opts.config(), &spectrum)?;
            print_report(&o.report);
            println!(
                "{} candidate file(s) written to {}",
                o.candidates.len(),
                opts.out.display()
            );
        }
        Command::Roundtrip { area, opts } => {
            let r = cmd_roundtrip(&opts.config(), &area)?;
            print_report(&r.report);
            for c in &r.candidates {
                println!(
                    "candidate {}: max rel. error {:.3e}, L² rel. error {:.3e}{}",
                    c.index,
                    c.max_relative,
                    c.l2_relative,
                    if c.matches_input { "  <- input" } else { "" }
                );
            }
        }
    }
    Ok(())
}

fn print_report(r: &Report) {
    println!("ℓ = {:.4} cm, P∞ = {:.6}", r.ell, r.p_inf);
    if let Some(m) = r.m_count {
        println!(
            "M = {m}, scenario = {}",
            r.scenario.map_or("-", |s| s.label())
        );
    }
    for (j, b) in r.betas.iter().enumerate() {
        println!(
            "  resonance {}: β = {:.7}, g² = {:.6}, m² = {:.6}, admissible = {}",
            j + 1,
            b,
            r.g_sq[j],
            r.m_sq[j],
            r.admissible[j + 1]
        );
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn length_spec_parses() {
        assert_eq!("auto".parse::<LengthSpec>().unwrap(), LengthSpec::Auto);
        assert_eq!(
            "16.11".parse::<LengthSpec>().unwrap(),
            LengthSpec::Known(16.11)
        );
        assert!("-1".parse::<LengthSpec>().is_err());
        assert!("x".parse::<LengthSpec>().is_err());
    }

    #[test]
    fn flags_parse_into_config() {
        let cli = Cli::try_parse_from([
            "vtract",
            "inverse",
            "s.csv",
            "--method",
            "marchenko",
            "--ell",
            "16",
            "--nx",
            "200",
            "--beta-max",
            "0.5",
        ])
        .unwrap();
        let Command::Inverse { opts, .. } = cli.command else {
            panic!()
        };
        let cfg = opts.config();
        assert_eq!(cfg.method, Method::Marchenko);
        assert_eq!(cfg.ell, Some(LengthSpec::Known(16.0)));
        assert_eq!(cfg.nx, 200);
        assert_eq!(cfg.beta_max, Some(0.5));
        assert_eq!((cfg.dk, cfg.nk), (0.003, 1000));
        assert!(Cli::try_parse_from(["vtract", "inverse", "s.csv", "--method", "nope"]).is_err());
    }

    #[test]
    fn uniform_duct_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let area = dir.path().join("area.csv");
        std::fs::write(&area, "x_cm,area_cm2\n0,3.0\n16,3.0\n").unwrap();
        let cfg = RunConfig {
            nx: 80,
            out: dir.path().join("out"),
            ..RunConfig::default()
        };
        let s = cmd_forward(&cfg, &area).unwrap();
        let p0 = s.values()[0];
        assert!(s.values().iter().all(|v| (v - p0).abs() < 1e-7 * p0));
        let r = cmd_roundtrip(&cfg, &area).unwrap();
        assert_eq!(r.candidates.len(), 1);
        assert!(r.best().max_relative < 1e-6, "{:?}", r.best());
        let report: Report = io::read_json(&cfg.out.join("report.json")).unwrap();
        assert_eq!(report.m_count, Some(0));
        let manifest: Manifest = io::read_json(&cfg.out.join("manifest.json")).unwrap();
        assert_eq!(manifest.config.nx, 80);
    }

    /// Area table of r(x) = r0(1 + ax) on [0, 16], one row per x-step.
    fn linear_table(dir: &Path, r0: f64, a: f64, rows: usize) -> PathBuf {
        let path = dir.join("linear.csv");
        let mut text = String::from("x_cm,area_cm2\n");
        for i in 0..rows {
            let x = 16.0 * i as f64 / (rows - 1) as f64;
            let r = r0 * (1.0 + a * x);
            text += &format!("{x:.17e},{:.17e}\n", std::f64::consts::PI * r * r);
        }
        std::fs::write(&path, text).unwrap();
        path
    }

    #[test]
    fn forward_linear_duct_matches_closed_form() {
        let dir = tempfile::tempdir().unwrap();
        let (r0, a) = (1.0, 0.05);
        let cfg = RunConfig {
            nx: 1600,
            out: dir.path().join("out"),
            ..RunConfig::default()
        };
        let s = cmd_forward(&cfg, &linear_table(dir.path(), r0, a, 1601)).unwrap();
        let p_inf = cfg.consts.c_mu() / (std::f64::consts::PI * r0 * r0 * (1.0 + 16.0 * a));
        let worst = s
            .kgrid()
            .points()
            .iter()
            .zip(s.values())
            .map(|(k, v)| (v / (p_inf * k / (k * k + a * a).sqrt()) - 1.0).abs())
            .fold(0.0, f64::max);
        assert!(worst < 1e-6, "{worst:e}");
    }

    #[test]
    fn forward_reports_plateau_of_constant_potential_duct() {
        let dir = tempfile::tempdir().unwrap();
        let duct = crate::ducts::AnalyticDuct::constant_potential(0.1, 1.0 / 200.0, -1.0, 16.0).unwrap();
        let area = dir.path().join("area.csv");
        let mut text = String::from("x_cm,area_cm2\n");
        for i in 0..=1600 {
            let x = i as f64 * 0.01;
            text += &format!("{x:.17e},{:.17e}\n", std::f64::consts::PI * duct.r(x).powi(2));
        }
        std::fs::write(&area, text).unwrap();
        let cfg = RunConfig {
            nx: 1600,
            out: dir.path().join("out"),
            ..RunConfig::default()
        };
        cmd_forward(&cfg, &area).unwrap();
        let summary: ForwardSummary = io::read_json(&cfg.out.join("forward.json")).unwrap();
        assert!((summary.p_inf - 61.3665).abs() < 5e-4, "{}", summary.p_inf);
    }

    #[test]
    fn gl_round_trip_recovers_linear_duct_among_candidates() {
        let dir = tempfile::tempdir().unwrap();
        // r′(ℓ) < 0: the input is one of two candidates.
        let cfg = RunConfig {
            nx: 400,
            out: dir.path().join("out"),
            ..RunConfig::default()
        };
        let r = cmd_roundtrip(&cfg, &linear_table(dir.path(), 2.0, -0.03, 401)).unwrap();
        assert_eq!(r.candidates.len(), 2);
        assert!(r.best().max_relative < 1e-3, "{:?}", r.candidates);
        assert!(r.best().matches_input);
    }

    #[test]
    fn inverse_needs_a_length() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("s.csv");
        let g = Grid1D::new(0.003, 0.003, 100).unwrap();
        io::write_spectrum_csv(&p, &g, &vec![1.0; 100]).unwrap();
        let cfg = RunConfig {
            out: dir.path().join("o"),
            ..RunConfig::default()
        };
        let err = cmd_inverse(&cfg, &p).unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }
}
