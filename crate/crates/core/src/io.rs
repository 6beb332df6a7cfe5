//! File formats: area, radius and spectrum CSV tables, the JSON resonance
//! report and the run manifest.
//!
//! Floats are written with 17 significant digits, so a write-then-read
//! round trip reproduces every value bit for bit.

use serde::{Deserialize, Serialize};
use std::fs::File;
use std::io::Write;
use std::path::Path;

use crate::candidates::CandidateSet;
use crate::error::{Error, Result};
use crate::grid::Grid1D;
use crate::profile::{AreaFunction, RadiusProfile};
use crate::spectral::Scenario;
use crate::spectrum::PressureSpectrum;

pub const AREA_HEADER: [&str; 2] = ["x_cm", "area_cm2"];
pub const RADIUS_HEADER: [&str; 2] = ["x_cm", "radius_cm"];
pub const SPECTRUM_HEADER: [&str; 2] = ["k_rad_per_cm", "abs_pressure"];

/// Relative tolerance on the spacing of a table that must lie on a uniform grid.
const UNIFORM_TOL: f64 = 1e-9;

fn fmt(v: f64) -> String {
    format!("{v:.16e}")
}

fn write_columns(path: &Path, header: &[&str], columns: &[&[f64]]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(header)?;
    let rows = columns.first().map_or(0, |c| c.len());
    for i in 0..rows {
        w.write_record(columns.iter().map(|c| fmt(c[i])))?;
    }
    w.flush()?;
    Ok(())
}

/// Reads a numeric table with a header row; returns one vector per column.
/// With `expected` set, the header must match it exactly.
pub fn read_columns(path: &Path, expected: Option<&[&str]>) -> Result<Vec<Vec<f64>>> {
    let mut r = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)?;
    let header = r.headers()?.clone();
    if let Some(exp) = expected {
        if header.iter().ne(exp.iter().copied()) {
            return Err(Error::validation(format!(
                "{}: header {:?}, expected {:?}",
                path.display(),
                header.iter().collect::<Vec<_>>(),
                exp
            )));
        }
    }
    let mut cols = vec![Vec::new(); header.len()];
    for (line, rec) in r.records().enumerate() {
        let rec = rec?;
        for (c, field) in rec.iter().enumerate() {
            let v: f64 = field.parse().map_err(|_| {
                Error::validation(format!(
                    "{}: row {}: `{field}` is not a number",
                    path.display(),
                    line + 2
                ))
            })?;
            cols[c].push(v);
        }
    }
    Ok(cols)
}

fn two_columns(path: &Path, header: &[&str]) -> Result<(Vec<f64>, Vec<f64>)> {
    let mut cols = read_columns(path, Some(header))?;
    let y = cols.pop().unwrap_or_default();
    let x = cols.pop().unwrap_or_default();
    Ok((x, y))
}

/// The uniform grid through the abscissae `x`, or a validation error.
fn uniform_grid(x: &[f64], what: &str) -> Result<Grid1D> {
    if x.len() < 2 {
        return Err(Error::validation(format!("{what}: need at least two rows")));
    }
    let n = x.len();
    // Several step estimates agree to rounding; keep the one that regenerates
    // the abscissae most closely (k-grids written as j·Δk come back exactly).
    let deviation = |g: &Grid1D| (0..n).map(|i| (x[i] - g.at(i)).abs()).fold(0.0, f64::max);
    let mut candidates = vec![Grid1D::spanning(x[0], x[n - 1], n)?];
    for step in [x[1] - x[0], x[0]] {
        if let Ok(g) = Grid1D::new(x[0], step, n) {
            candidates.push(g);
        }
    }
    let grid = candidates
        .into_iter()
        .min_by(|a, b| deviation(a).total_cmp(&deviation(b)))
        .unwrap();
    let h = grid.step();
    if let Some(i) = (0..n).find(|&i| (x[i] - grid.at(i)).abs() > UNIFORM_TOL * h.max(x[i].abs())) {
        return Err(Error::validation(format!(
            "{what}: row {i} is off the uniform grid"
        )));
    }
    Ok(grid)
}

pub fn write_area_csv(path: &Path, area: &AreaFunction) -> Result<()> {
    write_columns(path, &AREA_HEADER, &[&area.grid().points(), area.values()])
}

pub fn write_radius_csv(path: &Path, radius: &RadiusProfile) -> Result<()> {
    write_columns(
        path,
        &RADIUS_HEADER,
        &[&radius.grid().points(), radius.values()],
    )
}

/// Reads a radius table on a uniform grid starting at `x = 0`.
pub fn read_radius_csv(path: &Path) -> Result<RadiusProfile> {
    let (x, r) = two_columns(path, &RADIUS_HEADER)?;
    let grid = uniform_grid(&x, "radius table")?;
    RadiusProfile::from_samples(grid, r)
}

pub fn write_spectrum_csv(path: &Path, kgrid: &Grid1D, values: &[f64]) -> Result<()> {
    write_columns(path, &SPECTRUM_HEADER, &[&kgrid.points(), values])
}

/// Reads `|P|` samples on a uniform k-grid.
pub fn read_spectrum_csv(path: &Path) -> Result<(Grid1D, Vec<f64>)> {
    let (k, p) = two_columns(path, &SPECTRUM_HEADER)?;
    Ok((uniform_grid(&k, "spectrum table")?, p))
}

/// Spectrum plus the length it should be fitted with.
pub fn load_spectrum(path: &Path, ell: Option<f64>) -> Result<PressureSpectrum> {
    let (kgrid, values) = read_spectrum_csv(path)?;
    PressureSpectrum::from_samples(kgrid, values, ell)
}

/// Parses a two-column `x, A(x)` table (header optional, any column names),
/// checks it and resamples it linearly onto `count` uniform points of `[0, ℓ]`.
///
/// `ℓ` defaults to the last abscissa; a smaller `ell` truncates the table.
pub fn ingest_area_table(path: &Path, ell: Option<f64>, count: usize) -> Result<AreaFunction> {
    let text = std::fs::read_to_string(path)?;
    let mut rows = Vec::new();
    for (line, raw) in text.lines().enumerate() {
        let fields: Vec<&str> = raw
            .split(|c: char| c == ',' || c == ';' || c.is_whitespace())
            .filter(|s| !s.is_empty())
            .collect();
        if fields.is_empty() || raw.trim_start().starts_with('#') {
            continue;
        }
        let parsed: std::result::Result<Vec<f64>, _> =
            fields.iter().map(|f| f.parse::<f64>()).collect();
        match parsed {
            Ok(v) if v.len() == 2 => rows.push((v[0], v[1])),
            Ok(v) => {
                return Err(Error::validation(format!(
                    "{}: line {}: expected 2 columns, found {}",
                    path.display(),
                    line + 1,
                    v.len()
                )))
            }
            Err(_) if rows.is_empty() => continue, // header
            Err(_) => {
                return Err(Error::validation(format!(
                    "{}: line {}: not numeric",
                    path.display(),
                    line + 1
                )))
            }
        }
    }
    area_from_table(&rows, ell, count)
}

/// Checks and resamples an `(x, A)` table; see [`ingest_area_table`].
pub fn area_from_table(
    rows: &[(f64, f64)],
    ell: Option<f64>,
    count: usize,
) -> Result<AreaFunction> {
    if rows.len() < 2 {
        return Err(Error::validation("area table needs at least two rows"));
    }
    if rows[0].0 != 0.0 {
        return Err(Error::validation(format!(
            "area table must start at the glottis, x = 0 (first x is {})",
            rows[0].0
        )));
    }
    for (i, w) in rows.windows(2).enumerate() {
        if w[1].0 == w[0].0 {
            return Err(Error::validation(format!(
                "area table: duplicate x = {} at row {}",
                w[1].0,
                i + 2
            )));
        }
        if w[1].0 < w[0].0 {
            return Err(Error::validation(format!(
                "area table: x decreases at row {}",
                i + 2
            )));
        }
    }
    if let Some((x, a)) = rows.iter().find(|(_, a)| !(*a > 0.0)) {
        return Err(Error::validation(format!(
            "area table: non-positive area {a} at x = {x}"
        )));
    }
    let last = rows[rows.len() - 1].0;
    let ell = ell.unwrap_or(last);
    if !(ell > 0.0) || ell > last * (1.0 + 1e-12) {
        return Err(Error::validation(format!(
            "length {ell} must lie in (0, {last}], the extent of the table"
        )));
    }
    let count = if rows.len() == 2 && ell == last {
        count.max(2)
    } else {
        count.max(3)
    };
    let grid = Grid1D::spanning(0.0, ell, count)?;
    let xs: Vec<f64> = rows.iter().map(|r| r.0).collect();
    let values = grid
        .points()
        .iter()
        .map(|&x| {
            let j = xs.partition_point(|&v| v <= x).clamp(1, xs.len() - 1);
            let (x0, a0) = rows[j - 1];
            let (x1, a1) = rows[j];
            a0 + (a1 - a0) * (x - x0) / (x1 - x0)
        })
        .collect();
    AreaFunction::from_samples(grid, values)
}

/// Summary of an inversion, written as `report.json`.
///
/// Per-resonance entries (`betas`, `g_sq`, `m_sq`) follow the order of the
/// bound-state candidates; `admissible` starts with the no-bound-state
/// candidate. Fields a method does not compute are `null`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub m_count: Option<usize>,
    pub betas: Vec<f64>,
    pub g_sq: Vec<f64>,
    pub m_sq: Vec<f64>,
    pub scenario: Option<Scenario>,
    pub admissible: Vec<bool>,
    pub p_inf: f64,
    pub ell: f64,
}

impl Report {
    pub fn from_candidates(set: &CandidateSet) -> Self {
        Self {
            m_count: Some(set.m_count),
            betas: set.report.betas.clone(),
            g_sq: set.report.g_sq.clone(),
            m_sq: set.report.m_sq.clone(),
            scenario: Some(set.report.scenario),
            admissible: std::iter::once(true)
                .chain(set.with_bound.iter().map(|c| c.admissible))
                .collect(),
            p_inf: set.p_inf,
            ell: set.ell,
        }
    }
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut f = File::create(path)?;
    serde_json::to_writer_pretty(&mut f, value)?;
    writeln!(f)?;
    Ok(())
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    Ok(serde_json::from_reader(File::open(path)?)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::path::PathBuf;

    fn tmp(name: &str) -> (tempfile::TempDir, PathBuf) {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join(name);
        (dir, p)
    }

    #[test]
    fn spectrum_round_trip_is_bit_exact() {
        let (_d, p) = tmp("s.csv");
        let g = Grid1D::new(0.003, 0.003, 50).unwrap();
        let v: Vec<f64> = g
            .points()
            .iter()
            .map(|k| (1.0 + 1.0 / (3.0 * k)).sqrt() * std::f64::consts::PI)
            .collect();
        write_spectrum_csv(&p, &g, &v).unwrap();
        let (g2, v2) = read_spectrum_csv(&p).unwrap();
        assert_eq!(v, v2);
        assert_eq!(g.points(), g2.points());
        let head = std::fs::read_to_string(&p).unwrap();
        assert!(head.starts_with("k_rad_per_cm,abs_pressure\n"));
    }

    #[test]
    fn radius_round_trip_is_bit_exact() {
        let (_d, p) = tmp("r.csv");
        let r = RadiusProfile::from_fn(
            16.0,
            81,
            |x| 1.0 + 0.1 * (x / 3.0).sin(),
            |x| 0.1 / 3.0 * (x / 3.0).cos(),
        )
        .unwrap();
        write_radius_csv(&p, &r).unwrap();
        let back = read_radius_csv(&p).unwrap();
        assert_eq!(back.values(), r.values());
        assert_eq!(back.grid(), r.grid());
    }

    #[test]
    fn two_row_table_is_linear() {
        let a = area_from_table(&[(0.0, 2.0), (10.0, 4.0)], None, 11).unwrap();
        for (i, v) in a.values().iter().enumerate() {
            assert!((v - (2.0 + 0.2 * i as f64)).abs() < 1e-14);
        }
        assert!((a.slope0() - 0.2).abs() < 1e-14 && (a.slope_l() - 0.2).abs() < 1e-14);
    }

    #[test]
    fn table_guards() {
        assert!(area_from_table(&[(0.0, 1.0), (1.0, 1.0), (1.0, 2.0)], None, 5).is_err());
        assert!(area_from_table(&[(0.0, 1.0), (2.0, 1.0), (1.0, 2.0)], None, 5).is_err());
        assert!(area_from_table(&[(0.0, 1.0), (1.0, 0.0)], None, 5).is_err());
        assert!(area_from_table(&[(0.5, 1.0), (1.0, 1.0)], None, 5).is_err());
        assert!(area_from_table(&[(0.0, 1.0), (1.0, 1.0)], Some(2.0), 5).is_err());
    }

    #[test]
    fn ingest_keeps_endpoints_and_skips_header() {
        let (_d, p) = tmp("a.txt");
        std::fs::write(&p, "x area\n0 3.0\n1.5 2.0\n4 5.5\n").unwrap();
        let a = ingest_area_table(&p, None, 9).unwrap();
        assert_eq!(a.length(), 4.0);
        assert_eq!(a.values()[0], 3.0);
        assert_eq!(*a.values().last().unwrap(), 5.5);
        assert!((a.values()[4] - (2.0 + 3.5 * 0.5 / 2.5)).abs() < 1e-12);
    }
}
