//! Estimating an unknown duct length: the time-domain reconstruction is run
//! on a longer interval, and the length is where the curvature dies out.
//!
//!     cargo run --release --example unknown_length

use vocaltract::direct::pressure_spectrum_model;
use vocaltract::ducts::AnalyticDuct;
use vocaltract::time_domain::{detect_length, LENGTH_THRESHOLD};
use vocaltract::{Grid1D, PhysicalConstants, PressureSpectrum};

pub fn run_example() -> vocaltract::Result<()> {
    let ell = 16.11;
    let duct = AnalyticDuct::sine_series(0.8, 0.03, vec![0.1, -0.05, 0.03], ell)?;
    let kgrid = Grid1D::new(0.003, 0.003, 1000)?;
    let modelled = pressure_spectrum_model(&duct, &kgrid, &PhysicalConstants::default())?;
    let spectrum = PressureSpectrum::from_samples(kgrid, modelled.values().to_vec(), None)?;

    let found = detect_length(&spectrum, 24.0, 960, LENGTH_THRESHOLD)?;
    println!("true length {ell} cm, detected {found:.3} cm");
    Ok(())
}

fn main() {
    if let Err(e) = run_example() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
