//! The Gel'fand–Levitan and Marchenko routes are independent; on the same
//! spectrum they must return the same candidates.
//!
//!     cargo run --release --example marchenko_cross_check

use vocaltract::direct::pressure_spectrum_model;
use vocaltract::ducts::AnalyticDuct;
use vocaltract::gelfand_levitan::{self as gl, InversionOptions};
use vocaltract::{marchenko, Grid1D, PhysicalConstants, PressureSpectrum};

pub fn run_example() -> vocaltract::Result<()> {
    let ell = 16.0;
    let duct = AnalyticDuct::sine_series(1.0, 0.02, vec![0.06, -0.04, 0.02], ell)?;
    let kgrid = Grid1D::new(0.003, 0.003, 1000)?;
    let modelled = pressure_spectrum_model(&duct, &kgrid, &PhysicalConstants::default())?;
    let spectrum = PressureSpectrum::from_samples(kgrid, modelled.values().to_vec(), Some(ell))?;

    let opts = InversionOptions::new(ell, 200);
    let a = gl::enumerate_candidates(&spectrum, &opts)?;
    let b = marchenko::enumerate_candidates(&spectrum, &opts)?;
    println!("M: Gel'fand–Levitan {}, Marchenko {}", a.m_count, b.m_count);
    println!(
        "no-bound candidate: max |Δr| / r = {:.2e}",
        a.no_bound.max_relative_error(&b.no_bound)
    );
    for (x, y) in a.with_bound.iter().zip(&b.with_bound) {
        println!(
            "β {:.6} / {:.6}, g² {:.6} / {:.6}",
            x.beta, y.beta, x.g_sq, y.g_sq
        );
        if let (Some(rx), Some(ry)) = (&x.radius, &y.radius) {
            println!("  max |Δr| / r = {:.2e}", rx.max_relative_error(ry));
        }
    }
    let exact = duct.sample(201)?;
    let best = a
        .admissible_radii()
        .iter()
        .map(|r| r.max_relative_error(&exact))
        .fold(f64::INFINITY, f64::min);
    println!("closest candidate to the true duct: max relative error {best:.2e}");
    Ok(())
}

fn main() {
    if let Err(e) = run_example() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
