//! Forward problem: the absolute pressure at the lips of a vowel-like duct,
//! its high-frequency plateau P∞ and the first formants.
//!
//!     cargo run --example forward_spectrum

use vocaltract::consts::frequency_from_k;
use vocaltract::direct::pressure_spectrum_model;
use vocaltract::ducts::AnalyticDuct;
use vocaltract::{Grid1D, PhysicalConstants};

pub fn run_example() -> vocaltract::Result<()> {
    let consts = PhysicalConstants::default();
    let duct = AnalyticDuct::sine_series(0.8, 0.03, vec![0.1, -0.05, 0.03], 16.11)?;
    let kgrid = Grid1D::new(0.003, 0.003, 1000)?;
    let spectrum = pressure_spectrum_model(&duct, &kgrid, &consts)?;

    println!("P∞ fitted  {:.6}", spectrum.p_inf());
    println!("P∞ exact   {:.6}", duct.p_inf(&consts));

    let k = kgrid.points();
    let v = spectrum.values();
    let peaks: Vec<f64> = (1..v.len() - 1)
        .filter(|&i| v[i] > v[i - 1] && v[i] > v[i + 1])
        .map(|i| frequency_from_k(k[i], &consts))
        .take(4)
        .collect();
    println!(
        "formants (Hz): {}",
        peaks
            .iter()
            .map(|f| format!("{f:.0}"))
            .collect::<Vec<_>>()
            .join(", ")
    );
    Ok(())
}

fn main() {
    if let Err(e) = run_example() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
