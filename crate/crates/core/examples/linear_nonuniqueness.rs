//! Two different ducts, r(x) ∝ 1 + ax and r(x) ∝ 1 − ax, radiate the same
//! absolute pressure P∞ k/√(k² + a²). The inversion returns both.
//!
//!     cargo run --release --example linear_nonuniqueness

use vocaltract::gelfand_levitan::{enumerate_candidates, InversionOptions};
use vocaltract::{Grid1D, PressureSpectrum};

pub fn run_example() -> vocaltract::Result<()> {
    let (a, ell, p_inf) = (0.05, 16.0, 10.0);
    let kgrid = Grid1D::new(0.003, 0.003, 1000)?;
    let values = kgrid
        .points()
        .iter()
        .map(|k| p_inf * k / (k * k + a * a).sqrt())
        .collect();
    let spectrum = PressureSpectrum::from_samples(kgrid, values, Some(ell))?;

    let set = enumerate_candidates(&spectrum, &InversionOptions::new(ell, 200))?;
    println!("eligible resonances: {}", set.m_count);
    for c in &set.with_bound {
        println!(
            "β = {:.6}, g² = {:.6}, admissible = {}",
            c.beta, c.g_sq, c.admissible
        );
    }
    let radii = set.admissible_radii();
    println!(
        "{:>6} {}",
        "x",
        (0..radii.len())
            .map(|j| format!("{:>10}", format!("r{j}")))
            .collect::<String>()
    );
    for x in [0.0, 4.0, 8.0, 12.0, 16.0] {
        let row: String = radii
            .iter()
            .map(|r| format!("{:>10.5}", r.eval(x)))
            .collect();
        println!("{x:>6.1} {row}");
    }
    Ok(())
}

fn main() {
    if let Err(e) = run_example() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
