//! Phase retrieval: the no-bound-state Jost function rebuilt from |P| alone,
//! compared with the exact F(k) = k + ia of a widening linear duct.
//!
//!     cargo run --example outer_function

use num_complex::Complex64;
use vocaltract::spectral::outer_jost;
use vocaltract::{Grid1D, PressureSpectrum};

pub fn run_example() -> vocaltract::Result<()> {
    let a = 0.05;
    let kgrid = Grid1D::new(0.003, 0.003, 1000)?;
    let values = kgrid
        .points()
        .iter()
        .map(|k| 10.0 * k / (k * k + a * a).sqrt())
        .collect();
    let spectrum = PressureSpectrum::from_samples(kgrid, values, Some(16.0))?;

    let outer = outer_jost(&spectrum)?;
    println!("σ = {:.6} (exact {a})", outer.sigma);
    println!("{:>8} {:>12} {:>12}", "k", "arg F", "exact");
    for i in [0, 9, 99, 499, 999] {
        let k = kgrid.points()[i];
        let exact = Complex64::new(k, a);
        println!(
            "{k:>8.3} {:>12.6} {:>12.6}",
            outer.values[i].arg(),
            exact.arg()
        );
    }
    Ok(())
}

fn main() {
    if let Err(e) = run_example() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
