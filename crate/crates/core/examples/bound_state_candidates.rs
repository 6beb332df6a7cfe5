//! Constant-potential duct whose Jost function has one eligible resonance:
//! the extra candidate is admissible for a shallow well and rejected
//! (non-positive lip radius) for a deeper one.
//!
//!     cargo run --release --example bound_state_candidates

use vocaltract::direct::spectrum_from_jost;
use vocaltract::ducts::ConstantPotentialJost;
use vocaltract::gelfand_levitan::{enumerate_candidates, InversionOptions};
use vocaltract::Grid1D;

pub fn run_example() -> vocaltract::Result<()> {
    let kgrid = Grid1D::new(0.003, 0.003, 1000)?;
    for v in [-1.0 / 100.0, -1.0 / 300.0] {
        let jost = ConstantPotentialJost {
            v,
            cot_theta: 0.01,
            ell: 16.0,
        };
        let spectrum = spectrum_from_jost(&jost, &kgrid, 60.0, 16.0)?;
        let set = enumerate_candidates(&spectrum, &InversionOptions::new(16.0, 200))?;
        println!(
            "v = {v:.5}: M = {}, scenario {}",
            set.m_count,
            set.report.scenario.label()
        );
        for c in &set.with_bound {
            let lip = c.radius.as_ref().map(|r| format!("{:.4}", r.r_l()));
            println!(
                "  β = {:.5}  g = {:.5}  admissible = {}  r(ℓ) = {}",
                c.beta,
                c.g_sq.sqrt(),
                c.admissible,
                lip.unwrap_or_else(|| "-".into())
            );
        }
    }
    Ok(())
}

fn main() {
    if let Err(e) = run_example() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
