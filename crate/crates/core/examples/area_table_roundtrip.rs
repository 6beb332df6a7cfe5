//! Round trip of a 44-row area table through the time-domain inversion:
//! area → |P| → area, with the relative error at every sample.
//!
//!     cargo run --release --example area_table_roundtrip

use std::path::Path;
use vocaltract::cli::{cmd_roundtrip, Method, RunConfig};

pub fn run_example() -> vocaltract::Result<()> {
    let table = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/area_44.csv");
    let out = tempfile::tempdir()?;
    let cfg = RunConfig {
        method: Method::Timedomain,
        out: out.path().to_path_buf(),
        ..RunConfig::default()
    };
    let report = cmd_roundtrip(&cfg, &table)?;
    println!("ℓ = {} cm, P∞ = {:.4}", report.ell, report.p_inf);
    for c in &report.candidates {
        println!(
            "candidate {}: L2 relative {:.2e}, max relative {:.2e}, matches input: {}",
            c.index, c.l2_relative, c.max_relative, c.matches_input
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
