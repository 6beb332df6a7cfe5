//! The `vtract` command line driven in-process: forward spectrum of an area
//! table, then inversion of that spectrum with the Marchenko route.
//!
//!     cargo run --release --example cli_usage
//!
//! The same commands from a shell:
//!
//!     vtract forward fixtures/area_44.csv --out out/fwd
//!     vtract inverse out/fwd/spectrum.csv --ell 16.11 --method marchenko --out out/inv

use clap::Parser;
use std::path::Path;
use vocaltract::cli::{run, Cli};

pub fn run_example() -> vocaltract::Result<()> {
    let table = Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/area_44.csv");
    let out = tempfile::tempdir()?;
    let fwd = out.path().join("fwd");
    let inv = out.path().join("inv");
    let spectrum = fwd.join("spectrum.csv");

    run(Cli::parse_from([
        "vtract".as_ref(),
        "forward".as_ref(),
        table.as_os_str(),
        "--out".as_ref(),
        fwd.as_os_str(),
    ]))?;
    run(Cli::parse_from([
        "vtract".as_ref(),
        "inverse".as_ref(),
        spectrum.as_os_str(),
        "--ell".as_ref(),
        "16.11".as_ref(),
        "--method".as_ref(),
        "marchenko".as_ref(),
        "--nx".as_ref(),
        "200".as_ref(),
        "--out".as_ref(),
        inv.as_os_str(),
    ]))?;

    let mut files: Vec<String> = std::fs::read_dir(&inv)?
        .filter_map(|e| e.ok().map(|e| e.file_name().to_string_lossy().into_owned()))
        .collect();
    files.sort();
    println!("inverse wrote: {}", files.join(", "));
    Ok(())
}

fn main() {
    if let Err(e) = run_example() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
