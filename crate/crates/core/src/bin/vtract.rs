use clap::Parser;
use vocaltract::cli::{run, Cli};

fn main() {
    if let Err(e) = run(Cli::parse()) {
        eprintln!("vtract: {e}");
        std::process::exit(e.exit_code());
    }
}
