//! Drive the batch runner as the binary does, writing reports and a manifest
//! into a temporary directory.

use clap::Parser;
use qmeasure::cli::{run, Cli, CommandOutcome};

pub fn run_in(dir: &std::path::Path) -> qmeasure::Result<CommandOutcome> {
    let out = dir.to_str().expect("utf-8 temp path");
    let cli = Cli::parse_from([
        "qmeasure",
        "way-suite",
        "--count",
        "50",
        "--seed",
        "9",
        "--out",
        out,
    ]);
    run(&cli)
}

pub fn main() -> qmeasure::Result<()> {
    let dir = tempfile::tempdir()?;
    let outcome = run_in(dir.path())?;
    println!("{}", outcome.summary);
    println!("config digest {}", outcome.manifest.config_digest);
    for path in &outcome.outputs {
        println!("wrote {}", path.display());
    }
    Ok(())
}
