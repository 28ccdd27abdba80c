//! Regenerate every table into a directory (default `repro_out`).
//!
//! cargo run --release --example reproduce -- [OUT_DIR]

use std::path::PathBuf;

use stabwit::report::{run_reproduction_suite, SuiteOptions};

fn main() -> stabwit::Result<()> {
    let out = std::env::args().nth(1).map(PathBuf::from).unwrap_or_else(|| PathBuf::from("repro_out"));
    let outcome = run_reproduction_suite(&out, &SuiteOptions::default())?;
    for (name, text) in &outcome.tables {
        println!("{name}: {} rows", text.lines().count() - 1);
    }
    for f in &outcome.failures {
        println!("FAIL {f}");
    }
    println!("{} failing rows, written to {}", outcome.failures.len(), out.display());
    std::process::exit(outcome.exit_code());
}
