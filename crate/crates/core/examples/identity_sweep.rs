//! Runs every scenario against a few weight families and prints per-identity
//! pass counts.
//!
//! cargo run --release --example identity_sweep -- [family ...]

use gnlift::verify::{run, RunConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let families: Vec<&str> = if args.is_empty() {
        vec!["sasaki", "cheeger-gromoll", "coupled"]
    } else {
        args.iter().map(String::as_str).collect()
    };
    for family in families {
        let cfg = RunConfig::preset("all", family)?.with_points(4).with_seed(1);
        let report = run(&cfg)?;
        println!("{}", report.to_text());
    }
    Ok(())
}
