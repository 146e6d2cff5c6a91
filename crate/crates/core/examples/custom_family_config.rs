//! Runs the checks from a TOML config with a rational weight family.

use gnlift::verify::config::ConfigFile;
use gnlift::verify::{run, RunConfig};

const CONFIG: &str = r#"
scenario = "great-circle-s3"
points = 4
seed = 11
sign_toggle = "auto"

[family]
name = "rational-cg-like"
a1 = { numerator = [1], denominator = [1, 1] }
a3 = { numerator = [0, 1], denominator = [1, 1] }
b1 = { numerator = [1], denominator = [1, 1] }
b3 = [[1, 2]]

[fiber]
radii = [0.5, 1.5]
"#;

fn main() -> gnlift::Result<()> {
    let cfg = RunConfig::from_file(&ConfigFile::parse(CONFIG)?)?;
    let report = run(&cfg)?;
    print!("{}", report.to_text());
    Ok(())
}
