//! Classifies the preset weight families and a few hand-built ones.

use gnlift::gnatural::{classify, preset_family, WeightFamily, CLASSIFY_SAMPLES, PRESET_NAMES};

fn main() -> gnlift::Result<()> {
    let mut families: Vec<WeightFamily> = PRESET_NAMES.iter().map(|n| preset_family(n)).collect::<Result<_, _>>()?;
    // a = a1(a1 + a3) - a2^2 vanishes identically
    families.push(WeightFamily::constants("a1=a2=1", [1.0, 1.0, 0.0], [0.0; 3]));
    families.push(WeightFamily::constants("a1=0,a2=2", [0.0, 2.0, 0.0], [0.0; 3]));

    for dim in [1, 3] {
        println!("base dimension {dim}");
        for f in &families {
            println!("  {:<18} {:?}", f.name, classify(f, 16.0, CLASSIFY_SAMPLES, dim));
        }
    }
    Ok(())
}
