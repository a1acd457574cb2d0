//! Tolerance sweep over the bundled synthetic four-factor design.

use std::fs::File;
use std::path::Path;

use numfan::design::{read_design, read_tolerance};
use numfan::{fans, EmpiricalDesign};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let data = Path::new(env!("CARGO_MANIFEST_DIR")).join("data");
    let design = read_design(File::open(data.join("synthetic4d.csv"))?)?;
    let tolerance = read_tolerance(File::open(data.join("synthetic4d_tol.csv"))?)?;
    let ed = EmpiricalDesign::new(design, tolerance)?;
    let (ed, _) = numfan::design::standardize(&ed)?;

    println!("{:>5} {:>8} {:>8} {:>8}", "k", "fan", "weak", "stable");
    for k in [2.0, 1.0, 0.5] {
        let result = fans::numerical_fan(&ed.scaled_tolerance(k)?, &fans::FanOptions::default())?;
        println!("{k:>5} {:>8} {:>8} {:>8}", result.fan.len(), result.weakly_maximal.len(), result.all_stable_count);
    }
    Ok(())
}
