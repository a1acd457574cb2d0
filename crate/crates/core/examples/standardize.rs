//! Standardizing a design onto [-1, 1] and checking δ-separation.

use numfan::design::{check_separation, standardize};
use numfan::{Design, EmpiricalDesign};

fn main() -> numfan::Result<()> {
    let design = Design::from_f64_rows(&[[150.0, 0.2], [200.0, 0.2], [150.0, 0.6], [200.0, 0.6], [175.0, 0.41]])?;
    let ed = EmpiricalDesign::new(design, vec![5.0, 0.02])?;

    let (unit, maps) = standardize(&ed)?;
    for (k, map) in maps.iter().enumerate() {
        println!("X{}: min {} range {} -> delta {}", k + 1, map.min, map.range, unit.tolerance[k]);
    }
    for p in unit.design.points() {
        println!("  {p:?}");
    }

    let close = check_separation(&ed);
    println!("pairs closer than 2 delta on every axis: {close:?}");
    Ok(())
}
