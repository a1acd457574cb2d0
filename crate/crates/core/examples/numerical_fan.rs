//! Numerical statistical fan of a nearly factorial design as the tolerance grows.

use numfan::{fans, Design, EmpiricalDesign};

fn main() -> numfan::Result<()> {
    let design = Design::parse_rows(&[&["1", "1"], &["1", "-1.001"], &["-1", "1"], &["-1", "-1"]])?;
    for delta in [0.0, 0.0004, 0.0006, 0.01] {
        let ed = EmpiricalDesign::new(design.clone(), vec![0.0, delta])?;
        let result = fans::numerical_fan(&ed, &fans::FanOptions::default())?;
        let models: Vec<String> = result
            .fan
            .maximal_element_sets()
            .iter()
            .map(|m| numfan::terms::format_terms(m))
            .collect();
        println!(
            "delta2 = {delta:<7} {} model(s), {} stable ideals: {}",
            result.fan.len(),
            result.all_stable_count,
            models.join(" ")
        );
    }
    Ok(())
}
