//! Statistical fan of a four-point design, decided in exact arithmetic.

use numfan::{fans, Design};

fn main() -> numfan::Result<()> {
    let design = Design::parse_rows(&[&["1", "-1"], &["-1", "1"], &["-1", "-1"], &["0", "0"]])?;
    let result = fans::statistical_fan_with(&design, &fans::FanOptions::default())?;
    println!("{} identifiable order ideals, {} in the fan", result.identifiable_count, result.fan.len());
    for model in result.fan.models() {
        println!("  maximal elements {}", numfan::terms::format_terms(&model.maximal_elements));
    }
    Ok(())
}
