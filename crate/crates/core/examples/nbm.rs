//! Order ideal and almost vanishing polynomials from greedy NBM, plus the family
//! of NBM outputs over all term orders and variable permutations.

use numfan::{fans, Arithmetic, Design, EmpiricalDesign, TermOrder};

fn main() -> numfan::Result<()> {
    let design = Design::parse_rows(&[&["1", "6"], &["2", "3"], &["2.449", "2.449"], &["3", "2"], &["6", "1"]])?;
    let ed = EmpiricalDesign::new(design, vec![0.018, 0.018])?;

    let out = fans::nbm(&ed, &TermOrder::deglex(2), Arithmetic::Auto)?;
    println!("order ideal: {}", numfan::terms::format_terms(&out.terms));
    for g in &out.polynomials {
        let size = g.residual.iter().map(|r| r * r).sum::<f64>().sqrt();
        println!("  leading {}  coefficients {:?}  |g(D)| = {size:.3e}", g.leading, g.coefficients);
    }

    let family = fans::numerical_algebraic_fan_family(&ed, &fans::FanOptions::default())?;
    println!("family of NBM outputs: {} model(s)", family.len());
    for m in family.maximal_element_sets() {
        println!("  {}", numfan::terms::format_terms(&m));
    }
    Ok(())
}
