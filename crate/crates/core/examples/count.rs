//! Number of order ideals in four variables by size.

use numfan::fans::DEFAULT_BUDGET;
use numfan::terms::count_order_ideals;

fn main() -> numfan::Result<()> {
    for n in 1..=12 {
        let exact = count_order_ideals(4, n, false, DEFAULT_BUDGET)?;
        let upto = count_order_ideals(4, n, true, DEFAULT_BUDGET)?;
        println!("n = {n:>2}  p_4(n) = {exact:>6}  p_4(<=n) = {upto:>6}");
    }
    Ok(())
}
