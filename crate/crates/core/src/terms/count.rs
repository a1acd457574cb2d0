use std::collections::HashSet;

use super::ideal::{grow_corners, CanonicalKey};
use super::Term;
use crate::{Error, Result};

/// Number of order ideals with exactly `n` terms in `d` variables, or with at
/// between one and `n` terms when `cumulative` is set.
///
/// Ideals are grown level by level through corner additions and deduplicated
/// on their exact canonical keys. `budget` caps the total number of distinct
/// ideals held across all levels.
pub fn count_order_ideals(d: usize, n: usize, cumulative: bool, budget: usize) -> Result<u64> {
    if d == 0 {
        return Err(Error::Usage("dimension must be at least 1".into()));
    }
    let mut level: Vec<CanonicalKey> = vec![CanonicalKey::encode(d, [Term::one(d)].iter())];
    let mut total: u64 = 0;
    let mut visited: usize = 1;
    for _ in 0..n {
        let mut next: HashSet<CanonicalKey> = HashSet::new();
        for key in &level {
            let (_, corners) = key.decode();
            let in_ideal = |s: &Term| !corners.iter().any(|c| c.divides_unchecked(s));
            for t in &corners {
                let mut grown = grow_corners(&corners, t, in_ideal);
                grown.sort_unstable();
                if next.insert(CanonicalKey::encode(d, grown.iter())) {
                    visited += 1;
                    if visited > budget {
                        return Err(Error::BudgetExceeded { budget });
                    }
                }
            }
        }
        total += next.len() as u64;
        level = next.into_iter().collect();
    }
    Ok(if cumulative { total } else { level.len() as u64 })
}
