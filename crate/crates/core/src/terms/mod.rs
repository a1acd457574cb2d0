//! Monomials as exponent vectors, term orders, order ideals and counting.

mod count;
mod ideal;
mod order;

pub use count::count_order_ideals;
pub use ideal::{CanonicalKey, OrderIdeal};
pub use order::{OrderKind, TermOrder};

use std::fmt;

use smallvec::SmallVec;

use crate::{Error, Result};

/// A monomial `X1^a1 * ... * Xd^ad`, stored as its dense exponent vector.
///
/// The derived ordering is lexicographic on the exponent vector. It is used
/// for canonical encodings only; model-building strategies use [`TermOrder`].
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Term(SmallVec<[u32; 4]>);

impl Term {
    pub fn new(exponents: impl IntoIterator<Item = u32>) -> Self {
        Term(exponents.into_iter().collect())
    }

    /// The constant term `1` in `d` variables.
    pub fn one(dim: usize) -> Self {
        Term(SmallVec::from_elem(0, dim))
    }

    /// The variable `X_{k+1}` (zero-based axis `k`).
    pub fn var(dim: usize, axis: usize) -> Self {
        let mut t = Term::one(dim);
        t.0[axis] = 1;
        t
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    /// `self * X_{axis+1}`.
    pub fn mul_var(&self, axis: usize) -> Term {
        let mut t = self.clone();
        t.0[axis] += 1;
        t
    }

    /// `self / X_{axis+1}`, if that is still a monomial.
    pub fn div_var(&self, axis: usize) -> Option<Term> {
        if self.0[axis] == 0 {
            return None;
        }
        let mut t = self.clone();
        t.0[axis] -= 1;
        Some(t)
    }

    /// Divisibility `self | other`, i.e. componentwise `<=` of exponents.
    pub fn divides(&self, other: &Term) -> Result<bool> {
        check_dim(self.dim(), other.dim())?;
        Ok(self.divides_unchecked(other))
    }

    pub(crate) fn divides_unchecked(&self, other: &Term) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(a, b)| a <= b)
    }
}

/// Free-function form of [`Term::divides`].
pub fn divides(s: &Term, t: &Term) -> Result<bool> {
    s.divides(t)
}

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return f.write_str("1");
        }
        let mut first = true;
        for (k, &e) in self.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                f.write_str("*")?;
            }
            first = false;
            write!(f, "X{}", k + 1)?;
            if e > 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Renders a list of terms as `{X1^2, X2}`.
pub fn format_terms(terms: &[Term]) -> String {
    let parts: Vec<String> = terms.iter().map(Term::to_string).collect();
    format!("{{{}}}", parts.join(", "))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(e: &[u32]) -> Term {
        Term::new(e.iter().copied())
    }

    #[test]
    fn divisibility() {
        assert!(divides(&t(&[1, 0]), &t(&[1, 1])).unwrap());
        assert!(!divides(&t(&[2, 0]), &t(&[1, 1])).unwrap());
        assert!(divides(&t(&[0, 0]), &t(&[3, 7])).unwrap());
        assert!(divides(&t(&[0, 0]), &t(&[0, 0])).unwrap());
        assert!(matches!(
            divides(&t(&[0, 0]), &t(&[0, 0, 1])),
            Err(Error::DimensionMismatch { expected: 2, found: 3 })
        ));
    }

    #[test]
    fn rendering() {
        assert_eq!(Term::one(3).to_string(), "1");
        assert_eq!(t(&[1, 3]).to_string(), "X1*X2^3");
        assert_eq!(t(&[0, 2, 0]).to_string(), "X2^2");
        assert_eq!(format_terms(&[t(&[2, 0]), t(&[0, 1])]), "{X1^2, X2}");
    }

    #[test]
    fn var_arithmetic() {
        let x = Term::var(2, 1);
        assert_eq!(x.mul_var(1), t(&[0, 2]));
        assert_eq!(x.div_var(1), Some(Term::one(2)));
        assert_eq!(x.div_var(0), None);
        assert_eq!(t(&[2, 3]).degree(), 5);
    }
}
