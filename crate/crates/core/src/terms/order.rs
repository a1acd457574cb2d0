use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use super::Term;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OrderKind {
    Lex,
    DegLex,
    DegRevLex,
}

impl OrderKind {
    pub const ALL: [OrderKind; 3] = [OrderKind::Lex, OrderKind::DegLex, OrderKind::DegRevLex];
}

impl FromStr for OrderKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "lex" => Ok(OrderKind::Lex),
            "deglex" => Ok(OrderKind::DegLex),
            "degrevlex" => Ok(OrderKind::DegRevLex),
            other => Err(Error::Usage(format!(
                "unknown term order '{other}' (expected lex, deglex or degrevlex)"
            ))),
        }
    }
}

impl fmt::Display for OrderKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OrderKind::Lex => "lex",
            OrderKind::DegLex => "deglex",
            OrderKind::DegRevLex => "degrevlex",
        })
    }
}

/// A term order together with a ranking of the variables.
///
/// `variables[0]` is the most significant variable. The identity ranking
/// gives `X1 > X2 > ... > Xd`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TermOrder {
    kind: OrderKind,
    variables: Vec<usize>,
}

impl TermOrder {
    pub fn new(kind: OrderKind, dim: usize) -> Self {
        TermOrder { kind, variables: (0..dim).collect() }
    }

    /// `variables` must be a permutation of `0..d` (zero-based axes).
    pub fn with_permutation(kind: OrderKind, variables: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; variables.len()];
        for &v in &variables {
            if v >= variables.len() || seen[v] {
                return Err(Error::Usage(format!("{variables:?} is not a permutation")));
            }
            seen[v] = true;
        }
        Ok(TermOrder { kind, variables })
    }

    pub fn deglex(dim: usize) -> Self {
        Self::new(OrderKind::DegLex, dim)
    }

    pub fn kind(&self) -> OrderKind {
        self.kind
    }

    pub fn variables(&self) -> &[usize] {
        &self.variables
    }

    pub fn dim(&self) -> usize {
        self.variables.len()
    }

    pub fn cmp(&self, a: &Term, b: &Term) -> Ordering {
        let lex = || {
            for &v in &self.variables {
                match a.exponents()[v].cmp(&b.exponents()[v]) {
                    Ordering::Equal => continue,
                    other => return other,
                }
            }
            Ordering::Equal
        };
        match self.kind {
            OrderKind::Lex => lex(),
            OrderKind::DegLex => a.degree().cmp(&b.degree()).then_with(lex),
            OrderKind::DegRevLex => a.degree().cmp(&b.degree()).then_with(|| {
                // smaller exponent in the least significant differing variable wins
                for &v in self.variables.iter().rev() {
                    match a.exponents()[v].cmp(&b.exponents()[v]) {
                        Ordering::Equal => continue,
                        other => return other.reverse(),
                    }
                }
                Ordering::Equal
            }),
        }
    }

    /// Sorts terms ascending in this order.
    pub fn sort(&self, terms: &mut [Term]) {
        terms.sort_by(|a, b| self.cmp(a, b));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn t(e: &[u32]) -> Term {
        Term::new(e.iter().copied())
    }

    #[test]
    fn deglex_prefers_low_powers_of_last_variable() {
        let o = TermOrder::deglex(2);
        let mut v = vec![t(&[2, 0]), t(&[1, 1]), t(&[0, 2]), t(&[0, 1]), t(&[0, 0])];
        o.sort(&mut v);
        assert_eq!(v, vec![t(&[0, 0]), t(&[0, 1]), t(&[0, 2]), t(&[1, 1]), t(&[2, 0])]);
    }

    #[test]
    fn degrevlex_differs_from_deglex_in_three_variables() {
        // x1*x3 vs x2^2: deglex puts x1*x3 higher, degrevlex puts x2^2 higher.
        let a = t(&[1, 0, 1]);
        let b = t(&[0, 2, 0]);
        assert_eq!(TermOrder::deglex(3).cmp(&a, &b), Ordering::Greater);
        assert_eq!(TermOrder::new(OrderKind::DegRevLex, 3).cmp(&a, &b), Ordering::Less);
    }

    #[test]
    fn lex_with_permutation() {
        let o = TermOrder::with_permutation(OrderKind::Lex, vec![1, 0]).unwrap();
        assert_eq!(o.cmp(&t(&[5, 0]), &t(&[0, 1])), Ordering::Less);
        assert!(TermOrder::with_permutation(OrderKind::Lex, vec![0, 0]).is_err());
    }

    #[test]
    fn parse_names() {
        assert_eq!("DegLex".parse::<OrderKind>().unwrap(), OrderKind::DegLex);
        assert!("grevlex".parse::<OrderKind>().is_err());
    }

    fn term3() -> impl Strategy<Value = Term> {
        prop::collection::vec(0u32..4, 3).prop_map(Term::new)
    }

    fn order3() -> impl Strategy<Value = TermOrder> {
        (0usize..3, Just(vec![0usize, 1, 2]).prop_shuffle()).prop_map(|(k, p)| {
            TermOrder::with_permutation(OrderKind::ALL[k], p).unwrap()
        })
    }

    proptest! {
        #[test]
        fn orders_are_multiplicative_total_well_orders(o in order3(), a in term3(), b in term3(), c in term3()) {
            let one = Term::one(3);
            prop_assert_ne!(o.cmp(&one, &a), Ordering::Greater);
            prop_assert_eq!(o.cmp(&a, &b) == Ordering::Equal, a == b);
            prop_assert_eq!(o.cmp(&a, &b), o.cmp(&b, &a).reverse());
            let mul = |x: &Term, y: &Term| Term::new(x.exponents().iter().zip(y.exponents()).map(|(p, q)| p + q));
            prop_assert_eq!(o.cmp(&a, &b), o.cmp(&mul(&a, &c), &mul(&b, &c)));
            if o.cmp(&a, &b) == Ordering::Less && o.cmp(&b, &c) == Ordering::Less {
                prop_assert_eq!(o.cmp(&a, &c), Ordering::Less);
            }
        }
    }
}
