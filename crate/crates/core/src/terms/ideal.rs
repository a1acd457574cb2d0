use std::collections::BTreeSet;
use std::fmt;

use super::{check_dim, format_terms, Term, TermOrder};
use crate::{Error, Result};

/// A finite, divisibility-closed set of terms together with its corner set.
///
/// The corner set holds the minimal terms (w.r.t. divisibility) outside the
/// ideal, i.e. exactly the terms `t` for which `members ∪ {t}` is again an
/// order ideal.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct OrderIdeal {
    dim: usize,
    members: BTreeSet<Term>,
    corners: BTreeSet<Term>,
}

/// Exact, injective byte encoding of an order ideal of fixed dimension.
///
/// Layout: `dim` and the number of corners as little-endian `u32`, followed
/// by the exponents of every corner (sorted) as little-endian `u32`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct CanonicalKey(Box<[u8]>);

impl CanonicalKey {
    pub(crate) fn encode<'a>(dim: usize, sorted_corners: impl ExactSizeIterator<Item = &'a Term>) -> Self {
        let count = sorted_corners.len();
        let mut bytes = Vec::with_capacity(8 + 4 * dim * count);
        bytes.extend_from_slice(&(dim as u32).to_le_bytes());
        bytes.extend_from_slice(&(count as u32).to_le_bytes());
        for t in sorted_corners {
            for &e in t.exponents() {
                bytes.extend_from_slice(&e.to_le_bytes());
            }
        }
        CanonicalKey(bytes.into_boxed_slice())
    }

    pub(crate) fn decode(&self) -> (usize, Vec<Term>) {
        let word = |i: usize| u32::from_le_bytes(self.0[4 * i..4 * i + 4].try_into().unwrap());
        let dim = word(0) as usize;
        let count = word(1) as usize;
        let corners = (0..count)
            .map(|c| Term::new((0..dim).map(|k| word(2 + c * dim + k))))
            .collect();
        (dim, corners)
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    /// The order ideal this key was computed from.
    pub fn to_ideal(&self) -> OrderIdeal {
        let (dim, corners) = self.decode();
        OrderIdeal::from_corners(dim, corners)
    }
}

/// Corner set of `O ∪ {t}` from the corner set of `O`.
///
/// `t` must be one of `corners`; `in_ideal` decides membership in `O`.
pub(crate) fn grow_corners<'a>(
    corners: impl IntoIterator<Item = &'a Term>,
    t: &Term,
    in_ideal: impl Fn(&Term) -> bool,
) -> Vec<Term> {
    let mut next: Vec<Term> = corners.into_iter().filter(|c| *c != t).cloned().collect();
    for k in 0..t.dim() {
        let candidate = t.mul_var(k);
        let closed = (0..t.dim())
            .filter(|&j| j != k)
            .filter_map(|j| candidate.div_var(j))
            .all(|below| in_ideal(&below));
        if closed {
            next.push(candidate);
        }
    }
    next
}

impl OrderIdeal {
    /// The empty order ideal; its only corner is `1`.
    pub fn empty(dim: usize) -> Self {
        OrderIdeal {
            dim,
            members: BTreeSet::new(),
            corners: BTreeSet::from([Term::one(dim)]),
        }
    }

    /// The order ideal `{1}`.
    pub fn one(dim: usize) -> Self {
        let e = OrderIdeal::empty(dim);
        e.with_added(&Term::one(dim)).expect("1 is a corner of the empty ideal")
    }

    /// Builds an order ideal from its full member list, checking closure.
    pub fn from_terms(dim: usize, terms: impl IntoIterator<Item = Term>) -> Result<Self> {
        let members: BTreeSet<Term> = terms.into_iter().collect();
        for m in &members {
            check_dim(dim, m.dim())?;
            for k in 0..dim {
                if let Some(below) = m.div_var(k) {
                    if !members.contains(&below) {
                        return Err(Error::NotAnOrderIdeal(below.to_string()));
                    }
                }
            }
        }
        let corners = corners_of(dim, &members);
        Ok(OrderIdeal { dim, members, corners })
    }

    /// The smallest order ideal containing `generators`.
    pub fn generated_by(dim: usize, generators: impl IntoIterator<Item = Term>) -> Result<Self> {
        let mut members = BTreeSet::new();
        let mut stack = Vec::new();
        for g in generators {
            check_dim(dim, g.dim())?;
            stack.push(g);
        }
        while let Some(t) = stack.pop() {
            if members.insert(t.clone()) {
                stack.extend((0..dim).filter_map(|k| t.div_var(k)));
            }
        }
        let corners = corners_of(dim, &members);
        Ok(OrderIdeal { dim, members, corners })
    }

    /// Rebuilds an order ideal from its corner set (the inverse of
    /// [`OrderIdeal::canonical_key`]). The corner set must describe a finite ideal.
    pub(crate) fn from_corners(dim: usize, corners: Vec<Term>) -> Self {
        let mut members = BTreeSet::new();
        let inside = |t: &Term| !corners.iter().any(|c| c.divides_unchecked(t));
        let mut stack = Vec::new();
        if inside(&Term::one(dim)) {
            stack.push(Term::one(dim));
        }
        while let Some(t) = stack.pop() {
            if members.contains(&t) {
                continue;
            }
            for k in 0..dim {
                let up = t.mul_var(k);
                if inside(&up) {
                    stack.push(up);
                }
            }
            members.insert(t);
        }
        OrderIdeal { dim, members, corners: corners.into_iter().collect() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &BTreeSet<Term> {
        &self.members
    }

    pub fn corners(&self) -> &BTreeSet<Term> {
        &self.corners
    }

    pub fn contains(&self, t: &Term) -> bool {
        self.members.contains(t)
    }

    /// Members sorted ascending in `order`.
    pub fn sorted_terms(&self, order: &TermOrder) -> Vec<Term> {
        let mut v: Vec<Term> = self.members.iter().cloned().collect();
        order.sort(&mut v);
        v
    }

    /// Corners sorted ascending in `order`.
    pub fn sorted_corners(&self, order: &TermOrder) -> Vec<Term> {
        let mut v: Vec<Term> = self.corners.iter().cloned().collect();
        order.sort(&mut v);
        v
    }

    /// Corner set of `self ∪ {t}`, computed incrementally from the current one.
    pub fn corner_set_after_add(&self, t: &Term) -> Result<BTreeSet<Term>> {
        check_dim(self.dim, t.dim())?;
        if !self.corners.contains(t) {
            return Err(Error::NotACorner(t.to_string()));
        }
        Ok(grow_corners(&self.corners, t, |s| self.members.contains(s)).into_iter().collect())
    }

    /// `self ∪ {t}` for a corner `t`.
    pub fn with_added(&self, t: &Term) -> Result<OrderIdeal> {
        let corners = self.corner_set_after_add(t)?;
        let mut members = self.members.clone();
        members.insert(t.clone());
        Ok(OrderIdeal { dim: self.dim, members, corners })
    }

    /// Members without a proper multiple in the ideal, sorted.
    pub fn maximal_elements(&self) -> Vec<Term> {
        self.members
            .iter()
            .filter(|m| (0..self.dim).all(|k| !self.members.contains(&m.mul_var(k))))
            .cloned()
            .collect()
    }

    pub fn canonical_key(&self) -> CanonicalKey {
        CanonicalKey::encode(self.dim, self.corners.iter())
    }

    pub fn is_subset(&self, other: &OrderIdeal) -> bool {
        self.dim == other.dim && self.members.is_subset(&other.members)
    }

    /// Checks divisibility closure and the corner-set cache against the definition.
    pub fn is_consistent(&self) -> bool {
        let closed = self
            .members
            .iter()
            .all(|m| (0..self.dim).filter_map(|k| m.div_var(k)).all(|b| self.members.contains(&b)));
        closed && self.corners == corners_of(self.dim, &self.members)
    }
}

fn corners_of(dim: usize, members: &BTreeSet<Term>) -> BTreeSet<Term> {
    if members.is_empty() {
        return BTreeSet::from([Term::one(dim)]);
    }
    members
        .iter()
        .flat_map(|m| (0..dim).map(move |k| m.mul_var(k)))
        .filter(|c| !members.contains(c))
        .filter(|c| (0..dim).filter_map(|j| c.div_var(j)).all(|b| members.contains(&b)))
        .collect()
}

impl fmt::Debug for OrderIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_terms(&self.maximal_elements()))
    }
}

impl fmt::Display for OrderIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_terms(&self.maximal_elements()))
    }
}
