use std::collections::{HashMap, HashSet};

use num_rational::BigRational;

use super::{filter_inclusion_maximal, Fan, FanOptions};
use crate::dependence::{Decision, FittedModel};
use crate::linalg::{rational_mod, ExactElimination, ModularElimination};
use crate::terms::{CanonicalKey, OrderIdeal, Term, TermOrder};
use crate::{Design, EmpiricalDesign, Error, Result};

#[derive(Clone, Copy, PartialEq, Eq)]
enum Leaves {
    /// Keep ideals with as many terms as design points.
    FullSize,
    /// Keep ideals none of whose corners is independent.
    WeaklyMaximal,
}

struct Enumeration {
    leaves: Vec<OrderIdeal>,
    visited: HashSet<CanonicalKey>,
    expansions: usize,
}

/// Per-node state of the dependence test.
///
/// Exact nodes first reduce modulo a large prime, where independence is
/// conclusive; only apparent dependence is confirmed in rational arithmetic.
/// A node whose modular state lost track of the true rank (an unlucky
/// prime) carries the rational echelon form instead.
#[derive(Clone)]
enum Model {
    Exact { terms: Vec<Term>, modular: Option<ModularElimination>, rational: Option<ExactElimination> },
    Float(Vec<Term>),
}

struct Columns<'a> {
    design: &'a Design,
    rational: HashMap<Term, Vec<BigRational>>,
    modular: HashMap<Term, Option<Vec<u64>>>,
}

impl Columns<'_> {
    fn rational(&mut self, t: &Term) -> Result<&[BigRational]> {
        if !self.rational.contains_key(t) {
            let column = self
                .design
                .exact_column(t)
                .ok_or_else(|| Error::ExactUnavailable("the design has no exact coordinates".into()))?;
            self.rational.insert(t.clone(), column);
        }
        Ok(&self.rational[t])
    }

    fn modular(&mut self, t: &Term) -> Result<Option<&[u64]>> {
        if !self.modular.contains_key(t) {
            let residues = self.rational(t)?.iter().map(rational_mod).collect::<Option<Vec<u64>>>();
            self.modular.insert(t.clone(), residues);
        }
        Ok(self.modular[t].as_deref())
    }

    fn echelon(&mut self, terms: &[Term]) -> Result<ExactElimination> {
        let mut elim = ExactElimination::new(self.design.n());
        for t in terms {
            elim.extend(self.rational(t)?)?;
        }
        Ok(elim)
    }
}

/// The child model for `t`, or `None` if `t` is dependent on `model`.
fn grow_exact(
    terms: &[Term],
    modular: &Option<ModularElimination>,
    rational: &mut Option<ExactElimination>,
    t: &Term,
    columns: &mut Columns,
) -> Result<Option<Model>> {
    let mut child_terms = terms.to_vec();
    child_terms.push(t.clone());
    if let (Some(m), Some(column)) = (modular, columns.modular(t)?) {
        if let Some(next) = m.extended(column)? {
            return Ok(Some(Model::Exact { terms: child_terms, modular: Some(next), rational: None }));
        }
    }
    if rational.is_none() {
        *rational = Some(columns.echelon(terms)?);
    }
    let extended = rational.as_ref().expect("just built").extended(columns.rational(t)?)?;
    Ok(extended.map(|next| Model::Exact { terms: child_terms, modular: None, rational: Some(next) }))
}

/// Depth-first growth from the empty ideal through independent corner
/// terms, visiting every reachable order ideal once.
fn enumerate(
    ed: &EmpiricalDesign,
    decision: Decision,
    strategy: &TermOrder,
    budget: usize,
    rule: Leaves,
) -> Result<Enumeration> {
    let d = ed.design.d();
    let n = ed.design.n();
    let mut visited: HashSet<CanonicalKey> = HashSet::new();
    let mut leaves = Vec::new();
    let mut expansions = 0usize;
    let mut columns = Columns { design: &ed.design, rational: HashMap::new(), modular: HashMap::new() };
    let root = match decision {
        Decision::Exact => {
            Model::Exact { terms: Vec::new(), modular: Some(ModularElimination::new(n)), rational: None }
        }
        Decision::Float => Model::Float(Vec::new()),
    };
    let mut stack: Vec<(OrderIdeal, Model)> = vec![(OrderIdeal::empty(d), root)];
    while let Some((ideal, mut model)) = stack.pop() {
        if !ideal.is_empty() {
            expansions += 1;
        }
        if rule == Leaves::FullSize && ideal.len() == n {
            leaves.push(ideal);
            continue;
        }
        let fitted = match &model {
            Model::Float(terms) => Some(FittedModel::new(ed, terms, decision)?),
            Model::Exact { .. } => None,
        };
        let mut weakly_maximal = true;
        for t in ideal.sorted_corners(strategy) {
            let next = match (&mut model, &fitted) {
                (Model::Exact { terms, modular, rational }, _) => grow_exact(terms, modular, rational, &t, &mut columns)?,
                (Model::Float(terms), Some(fitted)) => fitted.is_independent(&t)?.then(|| {
                    let mut next = terms.clone();
                    next.push(t.clone());
                    Model::Float(next)
                }),
                (Model::Float(_), None) => unreachable!("float models are fitted"),
            };
            let Some(next) = next else { continue };
            weakly_maximal = false;
            let grown = ideal.with_added(&t)?;
            if visited.insert(grown.canonical_key()) {
                if visited.len() > budget {
                    return Err(Error::BudgetExceeded { budget });
                }
                stack.push((grown, next));
            }
        }
        if rule == Leaves::WeaklyMaximal && weakly_maximal {
            leaves.push(ideal);
        }
    }
    Ok(Enumeration { leaves, visited, expansions })
}

/// Outcome of the stable-order-ideal enumeration.
#[derive(Clone, Debug)]
pub struct NumericalFan {
    /// Inclusion-maximal stable order ideals.
    pub fan: Fan,
    /// Stable order ideals none of whose corner terms is numerically independent.
    pub weakly_maximal: Fan,
    /// Distinct nonempty stable order ideals encountered, `{1}` included.
    pub all_stable_count: usize,
    /// Canonical keys of those ideals.
    pub stable_keys: HashSet<CanonicalKey>,
    /// Number of nonempty ideals whose corner sets were examined.
    pub expansions: usize,
}

/// Numerical statistical fan of `(D, δ)`.
///
/// With `δ = 0` and exact coordinates (under [`crate::Arithmetic::Auto`]) the
/// dependence test is exact and the result coincides with the statistical fan.
pub fn numerical_fan(ed: &EmpiricalDesign, options: &FanOptions) -> Result<NumericalFan> {
    let decision = Decision::resolve(options.arithmetic, ed)?;
    let strategy = options.strategy_for(ed.design.d());
    let run = enumerate(ed, decision, &strategy, options.budget, Leaves::WeaklyMaximal)?;
    let maximal = filter_inclusion_maximal(run.leaves.iter().cloned());
    Ok(NumericalFan {
        fan: Fan::from_ideals(maximal, &ed.design)?,
        weakly_maximal: Fan::from_ideals(run.leaves, &ed.design)?,
        all_stable_count: run.visited.len(),
        stable_keys: run.visited,
        expansions: run.expansions,
    })
}

#[derive(Clone, Debug)]
pub struct StatisticalFan {
    pub fan: Fan,
    /// Nonempty identifiable order ideals of every size.
    pub identifiable_count: usize,
}

/// Statistical fan of `D`: identifiable order ideals with `n` terms.
pub fn statistical_fan(design: &Design) -> Result<Fan> {
    Ok(statistical_fan_with(design, &FanOptions::default())?.fan)
}

pub fn statistical_fan_with(design: &Design, options: &FanOptions) -> Result<StatisticalFan> {
    if let Some((first, second)) = design.find_duplicate() {
        return Err(Error::DuplicatePoints { first, second });
    }
    let ed = EmpiricalDesign::exact(design.clone());
    let decision = Decision::resolve(options.arithmetic, &ed)?;
    let strategy = options.strategy_for(design.d());
    let run = enumerate(&ed, decision, &strategy, options.budget, Leaves::FullSize)?;
    Ok(StatisticalFan {
        fan: Fan::from_ideals(run.leaves, design)?,
        identifiable_count: run.visited.len(),
    })
}
