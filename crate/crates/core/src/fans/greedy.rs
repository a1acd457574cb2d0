use itertools::Itertools;

use super::{Fan, FanOptions};
use crate::dependence::{Decision, FittedModel};
use crate::linalg::Arithmetic;
use crate::terms::{OrderIdeal, OrderKind, Term, TermOrder};
use crate::{EmpiricalDesign, Error, Result};

/// `leading − Σ a_l t_l`, numerically vanishing on the design.
#[derive(Clone, Debug)]
pub struct AlmostVanishing {
    pub leading: Term,
    /// Coefficients on [`NbmOutput::terms`].
    pub coefficients: Vec<f64>,
    /// Values of the polynomial at the design points.
    pub residual: Vec<f64>,
}

#[derive(Clone, Debug)]
pub struct NbmOutput {
    pub order_ideal: OrderIdeal,
    /// Members of `order_ideal` in increasing term order.
    pub terms: Vec<Term>,
    /// One polynomial per corner term, in increasing term order.
    pub polynomials: Vec<AlmostVanishing>,
}

/// Greedy numerical Buchberger–Möller: repeatedly try the smallest corner term
/// that is not a multiple of a rejected one. Independent terms join the ideal,
/// dependent ones are set aside.
///
/// Under the residual bound a term rejected against a smaller ideal can test
/// independent against a larger one, so once no candidate is left every
/// corner is tested again; growth resumes from the smallest independent
/// corner. The result is therefore weakly maximal, and each polynomial is
/// the least-squares residual of its leading corner term on the final ideal.
pub fn nbm(ed: &EmpiricalDesign, order: &TermOrder, arithmetic: Arithmetic) -> Result<NbmOutput> {
    let d = ed.design.d();
    if order.dim() != d {
        return Err(Error::DimensionMismatch { expected: d, found: order.dim() });
    }
    let decision = Decision::resolve(arithmetic, ed)?;
    let mut ideal = OrderIdeal::one(d);
    let mut columns = vec![Term::one(d)];
    let mut model = FittedModel::new(ed, &columns, decision)?;
    let mut rejected: Vec<Term> = Vec::new();
    let polynomials = loop {
        let candidate = ideal
            .sorted_corners(order)
            .into_iter()
            .find(|c| !rejected.iter().any(|r| r.divides_unchecked(c)));
        let t = match candidate {
            Some(t) if model.test(&t)?.independent => t,
            Some(t) => {
                rejected.push(t);
                continue;
            }
            None => {
                let mut verdicts = Vec::new();
                for c in ideal.sorted_corners(order) {
                    let v = model.test(&c)?;
                    verdicts.push((c, v));
                }
                match verdicts.iter().find(|(_, v)| v.independent) {
                    Some((c, _)) => {
                        rejected.retain(|r| r != c);
                        c.clone()
                    }
                    None => break verdicts,
                }
            }
        };
        ideal = ideal.with_added(&t)?;
        columns.push(t);
        model = FittedModel::new(ed, &columns, decision)?;
    };
    let terms = ideal.sorted_terms(order);
    let polynomials = polynomials
        .into_iter()
        .map(|(leading, v)| {
            let coefficients = terms
                .iter()
                .map(|s| {
                    let l = columns.iter().position(|c| c == s).expect("model term");
                    -v.coefficients[l]
                })
                .collect();
            AlmostVanishing { leading, coefficients, residual: v.residual }
        })
        .collect();
    Ok(NbmOutput { order_ideal: ideal, terms, polynomials })
}

/// Weakly maximal stable order ideal grown along `strategy`.
pub fn maximal_stable_order_ideal(
    ed: &EmpiricalDesign,
    strategy: &TermOrder,
    arithmetic: Arithmetic,
) -> Result<OrderIdeal> {
    Ok(nbm(ed, strategy, arithmetic)?.order_ideal)
}

/// NBM ideals over lex, deglex and degrevlex for every ordering of the variables.
pub fn numerical_algebraic_fan_family(ed: &EmpiricalDesign, options: &FanOptions) -> Result<Fan> {
    let d = ed.design.d();
    let runs = (1..=d).try_fold(OrderKind::ALL.len(), |acc, k| acc.checked_mul(k));
    if runs.is_none_or(|r| r > options.budget) {
        return Err(Error::BudgetExceeded { budget: options.budget });
    }
    let mut ideals = Vec::new();
    for kind in OrderKind::ALL {
        for perm in (0..d).permutations(d) {
            let order = TermOrder::with_permutation(kind, perm)?;
            ideals.push(maximal_stable_order_ideal(ed, &order, options.arithmetic)?);
        }
    }
    Fan::from_ideals(ideals, &ed.design)
}
