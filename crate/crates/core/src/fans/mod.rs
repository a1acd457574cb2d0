//! Fans of identifiable hierarchical models.
//!
//! * [`statistical_fan`]: all identifiable order ideals with `n` terms.
//! * [`numerical_fan`]: all weakly maximal stable order ideals of `(D, δ)` and
//!   their inclusion-maximal subset, the numerical statistical fan.
//! * [`maximal_stable_order_ideal`] / [`nbm`]: one greedy model per term order.
//! * [`numerical_algebraic_fan_family`]: NBM over three orders and all
//!   coordinate permutations.

mod enumerate;
mod greedy;

pub use enumerate::{numerical_fan, statistical_fan, statistical_fan_with, NumericalFan, StatisticalFan};
pub use greedy::{maximal_stable_order_ideal, nbm, numerical_algebraic_fan_family, AlmostVanishing, NbmOutput};

use std::collections::{BTreeMap, HashSet};

use crate::design::design_matrix;
use crate::linalg::{condition_number, Arithmetic};
use crate::terms::{OrderIdeal, Term, TermOrder};
use crate::{Design, Result};

pub const DEFAULT_BUDGET: usize = 10_000_000;

#[derive(Clone, Debug)]
pub struct FanOptions {
    /// Order in which corner terms are tried; deglex with `X1 > ... > Xd` if unset.
    pub strategy: Option<TermOrder>,
    pub arithmetic: Arithmetic,
    /// Maximum number of distinct order ideals visited.
    pub budget: usize,
}

impl Default for FanOptions {
    fn default() -> Self {
        FanOptions { strategy: None, arithmetic: Arithmetic::Auto, budget: DEFAULT_BUDGET }
    }
}

impl FanOptions {
    pub(crate) fn strategy_for(&self, dim: usize) -> TermOrder {
        self.strategy.clone().unwrap_or_else(|| TermOrder::deglex(dim))
    }
}

/// One model of a fan with its diagnostics.
#[derive(Clone, Debug)]
pub struct FanModel {
    pub ideal: OrderIdeal,
    pub maximal_elements: Vec<Term>,
    pub size: usize,
    /// 2-norm condition number of the design matrix (`+∞` if numerically singular).
    pub condition_number: f64,
}

impl FanModel {
    pub fn new(ideal: OrderIdeal, design: &Design) -> Result<Self> {
        let terms: Vec<Term> = ideal.members().iter().cloned().collect();
        let condition_number = if terms.is_empty() {
            f64::INFINITY
        } else {
            condition_number(&design_matrix(&terms, design)?.entries)?
        };
        Ok(FanModel {
            maximal_elements: ideal.maximal_elements(),
            size: ideal.len(),
            condition_number,
            ideal,
        })
    }
}

/// A set of order ideals, sorted by size and then canonical key.
#[derive(Clone, Debug, Default)]
pub struct Fan {
    models: Vec<FanModel>,
}

impl Fan {
    pub fn from_ideals(ideals: impl IntoIterator<Item = OrderIdeal>, design: &Design) -> Result<Self> {
        let mut seen = HashSet::new();
        let mut models = ideals
            .into_iter()
            .filter(|o| seen.insert(o.canonical_key()))
            .map(|o| FanModel::new(o, design))
            .collect::<Result<Vec<_>>>()?;
        models.sort_by_cached_key(|m| (m.size, m.ideal.canonical_key()));
        Ok(Fan { models })
    }

    pub fn len(&self) -> usize {
        self.models.len()
    }

    pub fn is_empty(&self) -> bool {
        self.models.is_empty()
    }

    pub fn models(&self) -> &[FanModel] {
        &self.models
    }

    pub fn ideals(&self) -> impl Iterator<Item = &OrderIdeal> {
        self.models.iter().map(|m| &m.ideal)
    }

    pub fn contains(&self, ideal: &OrderIdeal) -> bool {
        self.ideals().any(|o| o == ideal)
    }

    /// The models' maximal-element encodings.
    pub fn maximal_element_sets(&self) -> Vec<Vec<Term>> {
        self.models.iter().map(|m| m.maximal_elements.clone()).collect()
    }

    /// Number of models per size.
    pub fn histogram(&self) -> BTreeMap<usize, usize> {
        let mut h = BTreeMap::new();
        for m in &self.models {
            *h.entry(m.size).or_insert(0) += 1;
        }
        h
    }
}

/// Keeps the order ideals not properly contained in another one of the family.
pub fn filter_inclusion_maximal(models: impl IntoIterator<Item = OrderIdeal>) -> Vec<OrderIdeal> {
    let mut seen = HashSet::new();
    let mut by_size: Vec<OrderIdeal> = models.into_iter().filter(|o| seen.insert(o.canonical_key())).collect();
    by_size.sort_by_key(|o| std::cmp::Reverse(o.len()));
    let mut kept: Vec<OrderIdeal> = Vec::new();
    for candidate in by_size {
        let generators = candidate.maximal_elements();
        // Only strictly larger ideals can contain it, and containment is transitive,
        // so checking the survivors is enough.
        let covered = kept
            .iter()
            .filter(|k| k.len() > candidate.len())
            .any(|k| generators.iter().all(|g| k.contains(g)));
        if !covered {
            kept.push(candidate);
        }
    }
    kept
}
