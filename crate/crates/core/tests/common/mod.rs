#![allow(dead_code)]

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use numfan::dependence::{Decision, FittedModel};
use numfan::fans::NumericalFan;
use numfan::{Design, EmpiricalDesign, Fan, OrderIdeal, Term};
use rand::rngs::StdRng;
use rand::Rng;

/// A model as the set of its exponent vectors.
pub type Model = BTreeSet<Vec<u32>>;

/// All exponent vectors in `d` variables of total degree at most `max_degree`,
/// sorted by degree.
pub fn terms_up_to(d: usize, max_degree: u32) -> Vec<Vec<u32>> {
    let mut out: Vec<Vec<u32>> = vec![vec![]];
    for _ in 0..d {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (0..=max_degree).map(move |e| {
                    let mut v = prefix.clone();
                    v.push(e);
                    v
                })
            })
            .filter(|v| v.iter().sum::<u32>() <= max_degree)
            .collect();
    }
    out.sort_by_key(|v| v.iter().sum::<u32>());
    out
}

/// Every divisibility-closed set of exactly `n` terms, by include/exclude
/// recursion over terms sorted by degree.
pub fn staircases(d: usize, n: usize) -> Vec<Model> {
    fn go(terms: &[Vec<u32>], i: usize, n: usize, current: &mut Model, out: &mut Vec<Model>) {
        if current.len() == n {
            out.push(current.clone());
            return;
        }
        if i == terms.len() {
            return;
        }
        let t = &terms[i];
        let closed = (0..t.len()).all(|k| {
            if t[k] == 0 {
                return true;
            }
            let mut s = t.clone();
            s[k] -= 1;
            current.contains(&s)
        });
        if closed {
            current.insert(t.clone());
            go(terms, i + 1, n, current, out);
            current.remove(t);
        }
        go(terms, i + 1, n, current, out);
    }
    let terms = terms_up_to(d, n.saturating_sub(1) as u32);
    let mut out = Vec::new();
    go(&terms, 0, n, &mut BTreeSet::new(), &mut out);
    out
}

/// Rank by Gaussian elimination over the rationals.
pub fn rational_rank(mut rows: Vec<Vec<BigRational>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows.len()).find(|&r| !rows[r][c].is_zero()) else { continue };
        rows.swap(rank, p);
        for r in 0..rows.len() {
            if r != rank && !rows[r][c].is_zero() {
                let f = &rows[r][c] / &rows[rank][c];
                let pivot = rows[rank].clone();
                for (x, y) in rows[r].iter_mut().zip(&pivot) {
                    *x = &*x - &f * y;
                }
            }
        }
        rank += 1;
    }
    rank
}

pub fn monomial(point: &[BigRational], exponents: &[u32]) -> BigRational {
    point.iter().zip(exponents).fold(BigRational::one(), |acc, (x, &e)| {
        (0..e).fold(acc, |a, _| a * x)
    })
}

/// Whether `model` is identifiable by the exact coordinates of `design`.
pub fn identifiable(design: &Design, model: &Model) -> bool {
    let rows: Vec<Vec<BigRational>> = (0..design.n())
        .map(|i| {
            let p = design.exact_point(i).expect("exact design");
            model.iter().map(|e| monomial(p, e)).collect()
        })
        .collect();
    rational_rank(rows) == model.len()
}

pub fn brute_statistical_fan(design: &Design) -> BTreeSet<Model> {
    staircases(design.d(), design.n()).into_iter().filter(|m| identifiable(design, m)).collect()
}

pub fn models(fan: &Fan) -> BTreeSet<Model> {
    fan.ideals()
        .map(|o| o.members().iter().map(|t| t.exponents().to_vec()).collect())
        .collect()
}

/// Models given by their maximal elements.
pub fn generated(d: usize, maximal: &[&[u32]]) -> Model {
    let mut out = Model::new();
    let mut stack: Vec<Vec<u32>> = maximal.iter().map(|m| m.to_vec()).collect();
    assert!(stack.iter().all(|m| m.len() == d));
    while let Some(t) = stack.pop() {
        if out.insert(t.clone()) {
            for k in 0..d {
                if t[k] > 0 {
                    let mut s = t.clone();
                    s[k] -= 1;
                    stack.push(s);
                }
            }
        }
    }
    out
}

pub fn maximal_sets(fan: &Fan) -> BTreeSet<BTreeSet<Vec<u32>>> {
    fan.maximal_element_sets()
        .into_iter()
        .map(|v| v.iter().map(|t| t.exponents().to_vec()).collect())
        .collect()
}

pub fn set_of(groups: &[&[&[u32]]]) -> BTreeSet<BTreeSet<Vec<u32>>> {
    groups.iter().map(|g| g.iter().map(|e| e.to_vec()).collect()).collect()
}

/// Distinct points with coordinates `a/b`, `|a| ≤ spread`, `1 ≤ b ≤ 3`.
pub fn random_rational_design(rng: &mut impl Rng, n: usize, d: usize, spread: i64) -> Design {
    loop {
        let rows: Vec<Vec<String>> = (0..n)
            .map(|_| (0..d).map(|_| format!("{}/{}", rng.gen_range(-spread..=spread), rng.gen_range(1..=3))).collect())
            .collect();
        let design = Design::parse_rows(&rows).unwrap();
        if design.find_duplicate().is_none() {
            return design;
        }
    }
}

pub fn rational(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn random_float_design(rng: &mut StdRng, n: usize, d: usize) -> Design {
    let rows: Vec<Vec<f64>> = (0..n).map(|_| (0..d).map(|_| rng.gen_range(-2.0..2.0)).collect()).collect();
    Design::from_f64_rows(&rows).unwrap()
}

pub fn random_empirical(rng: &mut StdRng) -> EmpiricalDesign {
    let n = rng.gen_range(3..=7);
    let d = rng.gen_range(1..=3);
    let design = random_float_design(rng, n, d);
    let tolerance = (0..d).map(|_| rng.gen_range(0.005..0.25)).collect();
    EmpiricalDesign::new(design, tolerance).unwrap()
}

/// Smallest relative distance from a tie over every dependence test the
/// enumeration performed.
pub fn verdict_margin(ed: &EmpiricalDesign, result: &NumericalFan) -> f64 {
    let d = ed.design.d();
    let mut ideals: Vec<OrderIdeal> = result.stable_keys.iter().map(|k| k.to_ideal()).collect();
    ideals.push(OrderIdeal::empty(d));
    let mut margin = f64::INFINITY;
    for ideal in ideals {
        let terms: Vec<Term> = ideal.members().iter().cloned().collect();
        let model = FittedModel::new(ed, &terms, Decision::Float).unwrap();
        for c in ideal.corners() {
            let v = model.test(c).unwrap();
            if terms.len() >= ed.design.n() {
                continue;
            }
            for (r, b) in v.residual.iter().zip(&v.bound_vector) {
                let scale = r.abs().max(*b).max(1e-300);
                margin = margin.min((r.abs() - b).abs() / scale);
            }
        }
    }
    margin
}


/// Divisibility closure, full rank and the antichain property of a fan.
pub fn well_formed(fan: &Fan, design: &Design) -> Result<(), String> {
    let ideals: Vec<&OrderIdeal> = fan.ideals().collect();
    for (i, a) in ideals.iter().enumerate() {
        if !a.is_consistent() {
            return Err(format!("inconsistent corner set: {:?}", a.members()));
        }
        for m in a.members() {
            for k in 0..m.dim() {
                if m.div_var(k).is_some_and(|s| !a.contains(&s)) {
                    return Err(format!("{:?} is not divisibility closed", a.members()));
                }
            }
        }
        let terms: Vec<Term> = a.members().iter().cloned().collect();
        let matrix = numfan::design::design_matrix(&terms, design).map_err(|e| e.to_string())?.entries;
        if !numfan::linalg::condition_number(&matrix).map_err(|e| e.to_string())?.is_finite() {
            return Err(format!("{:?} is numerically singular", a.maximal_elements()));
        }
        for (j, b) in ideals.iter().enumerate() {
            if i != j && a.is_subset(b) {
                return Err(format!("{:?} lies inside {:?}", a.maximal_elements(), b.maximal_elements()));
            }
        }
    }
    Ok(())
}
