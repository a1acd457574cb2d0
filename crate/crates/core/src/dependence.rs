//! Numerical (in)dependence of a candidate design vector on a model.
//!
//! For an empirical design `(D, δ)`, a model `𝒪` with design matrix `M` and a
//! candidate term `t`, let `a` solve `M a ≈ t(D)` with residual `ρ` and let
//! `P⊥ = I − M M⁺`. The candidate is declared numerically independent iff for
//! some design point `i`
//!
//! ```text
//! |ρ_i| > Σ_j |P⊥|_ij · Σ_k δ_k · |∂_k t(p_j) − Σ_l ∂_k t_l(p_j) a_l|
//! ```
//!
//! i.e. the residual exceeds its first-order sensitivity to perturbations of
//! the points within `δ`. Ties count as dependence. With `δ = 0` the test
//! degenerates to `ρ ≠ 0`, which is decided exactly on rational input.

use nalgebra::{DMatrix, DVector};

use crate::design::{derivative_matrix, design_matrix, eval_partial, EmpiricalDesign};
use num_rational::BigRational;
use num_traits::ToPrimitive;

use crate::linalg::{exact_least_squares, Arithmetic, ExactElimination, LeastSquares, LeastSquaresResult};
use crate::terms::{check_dim, Term};
use crate::{Design, Error, Result};

#[derive(Clone, Debug)]
pub struct DependenceVerdict {
    pub independent: bool,
    pub residual_norm: f64,
    /// Right-hand sides of the independence test, one per design point.
    pub bound_vector: Vec<f64>,
    /// Design point whose residual beats its bound by the widest margin.
    pub witness_index: Option<usize>,
    pub residual: Vec<f64>,
    /// Least-squares coefficients of the candidate on the model terms.
    pub coefficients: Vec<f64>,
}

impl DependenceVerdict {
    /// `min_i ||ρ_i| − bound_i|`, the distance of the verdict from a tie.
    pub fn margin(&self) -> f64 {
        self.residual
            .iter()
            .zip(&self.bound_vector)
            .map(|(r, b)| (r.abs() - b).abs())
            .fold(f64::INFINITY, f64::min)
    }
}

/// How dependence is decided for a given empirical design.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Decision {
    Exact,
    Float,
}

impl Decision {
    pub fn resolve(arithmetic: Arithmetic, ed: &EmpiricalDesign) -> Result<Decision> {
        match arithmetic {
            Arithmetic::Float => Ok(Decision::Float),
            Arithmetic::Auto if ed.is_noise_free() && ed.design.has_exact() => Ok(Decision::Exact),
            Arithmetic::Auto => Ok(Decision::Float),
            Arithmetic::Exact if !ed.is_noise_free() => Err(Error::ExactUnavailable(
                "the tolerance is nonzero; numerical dependence is a floating-point test".into(),
            )),
            Arithmetic::Exact if !ed.design.has_exact() => {
                Err(Error::ExactUnavailable("the design has no exact coordinates".into()))
            }
            Arithmetic::Exact => Ok(Decision::Exact),
        }
    }
}

/// Per-point bounds `Σ_j |P⊥|_ij c_j` with `c_j = Σ_k δ_k |∂_k t(p_j) − (X_{∂_k 𝒪} a)_j|`.
pub fn fassino_bounds(
    terms: &[Term],
    design: &Design,
    tolerance: &[f64],
    t: &Term,
    lsq: &LeastSquaresResult,
) -> Result<Vec<f64>> {
    check_dim(design.d(), tolerance.len())?;
    check_dim(design.d(), t.dim())?;
    check_dim(terms.len(), lsq.coefficients.len())?;
    check_dim(design.n(), lsq.residual.len())?;
    let derivatives = (0..design.d())
        .map(|k| derivative_matrix(terms, design, k))
        .collect::<Result<Vec<_>>>()?;
    Ok(bounds(design, tolerance, t, &derivatives, &lsq.coefficients, &lsq.projector_complement))
}

fn bounds(
    design: &Design,
    tolerance: &[f64],
    t: &Term,
    model_derivatives: &[DMatrix<f64>],
    coefficients: &DVector<f64>,
    projector: &DMatrix<f64>,
) -> Vec<f64> {
    let n = design.n();
    let mut sensitivity = DVector::zeros(n);
    for (k, &delta) in tolerance.iter().enumerate() {
        if delta == 0.0 {
            continue;
        }
        let fitted = &model_derivatives[k] * coefficients;
        for j in 0..n {
            let own = eval_partial(t, design.point(j), k);
            sensitivity[j] += delta * (own - fitted[j]).abs();
        }
    }
    let abs_projector = projector.abs();
    (abs_projector * sensitivity).iter().copied().collect()
}

/// A model `𝒪` prepared for repeated dependence queries: the design matrix is
/// factorised once and its partial-derivative matrices are cached.
pub struct FittedModel<'a> {
    ed: &'a EmpiricalDesign,
    terms: Vec<Term>,
    decision: Decision,
    lsq: Option<LeastSquares>,
    derivatives: Vec<DMatrix<f64>>,
    exact: Option<(ExactElimination, Vec<Vec<BigRational>>)>,
}

impl<'a> FittedModel<'a> {
    pub fn new(ed: &'a EmpiricalDesign, terms: &[Term], decision: Decision) -> Result<Self> {
        let design = &ed.design;
        let matrix = design_matrix(terms, design)?.entries;
        let lsq = match (LeastSquares::new(matrix), decision) {
            (Ok(l), _) => Some(l),
            (Err(_), Decision::Exact) => None,
            (Err(e), Decision::Float) => return Err(e),
        };
        let exact = match decision {
            Decision::Exact => {
                let mut elim = ExactElimination::new(design.n());
                let mut columns = Vec::with_capacity(terms.len());
                for t in terms {
                    let col = exact_column(design, t)?;
                    if !elim.extend(&col)?.independent {
                        return Err(Error::RankDeficient);
                    }
                    columns.push(col);
                }
                Some((elim, columns))
            }
            Decision::Float => None,
        };
        let derivatives = (0..design.d())
            .map(|k| derivative_matrix(terms, design, k))
            .collect::<Result<Vec<_>>>()?;
        Ok(FittedModel { ed, terms: terms.to_vec(), decision, lsq, derivatives, exact })
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn decision(&self) -> Decision {
        self.decision
    }

    /// Least-squares fit of `t(D)` on the model columns (`None` if the
    /// floating-point factorisation failed on an exactly independent model).
    pub fn fit(&self, t: &Term) -> Result<Option<LeastSquaresResult>> {
        check_dim(self.ed.design.d(), t.dim())?;
        let b = DVector::from_vec(self.ed.design.column(t));
        self.lsq.as_ref().map(|l| l.solve(&b)).transpose()
    }

    /// The verdict of [`FittedModel::test`] without the exact-arithmetic diagnostics.
    pub fn is_independent(&self, t: &Term) -> Result<bool> {
        match &self.exact {
            Some((elim, _)) => elim.is_independent(&exact_column(&self.ed.design, t)?),
            None => Ok(self.test(t)?.independent),
        }
    }

    pub fn test(&self, t: &Term) -> Result<DependenceVerdict> {
        let design = &self.ed.design;
        let n = design.n();
        let argmax = |v: &[f64]| {
            (0..v.len()).max_by(|&i, &j| v[i].abs().total_cmp(&v[j].abs())).unwrap_or(0)
        };

        match self.decision {
            Decision::Exact => {
                let col = exact_column(design, t)?;
                let (elim, columns) = self.exact.as_ref().expect("exact state");
                let independent = elim.is_independent(&col)?;
                let a = exact_least_squares(columns, &col)?;
                let to_f64 = |x: &BigRational| x.to_f64().unwrap_or(f64::NAN);
                let residual: Vec<f64> = (0..n)
                    .map(|i| to_f64(&columns.iter().zip(&a).fold(col[i].clone(), |acc, (c, ai)| acc - &c[i] * ai)))
                    .collect();
                let coefficients = a.iter().map(to_f64).collect();
                let residual_norm = residual.iter().map(|r| r * r).sum::<f64>().sqrt();
                Ok(DependenceVerdict {
                    independent,
                    residual_norm,
                    bound_vector: vec![0.0; n],
                    witness_index: independent.then(|| argmax(&residual)),
                    residual,
                    coefficients,
                })
            }
            Decision::Float => {
                let fit = self.fit(t)?.expect("float models always factorise");
                let residual: Vec<f64> = fit.residual.iter().copied().collect();
                let coefficients: Vec<f64> = fit.coefficients.iter().copied().collect();
                let residual_norm = fit.residual.norm();
                let bound_vector = bounds(
                    design,
                    &self.ed.tolerance,
                    t,
                    &self.derivatives,
                    &fit.coefficients,
                    &fit.projector_complement,
                );
                // Rounding floor: residuals this small are indistinguishable from zero.
                let b_norm = residual_norm_of_target(design, t);
                let floor = 16.0 * n as f64 * f64::EPSILON
                    * (b_norm + self.lsq.as_ref().unwrap().matrix().norm() * fit.coefficients.norm());
                let witness_index = if self.terms.len() >= n {
                    None
                } else {
                    (0..n)
                        .filter(|&i| residual[i].abs() > bound_vector[i] + floor)
                        .max_by(|&i, &j| {
                            (residual[i].abs() - bound_vector[i]).total_cmp(&(residual[j].abs() - bound_vector[j]))
                        })
                };
                Ok(DependenceVerdict {
                    independent: witness_index.is_some(),
                    residual_norm,
                    bound_vector,
                    witness_index,
                    residual,
                    coefficients,
                })
            }
        }
    }
}

fn exact_column(design: &Design, t: &Term) -> Result<Vec<BigRational>> {
    design
        .exact_column(t)
        .ok_or_else(|| Error::ExactUnavailable("the design has no exact coordinates".into()))
}

fn residual_norm_of_target(design: &Design, t: &Term) -> f64 {
    design.column(t).iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// One-shot dependence test of `t(D)` on the columns of `terms`.
pub fn is_num_independent(
    terms: &[Term],
    ed: &EmpiricalDesign,
    t: &Term,
    arithmetic: Arithmetic,
) -> Result<DependenceVerdict> {
    let decision = Decision::resolve(arithmetic, ed)?;
    FittedModel::new(ed, terms, decision)?.test(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::least_squares;
    use proptest::prelude::*;

    fn t(e: &[u32]) -> Term {
        Term::new(e.iter().copied())
    }

    fn near_factorial() -> Design {
        Design::parse_rows(&[&["1", "1"], &["1", "-1.001"], &["-1", "1"], &["-1", "-1"]]).unwrap()
    }

    fn fassino_example() -> Design {
        Design::parse_rows(&[&["1", "6"], &["2", "3"], &["2.449", "2.449"], &["3", "2"], &["6", "1"]]).unwrap()
    }

    fn linear_terms() -> Vec<Term> {
        vec![t(&[0, 0]), t(&[1, 0]), t(&[0, 1])]
    }

    #[test]
    fn zero_tolerance_gives_zero_bounds() {
        let design = near_factorial();
        let terms = linear_terms();
        let m = design_matrix(&terms, &design).unwrap().entries;
        let lsq = least_squares(&m, &DVector::from_vec(design.column(&t(&[0, 2])))).unwrap();
        assert_eq!(fassino_bounds(&terms, &design, &[0.0, 0.0], &t(&[0, 2]), &lsq).unwrap(), vec![0.0; 4]);

        let lsq = least_squares(&DMatrix::zeros(4, 0), &DVector::from_element(4, 1.0)).unwrap();
        assert_eq!(fassino_bounds(&[], &design, &[0.3, 0.7], &Term::one(2), &lsq).unwrap(), vec![0.0; 4]);
    }

    /// Bounds for `t = X2` against `{1}` built straight from the definitions:
    /// `P⊥ = I − 11ᵀ/n`, `a` the mean of the second coordinate, `∂_2 X2 = 1`,
    /// `∂_k 1 = 0`.
    #[test]
    fn bounds_match_definition_level_oracle() {
        let design = fassino_example();
        let delta = [0.018, 0.018];
        let n = design.n() as f64;
        let column: Vec<f64> = design.points().map(|p| p[1]).collect();
        let mean = column.iter().sum::<f64>() / n;
        let sensitivity = |_: usize| delta[1] * 1.0;
        let oracle: Vec<f64> = (0..5)
            .map(|i| (0..5).map(|j| ((if i == j { 1.0 } else { 0.0 }) - 1.0 / n).abs() * sensitivity(j)).sum())
            .collect();

        let m = DMatrix::from_element(5, 1, 1.0);
        let lsq = least_squares(&m, &DVector::from_vec(column.clone())).unwrap();
        assert!((lsq.coefficients[0] - mean).abs() < 1e-14);
        let bounds = fassino_bounds(&[Term::one(2)], &design, &delta, &Term::var(2, 1), &lsq).unwrap();
        for (b, o) in bounds.iter().zip(&oracle) {
            assert!((b - o).abs() < 1e-15, "{b} vs {o}");
        }
        // 2 (n-1)/n · δ_2 for every point
        assert!((oracle[0] - 2.0 * 4.0 / 5.0 * 0.018).abs() < 1e-15);
    }

    #[test]
    fn quadratic_term_on_the_near_factorial() {
        let terms = linear_terms();
        let ed = EmpiricalDesign::new(near_factorial(), vec![0.0, 0.0005]).unwrap();
        let v = is_num_independent(&terms, &ed, &t(&[0, 2]), Arithmetic::Auto).unwrap();
        assert!(!v.independent);
        assert!(v.witness_index.is_none());

        let exact = EmpiricalDesign::exact(near_factorial());
        let v = is_num_independent(&terms, &exact, &t(&[0, 2]), Arithmetic::Auto).unwrap();
        assert!(v.independent);
        assert!(v.witness_index.is_some());
        let v = is_num_independent(&terms, &exact, &t(&[0, 2]), Arithmetic::Float).unwrap();
        assert!(v.independent);
    }

    #[test]
    fn vanishing_design_vector_is_dependent() {
        let design = Design::parse_rows(&[&["0", "1"], &["0", "2"], &["0", "-3"]]).unwrap();
        for delta in [0.0, 0.1, 10.0] {
            let ed = EmpiricalDesign::new(design.clone(), vec![delta, delta]).unwrap();
            for arith in [Arithmetic::Auto, Arithmetic::Float] {
                let v = is_num_independent(&[Term::one(2)], &ed, &t(&[1, 1]), arith).unwrap();
                assert!(!v.independent);
            }
        }
    }

    #[test]
    fn arithmetic_resolution() {
        let ed = EmpiricalDesign::new(near_factorial(), vec![0.0, 0.1]).unwrap();
        assert_eq!(Decision::resolve(Arithmetic::Auto, &ed).unwrap(), Decision::Float);
        assert!(Decision::resolve(Arithmetic::Exact, &ed).is_err());
        let floats = EmpiricalDesign::exact(near_factorial().without_exact());
        assert_eq!(Decision::resolve(Arithmetic::Auto, &floats).unwrap(), Decision::Float);
        assert!(matches!(Decision::resolve(Arithmetic::Exact, &floats), Err(Error::ExactUnavailable(_))));
        assert_eq!(Decision::resolve(Arithmetic::Auto, &EmpiricalDesign::exact(near_factorial())).unwrap(), Decision::Exact);
    }

    #[test]
    fn full_models_are_never_extended() {
        let ed = EmpiricalDesign::new(fassino_example(), vec![0.0, 0.0]).unwrap();
        let terms: Vec<Term> = (0..5).map(|k| t(&[k, 0])).collect();
        let v = is_num_independent(&terms, &ed, &t(&[0, 1]), Arithmetic::Float).unwrap();
        assert!(!v.independent);
    }

    fn random_case() -> impl Strategy<Value = (Vec<Vec<i32>>, Vec<u32>, usize)> {
        (
            prop::collection::vec(prop::collection::vec(-20i32..20, 2), 4..8),
            prop::collection::vec(0u32..3, 2),
            1usize..4,
        )
    }

    fn model_of(size: usize) -> Vec<Term> {
        [t(&[0, 0]), t(&[1, 0]), t(&[0, 1]), t(&[2, 0])][..size].to_vec()
    }

    proptest! {
        #[test]
        fn independence_is_monotone_in_the_tolerance(
            (rows, cand, size) in random_case(),
            delta in prop::collection::vec(0.0f64..0.5, 2),
            k in prop::collection::vec(0.01f64..=1.0, 2),
        ) {
            let text: Vec<Vec<String>> = rows.iter().map(|r| r.iter().map(|v| format!("{}", *v as f64 / 4.0)).collect()).collect();
            let design = Design::parse_rows(&text).unwrap();
            prop_assume!(design.find_duplicate().is_none());
            let terms = model_of(size);
            let candidate = Term::new(cand.iter().map(|c| c + 1));
            let ed = EmpiricalDesign::new(design.clone(), delta.clone()).unwrap();
            let Ok(model) = FittedModel::new(&ed, &terms, Decision::Float) else { return Ok(()) };
            let big = model.test(&candidate).unwrap();
            let small_ed = EmpiricalDesign::new(design, vec![delta[0] * k[0], delta[1] * k[1]]).unwrap();
            let small = FittedModel::new(&small_ed, &terms, Decision::Float).unwrap().test(&candidate).unwrap();
            if big.independent {
                prop_assert!(small.independent);
            }
            for (s, b) in small.bound_vector.iter().zip(&big.bound_vector) {
                prop_assert!(s <= b);
            }
        }

        #[test]
        fn zero_tolerance_matches_exact_rank((rows, cand, size) in random_case()) {
            let text: Vec<Vec<String>> = rows.iter().map(|r| r.iter().map(|v| format!("{}", v / 3)).collect()).collect();
            let design = Design::parse_rows(&text).unwrap();
            let ed = EmpiricalDesign::exact(design.clone());
            let terms = model_of(size);
            let mut elim = ExactElimination::new(design.n());
            for term in &terms {
                if !elim.extend(&design.exact_column(term).unwrap()).unwrap().independent {
                    return Ok(());
                }
            }
            let candidate = Term::new(cand);
            let expected = elim.is_independent(&design.exact_column(&candidate).unwrap()).unwrap();
            let v = is_num_independent(&terms, &ed, &candidate, Arithmetic::Auto).unwrap();
            prop_assert_eq!(v.independent, expected);
            prop_assert_eq!(v.witness_index.is_some(), expected);
        }
    }
}
