//! Designs, empirical designs, design matrices and preprocessing.

mod io;
mod scalar;

pub use io::{read_design, read_tolerance};
pub use scalar::Scalar;
pub(crate) use scalar::rational_pow;

use nalgebra::DMatrix;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::terms::{check_dim, Term};
use crate::{Error, Result};

/// `n` points in `d` dimensions, stored row-major as `f64`, with exact
/// rational coordinates when every input value had one.
#[derive(Clone, Debug, PartialEq)]
pub struct Design {
    n: usize,
    d: usize,
    values: Vec<f64>,
    exact: Option<Vec<BigRational>>,
}

impl Design {
    pub fn new(rows: Vec<Vec<Scalar>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::InvalidDesign("design has no points".into()));
        }
        let d = rows[0].len();
        if d == 0 {
            return Err(Error::InvalidDesign("points have no coordinates".into()));
        }
        let mut values = Vec::with_capacity(n * d);
        let mut exact = Some(Vec::with_capacity(n * d));
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != d {
                return Err(Error::InvalidDesign(format!(
                    "point {i} has {} coordinates, expected {d}",
                    row.len()
                )));
            }
            for s in row {
                if !s.value.is_finite() {
                    return Err(Error::InvalidDesign(format!("point {i} has a non-finite coordinate")));
                }
                values.push(s.value);
                match (s.exact, exact.as_mut()) {
                    (Some(r), Some(ex)) => ex.push(r),
                    _ => exact = None,
                }
            }
        }
        Ok(Design { n, d, values, exact })
    }

    /// Floating-point design without exact coordinates.
    pub fn from_f64_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        Design::new(
            rows.iter()
                .map(|r| r.as_ref().iter().map(|&v| Scalar::from_f64(v)).collect())
                .collect(),
        )
    }

    /// Parses decimal or `p/q` literals, keeping exact values.
    pub fn parse_rows<R: AsRef<[S]>, S: AsRef<str>>(rows: &[R]) -> Result<Self> {
        let parsed = rows
            .iter()
            .map(|r| r.as_ref().iter().map(|s| Scalar::parse(s.as_ref())).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Design::new(parsed)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.values[i * self.d..(i + 1) * self.d]
    }

    pub fn points(&self) -> impl Iterator<Item = &[f64]> {
        self.values.chunks(self.d)
    }

    pub fn has_exact(&self) -> bool {
        self.exact.is_some()
    }

    pub fn exact_point(&self, i: usize) -> Option<&[BigRational]> {
        self.exact.as_ref().map(|e| &e[i * self.d..(i + 1) * self.d])
    }

    /// Drops the exact coordinates, forcing floating-point treatment.
    pub fn without_exact(&self) -> Design {
        Design { exact: None, ..self.clone() }
    }

    /// First pair of coinciding points, compared exactly when possible.
    pub fn find_duplicate(&self) -> Option<(usize, usize)> {
        for i in 0..self.n {
            for j in i + 1..self.n {
                let same = match (self.exact_point(i), self.exact_point(j)) {
                    (Some(a), Some(b)) => a == b,
                    _ => self.point(i) == self.point(j),
                };
                if same {
                    return Some((i, j));
                }
            }
        }
        None
    }

    /// Exact design vector `t(D)`.
    pub fn exact_column(&self, t: &Term) -> Option<Vec<BigRational>> {
        let ex = self.exact.as_ref()?;
        Some(
            ex.chunks(self.d)
                .map(|p| {
                    p.iter()
                        .zip(t.exponents())
                        .fold(BigRational::from_integer(1.into()), |acc, (x, &e)| acc * rational_pow(x, e))
                })
                .collect(),
        )
    }

    /// Design vector `t(D)`.
    pub fn column(&self, t: &Term) -> Vec<f64> {
        self.points().map(|p| eval_term(t, p)).collect()
    }

    /// Applies one affine map per coordinate.
    pub fn map_coordinates(&self, maps: &[AffineMap]) -> Result<Design> {
        check_dim(self.d, maps.len())?;
        let values = self
            .values
            .iter()
            .enumerate()
            .map(|(i, &x)| maps[i % self.d].forward(x))
            .collect();
        let exact = match (&self.exact, maps.iter().all(|m| m.exact.is_some())) {
            (Some(ex), true) => Some(ex.iter().enumerate().map(|(i, x)| maps[i % self.d].forward_exact(x)).collect::<Vec<_>>()),
            _ => None,
        };
        // Keep f64 values consistent with their exact twins.
        let values = match &exact {
            Some(ex) => ex.iter().map(|r: &BigRational| r.to_f64().unwrap_or(f64::NAN)).collect(),
            None => values,
        };
        Ok(Design { n: self.n, d: self.d, values, exact })
    }
}

/// `X^α(p) = Π p_k^{α_k}` with `0^0 = 1`.
pub fn eval_term(t: &Term, p: &[f64]) -> f64 {
    t.exponents().iter().zip(p).map(|(&e, &x)| x.powi(e as i32)).product()
}

/// `∂_k X^α (p) = α_k · X^{α − e_k}(p)`, zero when `α_k = 0`.
pub fn eval_partial(t: &Term, p: &[f64], axis: usize) -> f64 {
    match t.div_var(axis) {
        Some(lower) => t.exponents()[axis] as f64 * eval_term(&lower, p),
        None => 0.0,
    }
}

/// Evaluation matrix of a list of terms at a design, one column per term.
#[derive(Clone, Debug, PartialEq)]
pub struct DesignMatrix {
    pub entries: DMatrix<f64>,
    pub column_terms: Vec<Term>,
}

pub fn design_matrix(terms: &[Term], design: &Design) -> Result<DesignMatrix> {
    for t in terms {
        check_dim(design.d(), t.dim())?;
    }
    let entries = DMatrix::from_fn(design.n(), terms.len(), |i, l| eval_term(&terms[l], design.point(i)));
    Ok(DesignMatrix { entries, column_terms: terms.to_vec() })
}

/// Matrix of `∂_axis t (p_j)` for every term `t` of `terms`.
pub fn derivative_matrix(terms: &[Term], design: &Design, axis: usize) -> Result<DMatrix<f64>> {
    if axis >= design.d() {
        return Err(Error::DimensionMismatch { expected: design.d(), found: axis + 1 });
    }
    for t in terms {
        check_dim(design.d(), t.dim())?;
    }
    Ok(DMatrix::from_fn(design.n(), terms.len(), |j, l| eval_partial(&terms[l], design.point(j), axis)))
}

/// A design with componentwise measurement tolerances `δ`.
#[derive(Clone, Debug, PartialEq)]
pub struct EmpiricalDesign {
    pub design: Design,
    pub tolerance: Vec<f64>,
}

impl EmpiricalDesign {
    pub fn new(design: Design, tolerance: Vec<f64>) -> Result<Self> {
        check_dim(design.d(), tolerance.len()).map_err(|_| {
            Error::InvalidTolerance(format!(
                "{} tolerance entries for {} coordinates",
                tolerance.len(),
                design.d()
            ))
        })?;
        if let Some(bad) = tolerance.iter().find(|x| !x.is_finite() || **x < 0.0) {
            return Err(Error::InvalidTolerance(format!("entry {bad} is negative or not finite")));
        }
        Ok(EmpiricalDesign { design, tolerance })
    }

    /// An exact design (`δ = 0`).
    pub fn exact(design: Design) -> Self {
        let d = design.d();
        EmpiricalDesign { design, tolerance: vec![0.0; d] }
    }

    pub fn delta_max(&self) -> f64 {
        self.tolerance.iter().copied().fold(0.0, f64::max)
    }

    pub fn is_noise_free(&self) -> bool {
        self.tolerance.iter().all(|&x| x == 0.0)
    }

    /// Same design with every tolerance multiplied by `k`.
    pub fn scaled_tolerance(&self, k: f64) -> Result<Self> {
        if !(k > 0.0 && k.is_finite()) {
            return Err(Error::Usage(format!("scale factor must be positive, got {k}")));
        }
        EmpiricalDesign::new(self.design.clone(), self.tolerance.iter().map(|x| x * k).collect())
    }
}

/// The map `x ↦ 2 (x − min) / range − 1` of one coordinate onto `[-1, 1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct AffineMap {
    pub min: f64,
    pub range: f64,
    exact: Option<(BigRational, BigRational)>,
}

impl AffineMap {
    pub fn forward(&self, x: f64) -> f64 {
        2.0 * (x - self.min) / self.range - 1.0
    }

    pub fn inverse(&self, y: f64) -> f64 {
        (y + 1.0) * self.range / 2.0 + self.min
    }

    fn forward_exact(&self, x: &BigRational) -> BigRational {
        let (min, range) = self.exact.as_ref().expect("exact map");
        let two = BigRational::from_integer(2.into());
        &two * (x - min) / range - BigRational::from_integer(1.into())
    }

    pub fn inverse_exact(&self, y: &BigRational) -> Option<BigRational> {
        let (min, range) = self.exact.as_ref()?;
        let two = BigRational::from_integer(2.into());
        Some((y + BigRational::from_integer(1.into())) * range / two + min)
    }

    /// Positive factor applied to tolerances on this coordinate.
    pub fn tolerance_factor(&self) -> f64 {
        2.0 / self.range
    }
}

/// Maps every coordinate affinely onto `[-1, 1]` and rescales `δ` to match.
pub fn standardize(ed: &EmpiricalDesign) -> Result<(EmpiricalDesign, Vec<AffineMap>)> {
    let design = &ed.design;
    let mut maps = Vec::with_capacity(design.d());
    for k in 0..design.d() {
        let (lo, hi) = design
            .points()
            .map(|p| p[k])
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), x| (lo.min(x), hi.max(x)));
        let exact = design.exact.as_ref().map(|ex| {
            let col: Vec<&BigRational> = ex.iter().skip(k).step_by(design.d()).collect();
            let min = col.iter().copied().min().unwrap().clone();
            let max = col.iter().copied().max().unwrap().clone();
            let range = &max - &min;
            (min, range)
        });
        let zero_range = match &exact {
            Some((_, r)) => r.is_zero(),
            None => hi - lo == 0.0,
        };
        if zero_range {
            return Err(Error::ZeroRange { axis: k });
        }
        let (min, range) = match &exact {
            Some((m, r)) => (m.to_f64().unwrap(), r.to_f64().unwrap()),
            None => (lo, hi - lo),
        };
        maps.push(AffineMap { min, range, exact });
    }
    let mapped = design.map_coordinates(&maps)?;
    let tolerance = ed.tolerance.iter().zip(&maps).map(|(x, m)| x * m.tolerance_factor()).collect();
    Ok((EmpiricalDesign::new(mapped, tolerance)?, maps))
}

/// Pairs of points whose open boxes of half-widths `δ` intersect.
pub fn check_separation(ed: &EmpiricalDesign) -> Vec<(usize, usize)> {
    let design = &ed.design;
    let mut offending = Vec::new();
    for i in 0..design.n() {
        for j in i + 1..design.n() {
            let overlap = design
                .point(i)
                .iter()
                .zip(design.point(j))
                .zip(&ed.tolerance)
                .all(|((a, b), delta)| (a - b).abs() < 2.0 * delta);
            if overlap {
                offending.push((i, j));
            }
        }
    }
    offending
}
