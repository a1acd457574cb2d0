//! Small dense kernels: least squares with the residual projector, 2-norm
//! condition numbers and exact rank extension over the rationals.

use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::{Error, Result};

/// Which arithmetic decides linear (in)dependence.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Arithmetic {
    /// Exact whenever the tolerance is zero and exact coordinates exist.
    #[default]
    Auto,
    /// Exact only; fails when that is impossible.
    Exact,
    /// Floating point throughout.
    Float,
}

impl FromStr for Arithmetic {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(Arithmetic::Auto),
            "exact" => Ok(Arithmetic::Exact),
            "float" => Ok(Arithmetic::Float),
            other => Err(Error::Usage(format!("unknown arithmetic mode '{other}'"))),
        }
    }
}

/// Solution of `M a ≈ b` in the 2-norm.
#[derive(Clone, Debug)]
pub struct LeastSquaresResult {
    pub coefficients: DVector<f64>,
    /// `ρ = b − M a`.
    pub residual: DVector<f64>,
    /// `I − M M⁺`, the orthogonal projector onto the complement of `span(M)`.
    pub projector_complement: DMatrix<f64>,
}

/// Householder QR of a full-column-rank matrix, reusable for many right-hand sides.
#[derive(Clone, Debug)]
pub struct LeastSquares {
    matrix: DMatrix<f64>,
    q: DMatrix<f64>,
    r: DMatrix<f64>,
    projector_complement: DMatrix<f64>,
}

impl LeastSquares {
    pub fn new(matrix: DMatrix<f64>) -> Result<Self> {
        let (n, k) = matrix.shape();
        if k == 0 {
            return Ok(LeastSquares {
                q: DMatrix::zeros(n, 0),
                r: DMatrix::zeros(0, 0),
                projector_complement: DMatrix::identity(n, n),
                matrix,
            });
        }
        if k > n {
            return Err(Error::RankDeficient);
        }
        let qr = matrix.clone().qr();
        let q = qr.q();
        let r = qr.r();
        let diag: Vec<f64> = (0..k).map(|i| r[(i, i)].abs()).collect();
        let largest = diag.iter().copied().fold(0.0, f64::max);
        if diag.iter().any(|&x| x <= n as f64 * f64::EPSILON * largest) || largest == 0.0 {
            return Err(Error::RankDeficient);
        }
        let projector_complement = DMatrix::identity(n, n) - &q * q.transpose();
        Ok(LeastSquares { matrix, q, r, projector_complement })
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn projector_complement(&self) -> &DMatrix<f64> {
        &self.projector_complement
    }

    pub fn solve(&self, b: &DVector<f64>) -> Result<LeastSquaresResult> {
        if b.len() != self.matrix.nrows() {
            return Err(Error::DimensionMismatch { expected: self.matrix.nrows(), found: b.len() });
        }
        let coefficients = if self.matrix.ncols() == 0 {
            DVector::zeros(0)
        } else {
            let qtb = self.q.transpose() * b;
            self.r.solve_upper_triangular(&qtb).ok_or(Error::RankDeficient)?
        };
        let residual = b - &self.matrix * &coefficients;
        Ok(LeastSquaresResult {
            coefficients,
            residual,
            projector_complement: self.projector_complement.clone(),
        })
    }
}

/// One-shot least squares; `M` must have full column rank (it may have no columns).
pub fn least_squares(m: &DMatrix<f64>, b: &DVector<f64>) -> Result<LeastSquaresResult> {
    LeastSquares::new(m.clone())?.solve(b)
}

/// `σ_max / σ_min` in the 2-norm; `+∞` when `σ_min < max(n, k) · ε · σ_max`.
pub fn condition_number(m: &DMatrix<f64>) -> Result<f64> {
    let (n, k) = m.shape();
    if n == 0 || k == 0 {
        return Err(Error::EmptyMatrix);
    }
    if k > n {
        return Ok(f64::INFINITY);
    }
    let sv = m.clone().svd(false, false).singular_values;
    let largest = sv.max();
    let smallest = sv.min();
    if largest == 0.0 {
        return Err(Error::EmptyMatrix);
    }
    if smallest < n.max(k) as f64 * f64::EPSILON * largest {
        return Ok(f64::INFINITY);
    }
    Ok(largest / smallest)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RankCertificate {
    pub rank: usize,
    /// Whether the offered column was outside the span of the accepted ones.
    pub independent: bool,
}

/// Fraction-free row echelon form of the accepted columns, kept as
/// primitive integer vectors.
#[derive(Clone, Debug, Default)]
pub struct ExactElimination {
    len: usize,
    rows: Vec<(usize, Vec<BigInt>)>,
}

impl ExactElimination {
    pub fn new(len: usize) -> Self {
        ExactElimination { len, rows: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Offers a column; it is kept iff it is not in the span of the columns kept so far.
    pub fn extend(&mut self, v: &[BigRational]) -> Result<RankCertificate> {
        let reduced = self.reduce(v)?;
        let independent = match reduced.iter().position(|x| !x.is_zero()) {
            Some(pivot) => {
                self.rows.push((pivot, reduced));
                true
            }
            None => false,
        };
        Ok(RankCertificate { rank: self.rank(), independent })
    }

    /// A copy extended by `v`, or `None` if `v` lies in the current span.
    pub fn extended(&self, v: &[BigRational]) -> Result<Option<ExactElimination>> {
        let reduced = self.reduce(v)?;
        Ok(reduced.iter().position(|x| !x.is_zero()).map(|pivot| {
            let mut next = self.clone();
            next.rows.push((pivot, reduced));
            next
        }))
    }

    /// Whether `v` lies outside the current span, without changing the state.
    pub fn is_independent(&self, v: &[BigRational]) -> Result<bool> {
        Ok(self.reduce(v)?.iter().any(|x| !x.is_zero()))
    }

    fn reduce(&self, v: &[BigRational]) -> Result<Vec<BigInt>> {
        if v.len() != self.len {
            return Err(Error::DimensionMismatch { expected: self.len, found: v.len() });
        }
        let lcm = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let mut w: Vec<BigInt> = v.iter().map(|x| x.numer() * (&lcm / x.denom())).collect();
        for (pivot, row) in &self.rows {
            if w[*pivot].is_zero() {
                continue;
            }
            let a = &row[*pivot];
            let b = w[*pivot].clone();
            for (wi, ri) in w.iter_mut().zip(row) {
                *wi = &*wi * a - &b * ri;
            }
            make_primitive(&mut w);
        }
        Ok(w)
    }
}

const MODULUS: u64 = (1 << 61) - 1;

fn mul_mod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % MODULUS as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a);
        }
        a = mul_mod(a, a);
        e >>= 1;
    }
    r
}

/// `x mod p` for the Mersenne prime `p = 2^61 − 1`, or `None` if `p` divides the denominator.
pub fn rational_mod(x: &BigRational) -> Option<u64> {
    let p = BigInt::from(MODULUS);
    let reduce = |v: &BigInt| -> u64 {
        let r = v.mod_floor(&p);
        r.try_into().expect("residue fits in u64")
    };
    let den = reduce(x.denom());
    (den != 0).then(|| mul_mod(reduce(x.numer()), pow_mod(den, MODULUS - 2)))
}

/// Row echelon form over `GF(2^61 − 1)`. Independence modulo `p` implies
/// independence over the rationals; the converse holds except for
/// unlucky primes, so dependence has to be confirmed exactly.
#[derive(Clone, Debug, Default)]
pub struct ModularElimination {
    len: usize,
    rows: Vec<(usize, Vec<u64>)>,
}

impl ModularElimination {
    pub fn new(len: usize) -> Self {
        ModularElimination { len, rows: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// A copy extended by `v`, or `None` if `v` is in the span modulo `p`.
    pub fn extended(&self, v: &[u64]) -> Result<Option<ModularElimination>> {
        if v.len() != self.len {
            return Err(Error::DimensionMismatch { expected: self.len, found: v.len() });
        }
        let mut w = v.to_vec();
        for (pivot, row) in &self.rows {
            let f = w[*pivot];
            if f == 0 {
                continue;
            }
            // rows are normalised to 1 at the pivot
            for (wi, ri) in w.iter_mut().zip(row) {
                *wi = (*wi + MODULUS - mul_mod(f, *ri)) % MODULUS;
            }
        }
        Ok(w.iter().position(|&x| x != 0).map(|pivot| {
            let inv = pow_mod(w[pivot], MODULUS - 2);
            for x in w.iter_mut() {
                *x = mul_mod(*x, inv);
            }
            let mut next = self.clone();
            next.rows.push((pivot, w));
            next
        }))
    }
}

/// Exact least-squares coefficients of `b` on full-rank `columns`, via the
/// normal equations.
pub fn exact_least_squares(columns: &[Vec<BigRational>], b: &[BigRational]) -> Result<Vec<BigRational>> {
    let k = columns.len();
    for c in columns {
        if c.len() != b.len() {
            return Err(Error::DimensionMismatch { expected: b.len(), found: c.len() });
        }
    }
    let dot = |u: &[BigRational], v: &[BigRational]| u.iter().zip(v).fold(BigRational::zero(), |acc, (x, y)| acc + x * y);
    // augmented Gram system [MᵀM | Mᵀb]
    let mut a: Vec<Vec<BigRational>> = (0..k)
        .map(|i| {
            let mut row: Vec<BigRational> = (0..k).map(|j| dot(&columns[i], &columns[j])).collect();
            row.push(dot(&columns[i], b));
            row
        })
        .collect();
    for col in 0..k {
        let pivot = (col..k).find(|&r| !a[r][col].is_zero()).ok_or(Error::RankDeficient)?;
        a.swap(col, pivot);
        let p = a[col][col].clone();
        for x in a[col].iter_mut() {
            *x = &*x / &p;
        }
        let pivot_row = a[col].clone();
        for (r, row) in a.iter_mut().enumerate() {
            if r != col && !row[col].is_zero() {
                let f = row[col].clone();
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    *x = &*x - &f * y;
                }
            }
        }
    }
    Ok(a.into_iter().map(|mut row| row.pop().expect("augmented column")).collect())
}

fn make_primitive(w: &mut [BigInt]) {
    let g = w.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if !g.is_zero() && !g.is_one() {
        for x in w.iter_mut() {
            *x = &*x / &g;
        }
    }
}
