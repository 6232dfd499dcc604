//! Exact rational scalars and vectors, inner products, and orthogonal
//! projection onto the complement of a span.
//!
//! Nothing in this crate touches floating point. Every length, inner
//! product, and angle invariant is a [`Rational`].

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("basis vectors are linearly dependent (singular Gram matrix)")]
    DependentBasis,
    #[error("cannot parse rational from {0:?}")]
    Parse(String),
}

/// An exact rational number, always in lowest terms with positive denominator.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Rational(BigRational);

impl Rational {
    pub fn new(numer: i64, denom: i64) -> Self {
        assert!(denom != 0, "zero denominator");
        Rational(BigRational::new(BigInt::from(numer), BigInt::from(denom)))
    }

    pub fn from_int(n: i64) -> Self {
        Rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    /// The value as an `i64` when it is an integer that fits.
    pub fn to_i64(&self) -> Option<i64> {
        if self.0.is_integer() {
            self.0.numer().to_i64()
        } else {
            None
        }
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    pub fn recip(&self) -> Self {
        Rational(self.0.recip())
    }

    pub fn signum(&self) -> i32 {
        if self.0.is_zero() {
            0
        } else if self.0.is_positive() {
            1
        } else {
            -1
        }
    }

    pub(crate) fn from_big(r: BigRational) -> Self {
        Rational(r)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = ExactError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        let bad = || ExactError::Parse(s.to_string());
        match t.split_once('/') {
            Some((p, q)) => {
                let p: BigInt = p.trim().parse().map_err(|_| bad())?;
                let q: BigInt = q.trim().parse().map_err(|_| bad())?;
                if q.is_zero() {
                    return Err(bad());
                }
                Ok(Rational(BigRational::new(p, q)))
            }
            None => {
                let p: BigInt = t.parse().map_err(|_| bad())?;
                Ok(Rational(BigRational::from_integer(p)))
            }
        }
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

macro_rules! rational_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational((self.0).$method(rhs.0))
            }
        }
        impl<'a> $trait<&'a Rational> for &'a Rational {
            type Output = Rational;
            fn $method(self, rhs: &'a Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }
        impl<'a> $trait<&'a Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &'a Rational) -> Rational {
                Rational((self.0).$method(&rhs.0))
            }
        }
    };
}

rational_binop!(Add, add);
rational_binop!(Sub, sub);
rational_binop!(Mul, mul);
rational_binop!(Div, div);

impl AddAssign<&Rational> for Rational {
    fn add_assign(&mut self, rhs: &Rational) {
        self.0 += &rhs.0;
    }
}

impl SubAssign<&Rational> for Rational {
    fn sub_assign(&mut self, rhs: &Rational) {
        self.0 -= &rhs.0;
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_int(n)
    }
}

/// A coordinate vector in the ambient euclidean space.
///
/// Ordering is lexicographic on coordinates, which is also the order used to
/// define positivity: a vector is *canonical* when its first nonzero
/// coordinate is positive.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct RootVector {
    coords: Vec<Rational>,
}

impl RootVector {
    pub fn new(coords: Vec<Rational>) -> Self {
        RootVector { coords }
    }

    pub fn zeros(dim: usize) -> Self {
        RootVector {
            coords: vec![Rational::zero(); dim],
        }
    }

    pub fn unit(dim: usize, i: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.coords[i] = Rational::one();
        v
    }

    /// Build from integer numerators over a common denominator.
    pub fn from_ints_over(nums: &[i64], denom: i64) -> Self {
        RootVector {
            coords: nums.iter().map(|&n| Rational::new(n, denom)).collect(),
        }
    }

    pub fn from_ints(nums: &[i64]) -> Self {
        Self::from_ints_over(nums, 1)
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Rational::is_zero)
    }

    fn first_nonzero_sign(&self) -> i32 {
        self.coords
            .iter()
            .find(|c| !c.is_zero())
            .map_or(0, Rational::signum)
    }

    /// True when the first nonzero coordinate is positive.
    pub fn is_canonical(&self) -> bool {
        self.first_nonzero_sign() > 0
    }

    /// The representative of `{v, -v}` whose first nonzero coordinate is positive.
    pub fn canonical(&self) -> RootVector {
        if self.first_nonzero_sign() < 0 {
            -self
        } else {
            self.clone()
        }
    }

    pub fn scale(&self, s: &Rational) -> RootVector {
        RootVector {
            coords: self.coords.iter().map(|c| c * s).collect(),
        }
    }

    /// Squared length.
    pub fn norm2(&self) -> Rational {
        self.coords
            .iter()
            .fold(Rational::zero(), |acc, c| acc + c * c)
    }

    /// Least common multiple of the coordinate denominators.
    pub fn denominator_lcm(&self) -> BigInt {
        self.coords
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
    }

    fn zip_with(&self, other: &RootVector, f: impl Fn(&Rational, &Rational) -> Rational) -> RootVector {
        assert_eq!(self.dim(), other.dim(), "dimension mismatch");
        RootVector {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| f(a, b))
                .collect(),
        }
    }
}

impl fmt::Debug for RootVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

impl fmt::Display for RootVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl Serialize for RootVector {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.coords.serialize(s)
    }
}

impl<'de> Deserialize<'de> for RootVector {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        Ok(RootVector {
            coords: Vec::<Rational>::deserialize(d)?,
        })
    }
}

impl Add for &RootVector {
    type Output = RootVector;
    fn add(self, rhs: &RootVector) -> RootVector {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub for &RootVector {
    type Output = RootVector;
    fn sub(self, rhs: &RootVector) -> RootVector {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl Add for RootVector {
    type Output = RootVector;
    fn add(self, rhs: RootVector) -> RootVector {
        &self + &rhs
    }
}

impl Sub for RootVector {
    type Output = RootVector;
    fn sub(self, rhs: RootVector) -> RootVector {
        &self - &rhs
    }
}

impl Neg for &RootVector {
    type Output = RootVector;
    fn neg(self) -> RootVector {
        RootVector {
            coords: self.coords.iter().map(|c| -c).collect(),
        }
    }
}

impl Neg for RootVector {
    type Output = RootVector;
    fn neg(self) -> RootVector {
        -&self
    }
}

/// Euclidean inner product.
pub fn inner(u: &RootVector, v: &RootVector) -> Result<Rational, ExactError> {
    if u.dim() != v.dim() {
        return Err(ExactError::DimensionMismatch {
            left: u.dim(),
            right: v.dim(),
        });
    }
    Ok(u.coords
        .iter()
        .zip(&v.coords)
        .fold(Rational::zero(), |acc, (a, b)| acc + a * b))
}

/// Inner product for vectors already known to share a dimension.
pub(crate) fn dot(u: &RootVector, v: &RootVector) -> Rational {
    debug_assert_eq!(u.dim(), v.dim());
    u.coords
        .iter()
        .zip(&v.coords)
        .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
}

/// Gram matrix `G[i][j] = <v_i, v_j>`.
pub fn gram_matrix(vectors: &[RootVector]) -> Result<Vec<Vec<Rational>>, ExactError> {
    let mut g = vec![vec![Rational::zero(); vectors.len()]; vectors.len()];
    for i in 0..vectors.len() {
        for j in i..vectors.len() {
            let x = inner(&vectors[i], &vectors[j])?;
            g[j][i] = x.clone();
            g[i][j] = x;
        }
    }
    Ok(g)
}

/// Dimension of the span of `vectors`.
pub fn gram_rank(vectors: &[RootVector]) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    let rows: Vec<Vec<Rational>> = vectors.iter().map(|v| v.coords.clone()).collect();
    linalg::rank(&rows)
}

/// Orthogonal projection of `v` onto the orthogonal complement of `span(basis)`.
pub fn project_complement(v: &RootVector, basis: &[RootVector]) -> Result<RootVector, ExactError> {
    if basis.is_empty() {
        return Ok(v.clone());
    }
    for b in basis {
        if b.dim() != v.dim() {
            return Err(ExactError::DimensionMismatch {
                left: v.dim(),
                right: b.dim(),
            });
        }
    }
    let g = gram_matrix(basis)?;
    let rhs: Vec<Rational> = basis.iter().map(|b| dot(v, b)).collect();
    let coeffs = linalg::solve(&g, &rhs).ok_or(ExactError::DependentBasis)?;
    let mut out = v.clone();
    for (c, b) in coeffs.iter().zip(basis) {
        out = &out - &b.scale(c);
    }
    Ok(out)
}

/// A precomputed orthogonal projector onto `span(basis)^⊥`, stored as a
/// rational matrix so that projecting many vectors costs one mat-vec each.
#[derive(Debug, Clone)]
pub struct ComplementProjector {
    dim: usize,
    matrix: Vec<Vec<Rational>>,
}

impl ComplementProjector {
    pub fn new(dim: usize, basis: &[RootVector]) -> Result<Self, ExactError> {
        let mut matrix = vec![vec![Rational::zero(); dim]; dim];
        for (i, row) in matrix.iter_mut().enumerate() {
            row[i] = Rational::one();
        }
        if basis.is_empty() {
            return Ok(ComplementProjector { dim, matrix });
        }
        for b in basis {
            if b.dim() != dim {
                return Err(ExactError::DimensionMismatch {
                    left: dim,
                    right: b.dim(),
                });
            }
        }
        // Column k of the projector is the projection of the unit vector e_k.
        let g = gram_matrix(basis)?;
        let ginv = linalg::inverse(&g).ok_or(ExactError::DependentBasis)?;
        for r in 0..dim {
            for c in 0..dim {
                // (B^T G^{-1} B)[r][c]
                let mut acc = Rational::zero();
                for (i, bi) in basis.iter().enumerate() {
                    if bi.coords[r].is_zero() {
                        continue;
                    }
                    for (j, bj) in basis.iter().enumerate() {
                        if bj.coords[c].is_zero() || ginv[i][j].is_zero() {
                            continue;
                        }
                        acc = acc + &(&(&bi.coords[r] * &ginv[i][j]) * &bj.coords[c]);
                    }
                }
                matrix[r][c] = &matrix[r][c] - &acc;
            }
        }
        Ok(ComplementProjector { dim, matrix })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn apply(&self, v: &RootVector) -> RootVector {
        assert_eq!(v.dim(), self.dim, "dimension mismatch");
        RootVector {
            coords: self
                .matrix
                .iter()
                .map(|row| {
                    row.iter()
                        .zip(&v.coords)
                        .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                        .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
                })
                .collect(),
        }
    }
}

/// Fraction-free (Bareiss) elimination over exact rationals.
pub mod linalg {
    use super::*;

    /// Clear denominators row by row so that elimination runs over integers.
    fn integer_rows(rows: &[Vec<Rational>]) -> Vec<Vec<BigInt>> {
        rows.iter()
            .map(|row| {
                let l = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
                row.iter()
                    .map(|x| x.numer() * (&l / x.denom()))
                    .collect()
            })
            .collect()
    }

    /// Bareiss echelon form in place; returns the pivot columns.
    fn bareiss(m: &mut [Vec<BigInt>], ncols: usize) -> Vec<usize> {
        let nrows = m.len();
        let mut prev = BigInt::one();
        let mut r = 0;
        let mut pivots = Vec::new();
        for col in 0..ncols {
            if r == nrows {
                break;
            }
            let Some(p) = (r..nrows).find(|&i| !m[i][col].is_zero()) else {
                continue;
            };
            m.swap(r, p);
            let width = m[r].len();
            for i in r + 1..nrows {
                for j in col + 1..width {
                    let v = (&m[r][col] * &m[i][j] - &m[i][col] * &m[r][j]) / &prev;
                    m[i][j] = v;
                }
                m[i][col] = BigInt::zero();
            }
            prev = m[r][col].clone();
            pivots.push(col);
            r += 1;
        }
        pivots
    }

    pub fn rank(rows: &[Vec<Rational>]) -> usize {
        if rows.is_empty() {
            return 0;
        }
        let ncols = rows[0].len();
        let mut m = integer_rows(rows);
        bareiss(&mut m, ncols).len()
    }

    /// Solve the square system `a x = b`; `None` when `a` is singular.
    pub fn solve(a: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
        let n = a.len();
        assert_eq!(b.len(), n);
        let aug: Vec<Vec<Rational>> = a
            .iter()
            .zip(b)
            .map(|(row, bi)| {
                let mut r = row.clone();
                r.push(bi.clone());
                r
            })
            .collect();
        let mut m = integer_rows(&aug);
        let pivots = bareiss(&mut m, n);
        if pivots.len() < n {
            return None;
        }
        let mut x = vec![Rational::zero(); n];
        for i in (0..n).rev() {
            let mut acc = Rational::from_big(BigRational::from_integer(m[i][n].clone()));
            for j in i + 1..n {
                let mij = Rational::from_big(BigRational::from_integer(m[i][j].clone()));
                acc = acc - &(&mij * &x[j]);
            }
            x[i] = acc / Rational::from_big(BigRational::from_integer(m[i][i].clone()));
        }
        Some(x)
    }

    pub fn inverse(a: &[Vec<Rational>]) -> Option<Vec<Vec<Rational>>> {
        let n = a.len();
        let mut cols = Vec::with_capacity(n);
        for k in 0..n {
            let e: Vec<Rational> = (0..n)
                .map(|i| if i == k { Rational::one() } else { Rational::zero() })
                .collect();
            cols.push(solve(a, &e)?);
        }
        Some(
            (0..n)
                .map(|i| (0..n).map(|j| cols[j][i].clone()).collect())
                .collect(),
        )
    }

    pub fn determinant(a: &[Vec<Rational>]) -> Rational {
        let n = a.len();
        if n == 0 {
            return Rational::one();
        }
        // Row scaling multiplies the determinant; undo it at the end.
        let scale = a.iter().fold(BigInt::one(), |acc, row| {
            acc * row.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()))
        });
        let mut m = integer_rows(a);
        let mut sign = 1i32;
        let mut prev = BigInt::one();
        for k in 0..n {
            let Some(p) = (k..n).find(|&i| !m[i][k].is_zero()) else {
                return Rational::zero();
            };
            if p != k {
                m.swap(p, k);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&m[k][k] * &m[i][j] - &m[i][k] * &m[k][j]) / &prev;
                    m[i][j] = v;
                }
            }
            prev = m[k][k].clone();
        }
        let det = BigRational::new(m[n - 1][n - 1].clone() * BigInt::from(sign), scale);
        Rational::from_big(det)
    }
}

impl PartialOrd<i64> for Rational {
    fn partial_cmp(&self, other: &i64) -> Option<Ordering> {
        Some(self.0.cmp(&BigRational::from_integer(BigInt::from(*other))))
    }
}

impl PartialEq<i64> for Rational {
    fn eq(&self, other: &i64) -> bool {
        self.0 == BigRational::from_integer(BigInt::from(*other))
    }
}
