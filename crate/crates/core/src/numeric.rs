//! Exact rational scalars, vectors, matrices and axis-aligned boxes.
//!
//! Every ball in this crate is an open ball for the sup norm:
//! `B(x, R) = { y : |x_i - y_i| < R for all i }`.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use num::bigint::BigInt;
use num::integer::Integer;
use num::rational::BigRational;
use num::traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always stored in lowest terms with a
/// positive denominator.
pub type Rational = BigRational;

pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn from_bigint(value: BigInt) -> Rational {
    Rational::from_integer(value)
}

/// Nearest integer with ties sent down: the unique `k` with
/// `k - 1/2 < x <= k + 1/2`.
pub fn round_scalar(x: &Rational) -> BigInt {
    (x - rat(1, 2)).ceil().to_integer()
}

/// Canonical text form: `p/q`, or `p` when the denominator is one.
pub fn fmt_rational(x: &Rational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parses the canonical text form written by [`fmt_rational`].
///
/// Rejects signs other than a leading `-`, leading zeros, `-0`, a unit
/// denominator and fractions that are not reduced.
pub fn parse_rational(token: &str) -> Option<Rational> {
    fn digits(s: &str) -> Option<BigInt> {
        if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        if s.len() > 1 && s.starts_with('0') {
            return None;
        }
        s.parse().ok()
    }

    let (negative, body) = match token.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, token),
    };
    let (numer, denom) = match body.split_once('/') {
        Some((n, d)) => (digits(n)?, digits(d)?),
        None => (digits(body)?, BigInt::one()),
    };
    if denom.is_zero() || (body.contains('/') && denom.is_one()) {
        return None;
    }
    if negative && numer.is_zero() {
        return None;
    }
    if !numer.gcd(&denom).is_one() {
        return None;
    }
    let numer = if negative { -numer } else { numer };
    Some(Rational::new_raw(numer, denom))
}

/// Lenient parser for command-line values: accepts any `p/q` or integer and
/// reduces it.
pub fn parse_rational_loose(token: &str) -> Option<Rational> {
    let token = token.trim();
    let (n, d) = match token.split_once('/') {
        Some((n, d)) => (n.trim().parse::<BigInt>().ok()?, d.trim().parse::<BigInt>().ok()?),
        None => (token.parse::<BigInt>().ok()?, BigInt::one()),
    };
    if d.is_zero() {
        return None;
    }
    Some(Rational::new(n, d))
}

/// Lebesgue volume `(2R)^n` of the sup-norm ball of radius `R`.
pub fn ball_volume(radius: &Rational, dim: usize) -> Result<Rational> {
    if !radius.is_positive() {
        return Err(Error::InvalidArgument(format!(
            "ball radius must be positive, got {}",
            fmt_rational(radius)
        )));
    }
    let side = radius * int(2);
    Ok((0..dim).fold(Rational::one(), |acc, _| acc * &side))
}

/// A point of `Q^n`, ordered lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RVector(Vec<Rational>);

impl RVector {
    pub fn new(coords: Vec<Rational>) -> Self {
        RVector(coords)
    }

    pub fn zeros(dim: usize) -> Self {
        RVector(vec![Rational::zero(); dim])
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        RVector(coords.iter().map(|&c| int(c)).collect())
    }

    pub fn from_bigints(coords: impl IntoIterator<Item = BigInt>) -> Self {
        RVector(coords.into_iter().map(from_bigint).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Rational] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<Rational> {
        self.0
    }

    pub fn norm_inf(&self) -> Rational {
        self.0
            .iter()
            .map(|c| c.abs())
            .max()
            .unwrap_or_else(Rational::zero)
    }

    pub fn is_integral(&self) -> bool {
        self.0.iter().all(|c| c.is_integer())
    }

    pub fn scale(&self, factor: &Rational) -> RVector {
        RVector(self.0.iter().map(|c| c * factor).collect())
    }

    /// Sup-norm distance.
    pub fn dist_inf(&self, other: &RVector) -> Rational {
        (self - other).norm_inf()
    }
}

impl fmt::Display for RVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", fmt_rational(c))?;
        }
        write!(f, ")")
    }
}

impl<'a> Add<&'a RVector> for &'a RVector {
    type Output = RVector;

    fn add(self, rhs: &'a RVector) -> RVector {
        debug_assert_eq!(self.dim(), rhs.dim());
        RVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl<'a> Sub<&'a RVector> for &'a RVector {
    type Output = RVector;

    fn sub(self, rhs: &'a RVector) -> RVector {
        debug_assert_eq!(self.dim(), rhs.dim());
        RVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &RVector {
    type Output = RVector;

    fn neg(self) -> RVector {
        RVector(self.0.iter().map(|c| -c).collect())
    }
}

/// Componentwise [`round_scalar`]; lands in `Z^n`.
pub fn round_vector(x: &RVector) -> RVector {
    RVector::from_bigints(x.coords().iter().map(round_scalar))
}

/// Dense row-major rational matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rational>,
}

impl RMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Rational>) -> Result<Self> {
        if rows * cols != entries.len() {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                found: entries.len(),
            });
        }
        Ok(RMatrix { rows, cols, entries })
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, Vec::len);
        let mut entries = Vec::with_capacity(n_rows * n_cols);
        for row in rows {
            Error::check_dim(n_cols, row.len())?;
            entries.extend(row);
        }
        RMatrix::new(n_rows, n_cols, entries)
    }

    /// Convenience constructor from `(numerator, denominator)` pairs.
    pub fn from_fracs(rows: &[&[(i64, i64)]]) -> Result<Self> {
        RMatrix::from_rows(
            rows.iter()
                .map(|row| row.iter().map(|&(p, q)| rat(p, q)).collect())
                .collect(),
        )
    }

    pub fn from_ints(rows: &[&[i64]]) -> Result<Self> {
        RMatrix::from_rows(
            rows.iter()
                .map(|row| row.iter().map(|&v| int(v)).collect())
                .collect(),
        )
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        RMatrix {
            rows,
            cols,
            entries: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = RMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    pub fn diagonal(diag: &[Rational]) -> Self {
        let mut m = RMatrix::zeros(diag.len(), diag.len());
        for (i, d) in diag.iter().enumerate() {
            m.set(i, i, d.clone());
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: Rational) {
        self.entries[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn entries(&self) -> &[Rational] {
        &self.entries
    }

    /// Copies `block` into `self` with its top-left corner at `(row, col)`.
    pub fn set_block(&mut self, row: usize, col: usize, block: &RMatrix) {
        for i in 0..block.rows {
            for j in 0..block.cols {
                self.set(row + i, col + j, block.get(i, j).clone());
            }
        }
    }

    pub fn sub_matrix(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> RMatrix {
        let mut out = RMatrix::zeros(rows.len(), cols.len());
        for (oi, i) in rows.clone().enumerate() {
            for (oj, j) in cols.clone().enumerate() {
                out.set(oi, oj, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn scaled(&self, factor: &Rational) -> RMatrix {
        RMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|e| e * factor).collect(),
        }
    }

    pub fn mul_vec(&self, v: &RVector) -> Result<RVector> {
        Error::check_dim(self.cols, v.dim())?;
        Ok(RVector::new(
            (0..self.rows)
                .map(|i| {
                    self.row(i)
                        .iter()
                        .zip(v.coords())
                        .fold(Rational::zero(), |acc, (a, x)| acc + a * x)
                })
                .collect(),
        ))
    }

    pub fn mul(&self, other: &RMatrix) -> Result<RMatrix> {
        Error::check_dim(self.cols, other.rows)?;
        let mut out = RMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = Rational::zero();
                for l in 0..self.cols {
                    let a = self.get(i, l);
                    if !a.is_zero() {
                        acc += a * other.get(l, j);
                    }
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    /// Operator norm induced by the sup norm: the largest absolute row sum.
    pub fn norm_inf(&self) -> Rational {
        (0..self.rows)
            .map(|i| self.row(i).iter().fold(Rational::zero(), |acc, a| acc + a.abs()))
            .max()
            .unwrap_or_else(Rational::zero)
    }

    /// Exact determinant by fraction-preserving Gaussian elimination.
    pub fn determinant(&self) -> Result<Rational> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut det = Rational::one();
        for c in 0..n {
            let Some(pivot) = (c..n).find(|&r| !a.get(r, c).is_zero()) else {
                return Ok(Rational::zero());
            };
            if pivot != c {
                a.swap_rows(pivot, c);
                det = -det;
            }
            let p = a.get(c, c).clone();
            det *= &p;
            for r in c + 1..n {
                let f = a.get(r, c) / &p;
                if f.is_zero() {
                    continue;
                }
                for j in c..n {
                    let v = a.get(r, j) - &f * a.get(c, j);
                    a.set(r, j, v);
                }
            }
        }
        Ok(det)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

impl fmt::Display for RMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(fmt_rational).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Exact inverse by Gauss-Jordan elimination.
pub fn invert_matrix(m: &RMatrix) -> Result<RMatrix> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows,
            cols: m.cols,
        });
    }
    let n = m.rows;
    let mut a = m.clone();
    let mut inv = RMatrix::identity(n);
    for c in 0..n {
        let pivot = (c..n).find(|&r| !a.get(r, c).is_zero()).ok_or(Error::Singular)?;
        if pivot != c {
            a.swap_rows(pivot, c);
            inv.swap_rows(pivot, c);
        }
        let p = a.get(c, c).recip();
        for j in 0..n {
            let v = a.get(c, j) * &p;
            a.set(c, j, v);
            let w = inv.get(c, j) * &p;
            inv.set(c, j, w);
        }
        for r in 0..n {
            if r == c || a.get(r, c).is_zero() {
                continue;
            }
            let f = a.get(r, c).clone();
            for j in 0..n {
                let v = a.get(r, j) - &f * a.get(c, j);
                a.set(r, j, v);
                let w = inv.get(r, j) - &f * inv.get(c, j);
                inv.set(r, j, w);
            }
        }
    }
    Ok(inv)
}

/// One axis of an [`IntervalBox`], with independent open/closed ends.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Interval {
    pub lo: Rational,
    pub lo_closed: bool,
    pub hi: Rational,
    pub hi_closed: bool,
}

impl Interval {
    pub fn new(lo: Rational, lo_closed: bool, hi: Rational, hi_closed: bool) -> Self {
        Interval {
            lo,
            lo_closed,
            hi,
            hi_closed,
        }
    }

    pub fn closed(lo: Rational, hi: Rational) -> Self {
        Interval::new(lo, true, hi, true)
    }

    pub fn open(lo: Rational, hi: Rational) -> Self {
        Interval::new(lo, false, hi, false)
    }

    /// `]lo, hi]`
    pub fn half_open(lo: Rational, hi: Rational) -> Self {
        Interval::new(lo, false, hi, true)
    }

    pub fn contains(&self, x: &Rational) -> bool {
        let above = if self.lo_closed {
            x >= &self.lo
        } else {
            x > &self.lo
        };
        let below = if self.hi_closed {
            x <= &self.hi
        } else {
            x < &self.hi
        };
        above && below
    }

    pub fn is_empty(&self) -> bool {
        match self.lo.cmp(&self.hi) {
            std::cmp::Ordering::Less => false,
            std::cmp::Ordering::Equal => !(self.lo_closed && self.hi_closed),
            std::cmp::Ordering::Greater => true,
        }
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn intersect(&self, other: &Interval) -> Interval {
        let (lo, lo_closed) = match self.lo.cmp(&other.lo) {
            std::cmp::Ordering::Greater => (self.lo.clone(), self.lo_closed),
            std::cmp::Ordering::Less => (other.lo.clone(), other.lo_closed),
            std::cmp::Ordering::Equal => (self.lo.clone(), self.lo_closed && other.lo_closed),
        };
        let (hi, hi_closed) = match self.hi.cmp(&other.hi) {
            std::cmp::Ordering::Less => (self.hi.clone(), self.hi_closed),
            std::cmp::Ordering::Greater => (other.hi.clone(), other.hi_closed),
            std::cmp::Ordering::Equal => (self.hi.clone(), self.hi_closed && other.hi_closed),
        };
        Interval::new(lo, lo_closed, hi, hi_closed)
    }
}

/// Product of intervals. A zero-dimensional box contains the single point of
/// `R^0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntervalBox {
    axes: Vec<Interval>,
}

impl IntervalBox {
    pub fn new(axes: Vec<Interval>) -> Result<Self> {
        for (i, axis) in axes.iter().enumerate() {
            if axis.lo > axis.hi {
                return Err(Error::InvalidArgument(format!(
                    "interval on axis {i} has lo > hi ({} > {})",
                    fmt_rational(&axis.lo),
                    fmt_rational(&axis.hi)
                )));
            }
        }
        Ok(IntervalBox { axes })
    }

    /// Constructs a box without checking `lo <= hi`; empty boxes are legal
    /// intermediate values of box algebra.
    pub(crate) fn from_axes_unchecked(axes: Vec<Interval>) -> Self {
        IntervalBox { axes }
    }

    pub fn cube_closed(center: &RVector, radius: &Rational) -> Self {
        IntervalBox {
            axes: center
                .coords()
                .iter()
                .map(|c| Interval::closed(c - radius, c + radius))
                .collect(),
        }
    }

    /// The open ball `B(center, radius)` as a box.
    pub fn ball(center: &RVector, radius: &Rational) -> Self {
        IntervalBox {
            axes: center
                .coords()
                .iter()
                .map(|c| Interval::open(c - radius, c + radius))
                .collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.axes.len()
    }

    pub fn axes(&self) -> &[Interval] {
        &self.axes
    }

    pub fn axis(&self, i: usize) -> &Interval {
        &self.axes[i]
    }

    pub fn contains(&self, p: &RVector) -> bool {
        p.dim() == self.dim() && self.axes.iter().zip(p.coords()).all(|(a, x)| a.contains(x))
    }

    pub fn is_empty(&self) -> bool {
        self.axes.iter().any(Interval::is_empty)
    }

    pub fn volume(&self) -> Rational {
        if self.is_empty() {
            return Rational::zero();
        }
        self.axes.iter().fold(Rational::one(), |acc, a| acc * a.width())
    }

    pub fn intersect(&self, other: &IntervalBox) -> IntervalBox {
        IntervalBox {
            axes: self
                .axes
                .iter()
                .zip(&other.axes)
                .map(|(a, b)| a.intersect(b))
                .collect(),
        }
    }

    pub fn product(&self, other: &IntervalBox) -> IntervalBox {
        let mut axes = self.axes.clone();
        axes.extend(other.axes.iter().cloned());
        IntervalBox { axes }
    }

    /// Closed hull `[lo, hi]` on every axis.
    pub fn closure(&self) -> IntervalBox {
        IntervalBox {
            axes: self
                .axes
                .iter()
                .map(|a| Interval::closed(a.lo.clone(), a.hi.clone()))
                .collect(),
        }
    }

    /// Closed `eta`-neighbourhood for the sup norm.
    pub fn inflate(&self, eta: &Rational) -> IntervalBox {
        IntervalBox {
            axes: self
                .axes
                .iter()
                .map(|a| Interval::closed(&a.lo - eta, &a.hi + eta))
                .collect(),
        }
    }

    /// Points whose closed `eta`-neighbourhood stays inside the box. Face
    /// flags are preserved; the result may be empty.
    pub fn deflate(&self, eta: &Rational) -> IntervalBox {
        IntervalBox {
            axes: self
                .axes
                .iter()
                .map(|a| Interval::new(&a.lo + eta, a.lo_closed, &a.hi - eta, a.hi_closed))
                .collect(),
        }
    }

    /// `self \ other` as a list of disjoint nonempty boxes.
    pub fn subtract(&self, other: &IntervalBox) -> Vec<IntervalBox> {
        if self.is_empty() {
            return Vec::new();
        }
        if self.intersect(other).is_empty() {
            return vec![self.clone()];
        }
        let mut out = Vec::new();
        let mut rest = self.clone();
        for i in 0..self.dim() {
            let a = rest.axes[i].clone();
            let b = &other.axes[i];
            let below = Interval::new(a.lo.clone(), a.lo_closed, b.lo.clone(), !b.lo_closed);
            let below = below.intersect(&a);
            if !below.is_empty() {
                let mut piece = rest.clone();
                piece.axes[i] = below;
                out.push(piece);
            }
            let above = Interval::new(b.hi.clone(), !b.hi_closed, a.hi.clone(), a.hi_closed);
            let above = above.intersect(&a);
            if !above.is_empty() {
                let mut piece = rest.clone();
                piece.axes[i] = above;
                out.push(piece);
            }
            rest.axes[i] = a.intersect(b);
        }
        out
    }
}

/// Closed box guaranteed to contain `M^{-1}(box)`.
///
/// Each endpoint is a row of `M^{-1}` evaluated at the corner of the closed
/// box that extremizes it.
pub fn preimage_bounds(m: &RMatrix, bx: &IntervalBox) -> Result<IntervalBox> {
    Error::check_dim(m.cols(), bx.dim())?;
    let inv = invert_matrix(m)?;
    let axes = (0..inv.rows())
        .map(|i| {
            let mut lo = Rational::zero();
            let mut hi = Rational::zero();
            for (a, axis) in inv.row(i).iter().zip(bx.axes()) {
                if a.is_negative() {
                    lo += a * &axis.hi;
                    hi += a * &axis.lo;
                } else {
                    lo += a * &axis.lo;
                    hi += a * &axis.hi;
                }
            }
            Interval::closed(lo, hi)
        })
        .collect();
    Ok(IntervalBox { axes })
}
