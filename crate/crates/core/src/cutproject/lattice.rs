//! Integer linear algebra used by the enumerator: row scaling, adjugates and
//! lower-triangular column Hermite forms.

#![allow(clippy::needless_range_loop)]

use num::bigint::BigInt;
use num::integer::Integer;
use num::traits::{One, Signed, Zero};

use crate::numeric::Rational;

pub(crate) type IntMatrix = Vec<Vec<BigInt>>;

/// Least common multiple of the denominators in `row`.
pub(crate) fn row_denominator(row: &[Rational]) -> BigInt {
    row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

/// `row * d` as integers, for `d` a multiple of every denominator.
pub(crate) fn scale_row(row: &[Rational], d: &BigInt) -> Vec<BigInt> {
    row.iter().map(|x| (x.numer() * d) / x.denom()).collect()
}

/// Determinant by Bareiss fraction-free elimination.
pub(crate) fn det(m: &IntMatrix) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a = m.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&r| !a[r][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// Adjugate matrix: `m * adj(m) = det(m) * Id`.
pub(crate) fn adjugate(m: &IntMatrix) -> IntMatrix {
    let n = m.len();
    if n == 1 {
        return vec![vec![BigInt::one()]];
    }
    let mut adj = vec![vec![BigInt::zero(); n]; n];
    for i in 0..n {
        for j in 0..n {
            let minor: IntMatrix = (0..n)
                .filter(|&r| r != i)
                .map(|r| (0..n).filter(|&c| c != j).map(|c| m[r][c].clone()).collect())
                .collect();
            let cof = det(&minor);
            adj[j][i] = if (i + j) % 2 == 0 { cof } else { -cof };
        }
    }
    adj
}

/// Column-style Hermite reduction of a `t x s` integer matrix (`t <= s`):
/// returns `(L, U)` with `U` unimodular, `M U = L`, `L` lower trapezoidal and
/// `L[i][i] >= 0`. A zero diagonal entry means row `i` is dependent on the
/// previous rows once restricted to the remaining columns.
pub(crate) fn lower_hermite(m: &IntMatrix, width: usize) -> (IntMatrix, IntMatrix) {
    let t = m.len();
    let mut a = m.clone();
    let mut u: IntMatrix = (0..width)
        .map(|i| (0..width).map(|j| BigInt::from(u8::from(i == j))).collect())
        .collect();

    let combine =
        |mat: &mut IntMatrix, i: usize, j: usize, x: &BigInt, y: &BigInt, p: &BigInt, q: &BigInt| {
            // col_i <- x col_i + y col_j ; col_j <- p col_i + q col_j
            for row in mat.iter_mut() {
                let ci = row[i].clone();
                let cj = row[j].clone();
                row[i] = x * &ci + y * &cj;
                row[j] = p * &ci + q * &cj;
            }
        };

    for i in 0..t.min(width) {
        for j in i + 1..width {
            if a[i][j].is_zero() {
                continue;
            }
            if a[i][i].is_zero() {
                for row in a.iter_mut() {
                    row.swap(i, j);
                }
                for row in u.iter_mut() {
                    row.swap(i, j);
                }
                continue;
            }
            let e = a[i][i].extended_gcd(&a[i][j]);
            let g = e.gcd;
            let p = &a[i][j] / &g;
            let q = -(&a[i][i] / &g);
            let (x, y) = (e.x, e.y);
            combine(&mut a, i, j, &x, &y, &p, &q);
            combine(&mut u, i, j, &x, &y, &p, &q);
        }
        if a[i][i].is_negative() {
            for row in a.iter_mut() {
                row[i] = -row[i].clone();
            }
            for row in u.iter_mut() {
                row[i] = -row[i].clone();
            }
        }
    }
    (a, u)
}
