//! Exact extremes of `x ↦ Card(P ∩ B(x, r))` over a box of centres.
//!
//! Coordinates are rescaled to integers by `2L`, with `L` a common
//! denominator of everything involved. Breakpoints `p ± r` and region ends
//! are then even, so midpoints of consecutive breakpoints stay integral.

use num::bigint::BigInt;
use num::integer::Integer;
use num::traits::{One, ToPrimitive};

use crate::error::{Error, Result};
use crate::numeric::{from_bigint, RVector, Rational};

/// Common integer scale `2L`.
#[derive(Clone, Debug)]
pub(crate) struct Scale {
    factor: BigInt,
}

const LIMIT: i128 = 1 << 100;

impl Scale {
    pub(crate) fn new<'a>(values: impl IntoIterator<Item = &'a Rational>) -> Scale {
        let l = values
            .into_iter()
            .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        Scale { factor: l * 2 }
    }

    pub(crate) fn int(&self, x: &Rational) -> Result<i128> {
        let v = x * from_bigint(self.factor.clone());
        debug_assert!(v.is_integer());
        v.to_integer()
            .to_i128()
            .filter(|v| v.abs() < LIMIT)
            .ok_or_else(|| Error::InvalidArgument("coordinates too large for an exact sweep".into()))
    }

    pub(crate) fn vec(&self, v: &RVector) -> Result<Vec<i128>> {
        v.coords().iter().map(|c| self.int(c)).collect()
    }

    pub(crate) fn back(&self, x: i128) -> Rational {
        Rational::new(BigInt::from(x), self.factor.clone())
    }

    pub(crate) fn back_vec(&self, v: &[i128]) -> RVector {
        RVector::new(v.iter().map(|&x| self.back(x)).collect())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Extremes {
    pub min: u64,
    pub argmin: Vec<i128>,
    pub max: u64,
    pub argmax: Vec<i128>,
    /// `false` when the centres were sampled on a grid (dimension ≥ 3).
    pub exact: bool,
}

fn count_open(sorted: &[i128], x: i128, r: i128) -> u64 {
    let lo = sorted.partition_point(|&p| p <= x - r);
    let hi = sorted.partition_point(|&p| p < x + r);
    (hi - lo.min(hi)) as u64
}

/// Centres where the count can change, plus one centre inside every cell
/// between them.
fn line_candidates(values: impl Iterator<Item = i128>, r: i128, lo: i128, hi: i128) -> Vec<i128> {
    let mut c = vec![lo, hi];
    for v in values {
        for b in [v - r, v + r] {
            if lo < b && b < hi {
                c.push(b);
            }
        }
    }
    c.sort_unstable();
    c.dedup();
    let mids: Vec<i128> = c
        .windows(2)
        .map(|w| Integer::div_floor(&(w[0] + w[1]), &2))
        .collect();
    c.extend(mids);
    c.sort_unstable();
    c.dedup();
    c
}

fn line_extremes(sorted: &[i128], r: i128, lo: i128, hi: i128) -> (u64, i128, u64, i128) {
    let mut best = (u64::MAX, lo, 0, lo);
    for x in line_candidates(sorted.iter().copied(), r, lo, hi) {
        let k = count_open(sorted, x, r);
        if k < best.0 {
            best.0 = k;
            best.1 = x;
        }
        if k > best.2 {
            best.2 = k;
            best.3 = x;
        }
    }
    best
}

/// Extremes over the closed box `region` of centres.
///
/// `points` must be sorted lexicographically. `grid_step` is used only in
/// dimension ≥ 3, where the result is a lower bound for the maximum and an
/// upper bound for the minimum.
pub(crate) fn extremes(
    points: &[Vec<i128>],
    r: i128,
    region: &[(i128, i128)],
    grid_step: i128,
    budget: u64,
) -> Result<Extremes> {
    let dim = region.len();
    match dim {
        1 => {
            let vals: Vec<i128> = points.iter().map(|p| p[0]).collect();
            let (min, amin, max, amax) = line_extremes(&vals, r, region[0].0, region[0].1);
            Ok(Extremes {
                min,
                argmin: vec![amin],
                max,
                argmax: vec![amax],
                exact: true,
            })
        }
        2 => Ok(plane_extremes(points, r, region)),
        _ => grid_extremes(points, r, region, grid_step.max(1), budget),
    }
}

fn plane_extremes(points: &[Vec<i128>], r: i128, region: &[(i128, i128)]) -> Extremes {
    let (lo, hi) = region[0];
    let mut xs: Vec<i128> = points.iter().map(|p| p[0]).collect();
    xs.dedup();
    let mut out = Extremes {
        min: u64::MAX,
        argmin: vec![lo, region[1].0],
        max: 0,
        argmax: vec![lo, region[1].0],
        exact: true,
    };
    let mut strip = Vec::new();
    for x in line_candidates(xs.into_iter(), r, lo, hi) {
        let a = points.partition_point(|p| p[0] <= x - r);
        let b = points.partition_point(|p| p[0] < x + r);
        strip.clear();
        strip.extend(points[a..b.max(a)].iter().map(|p| p[1]));
        strip.sort_unstable();
        let (mn, ymn, mx, ymx) = line_extremes(&strip, r, region[1].0, region[1].1);
        if mn < out.min {
            out.min = mn;
            out.argmin = vec![x, ymn];
        }
        if mx > out.max {
            out.max = mx;
            out.argmax = vec![x, ymx];
        }
    }
    out
}

fn grid_extremes(
    points: &[Vec<i128>],
    r: i128,
    region: &[(i128, i128)],
    step: i128,
    budget: u64,
) -> Result<Extremes> {
    let axes: Vec<Vec<i128>> = region
        .iter()
        .map(|&(lo, hi)| {
            let mut v: Vec<i128> = std::iter::successors(Some(lo), |x| Some(x + step))
                .take_while(|&x| x < hi)
                .collect();
            v.push(hi);
            v
        })
        .collect();
    let centres = axes
        .iter()
        .try_fold(1u64, |acc, a| acc.checked_mul(a.len() as u64))
        .and_then(|c| c.checked_mul(points.len().max(1) as u64))
        .unwrap_or(u64::MAX);
    if centres > budget {
        return Err(Error::Budget { budget });
    }
    let lo: Vec<i128> = region.iter().map(|r| r.0).collect();
    let mut out = Extremes {
        min: u64::MAX,
        argmin: lo.clone(),
        max: 0,
        argmax: lo,
        exact: false,
    };
    let mut idx = vec![0usize; axes.len()];
    loop {
        let x: Vec<i128> = idx.iter().zip(&axes).map(|(&i, a)| a[i]).collect();
        let k = points
            .iter()
            .filter(|p| p.iter().zip(&x).all(|(a, b)| (a - b).abs() < r))
            .count() as u64;
        if k < out.min {
            out.min = k;
            out.argmin = x.clone();
        }
        if k > out.max {
            out.max = k;
            out.argmax = x;
        }
        let mut axis = axes.len();
        loop {
            if axis == 0 {
                return Ok(out);
            }
            axis -= 1;
            idx[axis] += 1;
            if idx[axis] < axes[axis].len() {
                break;
            }
            idx[axis] = 0;
        }
    }
}
