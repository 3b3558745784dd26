//! Finite point patches of a Delone set, tagged with the ball on which they
//! are known to be complete.

use num::traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::numeric::{fmt_rational, int, rat, RVector, Rational};

/// The open ball `B(center, radius)` a patch was enumerated over.
///
/// `complete` records whether every point of the underlying infinite set in
/// this ball is present. Images under discretized maps are not complete until
/// restricted with an adequate margin.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Domain {
    pub center: RVector,
    pub radius: Rational,
    pub complete: bool,
}

impl Domain {
    pub fn new(center: RVector, radius: Rational) -> Self {
        Domain {
            center,
            radius,
            complete: true,
        }
    }

    pub fn dim(&self) -> usize {
        self.center.dim()
    }

    pub fn contains_point(&self, p: &RVector) -> bool {
        p.dist_inf(&self.center) < self.radius
    }

    /// Whether the open ball `B(center, radius)` lies inside this domain.
    pub fn contains_ball(&self, center: &RVector, radius: &Rational) -> bool {
        center.dist_inf(&self.center) + radius <= self.radius
    }

    /// Largest ball contained in both domains: the intersection of two cubes
    /// is a box, and the cube inscribed at its centre is returned.
    pub fn common_ball(&self, other: &Domain) -> Result<Domain> {
        Error::check_dim(self.dim(), other.dim())?;
        let mut center = Vec::with_capacity(self.dim());
        let mut radius: Option<Rational> = None;
        for (a, b) in self.center.coords().iter().zip(other.center.coords()) {
            let lo = (a - &self.radius).max(b - &other.radius);
            let hi = (a + &self.radius).min(b + &other.radius);
            let half = (&hi - &lo) / int(2);
            center.push((&lo + &hi) / int(2));
            radius = Some(match radius {
                Some(r) => r.min(half),
                None => half,
            });
        }
        let radius = radius.unwrap_or_else(|| self.radius.clone().min(other.radius.clone()));
        if !radius.is_positive() {
            return Err(Error::EmptyDomainIntersection);
        }
        Ok(Domain {
            center: RVector::new(center),
            radius,
            complete: self.complete && other.complete,
        })
    }

    /// Closed box of centers `x` with `B(x, r) ⊆ self`, one interval per axis.
    pub fn center_region(&self, r: &Rational) -> Option<Vec<(Rational, Rational)>> {
        let slack = &self.radius - r;
        if slack.is_negative() {
            return None;
        }
        Some(
            self.center
                .coords()
                .iter()
                .map(|c| (c - &slack, c + &slack))
                .collect(),
        )
    }
}

/// Uniform discreteness and relative denseness radii of a patch.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DelonePair {
    /// Half the minimal pairwise sup distance; exact.
    pub r_gamma: Rational,
    /// Largest empty cube found by a grid sweep; an estimate.
    pub big_r_gamma: Rational,
}

/// Canonical finite point set: sorted lexicographically, no duplicates, every
/// point strictly inside the domain ball.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PointSet {
    dim: usize,
    points: Vec<RVector>,
    domain: Domain,
}

impl PointSet {
    pub fn new(dim: usize, points: Vec<RVector>, domain: Domain) -> Result<Self> {
        Error::check_dim(dim, domain.dim())?;
        if !domain.radius.is_positive() {
            return Err(Error::InvalidArgument("domain radius must be positive".into()));
        }
        for p in &points {
            Error::check_dim(dim, p.dim())?;
            if !domain.contains_point(p) {
                return Err(Error::domain(format!(
                    "point {p} lies outside the domain B({}, {})",
                    domain.center,
                    fmt_rational(&domain.radius)
                )));
            }
        }
        Ok(Self::from_unsorted(dim, points, domain))
    }

    pub fn empty(dim: usize, domain: Domain) -> Result<Self> {
        PointSet::new(dim, Vec::new(), domain)
    }

    /// `Z^n ∩ B(0, radius)`.
    pub fn integer_grid(dim: usize, radius: &Rational) -> Result<Self> {
        if !radius.is_positive() {
            return Err(Error::InvalidArgument("radius must be positive".into()));
        }
        // largest integer strictly below the radius
        let bound = (radius - int(1)).ceil().to_integer();
        let bound: i64 = bound
            .try_into()
            .map_err(|_| Error::InvalidArgument("radius too large".into()))?;
        let mut points = Vec::new();
        let mut idx = vec![-bound; dim];
        if bound >= 0 {
            loop {
                points.push(RVector::from_ints(&idx));
                if !odometer_step(&mut idx, -bound, bound) {
                    break;
                }
            }
        }
        Ok(PointSet {
            dim,
            points,
            domain: Domain::new(RVector::zeros(dim), radius.clone()),
        })
    }

    pub(crate) fn from_unsorted(dim: usize, mut points: Vec<RVector>, domain: Domain) -> Self {
        points.sort();
        points.dedup();
        PointSet { dim, points, domain }
    }

    pub(crate) fn from_sorted(dim: usize, points: Vec<RVector>, domain: Domain) -> Self {
        debug_assert!(points.windows(2).all(|w| w[0] < w[1]));
        PointSet { dim, points, domain }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[RVector] {
        &self.points
    }

    pub fn iter(&self) -> std::slice::Iter<'_, RVector> {
        self.points.iter()
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn is_complete(&self) -> bool {
        self.domain.complete
    }

    pub fn contains(&self, p: &RVector) -> bool {
        self.points.binary_search(p).is_ok()
    }

    pub(crate) fn set_complete(&mut self, complete: bool) {
        self.domain.complete = complete;
    }

    pub(crate) fn require_complete(&self) -> Result<()> {
        if self.domain.complete {
            Ok(())
        } else {
            Err(Error::IncompleteDomain)
        }
    }

    /// Shifts every point and the domain centre by `v`.
    pub fn translate(&self, v: &RVector) -> Result<PointSet> {
        Error::check_dim(self.dim, v.dim())?;
        // translation preserves lexicographic order
        let points = self.points.iter().map(|p| p + v).collect();
        let domain = Domain {
            center: &self.domain.center + v,
            radius: self.domain.radius.clone(),
            complete: self.domain.complete,
        };
        Ok(PointSet::from_sorted(self.dim, points, domain))
    }

    /// Exact symmetric difference, known on the largest ball common to both
    /// domains.
    pub fn sym_diff(&self, other: &PointSet) -> Result<PointSet> {
        Error::check_dim(self.dim, other.dim)?;
        let domain = self.domain.common_ball(&other.domain)?;
        let mut out = Vec::new();
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.points, &other.points);
        while i < a.len() || j < b.len() {
            let take = match (a.get(i), b.get(j)) {
                (Some(x), Some(y)) => match x.cmp(y) {
                    std::cmp::Ordering::Less => {
                        i += 1;
                        Some(x)
                    }
                    std::cmp::Ordering::Greater => {
                        j += 1;
                        Some(y)
                    }
                    std::cmp::Ordering::Equal => {
                        i += 1;
                        j += 1;
                        None
                    }
                },
                (Some(x), None) => {
                    i += 1;
                    Some(x)
                }
                (None, Some(y)) => {
                    j += 1;
                    Some(y)
                }
                (None, None) => unreachable!(),
            };
            if let Some(p) = take {
                if domain.contains_point(p) {
                    out.push(p.clone());
                }
            }
        }
        Ok(PointSet::from_sorted(self.dim, out, domain))
    }

    /// Points strictly inside `B(center, radius)`. The ball must fit in the
    /// current domain.
    pub fn restrict(&self, center: &RVector, radius: &Rational) -> Result<PointSet> {
        Error::check_dim(self.dim, center.dim())?;
        if !radius.is_positive() {
            return Err(Error::InvalidArgument(
                "restriction radius must be positive".into(),
            ));
        }
        if !self.domain.contains_ball(center, radius) {
            return Err(Error::domain_needing(
                format!(
                    "ball B({center}, {}) exceeds the domain B({}, {})",
                    fmt_rational(radius),
                    self.domain.center,
                    fmt_rational(&self.domain.radius)
                ),
                center.dist_inf(&self.domain.center) + radius,
            ));
        }
        let domain = Domain {
            center: center.clone(),
            radius: radius.clone(),
            complete: self.domain.complete,
        };
        let points = self
            .points
            .iter()
            .filter(|p| domain.contains_point(p))
            .cloned()
            .collect();
        Ok(PointSet::from_sorted(self.dim, points, domain))
    }

    /// Number of points strictly inside `B(center, radius)`.
    pub fn count_in_ball(&self, center: &RVector, radius: &Rational) -> usize {
        self.points
            .iter()
            .filter(|p| p.dist_inf(center) < *radius)
            .count()
    }

    /// Uniform discreteness radius (exact) and a grid-sweep estimate of the
    /// relative denseness radius.
    ///
    /// The sweep visits centres on a grid of step `r_gamma` over the bounding
    /// box of the points; at each centre the largest empty open cube that also
    /// stays inside the domain is measured.
    pub fn delone_estimate(&self) -> Result<DelonePair> {
        if self.points.len() < 2 {
            return Err(Error::InvalidArgument(
                "Delone estimate needs at least two points".into(),
            ));
        }
        let min_dist = self.min_pairwise_distance();
        let r_gamma = &min_dist / int(2);

        let step = r_gamma.clone();
        let mut lo = self.points[0].coords().to_vec();
        let mut hi = lo.clone();
        for p in &self.points {
            for (i, c) in p.coords().iter().enumerate() {
                if *c < lo[i] {
                    lo[i] = c.clone();
                }
                if *c > hi[i] {
                    hi[i] = c.clone();
                }
            }
        }
        let counts: Vec<u64> = lo
            .iter()
            .zip(&hi)
            .map(|(l, h)| {
                ((h - l) / &step)
                    .floor()
                    .to_integer()
                    .try_into()
                    .unwrap_or(u64::MAX)
            })
            .collect();
        let total = counts
            .iter()
            .try_fold(1u64, |acc, &c| acc.checked_mul(c.saturating_add(1)));
        const GRID_LIMIT: u64 = 4_000_000;
        if total.map_or(true, |t| t > GRID_LIMIT) {
            return Err(Error::Budget { budget: GRID_LIMIT });
        }

        let mut best = Rational::zero();
        let mut idx = vec![0u64; self.dim];
        loop {
            let c = RVector::new(
                lo.iter()
                    .zip(&idx)
                    .map(|(l, &k)| l + &step * int(k as i64))
                    .collect(),
            );
            let cap = &self.domain.radius - c.dist_inf(&self.domain.center);
            let rho = self.nearest_distance(&c, cap);
            if rho > best {
                best = rho;
            }
            let mut axis = 0;
            while axis < self.dim {
                if idx[axis] < counts[axis] {
                    idx[axis] += 1;
                    break;
                }
                idx[axis] = 0;
                axis += 1;
            }
            if axis == self.dim {
                break;
            }
        }
        Ok(DelonePair {
            big_r_gamma: best.max(r_gamma.clone()),
            r_gamma,
        })
    }

    /// Minimal pairwise sup distance. Points are sorted by first coordinate,
    /// so the scan stops once that coordinate alone exceeds the best so far.
    pub fn min_pairwise_distance(&self) -> Rational {
        let mut best: Option<Rational> = None;
        for (i, p) in self.points.iter().enumerate() {
            for q in &self.points[i + 1..] {
                let dx = &q.coords()[0] - &p.coords()[0];
                if let Some(b) = &best {
                    if dx >= *b {
                        break;
                    }
                }
                let d = p.dist_inf(q);
                if best.as_ref().map_or(true, |b| d < *b) {
                    best = Some(d);
                }
            }
        }
        best.unwrap_or_else(|| rat(0, 1))
    }

    /// `min(cap, distance from c to the nearest point)`.
    fn nearest_distance(&self, c: &RVector, cap: Rational) -> Rational {
        let mut best = cap;
        if self.dim == 0 {
            return best;
        }
        let x0 = &c.coords()[0];
        let start = self.points.partition_point(|p| p.coords()[0] < *x0);
        for p in &self.points[start..] {
            if &p.coords()[0] - x0 >= best {
                break;
            }
            let d = p.dist_inf(c);
            if d < best {
                best = d;
            }
        }
        for p in self.points[..start].iter().rev() {
            if x0 - &p.coords()[0] >= best {
                break;
            }
            let d = p.dist_inf(c);
            if d < best {
                best = d;
            }
        }
        best
    }
}

/// Advances `idx` to the next vector of `[lo, hi]^n` in lexicographic order
/// (last axis fastest). Returns `false` after the last vector.
pub(crate) fn odometer_step(idx: &mut [i64], lo: i64, hi: i64) -> bool {
    for axis in (0..idx.len()).rev() {
        if idx[axis] < hi {
            idx[axis] += 1;
            return true;
        }
        idx[axis] = lo;
    }
    false
}
