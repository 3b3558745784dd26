//! Exact enumeration of lattice points `λ = B c` with `p₁(λ)` in a window
//! and `p₂(λ)` in an open ball.
//!
//! Rows of the basis are scaled to integers, so every coordinate of `λ` is
//! an integer over a fixed per-row denominator and all bound checks are
//! integer comparisons. The basis is permuted to block lower-triangular form
//! (maximum matching plus strongly connected components); blocks are then
//! enumerated in dependency order. Each block is searched either through
//! the integer box containing the preimage of its target slab, or through a
//! lower-triangular Hermite form of the block, whichever is estimated to
//! visit fewer candidates.

use num::bigint::BigInt;
use num::integer::Integer;
use num::traits::{One, Signed, ToPrimitive, Zero};
use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;

use super::lattice::{adjugate, det, lower_hermite, row_denominator, scale_row, IntMatrix};
use super::window::Window;
use crate::error::{Error, Result};
use crate::numeric::{RMatrix, RVector, Rational};

/// Default cap on the number of candidate coefficient values visited.
pub const DEFAULT_BUDGET: u64 = 100_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnumerationConfig {
    pub budget: u64,
}

impl Default for EnumerationConfig {
    fn default() -> Self {
        EnumerationConfig {
            budget: DEFAULT_BUDGET,
        }
    }
}

/// Raw enumeration output: distinct physical points plus the number of
/// accepted lattice points (before deduplication).
pub(crate) struct Enumerated {
    pub points: Vec<RVector>,
    pub accepted: u64,
}

pub(crate) fn enumerate(
    basis: &RMatrix,
    m: usize,
    window: &Window,
    center: &RVector,
    radius: &Rational,
    config: &EnumerationConfig,
) -> Result<Enumerated> {
    let Some(plan) = Plan::build(basis, m, window, center, radius)? else {
        return Ok(Enumerated {
            points: Vec::new(),
            accepted: 0,
        });
    };
    let raw = match plan.run::<i128>(config.budget) {
        Ok(raw) => raw,
        Err(Stop::Overflow) => plan
            .run::<BigInt>(config.budget)
            .map_err(|s| s.into_error(config.budget))?,
        Err(stop) => return Err(stop.into_error(config.budget)),
    };
    let mut physical: Vec<Vec<BigInt>> = raw.physical;
    physical.sort();
    physical.dedup();
    let scales = &plan.scale[m..];
    let points = physical
        .into_iter()
        .map(|p| {
            RVector::new(
                p.into_iter()
                    .zip(scales)
                    .map(|(v, d)| Rational::new(v, d.clone()))
                    .collect(),
            )
        })
        .collect();
    Ok(Enumerated {
        points,
        accepted: raw.accepted,
    })
}

enum Stop {
    Budget,
    Overflow,
}

impl Stop {
    fn into_error(self, budget: u64) -> Error {
        match self {
            Stop::Budget => Error::Budget { budget },
            Stop::Overflow => unreachable!("arbitrary precision cannot overflow"),
        }
    }
}

/// Integer arithmetic used at run time: checked `i128` first, `BigInt` as
/// the fallback.
trait Num: Clone + Ord + Sized {
    fn from_big(b: &BigInt) -> Option<Self>;
    fn to_big(&self) -> BigInt;
    fn zero() -> Self;
    fn one() -> Self;
    fn add(&self, o: &Self) -> Option<Self>;
    fn sub(&self, o: &Self) -> Option<Self>;
    fn mul(&self, o: &Self) -> Option<Self>;
    fn div_floor(&self, o: &Self) -> Self;
    fn div_ceil(&self, o: &Self) -> Self;
    fn is_neg(&self) -> bool;
}

impl Num for i128 {
    fn from_big(b: &BigInt) -> Option<Self> {
        b.to_i128()
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
    fn zero() -> Self {
        0
    }
    fn one() -> Self {
        1
    }
    fn add(&self, o: &Self) -> Option<Self> {
        self.checked_add(*o)
    }
    fn sub(&self, o: &Self) -> Option<Self> {
        self.checked_sub(*o)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        self.checked_mul(*o)
    }
    fn div_floor(&self, o: &Self) -> Self {
        Integer::div_floor(self, o)
    }
    fn div_ceil(&self, o: &Self) -> Self {
        -Integer::div_floor(&-self, o)
    }
    fn is_neg(&self) -> bool {
        *self < 0
    }
}

impl Num for BigInt {
    fn from_big(b: &BigInt) -> Option<Self> {
        Some(b.clone())
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn add(&self, o: &Self) -> Option<Self> {
        Some(self + o)
    }
    fn sub(&self, o: &Self) -> Option<Self> {
        Some(self - o)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        Some(self * o)
    }
    fn div_floor(&self, o: &Self) -> Self {
        Integer::div_floor(self, o)
    }
    fn div_ceil(&self, o: &Self) -> Self {
        -Integer::div_floor(&-self, o)
    }
    fn is_neg(&self) -> bool {
        self.is_negative()
    }
}

#[derive(Clone, Debug)]
enum Kind<T> {
    /// Integer points of the preimage box: `c_j * det = Σ_i adj[j][i] (y_i - off_i)`.
    Box {
        n: Vec<Vec<T>>,
        adj: Vec<Vec<T>>,
        det: T,
    },
    /// Levels follow `order`; row `order[t]` equals `Σ_{j<=t} l[t][j] c'_j`
    /// and the block coefficients are `u c'`.
    Triangular {
        order: Vec<usize>,
        l: Vec<Vec<T>>,
        u: Vec<Vec<T>>,
    },
}

#[derive(Clone, Debug)]
struct Block<T> {
    rows: Vec<usize>,
    cols: Vec<usize>,
    /// Nonzero entries of each block row in columns of earlier blocks.
    coupling: Vec<Vec<(usize, T)>>,
    kind: Kind<T>,
}

struct Plan {
    m: usize,
    dim: usize,
    scale: Vec<BigInt>,
    bounds: Vec<(BigInt, BigInt)>,
    window_boxes: Vec<Vec<(BigInt, BigInt)>>,
    blocks: Vec<Block<BigInt>>,
}

struct Raw {
    physical: Vec<Vec<BigInt>>,
    accepted: u64,
}

fn ceil_scaled(x: &Rational, d: &BigInt) -> BigInt {
    (x * Rational::from_integer(d.clone())).ceil().to_integer()
}

fn floor_scaled(x: &Rational, d: &BigInt) -> BigInt {
    (x * Rational::from_integer(d.clone())).floor().to_integer()
}

/// Integer range of `d * x` for `x` in an interval with the given flags.
fn int_range(lo: &Rational, lo_closed: bool, hi: &Rational, hi_closed: bool, d: &BigInt) -> (BigInt, BigInt) {
    let lo_i = if lo_closed {
        ceil_scaled(lo, d)
    } else {
        floor_scaled(lo, d) + 1
    };
    let hi_i = if hi_closed {
        floor_scaled(hi, d)
    } else {
        ceil_scaled(hi, d) - 1
    };
    (lo_i, hi_i)
}

impl Plan {
    fn build(
        basis: &RMatrix,
        m: usize,
        window: &Window,
        center: &RVector,
        radius: &Rational,
    ) -> Result<Option<Plan>> {
        let dim = basis.rows();
        let n = dim - m;
        Error::check_dim(n, center.dim())?;
        Error::check_dim(m, window.dim())?;

        let scale: Vec<BigInt> = (0..dim).map(|r| row_denominator(basis.row(r))).collect();
        let rows: IntMatrix = (0..dim).map(|r| scale_row(basis.row(r), &scale[r])).collect();

        let mut window_boxes = Vec::new();
        for b in window.boxes() {
            let ranges: Vec<(BigInt, BigInt)> = b
                .axes()
                .iter()
                .enumerate()
                .map(|(r, a)| int_range(&a.lo, a.lo_closed, &a.hi, a.hi_closed, &scale[r]))
                .collect();
            if ranges.iter().all(|(lo, hi)| lo <= hi) {
                window_boxes.push(ranges);
            }
        }
        if window_boxes.is_empty() {
            return Ok(None);
        }

        let mut bounds = Vec::with_capacity(dim);
        for r in 0..m {
            let lo = window_boxes.iter().map(|b| b[r].0.clone()).min().unwrap();
            let hi = window_boxes.iter().map(|b| b[r].1.clone()).max().unwrap();
            bounds.push((lo, hi));
        }
        for (i, c) in center.coords().iter().enumerate() {
            let r = m + i;
            bounds.push(int_range(&(c - radius), false, &(c + radius), false, &scale[r]));
        }
        if bounds.iter().any(|(lo, hi)| lo > hi) {
            return Ok(None);
        }

        let blocks = block_triangular(&rows)?
            .into_iter()
            .map(|(brows, bcols)| plan_block(&rows, &bounds, brows, bcols))
            .collect();

        Ok(Some(Plan {
            m,
            dim,
            scale,
            bounds,
            window_boxes,
            blocks,
        }))
    }

    fn run<T: Num>(&self, budget: u64) -> std::result::Result<Raw, Stop> {
        let conv = |b: &BigInt| T::from_big(b).ok_or(Stop::Overflow);
        let conv_mat = |m: &IntMatrix| -> std::result::Result<Vec<Vec<T>>, Stop> {
            m.iter().map(|row| row.iter().map(conv).collect()).collect()
        };
        let mut blocks = Vec::with_capacity(self.blocks.len());
        for b in &self.blocks {
            let coupling = b
                .coupling
                .iter()
                .map(|row| row.iter().map(|(c, v)| Ok((*c, conv(v)?))).collect())
                .collect::<std::result::Result<_, Stop>>()?;
            let kind = match &b.kind {
                Kind::Box { n, adj, det } => Kind::Box {
                    n: conv_mat(n)?,
                    adj: conv_mat(adj)?,
                    det: conv(det)?,
                },
                Kind::Triangular { order, l, u } => Kind::Triangular {
                    order: order.clone(),
                    l: conv_mat(l)?,
                    u: conv_mat(u)?,
                },
            };
            blocks.push(Block {
                rows: b.rows.clone(),
                cols: b.cols.clone(),
                coupling,
                kind,
            });
        }
        let bounds = self
            .bounds
            .iter()
            .map(|(lo, hi)| Ok((conv(lo)?, conv(hi)?)))
            .collect::<std::result::Result<Vec<_>, Stop>>()?;
        let window_boxes = self
            .window_boxes
            .iter()
            .map(|b| b.iter().map(|(lo, hi)| Ok((conv(lo)?, conv(hi)?))).collect())
            .collect::<std::result::Result<Vec<Vec<_>>, Stop>>()?;

        let mut search = Search {
            m: self.m,
            blocks: &blocks,
            bounds: &bounds,
            window_boxes: &window_boxes,
            coef: vec![T::zero(); self.dim],
            vals: vec![T::zero(); self.dim],
            visited: 0,
            budget,
            physical: Vec::new(),
            accepted: 0,
        };
        search.block(0)?;
        Ok(Raw {
            physical: search
                .physical
                .iter()
                .map(|p| p.iter().map(T::to_big).collect())
                .collect(),
            accepted: search.accepted,
        })
    }
}

/// Block lower-triangular form: returns `(rows, cols)` per block in the order
/// they must be enumerated.
fn block_triangular(rows: &IntMatrix) -> Result<Vec<(Vec<usize>, Vec<usize>)>> {
    let dim = rows.len();
    // Kuhn's augmenting paths: col_owner[c] = row matched to column c
    let mut col_owner: Vec<Option<usize>> = vec![None; dim];
    fn augment(r: usize, rows: &IntMatrix, seen: &mut [bool], col_owner: &mut [Option<usize>]) -> bool {
        for c in 0..rows.len() {
            if rows[r][c].is_zero() || seen[c] {
                continue;
            }
            seen[c] = true;
            if col_owner[c].map_or(true, |o| augment(o, rows, seen, col_owner)) {
                col_owner[c] = Some(r);
                return true;
            }
        }
        false
    }
    for r in 0..dim {
        let mut seen = vec![false; dim];
        if !augment(r, rows, &mut seen, &mut col_owner) {
            return Err(Error::Singular);
        }
    }
    let owner: Vec<usize> = col_owner.into_iter().map(|o| o.unwrap()).collect();
    let mut matched_col = vec![0; dim];
    for (c, &r) in owner.iter().enumerate() {
        matched_col[r] = c;
    }

    let mut graph = DiGraph::<usize, ()>::new();
    let nodes: Vec<_> = (0..dim).map(|r| graph.add_node(r)).collect();
    for r in 0..dim {
        for c in 0..dim {
            if c != matched_col[r] && !rows[r][c].is_zero() {
                graph.add_edge(nodes[r], nodes[owner[c]], ());
            }
        }
    }
    // postorder: every block comes after the blocks it depends on
    Ok(tarjan_scc(&graph)
        .into_iter()
        .map(|scc| {
            let mut brows: Vec<usize> = scc.into_iter().map(|ix| graph[ix]).collect();
            brows.sort_unstable();
            let bcols = brows.iter().map(|&r| matched_col[r]).collect();
            (brows, bcols)
        })
        .collect())
}

fn to_f64(b: &BigInt) -> f64 {
    b.to_f64().unwrap_or(f64::MAX)
}

fn plan_block(
    rows: &IntMatrix,
    bounds: &[(BigInt, BigInt)],
    brows: Vec<usize>,
    bcols: Vec<usize>,
) -> Block<BigInt> {
    let coupling = brows
        .iter()
        .map(|&r| {
            rows[r]
                .iter()
                .enumerate()
                .filter(|(c, v)| !v.is_zero() && !bcols.contains(c))
                .map(|(c, v)| (c, v.clone()))
                .collect()
        })
        .collect();
    let sub: IntMatrix = brows
        .iter()
        .map(|&r| bcols.iter().map(|&c| rows[r][c].clone()).collect())
        .collect();
    let widths: Vec<f64> = brows
        .iter()
        .map(|&r| to_f64(&(&bounds[r].1 - &bounds[r].0)).max(0.0))
        .collect();
    let s = brows.len();

    let triangular = {
        let mut order: Vec<usize> = Vec::with_capacity(s);
        let mut remaining: Vec<usize> = (0..s).collect();
        while !remaining.is_empty() {
            let mut best: Option<(f64, usize)> = None;
            for (k, &cand) in remaining.iter().enumerate() {
                let trial: IntMatrix = order
                    .iter()
                    .chain(std::iter::once(&cand))
                    .map(|&i| sub[i].clone())
                    .collect();
                let (l, _) = lower_hermite(&trial, s);
                let d = &l[order.len()][order.len()];
                if d.is_zero() {
                    continue;
                }
                let branch = widths[cand] / to_f64(d) + 1.0;
                if best.map_or(true, |(b, _)| branch < b) {
                    best = Some((branch, k));
                }
            }
            let (_, k) = best.expect("block of a nonsingular matrix has full rank");
            order.push(remaining.remove(k));
        }
        let ordered: IntMatrix = order.iter().map(|&i| sub[i].clone()).collect();
        let (l, u) = lower_hermite(&ordered, s);
        let mut cost = 0.0;
        let mut nodes = 1.0;
        for (t, &i) in order.iter().enumerate() {
            nodes *= widths[i] / to_f64(&l[t][t]) + 1.0;
            cost += nodes;
        }
        (cost, Kind::Triangular { order, l, u })
    };

    let kind = if s == 1 {
        triangular.1
    } else {
        let d = det(&sub);
        let adj = adjugate(&sub);
        let dabs = to_f64(&d.abs());
        let box_cost: f64 = adj
            .iter()
            .map(|arow| {
                arow.iter()
                    .zip(&widths)
                    .map(|(a, w)| to_f64(&a.abs()) * w)
                    .sum::<f64>()
                    / dabs
                    + 1.0
            })
            .product();
        if box_cost < triangular.0 {
            Kind::Box { n: sub, adj, det: d }
        } else {
            triangular.1
        }
    };
    Block {
        rows: brows,
        cols: bcols,
        coupling,
        kind,
    }
}

struct Search<'a, T> {
    m: usize,
    blocks: &'a [Block<T>],
    bounds: &'a [(T, T)],
    window_boxes: &'a [Vec<(T, T)>],
    coef: Vec<T>,
    vals: Vec<T>,
    visited: u64,
    budget: u64,
    physical: Vec<Vec<T>>,
    accepted: u64,
}

type Step = std::result::Result<(), Stop>;

fn ov<T>(x: Option<T>) -> std::result::Result<T, Stop> {
    x.ok_or(Stop::Overflow)
}

impl<T: Num> Search<'_, T> {
    fn tick(&mut self) -> Step {
        self.visited += 1;
        if self.visited > self.budget {
            Err(Stop::Budget)
        } else {
            Ok(())
        }
    }

    fn block(&mut self, b: usize) -> Step {
        if b == self.blocks.len() {
            return self.leaf();
        }
        let block = &self.blocks[b];
        let mut offsets = Vec::with_capacity(block.rows.len());
        for coupling in &block.coupling {
            let mut acc = T::zero();
            for (c, a) in coupling {
                acc = ov(acc.add(&ov(a.mul(&self.coef[*c]))?))?;
            }
            offsets.push(acc);
        }
        match &block.kind {
            Kind::Box { n, adj, det } => self.box_block(b, n, adj, det, &offsets),
            Kind::Triangular { order, l, u } => {
                let mut cp = vec![T::zero(); order.len()];
                self.tri_level(b, 0, order, l, u, &offsets, &mut cp)
            }
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn box_block(&mut self, b: usize, n: &[Vec<T>], adj: &[Vec<T>], det: &T, offsets: &[T]) -> Step {
        let block = &self.blocks[b];
        let s = block.rows.len();
        let mut ranges = Vec::with_capacity(s);
        for arow in adj {
            let (mut smin, mut smax) = (T::zero(), T::zero());
            for (i, a) in arow.iter().enumerate() {
                let (lo, hi) = &self.bounds[block.rows[i]];
                let x = ov(a.mul(&ov(lo.sub(&offsets[i]))?))?;
                let y = ov(a.mul(&ov(hi.sub(&offsets[i]))?))?;
                let (small, large) = if x <= y { (x, y) } else { (y, x) };
                smin = ov(smin.add(&small))?;
                smax = ov(smax.add(&large))?;
            }
            let (lo, hi) = if det.is_neg() {
                (smax.div_ceil(det), smin.div_floor(det))
            } else {
                (smin.div_ceil(det), smax.div_floor(det))
            };
            if lo > hi {
                return Ok(());
            }
            ranges.push((lo, hi));
        }
        let mut c: Vec<T> = ranges.iter().map(|(lo, _)| lo.clone()).collect();
        loop {
            self.tick()?;
            let mut ok = true;
            let mut ys = Vec::with_capacity(s);
            for (i, nrow) in n.iter().enumerate() {
                let mut y = offsets[i].clone();
                for (a, x) in nrow.iter().zip(&c) {
                    y = ov(y.add(&ov(a.mul(x))?))?;
                }
                let (lo, hi) = &self.bounds[block.rows[i]];
                if y < *lo || y > *hi {
                    ok = false;
                    break;
                }
                ys.push(y);
            }
            if ok {
                for (i, y) in ys.into_iter().enumerate() {
                    self.vals[block.rows[i]] = y;
                    self.coef[block.cols[i]] = c[i].clone();
                }
                self.block(b + 1)?;
            }
            // odometer over the candidate box
            let mut axis = s;
            loop {
                if axis == 0 {
                    return Ok(());
                }
                axis -= 1;
                if c[axis] < ranges[axis].1 {
                    c[axis] = ov(c[axis].add(&T::one()))?;
                    break;
                }
                c[axis] = ranges[axis].0.clone();
            }
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn tri_level(
        &mut self,
        b: usize,
        t: usize,
        order: &[usize],
        l: &[Vec<T>],
        u: &[Vec<T>],
        offsets: &[T],
        cp: &mut [T],
    ) -> Step {
        let block = &self.blocks[b];
        let s = order.len();
        if t == s {
            for (j, urow) in u.iter().enumerate() {
                let mut acc = T::zero();
                for (a, x) in urow.iter().zip(cp.iter()) {
                    acc = ov(acc.add(&ov(a.mul(x))?))?;
                }
                self.coef[block.cols[j]] = acc;
            }
            return self.block(b + 1);
        }
        let local = order[t];
        let row = block.rows[local];
        let mut partial = offsets[local].clone();
        for j in 0..t {
            partial = ov(partial.add(&ov(l[t][j].mul(&cp[j]))?))?;
        }
        let diag = &l[t][t];
        let (lo, hi) = &self.bounds[row];
        let start = ov(lo.sub(&partial))?.div_ceil(diag);
        let end = ov(hi.sub(&partial))?.div_floor(diag);
        let mut x = start;
        while x <= end {
            self.tick()?;
            self.vals[row] = ov(partial.add(&ov(diag.mul(&x))?))?;
            cp[t] = x.clone();
            self.tri_level(b, t + 1, order, l, u, offsets, cp)?;
            x = ov(x.add(&T::one()))?;
        }
        Ok(())
    }

    fn leaf(&mut self) -> Step {
        if self.m > 0 {
            let vals = &self.vals;
            let inside = self.window_boxes.iter().any(|b| {
                b.iter()
                    .enumerate()
                    .all(|(r, (lo, hi))| vals[r] >= *lo && vals[r] <= *hi)
            });
            if !inside {
                return Ok(());
            }
        }
        self.accepted += 1;
        self.physical.push(self.vals[self.m..].to_vec());
        Ok(())
    }
}
