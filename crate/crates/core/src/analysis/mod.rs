//! Windowed density estimators and almost-periodicity probes.
//!
//! Suprema over all of `R^n` are replaced by suprema over the centres `x`
//! for which `B(x, R)` lies in the region where the patch is known to be
//! complete. In dimension one and two these suprema are exact; from
//! dimension three on centres are sampled on a grid and results carry
//! `exact = false`.

mod sweep;

use std::collections::HashMap;

use num::traits::{Signed, Zero};

use crate::cutproject::DEFAULT_BUDGET;
use crate::discretize::RngState;
use crate::error::{Error, Result};
use crate::numeric::{ball_volume, fmt_rational, int, RVector, Rational};
use crate::pointset::{Domain, PointSet};

use sweep::{extremes, Extremes, Scale};

fn require_complete(sets: &[&PointSet]) -> Result<()> {
    sets.iter().try_for_each(|s| s.require_complete())
}

fn count_density(count: u64, r: &Rational, dim: usize) -> Result<Rational> {
    Ok(Rational::from_integer(count.into()) / ball_volume(r, dim)?)
}

/// Step of the centre grid used from dimension three on: a quarter of the
/// minimal spacing, or `r/2` for sparse sets.
fn grid_step(set: &PointSet, r: &Rational) -> Rational {
    if set.len() >= 2 {
        set.min_pairwise_distance() / int(4)
    } else {
        r / int(2)
    }
}

/// Extremes of `Card(set ∩ B(x, r))` over the closed box `region`.
fn windowed(set: &PointSet, r: &Rational, region: &[(Rational, Rational)]) -> Result<(Extremes, Scale)> {
    let step = grid_step(set, r);
    let scale = Scale::new(
        set.iter()
            .flat_map(|p| p.coords())
            .chain(region.iter().flat_map(|(a, b)| [a, b]))
            .chain([r, &step]),
    );
    let pts: Vec<Vec<i128>> = set.iter().map(|p| scale.vec(p)).collect::<Result<_>>()?;
    let region_i: Vec<(i128, i128)> = region
        .iter()
        .map(|(a, b)| Ok((scale.int(a)?, scale.int(b)?)))
        .collect::<Result<_>>()?;
    let e = extremes(&pts, scale.int(r)?, &region_i, scale.int(&step)?, DEFAULT_BUDGET)?;
    Ok((e, scale))
}

fn region_or_err(domain: &Domain, r: &Rational) -> Result<Vec<(Rational, Rational)>> {
    if *r >= domain.radius {
        return Err(Error::domain_needing(
            format!(
                "window radius {} does not fit in the domain of radius {}",
                fmt_rational(r),
                fmt_rational(&domain.radius)
            ),
            r.clone(),
        ));
    }
    Ok(domain.center_region(r).expect("radius checked"))
}

/// `Card((S Δ T) ∩ B(x, r)) / (2r)^n`.
pub fn density_r(s: &PointSet, t: &PointSet, x: &RVector, r: &Rational) -> Result<Rational> {
    Error::check_dim(s.dim(), t.dim())?;
    require_complete(&[s, t])?;
    let a = s.restrict(x, r)?;
    let b = t.restrict(x, r)?;
    count_density(a.sym_diff(&b)?.len() as u64, r, s.dim())
}

/// Windowed `sup_x D_r` together with a maximizing centre.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DensitySup {
    pub value: Rational,
    pub argmax: RVector,
    /// `false` when the supremum is a grid lower bound.
    pub exact: bool,
}

/// `sup_x Card((S Δ T) ∩ B(x, r)) / (2r)^n` over centres whose ball fits in
/// the largest ball common to both domains.
pub fn density_r_plus(s: &PointSet, t: &PointSet, r: &Rational) -> Result<DensitySup> {
    Error::check_dim(s.dim(), t.dim())?;
    require_complete(&[s, t])?;
    let diff = s.sym_diff(t)?;
    let region = region_or_err(diff.domain(), r)?;
    let (e, scale) = windowed(&diff, r, &region)?;
    Ok(DensitySup {
        value: count_density(e.max, r, s.dim())?,
        argmax: scale.back_vec(&e.argmax),
        exact: e.exact,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DensitySample {
    pub radius: Rational,
    pub d_min: Rational,
    pub d_max: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// Every density in the last bracket is within `eps_achieved` of
    /// `density`.
    Converged {
        density: Rational,
        eps_achieved: Rational,
    },
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DensityProfile {
    pub epsilon: Rational,
    pub samples: Vec<DensitySample>,
    pub verdict: Verdict,
    /// First radius from which every bracket has width at most `2 ε`.
    pub r_eps: Option<Rational>,
    pub exact: bool,
}

/// Minimal and maximal `Card(S ∩ B(x, R)) / (2R)^n` over admissible centres
/// for each `R` of an increasing list.
pub fn uniform_density(s: &PointSet, radii: &[Rational], eps: &Rational) -> Result<DensityProfile> {
    require_complete(&[s])?;
    if !eps.is_positive() {
        return Err(Error::InvalidArgument("epsilon must be positive".into()));
    }
    if radii.is_empty() {
        return Err(Error::InvalidArgument("need at least one radius".into()));
    }
    if !radii[0].is_positive() || radii.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument(
            "radii must be positive and strictly increasing".into(),
        ));
    }
    region_or_err(s.domain(), radii.last().expect("non-empty"))?;
    let mut samples = Vec::with_capacity(radii.len());
    let mut exact = true;
    for r in radii {
        let region = region_or_err(s.domain(), r)?;
        let (e, _) = windowed(s, r, &region)?;
        exact &= e.exact;
        samples.push(DensitySample {
            radius: r.clone(),
            d_min: count_density(e.min, r, s.dim())?,
            d_max: count_density(e.max, r, s.dim())?,
        });
    }
    let tol = eps * int(2);
    let tight = |x: &DensitySample| &x.d_max - &x.d_min <= tol;
    let tail = samples.iter().rev().take_while(|x| tight(x)).count();
    let (verdict, r_eps) = if tail == 0 {
        (Verdict::Inconclusive, None)
    } else {
        let last = samples.last().unwrap();
        let first = &samples[samples.len() - tail];
        (
            Verdict::Converged {
                density: (&last.d_min + &last.d_max) / int(2),
                eps_achieved: (&last.d_max - &last.d_min) / int(2),
            },
            Some(first.radius.clone()),
        )
    };
    Ok(DensityProfile {
        epsilon: eps.clone(),
        samples,
        verdict,
        r_eps,
        exact,
    })
}

/// Radii `r_eps, 2 r_eps, 4 r_eps, …` below `r_top`, followed by `r_top`.
/// Empty when `r_top < r_eps`.
pub fn translation_ladder(r_eps: &Rational, r_top: &Rational) -> Vec<Rational> {
    let mut out = Vec::new();
    if r_top < r_eps || !r_eps.is_positive() {
        return out;
    }
    let mut r = r_eps.clone();
    while r < *r_top {
        out.push(r.clone());
        r *= int(2);
    }
    out.push(r_top.clone());
    out
}

/// Outcome of testing one candidate translation on its ladder.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TranslationCheck {
    pub v: RVector,
    /// `(R, D_R⁺((S + v) Δ S))` for each rung tested; stops at the first
    /// failure.
    pub samples: Vec<(Rational, Rational)>,
    pub accepted: bool,
    pub exact: bool,
}

/// A patch rescaled to integers, for repeated translation tests.
struct Prepared {
    dim: usize,
    scale: Scale,
    pts: Vec<Vec<i128>>,
    center: Vec<i128>,
    radius: i128,
    step: i128,
}

impl Prepared {
    fn new(s: &PointSet, extra: &[Rational]) -> Result<Self> {
        let step = grid_step(s, &s.domain().radius);
        let d = s.domain();
        let scale = Scale::new(
            s.iter()
                .flat_map(|p| p.coords())
                .chain(d.center.coords())
                .chain([&d.radius, &step])
                .chain(extra.iter()),
        );
        Ok(Prepared {
            dim: s.dim(),
            pts: s.iter().map(|p| scale.vec(p)).collect::<Result<_>>()?,
            center: scale.vec(&d.center)?,
            radius: scale.int(&d.radius)?,
            step: scale.int(&step)?,
            scale,
        })
    }

    /// `(S + v) Δ S` restricted to the largest common ball, with that ball.
    fn shifted_diff(&self, v: &[i128]) -> (Vec<Vec<i128>>, Vec<i128>, i128) {
        let norm = v.iter().map(|x| x.abs()).max().unwrap_or(0);
        // all scaled values are even, so halving is exact
        let center: Vec<i128> = self.center.iter().zip(v).map(|(c, x)| c + x / 2).collect();
        let radius = self.radius - norm / 2;
        let inside = |p: &[i128]| p.iter().zip(&center).all(|(a, c)| (a - c).abs() < radius);
        let shifted = |p: &Vec<i128>| -> Vec<i128> { p.iter().zip(v).map(|(a, b)| a + b).collect() };
        let (a, b) = (&self.pts, &self.pts);
        let mut out = Vec::new();
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            let x = a.get(i).map(shifted);
            let y = b.get(j);
            let take = match (x, y) {
                (Some(x), Some(y)) => match x.cmp(y) {
                    std::cmp::Ordering::Less => {
                        i += 1;
                        Some(x)
                    }
                    std::cmp::Ordering::Greater => {
                        j += 1;
                        Some(y.clone())
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
                    Some(y.clone())
                }
                (None, None) => unreachable!(),
            };
            if let Some(p) = take {
                if inside(&p) {
                    out.push(p);
                }
            }
        }
        (out, center, radius)
    }

    fn check(&self, v: &RVector, eps: &Rational, r_eps: &Rational) -> Result<TranslationCheck> {
        let r_top = &self.scale.back(self.radius) - v.norm_inf() - r_eps;
        let ladder = translation_ladder(r_eps, &r_top);
        if ladder.is_empty() {
            return Err(Error::domain_needing(
                format!("no room to test translation {v}"),
                v.norm_inf() + r_eps * int(2),
            ));
        }
        let vi = self.scale.vec(v)?;
        let (diff, center, radius) = self.shifted_diff(&vi);
        let mut samples = Vec::with_capacity(ladder.len());
        let mut exact = true;
        for r in ladder {
            let density = if diff.is_empty() {
                Rational::zero()
            } else {
                let ri = self.scale.int(&r)?;
                let region: Vec<(i128, i128)> = center
                    .iter()
                    .map(|c| (c - (radius - ri), c + (radius - ri)))
                    .collect();
                let e = extremes(&diff, ri, &region, self.step, DEFAULT_BUDGET)?;
                exact &= e.exact;
                count_density(e.max, &r, self.dim)?
            };
            let ok = density < *eps;
            samples.push((r, density));
            if !ok {
                return Ok(TranslationCheck {
                    v: v.clone(),
                    samples,
                    accepted: false,
                    exact,
                });
            }
        }
        Ok(TranslationCheck {
            v: v.clone(),
            samples,
            accepted: true,
            exact,
        })
    }
}

/// Tests whether `D_R⁺((S + v) Δ S) < eps` for every `R` of the ladder from
/// `r_eps` to `ρ - ‖v‖ - r_eps`, where `ρ` is the domain radius of `S`.
pub fn check_translation(
    s: &PointSet,
    v: &RVector,
    eps: &Rational,
    r_eps: &Rational,
) -> Result<TranslationCheck> {
    require_complete(&[s])?;
    Error::check_dim(s.dim(), v.dim())?;
    if !eps.is_positive() || !r_eps.is_positive() {
        return Err(Error::InvalidArgument(
            "epsilon and R_eps must be positive".into(),
        ));
    }
    Prepared::new(s, &[v.coords(), std::slice::from_ref(r_eps)].concat())?.check(v, eps, r_eps)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TranslationReport {
    pub epsilon: Rational,
    pub r_eps: Rational,
    /// Candidates satisfy `‖v‖ < r_max`.
    pub r_max: Rational,
    /// The patch domain the ladders were cut from.
    pub domain: Domain,
    pub candidates: usize,
    pub translations: PointSet,
    /// Largest distance between consecutive accepted vectors on an
    /// axis-parallel line.
    pub largest_gap: Rational,
    /// Lowest windowed density of `S` at `r_eps`. Any `v ∉ S - S` has
    /// `D⁺((S + v) Δ S)` at least this large, so for smaller `eps` the
    /// difference-vector candidates are exhaustive.
    pub exhaustive_below: Rational,
}

/// Accepted ε-translations among the difference vectors of `S` shorter
/// than `v_max`.
pub fn epsilon_translations(
    s: &PointSet,
    eps: &Rational,
    r_eps: &Rational,
    v_max: &Rational,
) -> Result<TranslationReport> {
    require_complete(&[s])?;
    if !eps.is_positive() || !r_eps.is_positive() || !v_max.is_positive() {
        return Err(Error::InvalidArgument(
            "epsilon, R_eps and the translation bound must be positive".into(),
        ));
    }
    let domain = s.domain().clone();
    let needed = v_max + r_eps * int(2);
    if domain.radius < needed {
        return Err(Error::domain_needing(
            format!(
                "translations up to {} with R_eps = {} do not fit",
                fmt_rational(v_max),
                fmt_rational(r_eps)
            ),
            needed,
        ));
    }
    let prep = Prepared::new(s, &[r_eps.clone(), v_max.clone()])?;
    let vmax_i = prep.scale.int(v_max)?;

    let mut diffs: Vec<Vec<i128>> = Vec::new();
    for (i, a) in prep.pts.iter().enumerate() {
        // points are sorted on the first axis, so the inner scan can stop early
        for b in &prep.pts[i..] {
            if b[0] - a[0] >= vmax_i {
                break;
            }
            let d: Vec<i128> = b.iter().zip(a).map(|(x, y)| x - y).collect();
            if d.iter().all(|x| x.abs() < vmax_i) {
                diffs.push(d.iter().map(|x| -x).collect());
                diffs.push(d);
            }
        }
    }
    diffs.sort_unstable();
    diffs.dedup();
    if diffs.is_empty() {
        return Err(Error::InvalidArgument("no candidate translations".into()));
    }

    let mut accepted = Vec::new();
    for d in &diffs {
        let v = prep.scale.back_vec(d);
        if prep.check(&v, eps, r_eps)?.accepted {
            accepted.push(v);
        }
    }
    let translations = PointSet::new(
        s.dim(),
        accepted,
        Domain::new(RVector::zeros(s.dim()), v_max.clone()),
    )?;

    let region = region_or_err(&domain, r_eps)?;
    let (e, _) = windowed(s, r_eps, &region)?;
    Ok(TranslationReport {
        epsilon: eps.clone(),
        r_eps: r_eps.clone(),
        r_max: v_max.clone(),
        domain,
        candidates: diffs.len(),
        largest_gap: largest_gap(&translations),
        translations,
        exhaustive_below: count_density(e.min, r_eps, s.dim())?,
    })
}

/// Largest gap between consecutive points lying on a common axis-parallel
/// line.
pub fn largest_gap(set: &PointSet) -> Rational {
    let mut best = Rational::zero();
    for axis in 0..set.dim() {
        let mut lines: HashMap<Vec<Rational>, Vec<Rational>> = HashMap::new();
        for p in set.iter() {
            let key: Vec<Rational> = p
                .coords()
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != axis)
                .map(|(_, c)| c.clone())
                .collect();
            lines.entry(key).or_default().push(p.coords()[axis].clone());
        }
        for vals in lines.values_mut() {
            vals.sort();
            for w in vals.windows(2) {
                let g = &w[1] - &w[0];
                if g > best {
                    best = g;
                }
            }
        }
    }
    best
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subadditivity {
    /// `D_R⁺((S + Σ v_i) Δ S)` over the shrunken centre region.
    pub lhs: Rational,
    /// `Σ D_R⁺((S + v_i) Δ S)`, each over its own full region.
    pub rhs: Rational,
    pub terms: Vec<Rational>,
    pub holds: bool,
    pub exact: bool,
}

fn intersect_regions(a: &mut [(Rational, Rational)], b: &[(Rational, Rational)]) {
    for (x, y) in a.iter_mut().zip(b) {
        if y.0 > x.0 {
            x.0 = y.0.clone();
        }
        if y.1 < x.1 {
            x.1 = y.1.clone();
        }
    }
}

/// Compares `D_R⁺((S + Σ v_i) Δ S)` with `Σ D_R⁺((S + v_i) Δ S)`.
///
/// With partial sums `s_i`, `(S + Σ v) Δ S` is covered by the translates
/// `((S + v_i) Δ S) + s_{i-1}`. The left side is therefore taken over the
/// centres `x` for which every `x - s_{i-1}` is admissible for the `i`-th
/// term, which keeps both sides sound on the same windows.
pub fn subadditivity_check(s: &PointSet, v_list: &[RVector], r: &Rational) -> Result<Subadditivity> {
    require_complete(&[s])?;
    if v_list.is_empty() {
        return Err(Error::InvalidArgument("need at least one translation".into()));
    }
    let n = s.dim();
    let mut partial = RVector::zeros(n);
    let mut terms = Vec::with_capacity(v_list.len());
    let mut exact = true;
    let mut region: Option<Vec<(Rational, Rational)>> = None;
    for v in v_list {
        Error::check_dim(n, v.dim())?;
        let diff = s.translate(v)?.sym_diff(s)?;
        let full = region_or_err(diff.domain(), r)?;
        let (e, _) = windowed(&diff, r, &full)?;
        exact &= e.exact;
        terms.push(count_density(e.max, r, n)?);
        let moved: Vec<(Rational, Rational)> = full
            .iter()
            .zip(partial.coords())
            .map(|((a, b), c)| (a + c, b + c))
            .collect();
        match region.as_mut() {
            Some(reg) => intersect_regions(reg, &moved),
            None => region = Some(moved),
        }
        partial = &partial + v;
    }
    let total = s.translate(&partial)?.sym_diff(s)?;
    let mut region = region.expect("nonempty list");
    intersect_regions(&mut region, &region_or_err(total.domain(), r)?);
    if region.iter().any(|(a, b)| a > b) {
        return Err(Error::domain(
            "translations too long for a common window region at this radius",
        ));
    }
    let (e, _) = windowed(&total, r, &region)?;
    exact &= e.exact;
    let lhs = count_density(e.max, r, n)?;
    let rhs = terms.iter().fold(Rational::zero(), |acc, t| acc + t);
    Ok(Subadditivity {
        holds: lhs <= rhs,
        lhs,
        rhs,
        terms,
        exact,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeakApPair {
    pub x: RVector,
    pub y: RVector,
    /// Best matching translation found for this pair.
    pub v: RVector,
    pub value: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeakApReport {
    pub epsilon: Rational,
    pub radius: Rational,
    pub worst: Rational,
    pub pairs: Vec<WeakApPair>,
    pub passes: bool,
}

/// For random pairs of centres `x, y` taken among the points of `S` whose
/// `R`-ball fits in the domain, minimizes
/// `Card((B(x,R) ∩ S) Δ ((B(y,R) ∩ S) - v)) / (2R)^n` over
/// `v ∈ (S ∩ B(y,R)) - (S ∩ B(x,R))` with `‖v - (y - x)‖ ≤ 2R`, and reports
/// the worst pair.
pub fn weak_ap_probe(
    s: &PointSet,
    eps: &Rational,
    r: &Rational,
    pair_count: usize,
    rng: &mut RngState,
) -> Result<WeakApReport> {
    require_complete(&[s])?;
    if !r.is_positive() || eps.is_negative() {
        return Err(Error::InvalidArgument(
            "radius must be positive and epsilon non-negative".into(),
        ));
    }
    let twice = r * int(2);
    if twice >= s.domain().radius {
        return Err(Error::domain_needing(
            format!("weak almost-periodicity probe at radius {}", fmt_rational(r)),
            twice,
        ));
    }
    let centres: Vec<&RVector> = s.iter().filter(|p| s.domain().contains_ball(p, r)).collect();
    if centres.is_empty() || pair_count == 0 {
        return Err(Error::InvalidArgument("no valid centre pairs".into()));
    }
    let scale = Scale::new(s.iter().flat_map(|p| p.coords()).chain([r]));
    let pts: Vec<Vec<i128>> = s.iter().map(|p| scale.vec(p)).collect::<Result<_>>()?;
    let ri = scale.int(r)?;
    let ball = |c: &[i128]| -> Vec<Vec<i128>> {
        pts.iter()
            .filter(|p| p.iter().zip(c).all(|(a, b)| (a - b).abs() < ri))
            .cloned()
            .collect()
    };
    let last = centres.len() as i64 - 1;
    let mut pairs = Vec::with_capacity(pair_count);
    let mut worst = Rational::zero();
    for _ in 0..pair_count {
        let x = centres[rng.next_range(0, last) as usize];
        let y = centres[rng.next_range(0, last) as usize];
        let (xi, yi) = (scale.vec(x)?, scale.vec(y)?);
        let shift: Vec<i128> = yi.iter().zip(&xi).map(|(a, b)| a - b).collect();
        let a = ball(&xi);
        let b = ball(&yi);
        let mut matches: HashMap<Vec<i128>, u64> = HashMap::new();
        for q in &b {
            for p in &a {
                let v: Vec<i128> = q.iter().zip(p).map(|(s, t)| s - t).collect();
                if v.iter().zip(&shift).all(|(s, t)| (s - t).abs() <= 2 * ri) {
                    *matches.entry(v).or_default() += 1;
                }
            }
        }
        let (v, m) = matches
            .into_iter()
            .max_by(|(v1, m1), (v2, m2)| m1.cmp(m2).then_with(|| v2.cmp(v1)))
            .unwrap_or((shift, 0));
        let value = count_density(a.len() as u64 + b.len() as u64 - 2 * m, r, s.dim())?;
        if value > worst {
            worst = value.clone();
        }
        pairs.push(WeakApPair {
            x: x.clone(),
            y: y.clone(),
            v: scale.back_vec(&v),
            value,
        });
    }
    Ok(WeakApReport {
        epsilon: eps.clone(),
        radius: r.clone(),
        passes: worst <= *eps,
        worst,
        pairs,
    })
}
