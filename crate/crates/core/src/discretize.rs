//! Discretizations `Â : x ↦ π(A x)` of linear maps acting on integer point
//! sets, chains of them, and seeded random chain samplers.

use num::bigint::BigInt;
use num::traits::{One, Signed, ToPrimitive, Zero};
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;

use crate::cutproject::{enumerate_model_set_with, iterated_scheme, EnumerationConfig};
use crate::error::{Error, Result};
use crate::numeric::{int, invert_matrix, rat, round_vector, RMatrix, RVector, Rational};
use crate::pointset::{odometer_step, Domain, PointSet};

/// Invertible square matrices `A_1, …, A_k` of a common size, `A_1` applied
/// first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MapChain {
    dim: usize,
    matrices: Vec<RMatrix>,
}

impl MapChain {
    pub fn new(matrices: Vec<RMatrix>) -> Result<Self> {
        let Some(first) = matrices.first() else {
            return Err(Error::InvalidArgument("a chain needs at least one matrix".into()));
        };
        let dim = first.rows();
        for a in &matrices {
            if !a.is_square() {
                return Err(Error::NotSquare {
                    rows: a.rows(),
                    cols: a.cols(),
                });
            }
            Error::check_dim(dim, a.rows())?;
            if a.determinant()?.is_zero() {
                return Err(Error::Singular);
            }
        }
        Ok(MapChain { dim, matrices })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.matrices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.matrices.is_empty()
    }

    pub fn matrices(&self) -> &[RMatrix] {
        &self.matrices
    }

    /// The first `k` maps.
    pub fn prefix(&self, k: usize) -> Result<MapChain> {
        MapChain::new(self.matrices[..k.min(self.len())].to_vec())
    }
}

/// Seeded ChaCha20 stream. `counter` is the number of 64-bit words drawn so
/// far, so `(seed, counter)` pins the position in the stream.
#[derive(Clone, Debug)]
pub struct RngState {
    seed: u64,
    counter: u64,
    rng: ChaCha20Rng,
}

impl RngState {
    pub fn new(seed: u64) -> Self {
        RngState {
            seed,
            counter: 0,
            rng: ChaCha20Rng::seed_from_u64(seed),
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn counter(&self) -> u64 {
        self.counter
    }

    pub fn next_u64(&mut self) -> u64 {
        self.counter += 1;
        self.rng.next_u64()
    }

    /// Uniform in `[0, 1)` with 53 random bits.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in `lo..=hi`.
    pub fn next_range(&mut self, lo: i64, hi: i64) -> i64 {
        assert!(lo <= hi);
        let span = (hi - lo) as u64 + 1;
        // rejection sampling keeps the draw unbiased
        let zone = u64::MAX - u64::MAX % span;
        loop {
            let x = self.next_u64();
            if x < zone {
                return lo + (x % span) as i64;
            }
        }
    }
}

/// Integer rows of a rational matrix: `(A x)_i = (Σ_j num[i][j] x_j) / den[i]`.
struct IntMap {
    num: Vec<Vec<i128>>,
    den: Vec<i128>,
}

impl IntMap {
    /// `None` when the integer form does not fit comfortably in `i128`.
    fn new(a: &RMatrix) -> Option<Self> {
        let mut num = Vec::with_capacity(a.rows());
        let mut den = Vec::with_capacity(a.rows());
        for i in 0..a.rows() {
            let d = crate::cutproject::lattice::row_denominator(a.row(i));
            let row = crate::cutproject::lattice::scale_row(a.row(i), &d);
            let row: Option<Vec<i128>> = row.iter().map(|v| v.to_i64().map(i128::from)).collect();
            num.push(row?);
            den.push(i128::from(d.to_i64()?));
        }
        Some(IntMap { num, den })
    }

    /// `π(A x)`; `None` on overflow.
    fn apply(&self, x: &[i64], out: &mut Vec<i64>) -> Option<()> {
        out.clear();
        for (row, &d) in self.num.iter().zip(&self.den) {
            let mut s: i128 = 0;
            for (a, &xj) in row.iter().zip(x) {
                s = s.checked_add(a.checked_mul(i128::from(xj))?)?;
            }
            // ceil((2s - d) / 2d)
            let top = s.checked_mul(2)?.checked_sub(d)?;
            let q = top.div_euclid(2 * d);
            let k = if top.rem_euclid(2 * d) == 0 { q } else { q + 1 };
            out.push(i64::try_from(k).ok()?);
        }
        Some(())
    }
}

fn exact_image(a: &RMatrix, x: &[i64]) -> Result<Vec<i64>> {
    let y = round_vector(&a.mul_vec(&RVector::from_ints(x))?);
    y.coords()
        .iter()
        .map(|c| {
            c.to_integer()
                .to_i64()
                .ok_or_else(|| Error::InvalidArgument("image coordinate out of range".into()))
        })
        .collect()
}

fn to_ints(p: &RVector) -> Result<Vec<i64>> {
    if !p.is_integral() {
        return Err(Error::InvalidArgument(format!(
            "point {p} is not an integer point"
        )));
    }
    p.coords()
        .iter()
        .map(|c| {
            c.to_integer()
                .to_i64()
                .ok_or_else(|| Error::InvalidArgument(format!("coordinate of {p} out of range")))
        })
        .collect()
}

/// Pushes integer points through `Â`, choosing the `i128` path when
/// possible.
fn push_forward(
    a: &RMatrix,
    points: &[Vec<i64>],
    mut keep: impl FnMut(&[i64]) -> bool,
) -> Result<Vec<Vec<i64>>> {
    let fast = IntMap::new(a);
    let mut out = Vec::with_capacity(points.len());
    let mut buf = Vec::with_capacity(a.rows());
    for x in points {
        let ok = fast.as_ref().and_then(|m| m.apply(x, &mut buf)).is_some();
        if !ok {
            buf = exact_image(a, x)?;
        }
        if keep(&buf) {
            out.push(buf.clone());
        }
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

fn ceil_int(x: &Rational) -> BigInt {
    x.ceil().to_integer()
}

/// `{ π(A x) : x ∈ S }` for an integer point set `S`.
///
/// The result carries the domain `B(π(A c), ⌈‖A‖ R⌉ + 1)` marked incomplete:
/// points of `Z^n` outside `S`'s domain can round into it.
pub fn apply_hat(a: &RMatrix, set: &PointSet) -> Result<PointSet> {
    if !a.is_square() {
        return Err(Error::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    Error::check_dim(set.dim(), a.rows())?;
    let input: Vec<Vec<i64>> = set.iter().map(to_ints).collect::<Result<_>>()?;
    let image = push_forward(a, &input, |_| true)?;
    let domain = set.domain();
    let center = round_vector(&a.mul_vec(&domain.center)?);
    let radius = int(1) + crate::numeric::from_bigint(ceil_int(&(a.norm_inf() * &domain.radius)));
    let points = image.iter().map(|p| RVector::from_ints(p)).collect();
    let mut out = PointSet::new(set.dim(), points, Domain::new(center, radius))?;
    out.set_complete(false);
    Ok(out)
}

/// Radii `R_0, …, R_k = r_out` such that every `x ∈ Z^n` whose image under
/// `Â_j ∘ ⋯ ∘ Â_1` lands in `B(0, r_out)` has its `i`-th iterate in
/// `B(0, R_i)`.
pub fn chain_radii(chain: &MapChain, r_out: &Rational) -> Result<Vec<Rational>> {
    let slack = rat(chain.dim() as i64, 2);
    let mut radii = vec![r_out.clone()];
    for a in chain.matrices().iter().rev() {
        let inv = invert_matrix(a)?;
        let next = inv.norm_inf() * (radii.last().unwrap() + &slack);
        radii.push(next);
    }
    radii.reverse();
    Ok(radii)
}

/// `(Â_k ∘ ⋯ ∘ Â_1)(Z^n) ∩ B(0, r_out)`, complete on `B(0, r_out)`.
pub fn apply_chain(chain: &MapChain, r_out: &Rational) -> Result<PointSet> {
    apply_chain_with(chain, r_out, &EnumerationConfig::default())
}

pub fn apply_chain_with(chain: &MapChain, r_out: &Rational, config: &EnumerationConfig) -> Result<PointSet> {
    if !r_out.is_positive() {
        return Err(Error::InvalidArgument("output radius must be positive".into()));
    }
    let n = chain.dim();
    let radii = chain_radii(chain, r_out)?;
    // integer bounds strictly inside each B(0, R_i)
    let bounds: Vec<i64> = radii
        .iter()
        .map(|r| {
            (ceil_int(r) - BigInt::one()).to_i64().ok_or(Error::Budget {
                budget: config.budget,
            })
        })
        .collect::<Result<_>>()?;

    let side = 2 * u128::try_from(bounds[0].max(0)).unwrap_or(0) + 1;
    let count = side.checked_pow(n as u32).unwrap_or(u128::MAX);
    if count > u128::from(config.budget) {
        return Err(Error::Budget {
            budget: config.budget,
        });
    }

    let b0 = bounds[0];
    let mut current = Vec::with_capacity(count as usize);
    if b0 >= 0 {
        let mut idx = vec![-b0; n];
        loop {
            current.push(idx.clone());
            if !odometer_step(&mut idx, -b0, b0) {
                break;
            }
        }
    }
    for (a, &b) in chain.matrices().iter().zip(&bounds[1..]) {
        current = push_forward(a, &current, |y| y.iter().all(|c| c.abs() <= b))?;
    }

    let domain = Domain::new(RVector::zeros(n), r_out.clone());
    let points: Vec<RVector> = current
        .iter()
        .map(|p| RVector::from_ints(p))
        .filter(|p| domain.contains_point(p))
        .collect();
    PointSet::new(n, points, domain)
}

/// The same set as [`apply_chain`], obtained by enumerating the iterated
/// model-set scheme of the chain.
pub fn chain_model_set(chain: &MapChain, r_out: &Rational, config: &EnumerationConfig) -> Result<PointSet> {
    let scheme = iterated_scheme(chain.matrices())?;
    Ok(enumerate_model_set_with(&scheme, &RVector::zeros(chain.dim()), r_out, config)?.patch)
}

const RATIONALIZE_BITS: u32 = 32;

/// Nearest rational with denominator `2^32` (reduced).
pub fn rationalize(x: f64) -> Result<Rational> {
    if !x.is_finite() {
        return Err(Error::InvalidArgument(
            "cannot rationalize a non-finite value".into(),
        ));
    }
    let scaled = libm::round(x * (1u64 << RATIONALIZE_BITS) as f64);
    let numer = BigInt::from(scaled as i128);
    Ok(Rational::new(numer, BigInt::one() << RATIONALIZE_BITS))
}

/// `R_θ · Diag(e^t, e^{-t}) · R_θ'`, rationalized entrywise.
#[allow(clippy::needless_range_loop)]
pub fn sl2_from_angles(theta: f64, t: f64, theta2: f64) -> Result<RMatrix> {
    let rot = |a: f64| [[libm::cos(a), -libm::sin(a)], [libm::sin(a), libm::cos(a)]];
    let r1 = rot(theta);
    let r2 = rot(theta2);
    let d = [libm::exp(t), libm::exp(-t)];
    let mut rows = Vec::with_capacity(2);
    for i in 0..2 {
        let mut row = Vec::with_capacity(2);
        for j in 0..2 {
            let v: f64 = (0..2).map(|l| r1[i][l] * d[l] * r2[l][j]).sum();
            row.push(rationalize(v)?);
        }
        rows.push(row);
    }
    RMatrix::from_rows(rows)
}

/// `k` matrices `R_θ D_t R_θ'` with `θ, θ' ~ U[0, 2π)` and `t ~ U[-1/2, 1/2]`.
pub fn sample_sl2_chain(rng: &mut RngState, k: usize) -> Result<MapChain> {
    if k == 0 {
        return Err(Error::InvalidArgument("chain length must be positive".into()));
    }
    let tau = 2.0 * std::f64::consts::PI;
    let mut mats = Vec::with_capacity(k);
    for _ in 0..k {
        let theta = tau * rng.next_f64();
        let t = rng.next_f64() - 0.5;
        let theta2 = tau * rng.next_f64();
        mats.push(sl2_from_angles(theta, t, theta2)?);
    }
    MapChain::new(mats)
}

/// Largest `‖A^{-1}‖∞` accepted by [`sample_rational_chain`].
pub const MAX_INVERSE_NORM: i64 = 3;

/// `k` random `n × n` matrices whose entries are `p/q` with `1 ≤ q ≤ denom`
/// and `|p/q| ≤ 2`, redrawn until `‖A^{-1}‖∞ ≤ 3`.
pub fn sample_rational_chain(rng: &mut RngState, k: usize, n: usize, denom: u32) -> Result<MapChain> {
    if k == 0 || n == 0 || denom == 0 {
        return Err(Error::InvalidArgument(
            "chain length, dimension and denominator bound must be positive".into(),
        ));
    }
    let limit = int(MAX_INVERSE_NORM);
    let mut mats = Vec::with_capacity(k);
    while mats.len() < k {
        let mut rows = Vec::with_capacity(n);
        for _ in 0..n {
            let row = (0..n)
                .map(|_| {
                    let q = rng.next_range(1, i64::from(denom));
                    let p = rng.next_range(-2 * q, 2 * q);
                    rat(p, q)
                })
                .collect();
            rows.push(row);
        }
        let a = RMatrix::from_rows(rows)?;
        if a.determinant()?.is_zero() {
            continue;
        }
        if invert_matrix(&a)?.norm_inf() <= limit {
            mats.push(a);
        }
    }
    MapChain::new(mats)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::round_scalar;

    fn set2(points: &[[i64; 2]], radius: i64) -> PointSet {
        PointSet::new(
            2,
            points.iter().map(|p| RVector::from_ints(p)).collect(),
            Domain::new(RVector::zeros(2), int(radius)),
        )
        .unwrap()
    }

    #[test]
    fn identity_is_fixed() {
        let s = PointSet::integer_grid(2, &rat(7, 2)).unwrap();
        let img = apply_hat(&RMatrix::identity(2), &s).unwrap();
        assert_eq!(img.points(), s.points());
        assert!(!img.is_complete());
    }

    #[test]
    fn tie_rounds_down() {
        let a = RMatrix::from_fracs(&[&[(1, 2), (0, 1)], &[(0, 1), (1, 1)]]).unwrap();
        let img = apply_hat(&a, &set2(&[[1, 0], [2, 0]], 3)).unwrap();
        let expected = vec![RVector::from_ints(&[0, 0]), RVector::from_ints(&[1, 0])];
        assert_eq!(img.points(), expected.as_slice());
    }

    #[test]
    fn integer_matrix_acts_exactly() {
        let a = RMatrix::from_ints(&[&[2, 0], &[0, 3]]).unwrap();
        let img = apply_hat(&a, &PointSet::integer_grid(2, &rat(3, 2)).unwrap()).unwrap();
        assert_eq!(img.len(), 9);
        for p in img.iter() {
            let c = p.coords();
            assert!([-2, 0, 2].contains(&c[0].to_integer().to_i64().unwrap()));
            assert!([-3, 0, 3].contains(&c[1].to_integer().to_i64().unwrap()));
        }
    }

    #[test]
    fn non_integer_input_rejected() {
        let s = PointSet::new(
            1,
            vec![RVector::new(vec![rat(1, 2)])],
            Domain::new(RVector::zeros(1), int(1)),
        )
        .unwrap();
        let err = apply_hat(&RMatrix::identity(1), &s).unwrap_err();
        assert!(matches!(err, Error::InvalidArgument(_)));
    }

    #[test]
    fn fast_path_agrees_with_exact_rounding() {
        let a = RMatrix::from_fracs(&[&[(3, 7), (-5, 2)], &[(1, 2), (1, 2)]]).unwrap();
        let m = IntMap::new(&a).unwrap();
        let mut buf = Vec::new();
        for x in -20..=20 {
            for y in -20..=20 {
                m.apply(&[x, y], &mut buf).unwrap();
                assert_eq!(buf, exact_image(&a, &[x, y]).unwrap(), "({x}, {y})");
            }
        }
    }

    #[test]
    fn chain_identity() {
        let chain = MapChain::new(vec![RMatrix::identity(2)]).unwrap();
        let out = apply_chain(&chain, &rat(5, 2)).unwrap();
        assert_eq!(out.len(), 25);
        assert!(out.is_complete());
    }

    #[test]
    fn chain_halving_matches_direct_loop() {
        let a = RMatrix::diagonal(&[rat(1, 2), int(2)]);
        let chain = MapChain::new(vec![a]).unwrap();
        let out = apply_chain(&chain, &int(4)).unwrap();
        let mut expected = Vec::new();
        for x in -20i64..=20 {
            for y in -20i64..=20 {
                let p = [round_scalar(&rat(x, 2)).to_i64().unwrap(), 2 * y];
                if p[0].abs() < 4 && p[1].abs() < 4 {
                    expected.push(RVector::from_ints(&p));
                }
            }
        }
        expected.sort();
        expected.dedup();
        assert_eq!(out.points(), expected.as_slice());
        assert_eq!(out.len(), 7 * 3);
    }

    #[test]
    fn chain_matches_model_set() {
        let chain = MapChain::new(vec![
            RMatrix::from_fracs(&[&[(1, 1), (1, 2)], &[(0, 1), (1, 1)]]).unwrap(),
            RMatrix::from_fracs(&[&[(1, 1), (0, 1)], &[(1, 3), (1, 1)]]).unwrap(),
        ])
        .unwrap();
        let r = int(50);
        let direct = apply_chain(&chain, &r).unwrap();
        let model = chain_model_set(&chain, &r, &EnumerationConfig::default()).unwrap();
        assert_eq!(direct, model);
    }

    #[test]
    fn chain_budget() {
        let chain = MapChain::new(vec![RMatrix::identity(2)]).unwrap();
        let err = apply_chain_with(&chain, &int(100), &EnumerationConfig { budget: 1000 }).unwrap_err();
        assert!(matches!(err, Error::Budget { budget: 1000 }));
    }

    #[test]
    fn sl2_hook_identity() {
        assert_eq!(sl2_from_angles(0.0, 0.0, 0.0).unwrap(), RMatrix::identity(2));
    }

    #[test]
    fn sl2_determinism_and_determinant() {
        let a = sample_sl2_chain(&mut RngState::new(42), 3).unwrap();
        let b = sample_sl2_chain(&mut RngState::new(42), 3).unwrap();
        assert_eq!(a, b);
        let c = sample_sl2_chain(&mut RngState::new(43), 3).unwrap();
        assert_ne!(a, c);
        for m in a.matrices() {
            let d = m.determinant().unwrap();
            assert!((d - int(1)).abs() <= rat(1, 1_000_000), "{m}");
            for e in m.entries() {
                assert!(e.denom() <= &(BigInt::one() << 32));
            }
        }
        assert!(sample_sl2_chain(&mut RngState::new(1), 0).is_err());
    }

    #[test]
    fn rng_counter_tracks_draws() {
        let mut rng = RngState::new(5);
        for _ in 0..10 {
            let v = rng.next_range(-3, 3);
            assert!((-3..=3).contains(&v));
        }
        assert!(rng.counter() >= 10);
        assert_eq!(rng.seed(), 5);
    }

    #[test]
    fn rational_chain_constraints() {
        let chain = sample_rational_chain(&mut RngState::new(9), 4, 2, 8).unwrap();
        assert_eq!(chain.len(), 4);
        for a in chain.matrices() {
            for e in a.entries() {
                assert!(e.denom() <= &BigInt::from(8));
                assert!(e.abs() <= int(2));
            }
            assert!(invert_matrix(a).unwrap().norm_inf() <= int(MAX_INVERSE_NORM));
        }
    }

    #[test]
    fn rationalize_is_exact_on_dyadics() {
        assert_eq!(rationalize(0.75).unwrap(), rat(3, 4));
        assert_eq!(rationalize(-2.0).unwrap(), int(-2));
        assert!(rationalize(f64::NAN).is_err());
    }
}
