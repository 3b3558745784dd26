//! Cut-and-project model sets.
//!
//! A [`CutProjectScheme`] is a lattice `Λ ⊂ R^{m+n}` given by the columns of
//! an invertible basis matrix, with `p₁` the projection on the first `m`
//! coordinates (internal space) and `p₂` the projection on the last `n`
//! (physical space), together with a [`Window`] `W ⊂ R^m`. The model set is
//! `{ p₂(λ) : λ ∈ Λ, p₁(λ) ∈ W }`.

mod enumerate;
pub(crate) mod lattice;
mod window;

use num::bigint::BigInt;
use num::traits::{Signed, Zero};

pub use enumerate::{EnumerationConfig, DEFAULT_BUDGET};
pub use window::Window;

use crate::error::{Error, Result};
use crate::numeric::{ball_volume, int, rat, RMatrix, RVector, Rational};
use crate::pointset::{Domain, PointSet};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CutProjectScheme {
    m: usize,
    n: usize,
    basis: RMatrix,
    window: Window,
}

/// An enumerated patch `Γ ∩ B(c, R)` of a model set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModelSetPatch {
    pub scheme: CutProjectScheme,
    pub patch: PointSet,
    /// Accepted lattice points whose physical projection repeated an
    /// earlier one.
    pub multiplicity_dropped: u64,
}

impl CutProjectScheme {
    pub fn new(m: usize, n: usize, basis: RMatrix, window: Window) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument(
                "physical dimension must be positive".into(),
            ));
        }
        if basis.rows() != m + n || basis.cols() != m + n {
            return Err(Error::DimensionMismatch {
                expected: m + n,
                found: basis.rows().max(basis.cols()),
            });
        }
        Error::check_dim(m, window.dim())?;
        if basis.determinant()?.is_zero() {
            return Err(Error::Singular);
        }
        Ok(CutProjectScheme { m, n, basis, window })
    }

    /// `Z^n` as a model set with no internal space.
    pub fn integer_lattice(n: usize) -> Result<Self> {
        CutProjectScheme::new(0, n, RMatrix::identity(n), Window::vacuous())
    }

    pub fn internal_dim(&self) -> usize {
        self.m
    }

    pub fn physical_dim(&self) -> usize {
        self.n
    }

    pub fn basis(&self) -> &RMatrix {
        &self.basis
    }

    pub fn window(&self) -> &Window {
        &self.window
    }

    pub fn with_window(&self, window: Window) -> Result<Self> {
        Error::check_dim(self.m, window.dim())?;
        Ok(CutProjectScheme {
            window,
            ..self.clone()
        })
    }

    /// `B c` for an integer coefficient vector `c`.
    pub fn lattice_point(&self, coeffs: &[BigInt]) -> Result<RVector> {
        self.basis.mul_vec(&RVector::from_bigints(coeffs.iter().cloned()))
    }

    pub fn p1(&self, lambda: &RVector) -> RVector {
        RVector::new(lambda.coords()[..self.m].to_vec())
    }

    pub fn p2(&self, lambda: &RVector) -> RVector {
        RVector::new(lambda.coords()[self.m..].to_vec())
    }

    pub fn enumerate(&self, center: &RVector, radius: &Rational) -> Result<ModelSetPatch> {
        enumerate_model_set(self, center, radius)
    }
}

/// Every point of the model set inside the open ball `B(center, radius)`.
pub fn enumerate_model_set(
    scheme: &CutProjectScheme,
    center: &RVector,
    radius: &Rational,
) -> Result<ModelSetPatch> {
    enumerate_model_set_with(scheme, center, radius, &EnumerationConfig::default())
}

pub fn enumerate_model_set_with(
    scheme: &CutProjectScheme,
    center: &RVector,
    radius: &Rational,
    config: &EnumerationConfig,
) -> Result<ModelSetPatch> {
    if !radius.is_positive() {
        return Err(Error::InvalidArgument(
            "enumeration radius must be positive".into(),
        ));
    }
    Error::check_dim(scheme.n, center.dim())?;
    let found = enumerate::enumerate(&scheme.basis, scheme.m, &scheme.window, center, radius, config)?;
    let distinct = found.points.len() as u64;
    let patch = PointSet::new(
        scheme.n,
        found.points,
        Domain::new(center.clone(), radius.clone()),
    )?;
    Ok(ModelSetPatch {
        scheme: scheme.clone(),
        patch,
        multiplicity_dropped: found.accepted - distinct,
    })
}

/// The model set `N(η)` on the same lattice with window `[-η, η]^m`,
/// restricted to `B(0, radius)`. Its points are candidate ε-translations
/// of the original model set.
pub fn translation_set(scheme: &CutProjectScheme, eta: &Rational, radius: &Rational) -> Result<PointSet> {
    translation_set_with(scheme, eta, radius, &EnumerationConfig::default())
}

pub fn translation_set_with(
    scheme: &CutProjectScheme,
    eta: &Rational,
    radius: &Rational,
    config: &EnumerationConfig,
) -> Result<PointSet> {
    let shrunk = scheme.with_window(Window::closed_cube(scheme.m, eta)?)?;
    Ok(enumerate_model_set_with(&shrunk, &RVector::zeros(scheme.n), radius, config)?.patch)
}

/// Density over `B(0, radius)` of the model set whose window is the
/// `η`-tube around the boundary of the scheme's window. For a translation
/// `v ∈ N(η)` this bounds the density of `(Γ + v) Δ Γ`.
pub fn window_inflation_density(
    scheme: &CutProjectScheme,
    eta: &Rational,
    radius: &Rational,
) -> Result<Rational> {
    window_inflation_density_with(scheme, eta, radius, &EnumerationConfig::default())
}

pub fn window_inflation_density_with(
    scheme: &CutProjectScheme,
    eta: &Rational,
    radius: &Rational,
    config: &EnumerationConfig,
) -> Result<Rational> {
    let volume = ball_volume(radius, scheme.n)?;
    let Some(tube) = scheme.window.boundary_tube(eta)? else {
        return Ok(Rational::zero());
    };
    let inflated = scheme.with_window(tube)?;
    let patch = enumerate_model_set_with(&inflated, &RVector::zeros(scheme.n), radius, config)?;
    Ok(int(patch.patch.len() as i64) / volume)
}

fn check_invertible(a: &RMatrix, n: usize) -> Result<()> {
    if a.rows() != n || a.cols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: a.rows().max(a.cols()),
        });
    }
    if a.determinant()?.is_zero() {
        return Err(Error::Singular);
    }
    Ok(())
}

/// Scheme whose model set is the image of the input model set under the
/// discretization `x ↦ π(A x)`.
///
/// The window becomes `W × ]-1/2, 1/2]^n` and the basis
///
/// ```text
/// [ B₁    0  ]
/// [ A B₂  -Id ]
/// [ 0     Id ]
/// ```
///
/// where `B₁`, `B₂` are the internal and physical row blocks of the input
/// basis.
pub fn image_scheme(a: &RMatrix, scheme: &CutProjectScheme) -> Result<CutProjectScheme> {
    let (m, n) = (scheme.m, scheme.n);
    check_invertible(a, n)?;
    let dim = m + 2 * n;
    let b1 = scheme.basis.sub_matrix(0..m, 0..m + n);
    let b2 = scheme.basis.sub_matrix(m..m + n, 0..m + n);
    let ab2 = a.mul(&b2)?;
    let mut basis = RMatrix::zeros(dim, dim);
    basis.set_block(0, 0, &b1);
    basis.set_block(m, 0, &ab2);
    basis.set_block(m, m + n, &RMatrix::identity(n).scaled(&int(-1)));
    basis.set_block(m + n, m + n, &RMatrix::identity(n));
    let window = scheme.window.product(&Window::rounding_cell(n));
    CutProjectScheme::new(m + n, n, basis, window)
}

/// Scheme of `(Â_k ∘ ⋯ ∘ Â_1)(Z^n)`: window `]-1/2, 1/2]^{nk}` and the block
/// bidiagonal basis with `A_i` on the diagonal, `-Id` above it and `Id` in
/// the bottom-right corner.
pub fn iterated_scheme(maps: &[RMatrix]) -> Result<CutProjectScheme> {
    let Some(first) = maps.first() else {
        return Err(Error::InvalidArgument("need at least one map".into()));
    };
    let n = first.rows();
    for a in maps {
        check_invertible(a, n)?;
    }
    let k = maps.len();
    let dim = n * (k + 1);
    let mut basis = RMatrix::zeros(dim, dim);
    let minus_id = RMatrix::identity(n).scaled(&int(-1));
    for (i, a) in maps.iter().enumerate() {
        basis.set_block(i * n, i * n, a);
        basis.set_block(i * n, (i + 1) * n, &minus_id);
    }
    basis.set_block(k * n, k * n, &RMatrix::identity(n));
    CutProjectScheme::new(n * k, n, basis, Window::rounding_cell(n * k))
}

/// Reference schemes used throughout tests, benches and the CLI.
pub mod fixtures {
    use super::*;
    use crate::numeric::{Interval, IntervalBox};

    /// Columns `(1/3, 1)` and `(1, 0)` with window `[0, 1/3]`: the model set
    /// is `{a : a mod 3 ∈ {0, 1}}`.
    pub fn residue_scheme() -> CutProjectScheme {
        let basis = RMatrix::from_rows(vec![vec![rat(1, 3), int(1)], vec![int(1), int(0)]]).unwrap();
        let window = Window::new(
            1,
            vec![IntervalBox::new(vec![Interval::closed(int(0), rat(1, 3))]).unwrap()],
        )
        .unwrap();
        CutProjectScheme::new(1, 1, basis, window).unwrap()
    }

    /// The rational convergent used for golden-ratio fixtures.
    pub fn golden_approximant() -> Rational {
        rat(377, 233)
    }

    /// Columns `(1, 1)` and `(-φ, φ + 1)` with `φ = 377/233` and window
    /// `]-1/2, 1/2]`.
    pub fn golden_scheme() -> CutProjectScheme {
        let phi = golden_approximant();
        let basis = RMatrix::from_rows(vec![vec![int(1), -phi.clone()], vec![int(1), phi + int(1)]]).unwrap();
        CutProjectScheme::new(1, 1, basis, Window::rounding_cell(1)).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;
    use crate::numeric::{round_vector, Interval, IntervalBox};

    fn ints(set: &PointSet) -> Vec<i64> {
        set.iter()
            .map(|p| i64::try_from(p.coords()[0].to_integer()).unwrap())
            .collect()
    }

    #[test]
    fn vacuous_window_gives_the_lattice() {
        let z2 = CutProjectScheme::integer_lattice(2).unwrap();
        let patch = z2.enumerate(&RVector::zeros(2), &rat(5, 2)).unwrap();
        assert_eq!(patch.patch.len(), 25);
        assert_eq!(patch.multiplicity_dropped, 0);
        assert_eq!(patch.patch, PointSet::integer_grid(2, &rat(5, 2)).unwrap());
    }

    #[test]
    fn residue_patch() {
        let patch = residue_scheme().enumerate(&RVector::zeros(1), &int(5)).unwrap();
        assert_eq!(ints(&patch.patch), vec![-3, -2, 0, 1, 3, 4]);
    }

    #[test]
    fn residue_patch_off_center() {
        let patch = residue_scheme()
            .enumerate(&RVector::new(vec![rat(7, 2)]), &rat(5, 2))
            .unwrap();
        assert_eq!(ints(&patch.patch), vec![3, 4]);
    }

    #[test]
    fn golden_matches_coefficient_scan() {
        let scheme = golden_scheme();
        let radius = int(100);
        let patch = scheme.enumerate(&RVector::zeros(1), &radius).unwrap();
        // p₁ = a - φ b, p₂ = a + (φ + 1) b
        let phi = golden_approximant();
        let mut expected = Vec::new();
        for b in -60i64..=60 {
            for a in -160i64..=160 {
                let p1 = int(a) - &phi * int(b);
                let p2 = int(a) + (&phi + int(1)) * int(b);
                if p1 > rat(-1, 2) && p1 <= rat(1, 2) && p2.abs() < radius {
                    expected.push(RVector::new(vec![p2]));
                }
            }
        }
        expected.sort();
        expected.dedup();
        assert!(!expected.is_empty());
        assert_eq!(patch.patch.points(), expected.as_slice());
    }

    #[test]
    fn translation_set_examples() {
        let z2 = CutProjectScheme::integer_lattice(2).unwrap();
        let n = translation_set(&z2, &rat(1, 7), &int(3)).unwrap();
        assert_eq!(n, PointSet::integer_grid(2, &int(3)).unwrap());

        let n = translation_set(&residue_scheme(), &rat(1, 100), &int(20)).unwrap();
        assert_eq!(ints(&n), (-6..=6).map(|k| 3 * k).collect::<Vec<_>>());
    }

    #[test]
    fn golden_translation_set_is_relatively_dense() {
        let n = translation_set(&golden_scheme(), &rat(1, 10), &int(1000)).unwrap();
        assert!(n.len() > 10);
        let gap = n
            .points()
            .windows(2)
            .map(|w| &w[1].coords()[0] - &w[0].coords()[0])
            .max()
            .unwrap();
        assert!(gap < int(100), "largest gap {gap}");
    }

    #[test]
    fn inflation_density_residue() {
        // residue oracle: a in (-1000, 1000) with a mod 3 in {0, 1}
        let count = (-999i64..=999).filter(|a| a.rem_euclid(3) <= 1).count() as i64;
        let d = window_inflation_density(&residue_scheme(), &rat(1, 100), &int(1000)).unwrap();
        assert_eq!(d, rat(count, 2000));
        assert_eq!(d, rat(1333, 2000));
    }

    #[test]
    fn inflation_density_monotone_in_eta() {
        let scheme = golden_scheme();
        let ds: Vec<Rational> = [rat(1, 4), rat(1, 8), rat(1, 16)]
            .iter()
            .map(|eta| window_inflation_density(&scheme, eta, &int(500)).unwrap())
            .collect();
        assert!(ds[0] >= ds[1] && ds[1] >= ds[2], "{ds:?}");
        assert!(ds[0] > ds[2]);

        let residue: Vec<Rational> = [rat(1, 4), rat(1, 8), rat(1, 16)]
            .iter()
            .map(|eta| window_inflation_density(&residue_scheme(), eta, &int(300)).unwrap())
            .collect();
        assert!(
            residue[0] >= residue[1] && residue[1] >= residue[2],
            "{residue:?}"
        );
    }

    #[test]
    fn inflation_density_vacuous_window_is_zero() {
        let z2 = CutProjectScheme::integer_lattice(2).unwrap();
        assert_eq!(
            window_inflation_density(&z2, &rat(1, 10), &int(5)).unwrap(),
            int(0)
        );
    }

    #[test]
    fn image_scheme_identity_and_halving() {
        let z2 = CutProjectScheme::integer_lattice(2).unwrap();
        let img = image_scheme(&RMatrix::identity(2), &z2).unwrap();
        let patch = img.enumerate(&RVector::zeros(2), &int(10)).unwrap();
        assert_eq!(patch.patch, PointSet::integer_grid(2, &int(10)).unwrap());

        let half = RMatrix::diagonal(&[rat(1, 2), int(1)]);
        let img = image_scheme(&half, &z2).unwrap();
        let patch = img.enumerate(&RVector::zeros(2), &int(3)).unwrap();
        assert_eq!(patch.patch, PointSet::integer_grid(2, &int(3)).unwrap());
        // each x has two preimages (2x and 2x - 1)
        assert!(patch.multiplicity_dropped > 0);
    }

    #[test]
    fn image_of_residue_set() {
        let a = RMatrix::from_rows(vec![vec![rat(3, 2)]]).unwrap();
        let img = image_scheme(&a, &residue_scheme()).unwrap();
        let patch = img.enumerate(&RVector::zeros(1), &int(30)).unwrap();
        let mut expected: Vec<i64> = (-40i64..=40)
            .filter(|x| x.rem_euclid(3) <= 1)
            .map(|x| {
                let v = round_vector(&RVector::new(vec![rat(3 * x, 2)]));
                i64::try_from(v.coords()[0].to_integer()).unwrap()
            })
            .filter(|y| y.abs() < 30)
            .collect();
        expected.sort_unstable();
        expected.dedup();
        assert_eq!(ints(&patch.patch), expected);
    }

    #[test]
    fn iterated_matches_repeated_image() {
        let a1 = RMatrix::from_fracs(&[&[(1, 1), (1, 2)], &[(0, 1), (1, 1)]]).unwrap();
        let a2 = RMatrix::from_fracs(&[&[(1, 1), (0, 1)], &[(1, 3), (1, 1)]]).unwrap();
        let z2 = CutProjectScheme::integer_lattice(2).unwrap();
        let twice = image_scheme(&a2, &image_scheme(&a1, &z2).unwrap()).unwrap();
        let iter = iterated_scheme(&[a1.clone(), a2]).unwrap();
        assert_eq!(twice, iter);
        let single = iterated_scheme(std::slice::from_ref(&a1)).unwrap();
        assert_eq!(single, image_scheme(&a1, &z2).unwrap());
    }

    #[test]
    fn iterated_identity_is_zn() {
        let s = iterated_scheme(&[RMatrix::identity(2)]).unwrap();
        let patch = s.enumerate(&RVector::zeros(2), &rat(7, 2)).unwrap();
        assert_eq!(patch.patch, PointSet::integer_grid(2, &rat(7, 2)).unwrap());
    }

    #[test]
    fn singular_inputs_rejected() {
        let singular = RMatrix::from_ints(&[&[1, 2], &[2, 4]]).unwrap();
        assert!(matches!(
            iterated_scheme(std::slice::from_ref(&singular)),
            Err(Error::Singular)
        ));
        let z2 = CutProjectScheme::integer_lattice(2).unwrap();
        assert!(matches!(image_scheme(&singular, &z2), Err(Error::Singular)));
        assert!(iterated_scheme(&[]).is_err());
        assert!(CutProjectScheme::new(0, 2, singular, Window::vacuous()).is_err());
    }

    #[test]
    fn budget_is_enforced() {
        let config = EnumerationConfig { budget: 10 };
        let z2 = CutProjectScheme::integer_lattice(2).unwrap();
        let err = enumerate_model_set_with(&z2, &RVector::zeros(2), &int(10), &config).unwrap_err();
        assert!(matches!(err, Error::Budget { budget: 10 }));
    }

    #[test]
    fn union_window_membership() {
        // internal coordinates are a/3 + Z; [0, 1/4] ∪ ]3/4, 9/10[ only
        // catches a ≡ 0 mod 3
        let w = Window::new(
            1,
            vec![
                IntervalBox::new(vec![Interval::closed(int(0), rat(1, 4))]).unwrap(),
                IntervalBox::new(vec![Interval::open(rat(3, 4), rat(9, 10))]).unwrap(),
            ],
        )
        .unwrap();
        let s = residue_scheme().with_window(w).unwrap();
        let patch = s.enumerate(&RVector::zeros(1), &int(10)).unwrap();
        assert_eq!(ints(&patch.patch), vec![-9, -6, -3, 0, 3, 6, 9]);
        // ]1/2, 3/4[ ∪ [2/3, 1] catches 2/3 and 1
        let w = Window::new(
            1,
            vec![
                IntervalBox::new(vec![Interval::open(rat(1, 2), rat(3, 4))]).unwrap(),
                IntervalBox::new(vec![Interval::closed(rat(2, 3), int(1))]).unwrap(),
            ],
        )
        .unwrap();
        let s = residue_scheme().with_window(w).unwrap();
        let patch = s.enumerate(&RVector::zeros(1), &int(7)).unwrap();
        assert_eq!(ints(&patch.patch), vec![-6, -4, -3, -1, 0, 2, 3, 5, 6]);
    }
}
