use std::collections::BTreeSet;

use num::traits::ToPrimitive;
use quasigrid_core::fixtures::{golden_scheme, residue_scheme};
use quasigrid_core::numeric::{int, rat};
use quasigrid_core::{
    apply_chain, apply_chain_with, apply_hat, chain_model_set, image_scheme, invert_matrix, iterated_scheme,
    round_vector, sample_rational_chain, sample_sl2_chain, CutProjectScheme, Domain, EnumerationConfig,
    MapChain, PointSet, RMatrix, RVector, Rational, RngState,
};

/// `π(A x)` for every `x` of a large patch of the model set, restricted to
/// `B(0, r)`. The patch radius `‖A^{-1}‖ (r + 1/2) + 1` covers every
/// preimage.
fn direct_image(a: &RMatrix, scheme: &CutProjectScheme, r: &Rational) -> Vec<RVector> {
    let n = scheme.physical_dim();
    let reach = invert_matrix(a).unwrap().norm_inf() * (r + rat(1, 2)) + int(1);
    let source = scheme.enumerate(&RVector::zeros(n), &reach).unwrap().patch;
    let out: BTreeSet<RVector> = source
        .iter()
        .map(|x| round_vector(&a.mul_vec(x).unwrap()))
        .filter(|y| y.norm_inf() < *r)
        .collect();
    out.into_iter().collect()
}

fn direct_chain(chain: &[RMatrix], r: &Rational) -> Vec<RVector> {
    let n = chain[0].rows();
    let mut reach = r.clone();
    for a in chain.iter().rev() {
        reach = invert_matrix(a).unwrap().norm_inf() * (reach + rat(1, 2)) + int(1);
    }
    let mut current: Vec<RVector> = PointSet::integer_grid(n, &reach).unwrap().points().to_vec();
    for a in chain {
        let next: BTreeSet<RVector> = current
            .iter()
            .map(|x| round_vector(&a.mul_vec(x).unwrap()))
            .collect();
        current = next.into_iter().collect();
    }
    current.retain(|y| y.norm_inf() < *r);
    current
}

#[test]
fn image_of_z2_under_half_map() {
    let a = RMatrix::diagonal(&[rat(1, 2), int(1)]);
    let z2 = CutProjectScheme::integer_lattice(2).unwrap();
    let img = image_scheme(&a, &z2)
        .unwrap()
        .enumerate(&RVector::zeros(2), &int(3))
        .unwrap();
    assert_eq!(img.patch.points(), direct_image(&a, &z2, &int(3)).as_slice());
    assert_eq!(img.patch, PointSet::integer_grid(2, &int(3)).unwrap());
}

#[test]
fn image_schemes_match_direct_rounding() {
    let mut rng = RngState::new(41);
    let bases = [
        CutProjectScheme::integer_lattice(2).unwrap(),
        residue_scheme(),
        golden_scheme(),
    ];
    for base in &bases {
        let n = base.physical_dim();
        for _ in 0..6 {
            let a = sample_rational_chain(&mut rng, 1, n, 8).unwrap().matrices()[0].clone();
            let r = int(if n == 1 { 60 } else { 15 });
            let img = image_scheme(&a, base)
                .unwrap()
                .enumerate(&RVector::zeros(n), &r)
                .unwrap();
            assert_eq!(
                img.patch.points(),
                direct_image(&a, base, &r).as_slice(),
                "A = {a}"
            );
        }
    }
}

#[test]
fn residue_image_under_three_halves() {
    let a = RMatrix::from_fracs(&[&[(3, 2)]]).unwrap();
    let img = image_scheme(&a, &residue_scheme())
        .unwrap()
        .enumerate(&RVector::zeros(1), &int(30))
        .unwrap();
    let expected: BTreeSet<i64> = (-40i64..=40)
        .filter(|x| x.rem_euclid(3) <= 1)
        .map(|x| {
            // round(3x/2) with ties down
            let twice = 3 * x;
            if twice.rem_euclid(2) == 0 {
                twice / 2
            } else {
                (twice - 1).div_euclid(2)
            }
        })
        .filter(|y| y.abs() < 30)
        .collect();
    let got: BTreeSet<i64> = img
        .patch
        .iter()
        .map(|p| p.coords()[0].to_integer().to_i64().unwrap())
        .collect();
    assert_eq!(got, expected);
}

#[test]
fn two_map_chain_three_ways() {
    let a1 = RMatrix::from_fracs(&[&[(1, 1), (1, 2)], &[(0, 1), (1, 1)]]).unwrap();
    let a2 = RMatrix::from_fracs(&[&[(1, 1), (0, 1)], &[(1, 3), (1, 1)]]).unwrap();
    let r = int(50);
    let expected = direct_chain(&[a1.clone(), a2.clone()], &r);
    let scheme = iterated_scheme(&[a1.clone(), a2.clone()]).unwrap();
    let model = scheme.enumerate(&RVector::zeros(2), &r).unwrap();
    assert_eq!(model.patch.points(), expected.as_slice());
    let chain = MapChain::new(vec![a1, a2]).unwrap();
    assert_eq!(apply_chain(&chain, &r).unwrap().points(), expected.as_slice());
}

#[test]
fn random_chains_match_model_sets() {
    let mut rng = RngState::new(8);
    let r = int(50);
    for case in 0..20 {
        let k = 1 + case % 3;
        let chain = sample_rational_chain(&mut rng, k, 2, 8).unwrap();
        let direct = apply_chain(&chain, &r).unwrap();
        let model = chain_model_set(&chain, &r, &EnumerationConfig::default()).unwrap();
        assert_eq!(direct, model, "case {case}");
    }
}

#[test]
fn chain_has_no_boundary_loss() {
    let mut rng = RngState::new(12);
    for _ in 0..5 {
        let chain = sample_rational_chain(&mut rng, 2, 2, 8).unwrap();
        let r = int(20);
        let out = apply_chain(&chain, &r).unwrap();
        let wide = apply_chain(&chain, &int(40)).unwrap();
        assert_eq!(wide.restrict(&RVector::zeros(2), &r).unwrap(), out);
    }
}

#[test]
fn sl2_chain_matches_model_set() {
    let chain = sample_sl2_chain(&mut RngState::new(42), 3).unwrap();
    let r = int(25);
    let direct = apply_chain(&chain, &r).unwrap();
    let model = chain_model_set(&chain, &r, &EnumerationConfig::default()).unwrap();
    assert_eq!(direct, model);
}

#[test]
fn integer_equivariance() {
    let a = RMatrix::from_ints(&[&[2, 1], &[-1, 3]]).unwrap();
    let k = RVector::from_ints(&[3, -2]);
    let s = PointSet::new(
        2,
        vec![
            RVector::from_ints(&[0, 1]),
            RVector::from_ints(&[2, -1]),
            RVector::from_ints(&[-3, 4]),
        ],
        Domain::new(RVector::zeros(2), int(6)),
    )
    .unwrap();
    let lhs = apply_hat(&a, &s.translate(&k).unwrap()).unwrap();
    let shift = a.mul_vec(&k).unwrap();
    let rhs = apply_hat(&a, &s).unwrap();
    let moved: Vec<RVector> = rhs.iter().map(|p| p + &shift).collect();
    assert_eq!(lhs.points(), moved.as_slice());
}

#[test]
fn budget_reaches_the_direct_pipeline() {
    let chain = sample_sl2_chain(&mut RngState::new(1), 20).unwrap();
    let err = apply_chain_with(&chain, &int(30), &EnumerationConfig::default()).unwrap_err();
    assert!(matches!(err, quasigrid_core::Error::Budget { .. }));
}
