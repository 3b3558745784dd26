use num::bigint::BigInt;
use num::traits::{Signed, ToPrimitive, Zero};
use quasigrid_core::numeric::{int, rat};
use quasigrid_core::{
    invert_matrix, CutProjectScheme, Interval, IntervalBox, PointSet, RMatrix, RVector, Rational, RngState,
    Window,
};

struct Oracle {
    points: Vec<RVector>,
    accepted: u64,
}

/// Scans a coefficient box twice as wide as needed, bounding each
/// coefficient through the rows of the inverse basis.
fn brute_force(scheme: &CutProjectScheme, center: &RVector, radius: &Rational) -> Oracle {
    let m = scheme.internal_dim();
    let n = scheme.physical_dim();
    let size = m + n;
    let mut lo = Vec::with_capacity(size);
    let mut hi = Vec::with_capacity(size);
    for axis in 0..m {
        let (a, b) = scheme
            .window()
            .boxes()
            .iter()
            .map(|bx| (bx.axis(axis).lo.clone(), bx.axis(axis).hi.clone()))
            .fold(None, |acc: Option<(Rational, Rational)>, (a, b)| match acc {
                None => Some((a, b)),
                Some((x, y)) => Some((x.min(a), y.max(b))),
            })
            .unwrap();
        lo.push(a);
        hi.push(b);
    }
    for c in center.coords() {
        lo.push(c - radius);
        hi.push(c + radius);
    }
    let inv = invert_matrix(scheme.basis()).unwrap();
    let mut ranges = Vec::with_capacity(size);
    for j in 0..size {
        let mut mid = Rational::zero();
        let mut half = Rational::zero();
        for i in 0..size {
            let a = inv.get(j, i);
            mid += a * (&lo[i] + &hi[i]) / int(2);
            half += a.abs() * (&hi[i] - &lo[i]) / int(2);
        }
        half *= int(2);
        let from = (&mid - &half).floor().to_integer().to_i64().unwrap();
        let to = (&mid + &half).ceil().to_integer().to_i64().unwrap();
        ranges.push((from, to));
    }

    let mut points = Vec::new();
    let mut accepted = 0;
    let mut idx: Vec<i64> = ranges.iter().map(|r| r.0).collect();
    'outer: loop {
        let coeffs: Vec<BigInt> = idx.iter().map(|&v| BigInt::from(v)).collect();
        let lambda = scheme.lattice_point(&coeffs).unwrap();
        let p1 = scheme.p1(&lambda);
        let p2 = scheme.p2(&lambda);
        if scheme.window().contains(&p1) && p2.dist_inf(center) < *radius {
            accepted += 1;
            points.push(p2);
        }
        for axis in (0..size).rev() {
            if idx[axis] < ranges[axis].1 {
                idx[axis] += 1;
                continue 'outer;
            }
            idx[axis] = ranges[axis].0;
        }
        break;
    }
    points.sort();
    points.dedup();
    Oracle { points, accepted }
}

fn random_rational(rng: &mut RngState, denom: i64, bound: i64) -> Rational {
    let q = rng.next_range(1, denom);
    rat(rng.next_range(-bound * q, bound * q), q)
}

fn random_window(rng: &mut RngState, m: usize) -> Window {
    if m == 0 {
        return Window::vacuous();
    }
    let boxes = (0..rng.next_range(1, 2))
        .map(|_| {
            IntervalBox::new(
                (0..m)
                    .map(|_| {
                        let a = random_rational(rng, 6, 1);
                        let w = rat(rng.next_range(1, 6), 6);
                        Interval::new(
                            a.clone(),
                            rng.next_range(0, 1) == 1,
                            a + w,
                            rng.next_range(0, 1) == 1,
                        )
                    })
                    .collect(),
            )
            .unwrap()
        })
        .collect();
    Window::new(m, boxes).unwrap()
}

fn random_scheme(rng: &mut RngState) -> CutProjectScheme {
    loop {
        let m = rng.next_range(0, 2) as usize;
        let n = rng.next_range(1, 2) as usize;
        let size = m + n;
        let rows = (0..size)
            .map(|_| (0..size).map(|_| random_rational(rng, 6, 2)).collect())
            .collect();
        let basis = RMatrix::from_rows(rows).unwrap();
        if basis.determinant().unwrap().is_zero() {
            continue;
        }
        // keep the doubled scan small
        if invert_matrix(&basis).unwrap().norm_inf() > int(3) {
            continue;
        }
        return CutProjectScheme::new(m, n, basis, random_window(rng, m)).unwrap();
    }
}

#[test]
fn random_schemes_match_brute_force() {
    let mut rng = RngState::new(2024);
    for case in 0..50 {
        let scheme = random_scheme(&mut rng);
        let n = scheme.physical_dim();
        let center = RVector::new((0..n).map(|_| random_rational(&mut rng, 4, 2)).collect());
        let radius = rat(rng.next_range(2, 12), 2);
        let patch = scheme.enumerate(&center, &radius).unwrap();
        let oracle = brute_force(&scheme, &center, &radius);
        assert_eq!(
            patch.patch.points(),
            oracle.points.as_slice(),
            "case {case}: {scheme:?}"
        );
        assert_eq!(
            patch.patch.len() as u64 + patch.multiplicity_dropped,
            oracle.accepted,
            "case {case}"
        );
    }
}

#[test]
fn patches_grow_with_the_radius() {
    let mut rng = RngState::new(77);
    for _ in 0..10 {
        let scheme = random_scheme(&mut rng);
        let n = scheme.physical_dim();
        let small = scheme.enumerate(&RVector::zeros(n), &int(3)).unwrap().patch;
        let large = scheme.enumerate(&RVector::zeros(n), &int(5)).unwrap().patch;
        assert_eq!(large.restrict(&RVector::zeros(n), &int(3)).unwrap(), small);
    }
}

#[test]
fn golden_matches_brute_force_off_center() {
    let scheme = quasigrid_core::fixtures::golden_scheme();
    let center = RVector::new(vec![rat(77, 3)]);
    let radius = int(40);
    let patch = scheme.enumerate(&center, &radius).unwrap();
    assert_eq!(
        patch.patch.points(),
        brute_force(&scheme, &center, &radius).points.as_slice()
    );
}

#[test]
fn integer_grid_is_the_vacuous_model_set() {
    let z3 = CutProjectScheme::integer_lattice(3).unwrap();
    let r = rat(7, 2);
    assert_eq!(
        z3.enumerate(&RVector::zeros(3), &r).unwrap().patch,
        PointSet::integer_grid(3, &r).unwrap()
    );
}
