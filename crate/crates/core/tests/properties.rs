use num::bigint::BigInt;
use num::traits::Zero;
use proptest::prelude::*;
use quasigrid_core::numeric::{int, rat};
use quasigrid_core::{
    apply_hat, invert_matrix, parse_qps, preimage_bounds, qps_to_string, round_scalar, round_vector, Domain,
    Interval, IntervalBox, PointSet, RMatrix, RVector, Rational,
};

fn rational() -> impl Strategy<Value = Rational> {
    (-10_000i64..10_000, 1i64..60).prop_map(|(p, q)| rat(p, q))
}

fn half_integer() -> impl Strategy<Value = Rational> {
    (-500i64..500).prop_map(|k| rat(2 * k + 1, 2))
}

fn small_matrix(n: usize) -> impl Strategy<Value = RMatrix> {
    proptest::collection::vec((-6i64..=6, 1i64..=4), n * n).prop_filter_map("singular", move |e| {
        let rows = e
            .chunks(n)
            .map(|r| r.iter().map(|&(p, q)| rat(p, q)).collect())
            .collect();
        let m = RMatrix::from_rows(rows).ok()?;
        (!m.determinant().ok()?.is_zero()).then_some(m)
    })
}

fn int_set(dim: usize, radius: i64) -> impl Strategy<Value = PointSet> {
    proptest::collection::vec(proptest::collection::vec(-(radius - 1)..radius, dim), 0..25).prop_map(
        move |pts| {
            PointSet::new(
                dim,
                pts.iter().map(|p| RVector::from_ints(p)).collect(),
                Domain::new(RVector::zeros(dim), int(radius)),
            )
            .unwrap()
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn rounding_sandwich(x in prop_oneof![rational(), half_integer()]) {
        let k = Rational::from_integer(round_scalar(&x));
        prop_assert!(&k - rat(1, 2) < x);
        prop_assert!(x <= &k + rat(1, 2));
    }

    #[test]
    fn rounding_equivariance(x in rational(), k in -1000i64..1000) {
        prop_assert_eq!(round_scalar(&(&x + int(k))), round_scalar(&x) + BigInt::from(k));
    }

    #[test]
    fn rounding_idempotent(a in rational(), b in half_integer()) {
        let v = RVector::new(vec![a, b]);
        let once = round_vector(&v);
        prop_assert_eq!(round_vector(&once), once);
    }

    #[test]
    fn inverse_both_sides(m in small_matrix(3)) {
        let inv = invert_matrix(&m).unwrap();
        prop_assert_eq!(m.mul(&inv).unwrap(), RMatrix::identity(3));
        prop_assert_eq!(inv.mul(&m).unwrap(), RMatrix::identity(3));
    }

    #[test]
    fn preimage_box_is_sound(m in small_matrix(2), lo in -4i64..0, hi in 1i64..5) {
        let target = IntervalBox::new(vec![
            Interval::closed(int(lo), int(hi)),
            Interval::open(int(lo), int(hi)),
        ]).unwrap();
        let bx = preimage_bounds(&m, &target).unwrap();
        // every integer preimage found on a generous grid lies in the box
        for x in -40i64..=40 {
            for y in -40i64..=40 {
                let c = RVector::from_ints(&[x, y]);
                if target.contains(&m.mul_vec(&c).unwrap()) {
                    prop_assert!(bx.contains(&c), "{} escapes", c);
                }
            }
        }
    }

    #[test]
    fn sym_diff_is_symmetric_and_counts(s in int_set(2, 6), t in int_set(2, 6)) {
        let st = s.sym_diff(&t).unwrap();
        prop_assert_eq!(&st, &t.sym_diff(&s).unwrap());
        let only_s = s.iter().filter(|p| !t.contains(p)).count();
        let only_t = t.iter().filter(|p| !s.contains(p)).count();
        prop_assert_eq!(st.len(), only_s + only_t);
        let empty = PointSet::empty(2, s.domain().clone()).unwrap();
        prop_assert_eq!(s.sym_diff(&empty).unwrap(), s.clone());
    }

    #[test]
    fn translate_round_trip(s in int_set(2, 8), a in rational(), b in rational()) {
        let v = RVector::new(vec![a, b]);
        let back = s.translate(&v).unwrap().translate(&-&v).unwrap();
        prop_assert_eq!(back, s);
    }

    #[test]
    fn qps_round_trip(s in int_set(2, 8), a in rational(), b in rational()) {
        let moved = s.translate(&RVector::new(vec![a, b])).unwrap();
        let text = qps_to_string(&moved).unwrap();
        let back = parse_qps(&text).unwrap();
        prop_assert_eq!(qps_to_string(&back).unwrap(), text);
        prop_assert_eq!(back, moved);
    }

    #[test]
    fn identity_discretization(s in int_set(3, 5)) {
        let img = apply_hat(&RMatrix::identity(3), &s).unwrap();
        prop_assert_eq!(img.points(), s.points());
    }

    #[test]
    fn image_domain_contains_image(s in int_set(2, 6), m in small_matrix(2)) {
        let img = apply_hat(&m, &s).unwrap();
        prop_assert!(!img.is_complete());
        for p in img.iter() {
            prop_assert!(img.domain().contains_point(p));
        }
    }
}

#[test]
fn rounding_contract_on_many_values() {
    let mut rng = quasigrid_core::RngState::new(1);
    for i in 0..20_000 {
        let q = rng.next_range(1, 1000);
        let x = if i % 4 == 0 {
            rat(2 * rng.next_range(-100_000, 100_000) + 1, 2)
        } else {
            rat(rng.next_range(-1_000_000, 1_000_000), q)
        };
        let k = Rational::from_integer(round_scalar(&x));
        assert!(&k - rat(1, 2) < x && x <= &k + rat(1, 2), "{x}");
    }
    assert_eq!(round_scalar(&rat(1, 2)), BigInt::from(0));
    assert_eq!(round_scalar(&rat(-1, 2)), BigInt::from(-1));
    assert_eq!(round_scalar(&int(7)), BigInt::from(7));
}
