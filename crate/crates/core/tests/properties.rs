use kcube::{phi, phi_inverse, Budget, CubeParams, LowerHalfSpec, Point, Variant};
use proptest::prelude::*;

fn params_and_point() -> impl Strategy<Value = Point> {
    (2u32..=12, 1u32..=7).prop_flat_map(|(k, n)| {
        proptest::collection::vec(0..k, n as usize)
            .prop_map(move |coords| CubeParams::new(k, n).unwrap().point(coords).unwrap())
    })
}

fn spec_and_tail() -> impl Strategy<Value = (LowerHalfSpec, Point)> {
    (2u32..=12, 2u32..=7)
        .prop_flat_map(|(k, n)| {
            let params = CubeParams::new(k, n).unwrap();
            let specs = LowerHalfSpec::all(params);
            (proptest::sample::select(specs), proptest::collection::vec(0..k, n as usize - 1))
        })
        .prop_map(|(spec, coords)| {
            let tail = spec.params().reduced().unwrap().point(coords).unwrap();
            (spec, tail)
        })
}

proptest! {
    #[test]
    fn complement_is_an_involution(a in params_and_point()) {
        let c = a.complement();
        prop_assert_eq!(c.complement(), a.clone());
        prop_assert_eq!(c.weight(), a.params().max_weight() - a.weight());
    }

    #[test]
    fn intersects_is_symmetric_and_extends_self_intersection(
        (a, b) in params_and_point().prop_flat_map(|a| {
            let p = a.params();
            let b = proptest::collection::vec(0..p.k(), p.n() as usize)
                .prop_map(move |c| p.point(c).unwrap());
            (Just(a), b)
        })
    ) {
        prop_assert_eq!(a.intersects(&b).unwrap(), b.intersects(&a).unwrap());
        prop_assert_eq!(a.is_self_intersecting(), a.intersects(&a).unwrap());
    }

    #[test]
    fn inverse_lands_in_lower_half_and_round_trips((spec, b) in spec_and_tail()) {
        let a = phi_inverse(&b, &spec).unwrap();
        prop_assert!(spec.contains(&a).unwrap());
        prop_assert_eq!(phi(&a, &spec).unwrap(), b);
    }

    #[test]
    fn text_form_round_trips(a in params_and_point()) {
        prop_assert_eq!(a.params().parse_point(&a.to_string()).unwrap(), a);
    }
}

#[test]
fn lower_half_sizes_are_powers_of_k() {
    let budget = Budget::default();
    for k in 2..=5 {
        for n in 1..=4 {
            let params = CubeParams::new(k, n).unwrap();
            for spec in LowerHalfSpec::all(params) {
                let count = spec.points(&budget).unwrap().count() as u64;
                assert_eq!(count, u64::from(k).pow(n - 1), "{spec}");
            }
        }
    }
}

#[test]
fn largest_shift_takes_the_whole_low_slice() {
    let params = CubeParams::new(4, 3).unwrap();
    let spec = LowerHalfSpec::new(params, Variant::ThresholdShift(params.g_prime())).unwrap();
    assert!(spec.points(&Budget::default()).unwrap().all(|p| p.first() == 0));
}
