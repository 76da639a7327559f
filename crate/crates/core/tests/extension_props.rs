mod common;

use common::{random_unimodular, to_i128, to_int_matrix, Mat, SmallExtension};
use orbitkit::extension::{action_subgroup_od, cp_znbyz, GElement, ZnByZ};
use orbitkit::zlattice::IntVector;
use orbitkit::Decision;
use proptest::prelude::*;

fn group() -> impl Strategy<Value = (Mat, ZnByZ)> {
    any::<u64>().prop_map(|seed| {
        let a = random_unimodular(&mut common::rng(seed), 2, 5, 3);
        let g = ZnByZ::new(to_int_matrix(&a)).unwrap();
        (a, g)
    })
}

fn element() -> impl Strategy<Value = GElement> {
    (prop::collection::vec(-3i64..=3, 2), -3i64..=3).prop_map(|(u, p)| GElement::new(IntVector::from_i64(&u), p))
}

fn small(e: &GElement) -> (Vec<i128>, i64) {
    (to_i128(&e.u), e.p)
}

proptest! {
    #[test]
    fn group_law_is_associative((_, g) in group(), x in element(), y in element(), z in element()) {
        let left = g.multiply(&g.multiply(&x, &y).unwrap(), &z).unwrap();
        let right = g.multiply(&x, &g.multiply(&y, &z).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn inverses_are_two_sided((_, g) in group(), x in element()) {
        let inv = g.invert(&x).unwrap();
        prop_assert_eq!(g.multiply(&x, &inv).unwrap(), g.identity());
        prop_assert_eq!(g.multiply(&inv, &x).unwrap(), g.identity());
        prop_assert_eq!(g.multiply(&g.identity(), &x).unwrap(), x);
    }

    #[test]
    fn arithmetic_matches_independent_model((a, g) in group(), x in element(), y in element()) {
        let m = SmallExtension::new(&a, 8);
        prop_assert_eq!(small(&g.multiply(&x, &y).unwrap()), m.mul(&small(&x), &small(&y)));
        prop_assert_eq!(small(&g.invert(&x).unwrap()), m.inv(&small(&x)));
        prop_assert_eq!(small(&g.conjugate(&x, &y).unwrap()), m.conj(&small(&x), &small(&y)));
    }

    #[test]
    fn stable_letter_acts_by_the_matrix((_, g) in group(), u in prop::collection::vec(-5i64..=5, 2), k in -4i64..=4) {
        let u = IntVector::from_i64(&u);
        let conj = g.conjugate(&GElement::fiber(u.clone()), &GElement::new(IntVector::zeros(2), k)).unwrap();
        prop_assert_eq!(conj, GElement::fiber(u.mul_mat(&g.action(k).unwrap()).unwrap()));
    }

    #[test]
    fn conjugation_is_a_right_action((_, g) in group(), x in element(), h1 in element(), h2 in element()) {
        let stepwise = g.conjugate(&g.conjugate(&x, &h1).unwrap(), &h2).unwrap();
        let at_once = g.conjugate(&x, &g.multiply(&h1, &h2).unwrap()).unwrap();
        prop_assert_eq!(stepwise, at_once);
    }

    #[test]
    fn planted_conjugates_are_found((_, g) in group(), x in element(), h in element()) {
        let y = g.conjugate(&x, &h).unwrap();
        match cp_znbyz(&g, &x, &y).unwrap() {
            Decision::Yes(w) => prop_assert_eq!(g.conjugate(&x, &w.element()).unwrap(), y),
            other => prop_assert!(false, "planted pair gave {:?}", other),
        }
    }

    #[test]
    fn answers_match_small_box_search((a, g) in group(), x in element(), y in element()) {
        let m = SmallExtension::new(&a, 12);
        let d = cp_znbyz(&g, &x, &y).unwrap();
        let (sx, sy) = (small(&x), small(&y));
        let brute = (-4i64..=4).any(|k| {
            (-4i128..=4).any(|s| (-4i128..=4).any(|t| m.conj(&sx, &(vec![s, t], k)) == sy))
        });
        if brute {
            prop_assert!(d.is_yes());
        }
        if let Decision::Yes(w) = &d {
            prop_assert!(g.verify_conjugator(&x, &y, w).unwrap());
        }
    }

    #[test]
    fn fiber_conjugacy_is_the_action_orbit_problem((_, g) in group(), u in prop::collection::vec(-3i64..=3, 2), v in prop::collection::vec(-3i64..=3, 2)) {
        let (u, v) = (IntVector::from_i64(&u), IntVector::from_i64(&v));
        let od = action_subgroup_od(&g, &u, &v).unwrap();
        let cp = cp_znbyz(&g, &GElement::fiber(u), &GElement::fiber(v)).unwrap();
        if !od.is_unknown() {
            prop_assert_eq!(od.verdict(), cp.verdict());
        }
    }

    #[test]
    fn group_json_round_trips((_, g) in group()) {
        let text = serde_json::to_string(&g).unwrap();
        let back: ZnByZ = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back.matrix(), g.matrix());
    }
}

#[test]
fn non_unimodular_actions_are_rejected() {
    let bad = orbitkit::zlattice::IntMatrix::from_i64(&[[2, 0], [0, 1]]);
    assert!(ZnByZ::new(bad).is_err());
}
