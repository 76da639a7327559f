mod common;

use common::{random_unimodular, to_int_matrix, to_int_vector, Mat};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use orbitkit::matrixorbit::{classify_gl2, orbit_coset_decide, orbit_equality_decide, power, Gl2Kind, OrbitQuery};
use orbitkit::zlattice::{IntMatrix, Lattice};
use orbitkit::{Decision, Refutation};
use proptest::prelude::*;

fn unimodular(n: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = Mat> {
    (n, any::<u64>()).prop_map(|(n, seed)| random_unimodular(&mut common::rng(seed), n, 6, 4))
}

fn bmul(v: &[BigInt], a: &Mat) -> Vec<BigInt> {
    (0..a[0].len()).map(|j| v.iter().zip(a).map(|(x, row)| x * row[j]).sum()).collect()
}

fn inverse(a: &Mat) -> Mat {
    let p = power(&to_int_matrix(a), -1).unwrap();
    p.to_rows().iter().map(|r| r.iter().map(|e| i64::try_from(e).unwrap()).collect()).collect()
}

/// `v ∈ Z·h`, checked coordinate-wise.
fn on_line(v: &[BigInt], h: &[i64]) -> bool {
    let Some(i) = h.iter().position(|&e| e != 0) else {
        return v.iter().all(Zero::is_zero);
    };
    let (c, r) = v[i].div_rem(&BigInt::from(h[i]));
    r.is_zero() && v.iter().zip(h).all(|(x, &e)| *x == &c * e)
}

proptest! {
    #[test]
    fn powers_invert_each_other(a in unimodular(2..=3), k in -20i64..=20) {
        let m = to_int_matrix(&a);
        let n = a.len();
        prop_assert_eq!(power(&m, k).unwrap().mul(&power(&m, -k).unwrap()).unwrap(), IntMatrix::identity(n));
        prop_assert_eq!(power(&m, 0).unwrap(), IntMatrix::identity(n));
    }

    #[test]
    fn powers_add_exponents(a in unimodular(2..=3), j in -8i64..=8, k in -8i64..=8) {
        let m = to_int_matrix(&a);
        prop_assert_eq!(power(&m, j).unwrap().mul(&power(&m, k).unwrap()).unwrap(), power(&m, j + k).unwrap());
    }

    #[test]
    fn finite_order_classification_is_exact(a in unimodular(2..=2)) {
        let class = classify_gl2(&to_int_matrix(&a)).unwrap();
        if let Gl2Kind::FiniteOrder { order } = class.kind {
            prop_assert_eq!(power(&to_int_matrix(&a), order as i64).unwrap(), IntMatrix::identity(2));
            for k in 1..order {
                prop_assert_ne!(power(&to_int_matrix(&a), k as i64).unwrap(), IntMatrix::identity(2));
            }
        }
    }

    #[test]
    fn coset_answers_are_certified(a in unimodular(2..=3), x in prop::collection::vec(-4i64..=4, 3), u in prop::collection::vec(-4i64..=4, 3), h in prop::collection::vec(-3i64..=3, 3)) {
        let n = a.len();
        let (x, u, h) = (&x[..n], &u[..n], &h[..n]);
        let q = OrbitQuery::new(to_int_matrix(&a), to_int_vector(x), to_int_vector(u), Lattice::new(to_int_matrix(&vec![h.to_vec()]))).unwrap();
        if let Decision::Yes(w) = orbit_coset_decide(&q).unwrap() {
            let img = q.certify(w.k).unwrap();
            prop_assert!(img.is_some());
            // independent check on the rank-one lattice
            let p = power(&to_int_matrix(&a), w.k).unwrap();
            let pm: Mat = p.to_rows().iter().map(|r| r.iter().map(|e| i64::try_from(e).unwrap()).collect()).collect();
            let xb: Vec<BigInt> = x.iter().map(|&e| e.into()).collect();
            let diff: Vec<BigInt> = bmul(&xb, &pm).into_iter().zip(u).map(|(p, &q)| p - q).collect();
            prop_assert!(on_line(&diff, h));
        }
    }

    #[test]
    fn orbit_equality_is_reflexive_and_symmetric(a in unimodular(2..=3), x in prop::collection::vec(-4i64..=4, 3), k in -6i64..=6) {
        let n = a.len();
        let x = to_int_vector(&x[..n]);
        let m = to_int_matrix(&a);
        let y = x.mul_mat(&power(&m, k).unwrap()).unwrap();
        prop_assert!(orbit_equality_decide(&m, &x, &x).unwrap().is_yes());
        let Decision::Yes(w) = orbit_equality_decide(&m, &x, &y).unwrap() else {
            return Err(TestCaseError::fail("planted orbit point missed"));
        };
        prop_assert_eq!(x.mul_mat(&power(&m, w.k).unwrap()).unwrap(), y.clone());
        prop_assert!(w.k.abs() <= k.abs());
        let back = orbit_equality_decide(&m, &y, &x).unwrap();
        prop_assert!(back.is_yes());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// A modular obstruction must survive brute force over |k| <= 500.
    #[test]
    fn modular_obstructions_are_sound(a in unimodular(3..=3), x in prop::collection::vec(-3i64..=3, 3), u in prop::collection::vec(-3i64..=3, 3), h in prop::collection::vec(-3i64..=3, 3)) {
        let q = OrbitQuery::new(to_int_matrix(&a), to_int_vector(&x), to_int_vector(&u), Lattice::new(to_int_matrix(&vec![h.clone()]))).unwrap();
        if let Decision::No(Refutation::ModularObstruction { .. }) = orbit_coset_decide(&q).unwrap() {
            let inv = inverse(&a);
            let xb: Vec<BigInt> = x.iter().map(|&e| e.into()).collect();
            let hit = |v: &[BigInt]| on_line(&v.iter().zip(&u).map(|(p, &q)| p - q).collect::<Vec<_>>(), &h);
            let (mut fwd, mut bwd) = (xb.clone(), xb.clone());
            prop_assert!(!hit(&xb));
            for _ in 0..500 {
                fwd = bmul(&fwd, &a);
                bwd = bmul(&bwd, &inv);
                prop_assert!(!hit(&fwd) && !hit(&bwd));
            }
        }
    }
}

/// Makes sure the property above is not vacuous.
#[test]
fn modular_obstructions_occur_and_hold() {
    let mut rng = common::rng(11);
    let mut seen = 0;
    for _ in 0..400 {
        use rand::Rng;
        let a = random_unimodular(&mut rng, 3, 6, 4);
        let x = common::random_vec(&mut rng, 3, 3);
        let u = common::random_vec(&mut rng, 3, 3);
        let h = common::random_vec(&mut rng, 3, 3);
        let scale: i64 = rng.gen_range(1..=4);
        let h: Vec<i64> = h.iter().map(|e| e * scale).collect();
        let q = OrbitQuery::new(to_int_matrix(&a), to_int_vector(&x), to_int_vector(&u), Lattice::new(to_int_matrix(&vec![h.clone()])))
            .unwrap();
        if let Decision::No(Refutation::ModularObstruction { .. }) = orbit_coset_decide(&q).unwrap() {
            seen += 1;
            let inv = inverse(&a);
            let xb: Vec<BigInt> = x.iter().map(|&e| e.into()).collect();
            let hit = |v: &[BigInt]| on_line(&v.iter().zip(&u).map(|(p, &q)| p - q).collect::<Vec<_>>(), &h);
            let (mut fwd, mut bwd) = (xb.clone(), xb.clone());
            assert!(!hit(&xb));
            for _ in 0..500 {
                fwd = bmul(&fwd, &a);
                bwd = bmul(&bwd, &inv);
                assert!(!hit(&fwd) && !hit(&bwd), "obstruction refuted: A={a:?} x={x:?} u={u:?} h={h:?}");
            }
        }
    }
    println!("{seen} modular obstructions checked");
    assert!(seen > 10, "only {seen} obstructions generated");
}
