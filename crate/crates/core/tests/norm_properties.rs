//! Properties of the exact L¹ operator norm, checked against independent
//! oracles built only from vector norms.

use dominion::random::{random_damping, random_signed, random_substochastic, seeded, GeneratorConfig};
use dominion::rational::{int, ratio};
use dominion::{L1Vector, MatrixOperator, MeasureSpace, Rational};
use proptest::prelude::*;
use rand::Rng;

fn random_space<R: Rng>(rng: &mut R, n: usize) -> MeasureSpace {
    let weights = (0..n)
        .map(|_| ratio(rng.gen_range(1..=9), rng.gen_range(1..=5)))
        .collect();
    MeasureSpace::new(weights).unwrap()
}

fn random_vector<R: Rng>(rng: &mut R, space: &MeasureSpace) -> L1Vector {
    let coords = (0..space.dim())
        .map(|_| ratio(rng.gen_range(-50..=50), rng.gen_range(1..=12)))
        .collect();
    L1Vector::new(space, coords).unwrap()
}

/// `max ‖Ax‖` over the signed vertices `±e_j/μ_j`, straight from the vector norm.
fn vertex_sup(a: &MatrixOperator, positive_only: bool) -> Rational {
    let space = a.space();
    let mut best = int(0);
    for j in 0..space.dim() {
        let v = L1Vector::vertex(space, j);
        let mut candidates = vec![v.clone()];
        if !positive_only {
            candidates.push(-&v);
        }
        for x in candidates {
            let norm = a.apply(&x).unwrap().l1_norm();
            if norm > best {
                best = norm;
            }
        }
    }
    best
}

#[test]
fn norm_dominates_sampled_ratios_and_is_attained_at_a_vertex() {
    let cfg = GeneratorConfig::default();
    let mut rng = seeded(0x0_1001);
    for round in 0..10 {
        let n = 1 + round % 4;
        let space = random_space(&mut rng, n);
        let a = random_signed(&mut rng, &space, &cfg);
        let norm = a.operator_norm_l1();
        for _ in 0..1_000 {
            let x = random_vector(&mut rng, &space);
            if x.is_zero() {
                continue;
            }
            let lhs = a.apply(&x).unwrap().l1_norm();
            assert!(lhs <= &norm * x.l1_norm(), "round {round}");
        }
        assert_eq!(vertex_sup(&a, false), norm, "round {round}");
    }
}

#[test]
fn positive_operators_attain_the_norm_on_the_positive_cone() {
    let cfg = GeneratorConfig::default();
    let mut rng = seeded(0x0_1002);
    for _ in 0..50 {
        let n = rng.gen_range(1..=5);
        let space = random_space(&mut rng, n);
        let a = random_substochastic(&mut rng, &space, 0.6, &cfg).scale(&ratio(rng.gen_range(1..=7), 3));
        assert_eq!(vertex_sup(&a, true), vertex_sup(&a, false));
        assert_eq!(vertex_sup(&a, true), a.operator_norm_l1());
    }
}

#[test]
fn dominated_positive_differences_subtract_norms() {
    let cfg = GeneratorConfig::default();
    let mut rng = seeded(0x0_1003);
    for _ in 0..50 {
        let n = rng.gen_range(1..=4);
        let space = random_space(&mut rng, n);
        let s = random_substochastic(&mut rng, &space, 0.7, &cfg);
        let t = random_damping(&mut rng, &space, &cfg).hadamard(&s).unwrap();
        for _ in 0..20 {
            let x = random_vector(&mut rng, &space).abs();
            let sx = s.apply(&x).unwrap();
            let tx = t.apply(&x).unwrap();
            assert_eq!(sx.try_sub(&tx).unwrap().l1_norm(), sx.l1_norm() - tx.l1_norm());
        }
        assert!(t.operator_norm_l1() <= s.operator_norm_l1());
    }
}

fn operator_on(space: MeasureSpace, raw: Vec<(i64, i64)>) -> MatrixOperator {
    let entries: Vec<Rational> = raw.into_iter().map(|(p, q)| ratio(p, q)).collect();
    MatrixOperator::from_entries(&space, &entries).unwrap()
}

fn space_strategy() -> impl Strategy<Value = MeasureSpace> {
    (1usize..=4).prop_flat_map(|n| {
        proptest::collection::vec((1i64..=9, 1i64..=5), n)
            .prop_map(|w| MeasureSpace::new(w.into_iter().map(|(p, q)| ratio(p, q)).collect()).unwrap())
    })
}

fn pair_strategy() -> impl Strategy<Value = (MatrixOperator, MatrixOperator)> {
    space_strategy().prop_flat_map(|space| {
        let n = space.dim();
        let entries = || proptest::collection::vec((-6i64..=6, 1i64..=6), n * n);
        (entries(), entries()).prop_map(move |(a, b)| {
            (operator_on(space.clone(), a), operator_on(space.clone(), b))
        })
    })
}

proptest! {
    #[test]
    fn submultiplicative((a, b) in pair_strategy()) {
        let ab = a.compose(&b).unwrap();
        prop_assert!(ab.operator_norm_l1() <= a.operator_norm_l1() * b.operator_norm_l1());
    }

    #[test]
    fn adjoint_duality((a, _) in pair_strategy()) {
        prop_assert_eq!(a.operator_norm_l1(), a.mu_adjoint().operator_norm_linf());
        prop_assert_eq!(a.mu_adjoint().mu_adjoint(), a);
    }

    #[test]
    fn dominance_is_monotone((a, b) in pair_strategy()) {
        let small = a.abs_entries();
        let big = small.try_add(&b.abs_entries()).unwrap();
        prop_assert!(big.dominates(&small).unwrap());
        prop_assert!(small.operator_norm_l1() <= big.operator_norm_l1());
    }

    #[test]
    fn triangle_inequality((a, b) in pair_strategy()) {
        let sum = a.try_add(&b).unwrap();
        prop_assert!(sum.operator_norm_l1() <= a.operator_norm_l1() + b.operator_norm_l1());
        prop_assert_eq!(a.distance_l1(&b).unwrap(), a.try_sub(&b).unwrap().operator_norm_l1());
    }
}
