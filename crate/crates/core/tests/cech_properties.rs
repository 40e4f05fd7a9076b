use std::collections::BTreeMap;

use num_bigint::BigInt;
use prequant_core::cech::{
    curvature, dg_lie_bracket, dg_lie_differential, dglie_membership, flat_connection, flat_moduli, form_levels,
    holonomy_along, is_integral, prequantize_torus, r3_corpus, random_gauge, same_mod_z, winding_connection,
    DeligneCochain, GaugeBand, Nerve, NerveRef, SemidirectElement,
};
use prequant_core::exterior::random::{random_field, random_form, Band};
use prequant_core::exterior::{Chart, MultiVector};
use prequant_core::Scalar;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SMALL: Band = Band {
    max_poly: 1,
    max_wave: 1,
    max_terms: 2,
};

fn random_cochain(rng: &mut ChaCha8Rng, nerve: &NerveRef, level: usize, degree: usize, ints: bool) -> DeligneCochain {
    let mut c = DeligneCochain::zero(nerve.clone(), level, degree);
    for q in form_levels(level, degree) {
        for (i, s) in nerve.simplices(q).iter().enumerate() {
            if rng.gen_bool(0.5) {
                c.set(q, i, random_form(rng, &s.chart, degree - 1 - q, SMALL)).unwrap();
            }
        }
    }
    if ints {
        for i in 0..nerve.count(degree) {
            if rng.gen_bool(0.3) {
                c.set_int(i, BigInt::from(rng.gen_range(-2..=2))).unwrap();
            }
        }
    }
    c
}

fn nerve_for(pick: usize) -> NerveRef {
    if pick % 2 == 0 {
        Nerve::circle()
    } else {
        Nerve::torus(2).unwrap()
    }
}

fn flat_sample(rng: &mut ChaCha8Rng, nerve: &NerveRef) -> DeligneCochain {
    let pool = [
        Scalar::zero(),
        Scalar::ratio(1, 3),
        Scalar::ratio(1, 4),
        Scalar::ratio(-2, 5),
        Scalar::ratio(7, 6),
    ];
    let d = nerve.dim();
    let pot: Vec<Scalar> = (0..d).map(|_| pool.choose(rng).unwrap().clone()).collect();
    let wind: Vec<Scalar> = (0..d).map(|_| pool.choose(rng).unwrap().clone()).collect();
    let c = flat_connection(nerve, &pot, &BTreeMap::new())
        .unwrap()
        .checked_add(&winding_connection(nerve, &wind).unwrap())
        .unwrap();
    let g = random_gauge(rng, nerve, GaugeBand { poly: 1, wave: 1 }).unwrap();
    c.checked_add(&g.total_differential().unwrap()).unwrap()
}

fn random_element(rng: &mut ChaCha8Rng, nerve: &NerveRef, level: usize, degree: i64) -> SemidirectElement {
    let chart = nerve.global().clone();
    let v = if degree == 0 {
        random_field(rng, &chart, SMALL)
    } else {
        MultiVector::zero(chart, 1)
    };
    let b = random_cochain(rng, nerve, level, (level as i64 - degree) as usize, false);
    SemidirectElement::new(degree, v, b).unwrap()
}

fn koszul(a: i64, b: i64) -> i64 {
    if (a * b) % 2 == 0 {
        1
    } else {
        -1
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn total_differential_squares_to_zero(seed: u64, pick: usize, level in 1usize..=3, degree in 0usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let nerve = nerve_for(pick);
        let c = random_cochain(&mut rng, &nerve, level, degree, true);
        prop_assert!(c.total_differential().unwrap().total_differential().unwrap().is_zero());
    }

    #[test]
    fn curvature_and_integrality_survive_gauge(seed: u64, k in -3i64..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t2 = Nerve::torus(2).unwrap();
        let c = prequantize_torus(&BigInt::from(k)).unwrap();
        let b = random_gauge(&mut rng, &t2, GaugeBand { poly: 1, wave: 1 }).unwrap();
        let shifted = c.checked_add(&b.total_differential().unwrap()).unwrap();
        let f = curvature(&shifted).unwrap();
        prop_assert_eq!(&f, &curvature(&c).unwrap());
        prop_assert!(is_integral(&f).unwrap().integral);
    }

    #[test]
    fn holonomy_is_gauge_invariant_and_additive(seed: u64, pick: usize) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let nerve = nerve_for(pick);
        let c1 = flat_sample(&mut rng, &nerve);
        let c2 = flat_sample(&mut rng, &nerve);
        let g = random_gauge(&mut rng, &nerve, GaugeBand { poly: 2, wave: 1 }).unwrap();
        let sum = c1.checked_add(&c2).unwrap();
        let moved = c1.checked_add(&g.total_differential().unwrap()).unwrap();
        for axis in 0..nerve.dim() {
            let (h1, h2) = (holonomy_along(&c1, axis).unwrap().value, holonomy_along(&c2, axis).unwrap().value);
            let hs = holonomy_along(&sum, axis).unwrap().value;
            prop_assert!(same_mod_z(&hs, &(&h1 + &h2)));
            prop_assert!(same_mod_z(&holonomy_along(&moved, axis).unwrap().value, &h1));
        }
    }

    #[test]
    fn dg_lie_jacobi_and_leibniz(seed: u64, pick: usize, dx in 0i64..2, dy in 0i64..2, dz in 0i64..2) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let nerve = if pick % 2 == 0 { Nerve::circle() } else { Nerve::trivial(Chart::euclidean(3)) };
        let level = 2;
        let x = random_element(&mut rng, &nerve, level, dx);
        let y = random_element(&mut rng, &nerve, level, dy);
        let z = random_element(&mut rng, &nerve, level, dz);
        let br = |a: &SemidirectElement, b: &SemidirectElement| dg_lie_bracket(a, b).unwrap();
        let lhs = br(&x, &br(&y, &z));
        let rhs = br(&br(&x, &y), &z).checked_add(&br(&y, &br(&x, &z)).scale_int(koszul(dx, dy))).unwrap();
        prop_assert_eq!(lhs, rhs);
        let swapped = br(&y, &x).scale_int(-koszul(dx, dy));
        prop_assert_eq!(br(&x, &y), swapped);
        let d = |a: &SemidirectElement| dg_lie_differential(a).unwrap();
        let lhs = d(&br(&x, &y));
        let sx = if dx % 2 == 0 { 1 } else { -1 };
        let rhs = br(&d(&x), &y).checked_add(&br(&x, &d(&y)).scale_int(sx)).unwrap();
        prop_assert_eq!(lhs, rhs);
        prop_assert!(d(&d(&x)).is_zero());
    }
}

#[test]
fn members_close_under_the_bracket() {
    let (a, members) = r3_corpus().unwrap();
    for x in &members {
        for y in &members {
            let r = dglie_membership(&a, &dg_lie_bracket(x, y).unwrap()).unwrap();
            assert!(r.member, "[{x}, {y}] leaves the model: {}", r.residual.describe());
        }
    }
}

#[test]
fn torus_flat_moduli() {
    let r = flat_moduli(&Nerve::torus(2).unwrap(), 1, GaugeBand { poly: 1, wave: 1 }, 5, 11).unwrap();
    assert!(r.holonomy_gauge_invariant);
    assert!(r.classification_matches_holonomy, "{:?}", r.pairs);
    assert_eq!(r.automorphism_dimension, 1);
    assert!(r.automorphisms_are_constants);
}
