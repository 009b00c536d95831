use std::collections::BTreeMap;
use std::sync::Arc;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::sample::{random_closed, random_perf};
use super::*;
use crate::dg::library;
use crate::dg::module_hom_complex;
use crate::field::Field;

fn f2() -> Field {
    Field::prime_field(2).unwrap()
}

fn algebras(k: &Field) -> Vec<Algebra> {
    vec![
        Arc::new(library::dual_numbers(k)),
        Arc::new(library::a2(k)),
        Arc::new(library::kronecker(k)),
        Arc::new(library::auslander(k)),
        Arc::new(library::contractible_pair(k)),
    ]
}

fn oracle_dims(x: &PerfObject, y: &PerfObject) -> BTreeMap<i32, usize> {
    let ux = x.underlying().unwrap().module;
    let uy = y.underlying().unwrap().module;
    module_hom_complex(&ux, &uy)
        .unwrap()
        .complex
        .cohomology()
        .unwrap()
        .support()
}

fn vertex(a: &Algebra, name: &str, shift: i32) -> PerfObject {
    let e = a.basis_element(a.basis().index_of(name).unwrap());
    PerfObject::projective(a, &e, shift).unwrap()
}

#[test]
fn free_endomorphisms_are_the_algebra() {
    let k = Field::rationals();
    let a: Algebra = Arc::new(library::dual_numbers(&k));
    let x = PerfObject::free(&a);
    assert_eq!(x.ext_dims(&x).unwrap(), BTreeMap::from([(0, 2)]));
}

#[test]
fn kronecker_projectives() {
    let k = Field::rationals();
    let a: Algebra = Arc::new(library::kronecker(&k));
    let (p1, p2) = (vertex(&a, "e1", 0), vertex(&a, "e2", 0));
    assert_eq!(p1.ext_dims(&p2).unwrap(), BTreeMap::from([(0, 2)]));
    assert!(p2.ext_dims(&p1).unwrap().is_empty());
    assert_eq!(p1.ext_dims(&p1).unwrap(), BTreeMap::from([(0, 1)]));
}

#[test]
fn shift_round_trip_and_reindexing() {
    let k = f2();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for a in algebras(&k) {
        let x = random_perf(&mut rng, &a, 3).unwrap();
        let y = random_perf(&mut rng, &a, 3).unwrap();
        assert_eq!(x.shift(1).shift(-1), x);
        let base = x.ext_dims(&y).unwrap();
        let shifted: BTreeMap<i32, usize> = base.iter().map(|(p, d)| (p + 1, *d)).collect();
        assert_eq!(x.shift(1).ext_dims(&y).unwrap(), shifted);
    }
}

#[test]
fn twist_validation() {
    let k = Field::rationals();
    let a: Algebra = Arc::new(library::dual_numbers(&k));
    let one = a.unit().clone();
    let eps = a.element(&[("eps", k.one())]).unwrap();
    let mut t = AlgMatrix::zeros(&a, 3, 3);
    t.set(1, 0, one.clone());
    t.set(2, 1, one.clone());
    assert_eq!(
        TwistedComplex::new(&a, vec![2, 1, 0], t.clone()),
        Err(PerfError::MaurerCartan { row: 2, col: 0 })
    );
    t.set(2, 1, eps.clone());
    t.set(1, 0, eps.clone());
    assert!(TwistedComplex::new(&a, vec![2, 1, 0], t).is_ok());
    let mut up = AlgMatrix::zeros(&a, 2, 2);
    up.set(0, 1, eps.clone());
    assert_eq!(
        TwistedComplex::new(&a, vec![0, 1], up),
        Err(PerfError::NotTriangular { row: 0, col: 1 })
    );
    let mut wrong = AlgMatrix::zeros(&a, 2, 2);
    wrong.set(1, 0, eps);
    assert_eq!(
        TwistedComplex::new(&a, vec![0, 0], wrong),
        Err(PerfError::WrongDegree { row: 1, col: 0 })
    );
}

#[test]
fn cone_of_identity_is_contractible() {
    let k = f2();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for a in algebras(&k) {
        let x = random_perf(&mut rng, &a, 3).unwrap();
        assert!(PerfObject::is_homotopy_iso(&x.identity()).unwrap().iso);
        let c = PerfObject::cone(&x.identity()).unwrap();
        assert!(c
            .underlying()
            .unwrap()
            .module
            .cohomology()
            .unwrap()
            .is_acyclic());
    }
}

#[test]
fn zero_map_is_not_an_iso() {
    let k = Field::rationals();
    let a: Algebra = Arc::new(library::a2(&k));
    let x = PerfObject::free(&a);
    let report = PerfObject::is_homotopy_iso(&Morphism::zero(&x, &x, 0)).unwrap();
    assert!(!report.iso);
}

#[test]
fn cone_rejects_open_or_shifted_maps() {
    let k = Field::rationals();
    let a: Algebra = Arc::new(library::contractible_pair(&k));
    let x = PerfObject::free(&a);
    let mut m = AlgMatrix::zeros(&a, 1, 1);
    m.set(0, 0, a.element(&[("u", k.one())]).unwrap());
    let open = Morphism::new(&x, &x, -1, m).unwrap();
    assert!(!open.is_closed());
    assert_eq!(
        PerfObject::cone(&open),
        Err(PerfError::WrongDegree { row: 0, col: 0 })
    );
    let mut m0 = AlgMatrix::zeros(&a, 1, 1);
    m0.set(0, 0, a.element(&[("t", k.one())]).unwrap());
    let closed = Morphism::new(&x, &x, 0, m0).unwrap();
    assert!(closed.is_closed());
    let shifted = Morphism { degree: 0, ..open };
    assert!(Morphism::new(&x, &x, 0, shifted.matrix).is_err());
}

#[test]
fn summand_must_sit_inside_projector() {
    let k = Field::rationals();
    let a: Algebra = Arc::new(library::a2(&k));
    let p1 = vertex(&a, "e1", 0);
    let e2 = AlgMatrix::diagonal(&a, &[a.element(&[("e2", k.one())]).unwrap()]);
    assert_eq!(p1.summand(&e2), Err(PerfError::NotInSummand));
}

#[test]
fn module_hom_matches_perf_hom_on_underlying() {
    let k = f2();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for a in algebras(&k) {
        for _ in 0..3 {
            let x = random_perf(&mut rng, &a, 3).unwrap();
            let y = random_perf(&mut rng, &a, 3).unwrap();
            let uy = y.underlying().unwrap().module;
            let h = hom_into_module(&x, &uy)
                .unwrap()
                .complex
                .cohomology()
                .unwrap()
                .support();
            assert_eq!(h, x.ext_dims(&y).unwrap());
        }
    }
}

#[test]
fn composition_of_closed_maps_is_closed() {
    let k = Field::rationals();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for a in algebras(&k) {
        let x = random_perf(&mut rng, &a, 2).unwrap();
        let y = random_perf(&mut rng, &a, 2).unwrap();
        let z = random_perf(&mut rng, &a, 2).unwrap();
        for p in -1..=1 {
            let (Some(f), Some(g)) = (
                random_closed(&mut rng, &x, &y, p).unwrap(),
                random_closed(&mut rng, &y, &z, -p).unwrap(),
            ) else {
                continue;
            };
            assert!(g.compose(&f).unwrap().is_closed());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn hom_agrees_with_raw_module_oracle(seed in any::<u64>(), which in 0usize..5, over_q in any::<bool>()) {
        let k = if over_q { Field::rationals() } else { f2() };
        let a = algebras(&k).swap_remove(which);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = random_perf(&mut rng, &a, 3).unwrap();
        let y = random_perf(&mut rng, &a, 3).unwrap();
        let h = hom_complex(&x, &y).unwrap();
        prop_assert!(h.complex.validate().is_ok());
        prop_assert_eq!(h.complex.cohomology().unwrap().support(), oracle_dims(&x, &y));
    }

    #[test]
    fn cocycles_are_closed(seed in any::<u64>(), which in 0usize..5) {
        let k = f2();
        let a = algebras(&k).swap_remove(which);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = random_perf(&mut rng, &a, 3).unwrap();
        let y = random_perf(&mut rng, &a, 3).unwrap();
        let h = hom_complex(&x, &y).unwrap();
        for p in h.complex.dims().keys() {
            for f in h.cocycles(*p) {
                prop_assert!(f.is_closed());
                prop_assert_eq!(h.coordinates(&f).map(|v| v.len()), Some(h.complex.dim(*p)));
            }
        }
    }
}

#[test]
fn sampler_produces_nontrivial_twists() {
    let k = f2();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let a: Algebra = Arc::new(library::kronecker(&k));
    let twisted = (0..20)
        .filter(|_| {
            !random_perf(&mut rng, &a, 3)
                .unwrap()
                .complex()
                .twist()
                .is_zero()
        })
        .count();
    assert!(twisted > 0);
}
