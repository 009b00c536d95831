use std::collections::BTreeMap;
use std::sync::Arc;

use dgw_core::basechange::{check_hom_base_change, ExtensionMap};
use dgw_core::checkers::{check_resolution_triple, CheckOptions, CheckReport};
use dgw_core::dg::{library, Algebra};
use dgw_core::field::Field;
use dgw_core::perf::sample::{random_closed, random_module, random_perf};
use dgw_core::perf::PerfObject;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn f2_f4() -> (Field, Field) {
    let f2 = Field::prime_field(2).unwrap();
    let f4 = f2.extend("g", vec![f2.one(), f2.one(), f2.one()]).unwrap();
    (f2, f4)
}

fn algebra(k: &Field, which: usize) -> Algebra {
    Arc::new(match which {
        0 => library::dual_numbers(k),
        1 => library::a2(k),
        2 => library::kronecker(k),
        3 => library::auslander(k),
        _ => library::matrix2(k),
    })
}

fn euler(dims: &BTreeMap<i32, usize>) -> i64 {
    dims.iter()
        .map(|(p, d)| if p % 2 == 0 { *d as i64 } else { -(*d as i64) })
        .sum()
}

#[test]
fn hom_out_of_a_shift_moves_up() {
    let k = Field::rationals();
    let a = algebra(&k, 1);
    let x = PerfObject::free(&a);
    // Hom(X[1], Y) = Hom(X, Y)[-1]
    assert_eq!(x.shift(1).ext_dims(&x).unwrap(), BTreeMap::from([(1, 3)]));
    assert_eq!(x.ext_dims(&x.shift(1)).unwrap(), BTreeMap::from([(-1, 3)]));
}

#[test]
fn extensions_compose() {
    let q = Field::rationals();
    let qs = q
        .extend("s", vec![q.from_int(-2), q.zero(), q.one()])
        .unwrap();
    let qsi = qs.extend("i", vec![qs.one(), qs.zero(), qs.one()]).unwrap();
    let e = ExtensionMap::new(&q, &qs)
        .unwrap()
        .then(&ExtensionMap::new(&qs, &qsi).unwrap())
        .unwrap();
    assert_eq!(e.degree(), 4);
    let a = algebra(&q, 0);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..10 {
        let x = random_perf(&mut rng, &a, 3).unwrap();
        let f = random_module(&mut rng, &a, 3).unwrap();
        assert!(check_hom_base_change(&x, &f, &e, (-6, 6)).unwrap().agree);
    }
}

#[test]
fn reports_survive_serialization() {
    let (a, b, t) = library::auslander_triple(&Field::rationals());
    let r = check_resolution_triple(&a, &b, &t, &CheckOptions::default()).unwrap();
    let back: CheckReport = serde_json::from_str(&serde_json::to_string(&r).unwrap()).unwrap();
    assert_eq!(back, r);
    back.reverify().unwrap();
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn ext_between_perfect_objects_is_field_independent(seed in any::<u64>(), which in 0usize..5) {
        let (f2, f4) = f2_f4();
        let e = ExtensionMap::new(&f2, &f4).unwrap();
        let a = algebra(&f2, which);
        let a4 = e.algebra(&a).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = random_perf(&mut rng, &a, 3).unwrap();
        let y = random_perf(&mut rng, &a, 3).unwrap();
        let (x4, y4) = (e.perf_over(&x, &a4).unwrap(), e.perf_over(&y, &a4).unwrap());
        prop_assert_eq!(x.ext_dims(&y).unwrap(), x4.ext_dims(&y4).unwrap());
    }

    #[test]
    fn euler_characteristic_is_additive_on_cones(seed in any::<u64>(), which in 0usize..5) {
        let k = Field::rationals();
        let a = algebra(&k, which);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = random_perf(&mut rng, &a, 2).unwrap();
        let z = random_perf(&mut rng, &a, 2).unwrap();
        let y = random_perf(&mut rng, &a, 2).unwrap();
        let Some(f) = random_closed(&mut rng, &x, &z, 0).unwrap() else { return Ok(()) };
        let c = PerfObject::cone(&f).unwrap();
        let chi = |s: &PerfObject| euler(&s.ext_dims(&y).unwrap());
        prop_assert_eq!(chi(&c), chi(&z) - chi(&x));
    }

    #[test]
    fn self_ext_is_shift_invariant(seed in any::<u64>(), which in 0usize..5, n in -3i32..=3) {
        let k = Field::prime_field(3).unwrap();
        let a = algebra(&k, which);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = random_perf(&mut rng, &a, 3).unwrap();
        prop_assert_eq!(x.shift(n).ext_dims(&x.shift(n)).unwrap(), x.ext_dims(&x).unwrap());
    }
}
