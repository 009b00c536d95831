use std::collections::BTreeMap;
use std::sync::Arc;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::dg::library;
use crate::perf::hom_complex;
use crate::perf::sample::{random_closed, random_module, random_perf};

fn ints(k: &Field, c: &[i64]) -> Vec<Scalar> {
    c.iter().map(|x| k.from_int(*x)).collect()
}

fn q_sqrt2() -> (Field, Field) {
    let q = Field::rationals();
    let s = q.extend("s", ints(&q, &[-2, 0, 1])).unwrap();
    (q, s)
}

fn f2_f4() -> (Field, Field) {
    let f2 = Field::prime_field(2).unwrap();
    let f4 = f2.extend("g", ints(&f2, &[1, 1, 1])).unwrap();
    (f2, f4)
}

fn alg(a: DGAlgebra) -> Algebra {
    Arc::new(a)
}

#[test]
fn extension_keeps_basis_and_dimension() {
    let (q, s) = q_sqrt2();
    let e = ExtensionMap::new(&q, &s).unwrap();
    assert_eq!(e.degree(), 2);
    let a = library::dual_numbers(&q);
    let ae = e.algebra(&a).unwrap();
    assert_eq!(ae.basis(), a.basis());
    assert_eq!(ae.field(), &s);
    assert_eq!(*ae, library::dual_numbers(&s));
    let (a, lambda, t) = library::auslander_triple(&q);
    let te = e.bimodule(&t).unwrap();
    assert_eq!(te.left(), &e.algebra(&a).unwrap());
    assert_eq!(te.right(), &e.algebra(&lambda).unwrap());
    assert_eq!(te.dim(), t.dim());
}

#[test]
fn non_prefix_towers_are_rejected() {
    let (q, s) = q_sqrt2();
    let i = q.extend("i", ints(&q, &[1, 0, 1])).unwrap();
    assert!(matches!(
        ExtensionMap::new(&s, &q),
        Err(BaseChangeError::NotAPrefixTower { .. })
    ));
    assert!(matches!(
        ExtensionMap::new(&s, &i),
        Err(BaseChangeError::NotAPrefixTower { .. })
    ));
    let (f2, _) = f2_f4();
    assert!(ExtensionMap::new(&q, &f2).is_err());
    let e = ExtensionMap::new(&q, &s).unwrap();
    assert!(e.algebra(&library::a2(&f2)).is_err());
}

#[test]
fn extending_twice_is_extending_once() {
    let (q, s) = q_sqrt2();
    let st = s.extend("t", ints(&s, &[-3, 0, 1])).unwrap();
    let (e1, e2) = (
        ExtensionMap::new(&q, &s).unwrap(),
        ExtensionMap::new(&s, &st).unwrap(),
    );
    let e12 = e1.then(&e2).unwrap();
    assert_eq!(e12.degree(), 4);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for a in [
        alg(library::auslander(&q)),
        alg(library::kronecker(&q)),
        alg(library::contractible_pair(&q)),
    ] {
        assert_eq!(
            e2.algebra(&e1.algebra(&a).unwrap()).unwrap(),
            e12.algebra(&a).unwrap()
        );
        let x = random_perf(&mut rng, &a, 3).unwrap();
        assert_eq!(
            e2.perf(&e1.perf(&x).unwrap()).unwrap(),
            e12.perf(&x).unwrap()
        );
        let m = random_module(&mut rng, &a, 2).unwrap();
        assert_eq!(
            e2.module(&e1.module(&m).unwrap()).unwrap(),
            e12.module(&m).unwrap()
        );
    }
}

#[test]
fn extension_commutes_with_constructors() {
    let (f2, f4) = f2_f4();
    let e = ExtensionMap::new(&f2, &f4).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for a in [
        alg(library::auslander(&f2)),
        alg(library::dual_numbers(&f2)),
        alg(library::kronecker(&f2)),
    ] {
        for _ in 0..6 {
            let x = random_perf(&mut rng, &a, 2).unwrap();
            let y = random_perf(&mut rng, &a, 2).unwrap();
            assert_eq!(e.perf(&x.shift(3)).unwrap(), e.perf(&x).unwrap().shift(3));
            assert_eq!(
                e.perf(&x.direct_sum(&y).unwrap()).unwrap(),
                e.perf(&x)
                    .unwrap()
                    .direct_sum(&e.perf(&y).unwrap())
                    .unwrap()
            );
            if let Some(f) = random_closed(&mut rng, &x, &y, 0).unwrap() {
                let fe = e.morphism(&f).unwrap();
                assert!(fe.is_closed());
                assert_eq!(
                    e.perf(&PerfObject::cone(&f).unwrap()).unwrap(),
                    PerfObject::cone(&fe).unwrap()
                );
            }
        }
        for v in a.vertex_idempotents() {
            let p = PerfObject::free(&a)
                .summand(&AlgMatrix::diagonal(&a, &[v]))
                .unwrap();
            let ae = e.algebra(&a).unwrap();
            let ve = e.vector(&p.idempotent().unwrap().entries()[0]).unwrap();
            assert_eq!(
                e.perf(&p).unwrap(),
                PerfObject::free(&ae)
                    .summand(&AlgMatrix::diagonal(&ae, &[ve]))
                    .unwrap()
            );
        }
    }
}

#[test]
fn extension_commutes_with_hom_complex() {
    let (q, s) = q_sqrt2();
    let e = ExtensionMap::new(&q, &s).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for a in [alg(library::auslander(&q)), alg(library::dual_numbers(&q))] {
        for _ in 0..5 {
            let x = random_perf(&mut rng, &a, 2).unwrap();
            let y = random_perf(&mut rng, &a, 2).unwrap();
            let h = hom_complex(&x, &y).unwrap().complex;
            let he = hom_complex(&e.perf(&x).unwrap(), &e.perf(&y).unwrap())
                .unwrap()
                .complex;
            assert_eq!(h.dims(), he.dims());
            for n in h.dims().keys() {
                assert_eq!(e.matrix(&h.differential(*n)).unwrap(), he.differential(*n));
            }
        }
    }
}

#[test]
fn restriction_multiplies_dimension() {
    let (q, s) = q_sqrt2();
    let e = ExtensionMap::new(&q, &s).unwrap();
    for a in [
        alg(library::dual_numbers(&q)),
        alg(library::a2(&q)),
        alg(library::contractible_pair(&q)),
    ] {
        let ae = e.algebra(&a).unwrap();
        let r = e.restrict(&DGModule::free(&ae), &a).unwrap();
        assert!(r.validate().passed());
        assert_eq!(r.dim(), 2 * a.dim());
        let free = DGModule::free(&a);
        let two = free.direct_sum(&free).unwrap();
        assert_eq!(r.graded_dims(), two.graded_dims());
        assert_eq!(r.cohomology().unwrap().dims, two.cohomology().unwrap().dims);
    }
    let (f2, f4) = f2_f4();
    let e = ExtensionMap::new(&f2, &f4).unwrap();
    let a = alg(library::kronecker(&f2));
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let m = random_module(&mut rng, &e.algebra(&a).unwrap(), 2).unwrap();
    let r = e.restrict(&m, &a).unwrap();
    assert!(r.validate().passed());
    assert_eq!(r.dim(), 2 * m.dim());
}

#[test]
fn hom_base_change_examples() {
    let (q, s) = q_sqrt2();
    let e = ExtensionMap::new(&q, &s).unwrap();
    let a = alg(library::dual_numbers(&q));
    let f = library::simple(&a, "1").unwrap();
    let rep = check_hom_base_change(&PerfObject::free(&a), &f, &e, (-2, 2)).unwrap();
    assert!(rep.agree);
    assert_eq!(
        rep.source_dims,
        BTreeMap::from([(-2, 0), (-1, 0), (0, 1), (1, 0), (2, 0)])
    );
    // cone of multiplication by ε
    let one = PerfObject::free(&a);
    let eps = AlgMatrix::diagonal(&a, &[a.element(&[("eps", q.one())]).unwrap()]);
    let c = PerfObject::cone(&Morphism::new(&one, &one, 0, eps).unwrap()).unwrap();
    for f in [
        library::simple(&a, "1").unwrap(),
        DGModule::free(&a),
        c.underlying().unwrap().module,
    ] {
        let rep = check_hom_base_change(&c, &f, &e, (-3, 3)).unwrap();
        assert!(rep.agree);
        assert!(rep.source_dims.values().any(|d| *d > 0));
    }
    let (f2, f4) = f2_f4();
    let e = ExtensionMap::new(&f2, &f4).unwrap();
    let b = alg(library::kronecker(&f2));
    let vs = b.vertex_idempotents();
    let p1 = PerfObject::projective(&b, &vs[0], 0).unwrap();
    let p2 = PerfObject::projective(&b, &vs[1], 0).unwrap();
    let rep = check_hom_base_change(&p1, &p2.underlying().unwrap().module, &e, (0, 0)).unwrap();
    assert_eq!((rep.source_dims[&0], rep.target_dims[&0]), (2, 2));
}

#[test]
fn adjunction_dims_on_dual_numbers() {
    let (q, s) = q_sqrt2();
    let e = ExtensionMap::new(&q, &s).unwrap();
    let a = alg(library::dual_numbers(&q));
    let ae = e.algebra(&a).unwrap();
    let opts = ResolveOptions::default();
    let rep = check_adjunction_dims(
        &library::simple(&a, "1").unwrap(),
        &library::simple(&ae, "1").unwrap(),
        &e,
        (0, 6),
        opts,
    )
    .unwrap();
    assert!(rep.agree);
    assert!(rep.extended_side.values().all(|d| *d == 2));
    let rep = check_adjunction_dims(&DGModule::free(&a), &DGModule::free(&ae), &e, (-1, 2), opts)
        .unwrap();
    assert!(rep.agree);
    assert_eq!(
        rep.restricted_side,
        BTreeMap::from([(-1, 0), (0, 4), (1, 0), (2, 0)])
    );
    let rep = check_adjunction_dims(
        &DGModule::zero(&a),
        &library::simple(&ae, "1").unwrap(),
        &e,
        (0, 6),
        opts,
    )
    .unwrap();
    assert!(rep.agree && rep.restricted_side.values().all(|d| *d == 0));
    let wrong = library::simple(&a, "1").unwrap();
    assert_eq!(
        check_adjunction_dims(&wrong, &wrong, &e, (0, 1), opts).unwrap_err(),
        BaseChangeError::AlgebraMismatch
    );
}

fn golden(k: &Field, which: usize) -> Algebra {
    alg(match which {
        0 => library::dual_numbers(k),
        1 => library::a2(k),
        2 => library::kronecker(k),
        _ => library::auslander(k),
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn hom_dims_survive_extension(seed in any::<u64>(), which in 0usize..4, finite in any::<bool>()) {
        let (k, kp) = if finite { f2_f4() } else { q_sqrt2() };
        let e = ExtensionMap::new(&k, &kp).unwrap();
        let a = golden(&k, which);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = random_perf(&mut rng, &a, 3).unwrap();
        let f = random_module(&mut rng, &a, 2).unwrap();
        let rep = check_hom_base_change(&x, &f, &e, (-3, 3)).unwrap();
        prop_assert!(rep.agree, "{:?}", rep);
    }

    #[test]
    fn restriction_dims_and_axioms(seed in any::<u64>(), which in 0usize..4) {
        let (k, kp) = f2_f4();
        let e = ExtensionMap::new(&k, &kp).unwrap();
        let a = golden(&k, which);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = random_module(&mut rng, &e.algebra(&a).unwrap(), 2).unwrap();
        let r = e.restrict(&m, &a).unwrap();
        prop_assert!(r.validate().passed());
        let doubled: BTreeMap<i32, usize> = m.graded_dims().into_iter().map(|(i, d)| (i, 2 * d)).collect();
        prop_assert_eq!(r.graded_dims(), doubled);
    }
}
