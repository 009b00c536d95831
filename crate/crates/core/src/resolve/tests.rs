use std::collections::BTreeMap;
use std::sync::Arc;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::dg::{library, AlgebraBuilder, DGBimodule};
use crate::field::Field;
use crate::perf::sample::random_perf;

fn f2() -> Field {
    Field::prime_field(2).unwrap()
}

fn alg(a: crate::dg::DGAlgebra) -> Algebra {
    Arc::new(a)
}

/// `k[x, y]/(x, y)²`: the syzygies of `k` double in size at each step.
fn square_zero_plane(k: &Field) -> Algebra {
    let mut b = AlgebraBuilder::new(k)
        .basis("1", 0)
        .basis("x", 0)
        .basis("y", 0)
        .unit("1")
        .rule("1", "1", "1");
    for v in ["x", "y"] {
        b = b.rule("1", v, v).rule(v, "1", v);
    }
    alg(b.build().unwrap())
}

fn defaults() -> ResolveOptions {
    ResolveOptions::default()
}

#[test]
fn radical_modes() {
    let q = Field::rationals();
    assert_eq!(radical(&library::auslander(&q)).mode, RadicalMode::Arrows);
    assert_eq!(radical(&library::auslander(&q)).span.dim(), 3);
    let m2 = radical(&library::matrix2(&q));
    assert_eq!((m2.mode, m2.span.dim()), (RadicalMode::TraceForm, 0));
    assert_eq!(radical(&library::matrix2(&f2())).mode, RadicalMode::Zero);
    assert_eq!(radical(&library::dual_numbers(&f2())).span.dim(), 1);
}

#[test]
fn free_module_is_finite_of_length_zero() {
    let q = Field::rationals();
    for a in [
        alg(library::dual_numbers(&q)),
        alg(library::a2(&q)),
        alg(library::auslander(&q)),
    ] {
        let res = minimal_resolution(&DGModule::free(&a), defaults()).unwrap();
        assert_eq!(res.status(), ResolutionStatus::Finite { length: 0 });
        assert_eq!(res.total_cells(), a.vertex_idempotents().len());
        assert!(res.verify_augmentation().unwrap());
    }
}

#[test]
fn simple_over_dual_numbers_is_periodic() {
    for k in [Field::rationals(), f2()] {
        let a = alg(library::dual_numbers(&k));
        let s = library::simple(&a, "1").unwrap();
        let res = minimal_resolution(&s, defaults()).unwrap();
        assert_eq!(
            res.status(),
            ResolutionStatus::Periodic {
                period: 1,
                syzygy: 0
            }
        );
        let cert = res.periodicity().unwrap();
        assert!(verify_module_iso(
            &res.syzygies()[cert.from],
            &res.syzygies()[cert.to],
            cert.shift,
            &cert.iso
        ));
    }
}

#[test]
fn simple_top_of_a2_has_length_one() {
    let q = Field::rationals();
    let a = alg(library::a2(&q));
    let res = minimal_resolution(&library::simple(&a, "e2").unwrap(), defaults()).unwrap();
    assert_eq!(res.status(), ResolutionStatus::Finite { length: 1 });
    assert_eq!(res.total_cells(), 2);
    assert!(res.verify_augmentation().unwrap());
    let res1 = minimal_resolution(&library::simple(&a, "e1").unwrap(), defaults()).unwrap();
    assert_eq!(res1.status(), ResolutionStatus::Finite { length: 0 });
}

#[test]
fn ext_of_simple_over_dual_numbers() {
    for k in [Field::rationals(), f2()] {
        let a = alg(library::dual_numbers(&k));
        let s = library::simple(&a, "1").unwrap();
        let report = ext_dims(&s, &s, (0, 10), defaults()).unwrap();
        assert!(report.dims.values().all(|d| *d == 1));
        assert_eq!(report.dims.len(), 11);
        assert!(report.guaranteed_up_to.unwrap() >= 10);
        let below = ext_dims(&s, &s, (-3, -1), defaults()).unwrap();
        assert!(below.dims.values().all(|d| *d == 0));
    }
}

#[test]
fn ext_from_free_is_cohomology() {
    let q = Field::rationals();
    let a = alg(library::contractible_pair(&q));
    let m = DGModule::free(&a);
    let report = ext_dims(&m, &m, (-2, 2), defaults()).unwrap();
    let h = m.cohomology().unwrap();
    for (i, d) in &report.dims {
        assert_eq!(*d, h.dim(*i));
    }
    let b = alg(library::auslander(&q));
    let n = library::simple(&b, "e2")
        .unwrap()
        .direct_sum(&library::corner(&b, "e1").unwrap())
        .unwrap();
    let report = ext_dims(&DGModule::free(&b), &n, (-1, 1), defaults()).unwrap();
    assert_eq!(report.dims, BTreeMap::from([(-1, 0), (0, 4), (1, 0)]));
}

#[test]
fn kronecker_ext_between_simples() {
    for k in [Field::rationals(), f2()] {
        let a = alg(library::kronecker(&k));
        let s1 = library::simple(&a, "e1").unwrap();
        let s2 = library::simple(&a, "e2").unwrap();
        let report = ext_dims(&s2, &s1, (-2, 4), defaults()).unwrap();
        let expected: BTreeMap<i32, usize> =
            (-2..=4).map(|i| (i, if i == 1 { 2 } else { 0 })).collect();
        assert_eq!(report.dims, expected);
        assert_eq!(report.guaranteed_up_to, None);
        let back = ext_dims(&s1, &s2, (-2, 4), defaults()).unwrap();
        assert!(back.dims.values().all(|d| *d == 0));
    }
}

#[test]
fn wild_local_algebra_truncates() {
    let q = Field::rationals();
    let a = square_zero_plane(&q);
    let s = library::simple(&a, "1").unwrap();
    let res = minimal_resolution(
        &s,
        ResolveOptions {
            depth_bound: 3,
            size_bound: 2000,
        },
    )
    .unwrap();
    assert_eq!(res.status(), ResolutionStatus::Truncated { depth: 3 });
    // cells grow 1, 2, 4
    assert_eq!(res.total_cells(), 7);
    let err = ext_dims(
        &s,
        &s,
        (0, 8),
        ResolveOptions {
            depth_bound: 3,
            size_bound: 2000,
        },
    )
    .unwrap_err();
    assert!(matches!(
        err,
        ResolveError::WindowNotGuaranteed { requested: 8, .. }
    ));
    let ok = ext_dims(
        &s,
        &s,
        (0, 1),
        ResolveOptions {
            depth_bound: 3,
            size_bound: 2000,
        },
    )
    .unwrap();
    assert_eq!(ok.dims, BTreeMap::from([(0, 1), (1, 2)]));
    let big = minimal_resolution(
        &s,
        ResolveOptions {
            depth_bound: 24,
            size_bound: 10,
        },
    );
    assert!(matches!(
        big,
        Err(ResolveError::SizeBoundExceeded { bound: 10, .. })
    ));
}

#[test]
fn tensor_with_free_object_is_the_bimodule() {
    let q = Field::rationals();
    let (a, lambda, t) = library::auslander_triple(&q);
    let m = derived_tensor(&PerfObject::free(&a), &t).unwrap();
    assert_eq!(m.dim(), 3);
    assert_eq!(*m.algebra(), lambda);
    assert!(m.validate().passed());
    let b = alg(library::a2(&q));
    let d = DGBimodule::diagonal(&b);
    let m = derived_tensor(&PerfObject::free(&b), &d).unwrap();
    assert_eq!(m.graded_dims(), DGModule::free(&b).graded_dims());
}

#[test]
fn tensor_commutes_with_shift_and_sum() {
    let k = f2();
    let (a, _, t) = library::auslander_triple(&k);
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..5 {
        let x = random_perf(&mut rng, &a, 3).unwrap();
        let y = random_perf(&mut rng, &a, 2).unwrap();
        assert_eq!(
            derived_tensor(&x.shift(1), &t).unwrap(),
            derived_tensor(&x, &t).unwrap().shift(1)
        );
        let sum = derived_tensor(&x.direct_sum(&y).unwrap(), &t).unwrap();
        let parts = derived_tensor(&x, &t)
            .unwrap()
            .direct_sum(&derived_tensor(&y, &t).unwrap())
            .unwrap();
        assert_eq!(sum.graded_dims(), parts.graded_dims());
        assert_eq!(
            sum.cohomology().unwrap().dims,
            parts.cohomology().unwrap().dims
        );
    }
}

#[test]
fn action_checks() {
    let q = Field::rationals();
    let b = alg(library::dual_numbers(&q));
    let report =
        action_quasi_iso_check(&b, &DGBimodule::diagonal(&b), (-2, 2), defaults()).unwrap();
    assert!(report.passed);
    let (a, _, t) = library::auslander_triple(&q);
    let report = action_quasi_iso_check(&a, &t, (0, 4), defaults()).unwrap();
    assert!(report.passed);
    assert_eq!(
        report.degrees[0],
        DegreeCheck {
            degree: 0,
            algebra_dim: 2,
            ext_dim: 2,
            rank: 2
        }
    );
    let (a, _, t) = library::row_triple(&q);
    assert!(
        action_quasi_iso_check(&a, &t, (0, 3), defaults())
            .unwrap()
            .passed
    );
    let (a, _, t) = library::row_triple_split(&q);
    let report = action_quasi_iso_check(&a, &t, (0, 3), defaults()).unwrap();
    assert!(!report.passed);
    assert_eq!(
        (report.degrees[0].algebra_dim, report.degrees[0].ext_dim),
        (2, 1)
    );
}

#[test]
fn smoothness_examples() {
    let q = Field::rationals();
    let k = alg(library::ground(&q));
    assert_eq!(
        smoothness_probe(&k, defaults()).unwrap().verdict,
        SmoothnessVerdict::Smooth {
            length: 0,
            cells: 1
        }
    );
    let a2 = alg(library::a2(&q));
    let s = smoothness_probe(&a2, defaults()).unwrap();
    assert!(matches!(
        s.verdict,
        SmoothnessVerdict::Smooth { length: 1, .. }
    ));
    assert!(s.resolution.verify_augmentation().unwrap());
    let dual = alg(library::dual_numbers(&q));
    let s = smoothness_probe(&dual, defaults()).unwrap();
    assert!(
        matches!(s.verdict, SmoothnessVerdict::NotSmooth { period: 2, .. }),
        "{:?}",
        s.verdict
    );
    let cert = s.resolution.periodicity().unwrap();
    assert!(verify_module_iso(
        &s.resolution.syzygies()[cert.from],
        &s.resolution.syzygies()[cert.to],
        cert.shift,
        &cert.iso
    ));
    let dual2 = alg(library::dual_numbers(&f2()));
    assert!(matches!(
        smoothness_probe(&dual2, defaults()).unwrap().verdict,
        SmoothnessVerdict::NotSmooth { period: 1, .. }
    ));
}

fn algebras(k: &Field) -> Vec<Algebra> {
    vec![
        alg(library::dual_numbers(k)),
        alg(library::a2(k)),
        alg(library::kronecker(k)),
        alg(library::auslander(k)),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn resolution_ext_agrees_with_perfect_hom(seed in any::<u64>(), which in 0usize..4) {
        let k = f2();
        let a = algebras(&k).swap_remove(which);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = random_perf(&mut rng, &a, 2).unwrap();
        let y = random_perf(&mut rng, &a, 2).unwrap();
        let m = x.underlying().unwrap().module;
        let n = y.underlying().unwrap().module;
        let report = ext_dims(&m, &n, (-3, 3), defaults()).unwrap();
        let direct = x.ext_dims(&y).unwrap();
        for (i, d) in &report.dims {
            prop_assert_eq!(*d, direct.get(i).copied().unwrap_or(0), "degree {}", i);
        }
    }

    #[test]
    fn finite_resolutions_are_quasi_isomorphic(seed in any::<u64>(), which in 0usize..4) {
        let k = f2();
        let a = algebras(&k).swap_remove(which);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = crate::perf::sample::random_module(&mut rng, &a, 2).unwrap();
        let res = minimal_resolution(&m, ResolveOptions { depth_bound: 6, size_bound: 2000 }).unwrap();
        if matches!(res.status(), ResolutionStatus::Finite { .. }) {
            prop_assert!(res.verify_augmentation().unwrap());
        }
        if let Some(c) = res.periodicity() {
            prop_assert!(verify_module_iso(&res.syzygies()[c.from], &res.syzygies()[c.to], c.shift, &c.iso));
        }
    }
}
