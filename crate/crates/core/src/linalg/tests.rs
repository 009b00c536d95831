use std::collections::BTreeMap;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;

fn q() -> Field {
    Field::rationals()
}

fn mat(k: &Field, rows: &[&[i64]]) -> Matrix {
    Matrix::from_rows(
        k,
        rows.iter()
            .map(|r| r.iter().map(|x| k.from_int(*x)).collect())
            .collect(),
    )
    .unwrap()
}

fn vec_of(k: &Field, xs: &[i64]) -> Vector {
    xs.iter().map(|x| k.from_int(*x)).collect()
}

#[test]
fn identity_has_full_rank_and_standard_image() {
    let k = q();
    let rki = Matrix::identity(&k, 3).rank_kernel_image();
    assert_eq!(rki.rank, 3);
    assert!(rki.kernel.is_empty());
    assert_eq!(
        rki.image,
        (0..3).map(|i| unit_vector(&k, 3, i)).collect::<Vec<_>>()
    );
}

#[test]
fn zero_matrix_kernel_is_everything() {
    let k = q();
    let rki = Matrix::zeros(&k, 2, 5).rank_kernel_image();
    assert_eq!(rki.rank, 0);
    assert_eq!(rki.kernel.len(), 5);
}

#[test]
fn proportional_rows_have_rank_one() {
    let k = q();
    let m = mat(&k, &[&[1, 2], &[2, 4]]);
    let rki = m.rank_kernel_image();
    assert_eq!(rki.rank, 1);
    assert_eq!(rki.kernel, vec![vec_of(&k, &[-2, 1])]);
}

#[test]
fn solve_examples() {
    let k = q();
    let rhs = vec_of(&k, &[3, -1, 7]);
    assert_eq!(
        Matrix::identity(&k, 3).solve(&rhs).unwrap(),
        Solution::Solved(rhs)
    );
    assert_eq!(
        mat(&k, &[&[1, 1]]).solve(&vec_of(&k, &[1])).unwrap(),
        Solution::Solved(vec_of(&k, &[1, 0]))
    );
    let m = mat(&k, &[&[1], &[1]]);
    let rhs = vec_of(&k, &[1, 2]);
    match m.solve(&rhs).unwrap() {
        Solution::NoSolution { certificate } => {
            assert!(is_zero_vec(&m.transpose().mul_vec(&certificate).unwrap()));
            assert!(!dot(&k, &certificate, &rhs).is_zero());
        }
        s => panic!("unexpected {s:?}"),
    }
    assert!(matches!(
        m.solve(&vec_of(&k, &[1])),
        Err(LinalgError::ShapeMismatch { .. })
    ));
}

fn two_term(k: &Field, d: Matrix) -> FiniteComplex {
    let dims = BTreeMap::from([(0, d.cols()), (1, d.rows())]);
    FiniteComplex::new(k, dims, BTreeMap::from([(0, d)])).unwrap()
}

#[test]
fn cohomology_examples() {
    let k = q();
    let h = two_term(&k, Matrix::identity(&k, 1)).cohomology().unwrap();
    assert!(h.is_acyclic());
    let h = two_term(&k, Matrix::zeros(&k, 1, 1)).cohomology().unwrap();
    assert_eq!((h.dim(0), h.dim(1)), (1, 1));
    let h = two_term(&k, mat(&k, &[&[1, 2], &[2, 4]]))
        .cohomology()
        .unwrap();
    assert_eq!((h.dim(0), h.dim(1)), (1, 1));
    assert_eq!(h.representatives[&0], vec![vec_of(&k, &[-2, 1])]);
}

#[test]
fn non_complex_is_rejected_with_degree() {
    let k = q();
    let one = Matrix::identity(&k, 1);
    let c = FiniteComplex::new(
        &k,
        BTreeMap::from([(3, 1), (4, 1), (5, 1)]),
        BTreeMap::from([(3, one.clone()), (4, one)]),
    )
    .unwrap();
    assert_eq!(
        c.cohomology().unwrap_err(),
        LinalgError::NotAComplex { degree: 3 }
    );
}

#[test]
fn class_coordinates_modulo_boundaries() {
    let k = q();
    // C^0 = k --(1,1)^T--> C^1 = k^2: H^1 is one-dimensional
    let c = two_term(&k, mat(&k, &[&[1], &[1]]));
    let h = c.cohomology().unwrap();
    assert_eq!(h.dim(1), 1);
    let rep = &h.representatives[&1][0];
    let shifted: Vector = rep
        .iter()
        .zip(vec_of(&k, &[5, 5]))
        .map(|(a, b)| k.add(a, &b))
        .collect();
    assert_eq!(h.class_coordinates(1, &shifted).unwrap(), vec![k.one()]);
    assert_eq!(
        h.class_coordinates(1, &vec_of(&k, &[1, 1])).unwrap(),
        vec![k.zero()]
    );
}

fn random_matrix<R: Rng>(k: &Field, rng: &mut R, rows: usize, cols: usize) -> Matrix {
    let mut m = Matrix::zeros(k, rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            m.set(i, j, k.random(rng, 2));
        }
    }
    m
}

/// Random complex C^0 → C^1 → C^2 with d_1 d_0 = 0 by construction.
fn random_complex<R: Rng>(k: &Field, rng: &mut R) -> FiniteComplex {
    let n: Vec<usize> = (0..3).map(|_| rng.gen_range(0..=4)).collect();
    let d0 = random_matrix(k, rng, n[1], n[0]);
    let left_kernel = d0.transpose().kernel();
    let p = Matrix::from_columns(k, n[1], &left_kernel).transpose();
    let p = if left_kernel.is_empty() {
        Matrix::zeros(k, 0, n[1])
    } else {
        p
    };
    let d1 = random_matrix(k, rng, n[2], p.rows()).mul(&p).unwrap();
    let dims = BTreeMap::from([(0, n[0]), (1, n[1]), (2, n[2])]);
    FiniteComplex::new(k, dims, BTreeMap::from([(0, d0), (1, d1)])).unwrap()
}

/// Brute-force dimension over F_p: count vectors of `ker` and `im` by enumeration.
fn enumerate_dims(k: &Field, c: &FiniteComplex, n: i32) -> usize {
    let p = k.characteristic() as usize;
    let all = |len: usize| -> Vec<Vector> {
        (0..p.pow(len as u32))
            .map(|mut idx| {
                (0..len)
                    .map(|_| {
                        let x = (idx % p) as i64;
                        idx /= p;
                        k.from_int(x)
                    })
                    .collect()
            })
            .collect()
    };
    let log_p = |count: usize| -> usize {
        let mut d = 0;
        let mut c = 1;
        while c < count {
            c *= p;
            d += 1;
        }
        d
    };
    let d_out = c.differential(n);
    let d_in = c.differential(n - 1);
    let kernel = all(c.dim(n))
        .into_iter()
        .filter(|v| is_zero_vec(&d_out.mul_vec(v).unwrap()))
        .count();
    let mut image: Vec<Vector> = all(c.dim(n - 1))
        .iter()
        .map(|v| d_in.mul_vec(v).unwrap())
        .collect();
    image.sort();
    image.dedup();
    log_p(kernel) - log_p(image.len())
}

#[test]
fn cohomology_matches_enumeration_over_small_prime_fields() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for p in [2, 3] {
        let k = Field::prime_field(p).unwrap();
        for _ in 0..150 {
            let c = random_complex(&k, &mut rng);
            let h = c.cohomology().unwrap();
            for n in 0..3 {
                assert_eq!(h.dim(n), enumerate_dims(&k, &c, n), "degree {n} over F{p}");
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn euler_characteristic_is_invariant(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let k = q();
        let c = random_complex(&k, &mut rng);
        let h = c.cohomology().unwrap();
        let chi_h: i64 = h.dims.iter().map(|(n, d)| if n % 2 == 0 { *d as i64 } else { -(*d as i64) }).sum();
        prop_assert_eq!(c.euler_characteristic(), chi_h);
    }

    #[test]
    fn solve_succeeds_iff_ranks_agree(seed in any::<u64>(), rows in 1usize..5, cols in 1usize..5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let k = Field::prime_field(3).unwrap();
        let m = random_matrix(&k, &mut rng, rows, cols);
        let rhs: Vector = (0..rows).map(|_| k.random(&mut rng, 2)).collect();
        let mut aug_rows: Vec<Vector> = (0..rows).map(|r| m.row(r).to_vec()).collect();
        for (r, x) in aug_rows.iter_mut().zip(&rhs) {
            r.push(x.clone());
        }
        let aug = Matrix::from_rows(&k, aug_rows).unwrap();
        match m.solve(&rhs).unwrap() {
            Solution::Solved(x) => {
                prop_assert_eq!(m.rank(), aug.rank());
                prop_assert_eq!(m.mul_vec(&x).unwrap(), rhs);
            }
            Solution::NoSolution { .. } => prop_assert!(m.rank() < aug.rank()),
        }
    }

    #[test]
    fn rank_plus_nullity(seed in any::<u64>(), rows in 0usize..6, cols in 0usize..6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let k = q();
        let m = random_matrix(&k, &mut rng, rows, cols);
        let rki = m.rank_kernel_image();
        prop_assert_eq!(rki.rank + rki.kernel.len(), cols);
        for v in &rki.kernel {
            prop_assert!(is_zero_vec(&m.mul_vec(v).unwrap()));
        }
    }
}
