//! Small algebras and bimodules used throughout the examples and tests.
//!
//! Path algebras compose left to right: `a: 1 → 2` satisfies `e1 a = a = a e2`.

use std::sync::Arc;

use super::{
    to_sparse, Algebra, AlgebraBuilder, DGAlgebra, DGBimodule, DGModule, DgError, GradedBasis,
};
use crate::field::Field;

fn built(b: AlgebraBuilder) -> DGAlgebra {
    b.build().expect("library algebra is well-formed")
}

/// The ground field as a one-dimensional algebra.
pub fn ground(k: &Field) -> DGAlgebra {
    built(
        AlgebraBuilder::new(k)
            .basis("1", 0)
            .unit("1")
            .rule("1", "1", "1"),
    )
}

/// `k[ε]/ε²` with `ε` in degree zero.
pub fn dual_numbers(k: &Field) -> DGAlgebra {
    built(
        AlgebraBuilder::new(k)
            .basis("1", 0)
            .basis("eps", 0)
            .unit("1")
            .rule("1", "1", "1")
            .rule("1", "eps", "eps")
            .rule("eps", "1", "eps"),
    )
}

fn path_algebra(k: &Field, vertices: &[&str], arrows: &[(&str, &str, &str)]) -> DGAlgebra {
    let mut b = AlgebraBuilder::new(k);
    for v in vertices {
        b = b.basis(v, 0);
    }
    for (name, _, _) in arrows {
        b = b.basis(name, 0);
    }
    for v in vertices {
        b = b.unit(v).rule(v, v, v);
    }
    for (name, s, t) in arrows {
        b = b.rule(s, name, name).rule(name, t, name);
    }
    built(b)
}

/// The `A₂` quiver `α: 2 → 1`, basis `{e1, e2, alpha}`.
pub fn a2(k: &Field) -> DGAlgebra {
    path_algebra(k, &["e1", "e2"], &[("alpha", "e2", "e1")])
}

/// The Kronecker quiver with arrows `alpha, beta: 2 → 1`.
pub fn kronecker(k: &Field) -> DGAlgebra {
    path_algebra(
        k,
        &["e1", "e2"],
        &[("alpha", "e2", "e1"), ("beta", "e2", "e1")],
    )
}

/// `End(R ⊕ k)` for `R` the dual numbers: arrows `a: 1 → 2`, `b: 2 → 1`,
/// relation `ba = 0`, basis `{e1, e2, a, b, ab}`.
pub fn auslander(k: &Field) -> DGAlgebra {
    let mut b = AlgebraBuilder::new(k)
        .basis("e1", 0)
        .basis("e2", 0)
        .basis("a", 0)
        .basis("b", 0)
        .basis("ab", 0)
        .unit("e1")
        .unit("e2");
    b = b.rule("e1", "e1", "e1").rule("e2", "e2", "e2");
    for (x, s, t) in [("a", "e1", "e2"), ("b", "e2", "e1"), ("ab", "e1", "e1")] {
        b = b.rule(s, x, x).rule(x, t, x);
    }
    built(b.rule("a", "b", "ab"))
}

/// 2×2 matrices with matrix units `e11, e12, e21, e22`.
pub fn matrix2(k: &Field) -> DGAlgebra {
    let mut b = AlgebraBuilder::new(k);
    let names = ["e11", "e12", "e21", "e22"];
    for n in names {
        b = b.basis(n, 0);
    }
    b = b.unit("e11").unit("e22");
    for i in 1..=2 {
        for j in 1..=2 {
            for l in 1..=2 {
                b = b.rule(
                    &format!("e{i}{j}"),
                    &format!("e{j}{l}"),
                    &format!("e{i}{l}"),
                );
            }
        }
    }
    built(b)
}

/// `k × k` with orthogonal idempotents `e1, e2`.
pub fn split_pair(k: &Field) -> DGAlgebra {
    built(
        AlgebraBuilder::new(k)
            .basis("e1", 0)
            .basis("e2", 0)
            .unit("e1")
            .unit("e2")
            .rule("e1", "e1", "e1")
            .rule("e2", "e2", "e2"),
    )
}

/// Basis `{1, t, u}` with `|t| = 0`, `|u| = -1`, `d(u) = t` and all products of
/// `t, u` zero; quasi-isomorphic to the ground field.
pub fn contractible_pair(k: &Field) -> DGAlgebra {
    built(
        AlgebraBuilder::new(k)
            .basis("1", 0)
            .basis("t", 0)
            .basis("u", -1)
            .unit("1")
            .rule("1", "1", "1")
            .rule("1", "t", "t")
            .rule("t", "1", "t")
            .rule("1", "u", "u")
            .rule("u", "1", "u")
            .differential("u", vec![("t", k.one())]),
    )
}

/// The one-dimensional module at an idempotent basis element `vertex`:
/// `m · vertex = m`, every other basis element acts by zero.
pub fn simple(a: &Algebra, vertex: &str) -> Result<DGModule, DgError> {
    let v = a.basis().index_of(vertex)?;
    let k = a.field();
    let action = (0..a.dim())
        .map(|i| {
            if i == v {
                vec![(0, k.one())]
            } else {
                Vec::new()
            }
        })
        .collect();
    DGModule::new(
        a,
        GradedBasis::new(vec![format!("S_{vertex}")], vec![0])?,
        action,
        vec![Vec::new()],
    )
}

/// `eA` for a basis idempotent `e`, keeping the basis names of `A`.
pub fn corner(a: &Algebra, vertex: &str) -> Result<DGModule, DgError> {
    let e = a.basis_element(a.basis().index_of(vertex)?);
    let sub = DGModule::projective(a, &e)?;
    let names = sub
        .inclusion
        .iter()
        .map(|v| {
            a.name(v.iter().position(|x| !x.is_zero()).unwrap())
                .to_string()
        })
        .collect();
    sub.module.renamed(names)
}

/// Equip the right `B`-module `t` with a left `A`-action through an algebra
/// map `A → End_B(t)`, given as one matrix per basis element of `A`.
fn with_left_action(
    a: &Algebra,
    t: &DGModule,
    images: &[crate::linalg::Matrix],
) -> Result<DGBimodule, DgError> {
    let n = t.dim();
    let mut left = Vec::with_capacity(a.dim() * n);
    for m in images {
        for s in 0..n {
            left.push(to_sparse(&m.column(s)));
        }
    }
    let right = (0..n * t.algebra().dim())
        .map(|sj| {
            t.action(sj / t.algebra().dim(), sj % t.algebra().dim())
                .clone()
        })
        .collect();
    let diff = (0..n).map(|s| t.differential(s).clone()).collect();
    DGBimodule::new(a, t.algebra(), t.basis().clone(), left, right, diff)
}

/// `T = e₁Λ` over the Auslander algebra, with the dual numbers acting on the
/// left through `ε ↦ ab·`. Returns `(A, Λ, T)`.
pub fn auslander_triple(k: &Field) -> (Algebra, Algebra, DGBimodule) {
    let a = Arc::new(dual_numbers(k));
    let lambda = Arc::new(auslander(k));
    let t = corner(&lambda, "e1").expect("corner exists");
    let ab = lambda.basis_element(lambda.basis().index_of("ab").unwrap());
    let ident = crate::linalg::Matrix::identity(k, t.dim());
    // left multiplication by ab on the basis {e1, a, ab} of e1Λ
    let eps = {
        let lift = |s: usize| -> crate::linalg::Vector {
            let mut v = lambda.zero_element();
            v[lambda.basis().index_of(&t.basis().names[s]).unwrap()] = k.one();
            v
        };
        let cols: Vec<crate::linalg::Vector> = (0..t.dim())
            .map(|s| {
                let prod = lambda.mul(&ab, &lift(s));
                (0..t.dim())
                    .map(|r| prod[lambda.basis().index_of(&t.basis().names[r]).unwrap()].clone())
                    .collect()
            })
            .collect();
        crate::linalg::Matrix::from_columns(k, t.dim(), &cols)
    };
    let bimodule =
        with_left_action(&a, &t, &[ident, eps]).expect("Auslander bimodule is well-formed");
    (a, lambda, bimodule)
}

/// The row module `e11·M₂(k)` as a `k`-`M₂(k)` bimodule.
pub fn row_triple(k: &Field) -> (Algebra, Algebra, DGBimodule) {
    let a = Arc::new(ground(k));
    let b = Arc::new(matrix2(k));
    let t = corner(&b, "e11").expect("corner exists");
    let bimodule = with_left_action(&a, &t, &[crate::linalg::Matrix::identity(k, t.dim())])
        .expect("row bimodule is well-formed");
    (a, b, bimodule)
}

/// The row module with `k × k` acting through its first factor; the action map
/// on cohomology cannot be injective.
pub fn row_triple_split(k: &Field) -> (Algebra, Algebra, DGBimodule) {
    let a = Arc::new(split_pair(k));
    let b = Arc::new(matrix2(k));
    let t = corner(&b, "e11").expect("corner exists");
    let id = crate::linalg::Matrix::identity(k, t.dim());
    let zero = crate::linalg::Matrix::zeros(k, t.dim(), t.dim());
    let bimodule = with_left_action(&a, &t, &[id, zero]).expect("row bimodule is well-formed");
    (a, b, bimodule)
}
