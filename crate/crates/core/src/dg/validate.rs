//! Axiom checks on basis tuples. Exhaustive up to dimension 32, sampled above.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{add_sparse, odd, sign, DGAlgebra, DGBimodule, DGModule, Sparse};
use crate::field::{Field, Scalar};
use crate::linalg::{is_zero_vec, Vector};

pub const EXHAUSTIVE_LIMIT: usize = 32;
pub const SAMPLED_TRIPLES: usize = 10_000;
const SAMPLE_SEED: u64 = 0x5eed;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Axiom {
    UnitDegree,
    Grading,
    DifferentialDegree,
    DifferentialSquare,
    UnitClosed,
    LeftUnit,
    RightUnit,
    Leibniz,
    Associativity,
    LeftGrading,
    LeftLeibniz,
    LeftAssociativity,
    Commutation,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub axiom: Axiom,
    /// Basis names of the witnessing tuple.
    pub witness: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ValidationMode {
    Exhaustive,
    Sampled { triples: usize, seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub mode: ValidationMode,
    pub violation: Option<Violation>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.violation.is_none()
    }
}

type Check = Result<(), Violation>;

fn fail(axiom: Axiom, witness: &[&str]) -> Check {
    Err(Violation {
        axiom,
        witness: witness.iter().map(|s| s.to_string()).collect(),
    })
}

fn mode_for(dims: &[usize]) -> ValidationMode {
    if dims.iter().all(|d| *d <= EXHAUSTIVE_LIMIT) {
        ValidationMode::Exhaustive
    } else {
        ValidationMode::Sampled {
            triples: SAMPLED_TRIPLES,
            seed: SAMPLE_SEED,
        }
    }
}

fn triples(mode: ValidationMode, n: [usize; 3]) -> Vec<[usize; 3]> {
    if n.contains(&0) {
        return Vec::new();
    }
    match mode {
        ValidationMode::Exhaustive => {
            let mut out = Vec::with_capacity(n[0] * n[1] * n[2]);
            for i in 0..n[0] {
                for j in 0..n[1] {
                    for l in 0..n[2] {
                        out.push([i, j, l]);
                    }
                }
            }
            out
        }
        ValidationMode::Sampled { triples, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..triples)
                .map(|_| {
                    [
                        rng.gen_range(0..n[0]),
                        rng.gen_range(0..n[1]),
                        rng.gen_range(0..n[2]),
                    ]
                })
                .collect()
        }
    }
}

fn dense(k: &Field, n: usize, s: &Sparse) -> Vector {
    let mut v = vec![k.zero(); n];
    add_sparse(k, &mut v, &k.one(), s);
    v
}

fn support_degrees(s: &Sparse, degrees: &[i32], expected: i32) -> bool {
    s.iter().all(|(i, _)| degrees[*i] == expected)
}

fn combine(k: &Field, a: &[Scalar], b: &[Scalar], sb: &Scalar) -> Vector {
    a.iter()
        .zip(b)
        .map(|(x, y)| k.add(x, &k.mul(sb, y)))
        .collect()
}

fn report(mode: ValidationMode, r: Check) -> ValidationReport {
    ValidationReport {
        mode,
        violation: r.err(),
    }
}

pub(super) fn algebra(a: &DGAlgebra) -> ValidationReport {
    let mode = mode_for(&[a.dim()]);
    report(mode, check_algebra(a, mode))
}

fn check_algebra(a: &DGAlgebra, mode: ValidationMode) -> Check {
    let k = a.field();
    let n = a.dim();
    let deg = &a.basis().degrees;
    let name = |i: usize| a.name(i);
    for (i, x) in a.unit().iter().enumerate() {
        if !x.is_zero() && deg[i] != 0 {
            return fail(Axiom::UnitDegree, &[name(i)]);
        }
    }
    for i in 0..n {
        for j in 0..n {
            if !support_degrees(a.product(i, j), deg, deg[i] + deg[j]) {
                return fail(Axiom::Grading, &[name(i), name(j)]);
            }
        }
    }
    for i in 0..n {
        if !support_degrees(a.differential(i), deg, deg[i] + 1) {
            return fail(Axiom::DifferentialDegree, &[name(i)]);
        }
    }
    let e = |i: usize| a.basis_element(i);
    for i in 0..n {
        if !is_zero_vec(&a.d(&a.d(&e(i)))) {
            return fail(Axiom::DifferentialSquare, &[name(i)]);
        }
    }
    if !is_zero_vec(&a.d(a.unit())) {
        return fail(Axiom::UnitClosed, &[]);
    }
    for i in 0..n {
        if a.mul(a.unit(), &e(i)) != e(i) {
            return fail(Axiom::LeftUnit, &[name(i)]);
        }
        if a.mul(&e(i), a.unit()) != e(i) {
            return fail(Axiom::RightUnit, &[name(i)]);
        }
    }
    for i in 0..n {
        for j in 0..n {
            let lhs = a.d(&dense(k, n, a.product(i, j)));
            let t1 = a.mul(&a.d(&e(i)), &e(j));
            let t2 = a.mul(&e(i), &a.d(&e(j)));
            if lhs != combine(k, &t1, &t2, &sign(k, odd(deg[i]))) {
                return fail(Axiom::Leibniz, &[name(i), name(j)]);
            }
        }
    }
    for [i, j, l] in triples(mode, [n, n, n]) {
        let lhs = a.mul(&dense(k, n, a.product(i, j)), &e(l));
        let rhs = a.mul(&e(i), &dense(k, n, a.product(j, l)));
        if lhs != rhs {
            return fail(Axiom::Associativity, &[name(i), name(j), name(l)]);
        }
    }
    Ok(())
}

pub(super) fn module(m: &DGModule) -> ValidationReport {
    let mode = mode_for(&[m.dim(), m.algebra().dim()]);
    report(mode, check_module(m, mode))
}

fn check_module(m: &DGModule, mode: ValidationMode) -> Check {
    let a = m.algebra();
    let k = a.field();
    let (nm, na) = (m.dim(), a.dim());
    let mdeg = &m.basis().degrees;
    let adeg = &a.basis().degrees;
    let mname = |i: usize| m.basis().names[i].as_str();
    for t in 0..nm {
        for i in 0..na {
            if !support_degrees(m.action(t, i), mdeg, mdeg[t] + adeg[i]) {
                return fail(Axiom::Grading, &[mname(t), a.name(i)]);
            }
        }
    }
    for t in 0..nm {
        if !support_degrees(m.differential(t), mdeg, mdeg[t] + 1) {
            return fail(Axiom::DifferentialDegree, &[mname(t)]);
        }
    }
    let e = |t: usize| m.basis_element(t);
    for t in 0..nm {
        if !is_zero_vec(&m.d(&m.d(&e(t)))) {
            return fail(Axiom::DifferentialSquare, &[mname(t)]);
        }
        if m.act(&e(t), a.unit()) != e(t) {
            return fail(Axiom::RightUnit, &[mname(t)]);
        }
    }
    for t in 0..nm {
        for i in 0..na {
            let ai = a.basis_element(i);
            let lhs = m.d(&dense(k, nm, m.action(t, i)));
            let t1 = m.act(&m.d(&e(t)), &ai);
            let t2 = m.act(&e(t), &a.d(&ai));
            if lhs != combine(k, &t1, &t2, &sign(k, odd(mdeg[t]))) {
                return fail(Axiom::Leibniz, &[mname(t), a.name(i)]);
            }
        }
    }
    for [t, i, j] in triples(mode, [nm, na, na]) {
        let lhs = m.act(&dense(k, nm, m.action(t, i)), &a.basis_element(j));
        let rhs = m.act(&e(t), &dense(k, na, a.product(i, j)));
        if lhs != rhs {
            return fail(Axiom::Associativity, &[mname(t), a.name(i), a.name(j)]);
        }
    }
    Ok(())
}

pub(super) fn bimodule(t: &DGBimodule) -> ValidationReport {
    let mode = mode_for(&[t.dim(), t.left().dim(), t.right().dim()]);
    report(mode, check_bimodule(t, mode))
}

fn check_bimodule(t: &DGBimodule, mode: ValidationMode) -> Check {
    let right = t.right_module();
    check_module(&right, mode)?;
    let a = t.left();
    let b = t.right();
    let k = a.field();
    let (nt, na, nb) = (t.dim(), a.dim(), b.dim());
    let tdeg = &t.basis().degrees;
    let adeg = &a.basis().degrees;
    let tname = |i: usize| t.basis().names[i].as_str();
    for i in 0..na {
        for s in 0..nt {
            if !support_degrees(t.left_action(i, s), tdeg, adeg[i] + tdeg[s]) {
                return fail(Axiom::LeftGrading, &[a.name(i), tname(s)]);
            }
        }
    }
    let e = |s: usize| t.basis_element(s);
    for s in 0..nt {
        if t.left_act(a.unit(), &e(s)) != e(s) {
            return fail(Axiom::LeftUnit, &[tname(s)]);
        }
    }
    for i in 0..na {
        let ai = a.basis_element(i);
        for s in 0..nt {
            let lhs = t.d(&dense(k, nt, t.left_action(i, s)));
            let t1 = t.left_act(&a.d(&ai), &e(s));
            let t2 = t.left_act(&ai, &t.d(&e(s)));
            if lhs != combine(k, &t1, &t2, &sign(k, odd(adeg[i]))) {
                return fail(Axiom::LeftLeibniz, &[a.name(i), tname(s)]);
            }
        }
    }
    for [i, j, s] in triples(mode, [na, na, nt]) {
        let lhs = t.left_act(&dense(k, na, a.product(i, j)), &e(s));
        let rhs = t.left_act(&a.basis_element(i), &dense(k, nt, t.left_action(j, s)));
        if lhs != rhs {
            return fail(Axiom::LeftAssociativity, &[a.name(i), a.name(j), tname(s)]);
        }
    }
    for [i, s, j] in triples(mode, [na, nt, nb]) {
        let lhs = t.right_act(&dense(k, nt, t.left_action(i, s)), &b.basis_element(j));
        let rhs = t.left_act(&a.basis_element(i), &dense(k, nt, t.right_action(s, j)));
        if lhs != rhs {
            return fail(Axiom::Commutation, &[a.name(i), tname(s), b.name(j)]);
        }
    }
    Ok(())
}
