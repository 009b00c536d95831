//! Finite-dimensional DG algebras, right DG modules and DG bimodules.
//!
//! Grading is cohomological and differentials raise degree by one. Elements
//! are dense coefficient vectors in the declared basis; structure constants
//! are stored sparsely. Path algebras compose left to right, so `ab` means
//! "a, then b" and `e_j A e_i` is `Hom(e_i A, e_j A)`.

mod bimodule;
mod hom;
pub mod library;
mod module;
mod validate;

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::Rng;
use serde::Serialize;
use thiserror::Error;

use crate::field::{Field, Scalar};
use crate::linalg::{FiniteComplex, LinalgError, Matrix, Vector};

pub use bimodule::DGBimodule;
pub use hom::{module_hom_complex, ModuleHom};
pub use module::{chain_map_blocks, is_quasi_iso, DGModule, Submodule};
pub use validate::{Axiom, ValidationMode, ValidationReport, Violation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DgError {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("unknown basis element `{0}`")]
    UnknownBasis(String),
    #[error("duplicate basis element `{0}`")]
    DuplicateBasis(String),
    #[error("objects live over different fields")]
    FieldMismatch,
    #[error("objects live over different algebras")]
    AlgebraMismatch,
    #[error("element is not homogeneous")]
    NotHomogeneous,
    #[error("vectors do not span a DG submodule")]
    NotASubmodule,
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Sparse vector: `(basis index, nonzero coefficient)` pairs in increasing index order.
pub type Sparse = Vec<(usize, Scalar)>;

pub type Algebra = Arc<DGAlgebra>;

/// Nonzero entries of a dense vector.
pub fn to_sparse(v: &[Scalar]) -> Sparse {
    v.iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(i, x)| (i, x.clone()))
        .collect()
}

pub(crate) fn add_sparse(k: &Field, out: &mut [Scalar], c: &Scalar, s: &Sparse) {
    for (i, x) in s {
        let t = k.mul(c, x);
        out[*i] = k.add(&out[*i], &t);
    }
}

pub(crate) fn odd(n: i32) -> bool {
    n.rem_euclid(2) == 1
}

pub(crate) fn sign(k: &Field, negative: bool) -> Scalar {
    if negative {
        k.from_int(-1)
    } else {
        k.one()
    }
}

/// Names and cohomological degrees of a basis.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GradedBasis {
    pub names: Vec<String>,
    pub degrees: Vec<i32>,
}

impl GradedBasis {
    pub fn new(names: Vec<String>, degrees: Vec<i32>) -> Result<GradedBasis, DgError> {
        if names.len() != degrees.len() {
            return Err(DgError::Shape(format!(
                "{} names but {} degrees",
                names.len(),
                degrees.len()
            )));
        }
        for (i, n) in names.iter().enumerate() {
            if names[..i].contains(n) {
                return Err(DgError::DuplicateBasis(n.clone()));
            }
        }
        Ok(GradedBasis { names, degrees })
    }

    pub fn empty() -> GradedBasis {
        GradedBasis {
            names: Vec::new(),
            degrees: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Result<usize, DgError> {
        self.names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| DgError::UnknownBasis(name.to_string()))
    }

    /// Basis indices grouped by degree.
    pub fn by_degree(&self) -> BTreeMap<i32, Vec<usize>> {
        let mut out: BTreeMap<i32, Vec<usize>> = BTreeMap::new();
        for (i, d) in self.degrees.iter().enumerate() {
            out.entry(*d).or_default().push(i);
        }
        out
    }

    pub fn graded_dims(&self) -> BTreeMap<i32, usize> {
        self.by_degree()
            .into_iter()
            .map(|(d, v)| (d, v.len()))
            .collect()
    }

    /// Degree of a nonzero vector if all of its support has one degree.
    pub fn degree_of(&self, v: &[Scalar]) -> Option<i32> {
        let mut deg = None;
        for (i, x) in v.iter().enumerate() {
            if !x.is_zero() {
                match deg {
                    None => deg = Some(self.degrees[i]),
                    Some(d) if d != self.degrees[i] => return None,
                    _ => {}
                }
            }
        }
        deg
    }

    pub fn min_degree(&self) -> Option<i32> {
        self.degrees.iter().copied().min()
    }

    pub fn max_degree(&self) -> Option<i32> {
        self.degrees.iter().copied().max()
    }
}

/// A degree +1 map on a graded basis, split into a [`FiniteComplex`].
pub(crate) fn complex_of(
    k: &Field,
    basis: &GradedBasis,
    diff: &[Sparse],
) -> Result<FiniteComplex, DgError> {
    let groups = basis.by_degree();
    let mut local = vec![0; basis.len()];
    for idx in groups.values() {
        for (pos, &i) in idx.iter().enumerate() {
            local[i] = pos;
        }
    }
    let mut diffs = BTreeMap::new();
    for (&deg, idx) in &groups {
        let Some(target) = groups.get(&(deg + 1)) else {
            continue;
        };
        let mut m = Matrix::zeros(k, target.len(), idx.len());
        for (c, &i) in idx.iter().enumerate() {
            for (j, x) in &diff[i] {
                if basis.degrees[*j] != deg + 1 {
                    return Err(DgError::Shape(format!(
                        "differential of `{}` is not of degree +1",
                        basis.names[i]
                    )));
                }
                m.set(local[*j], c, x.clone());
            }
        }
        diffs.insert(deg, m);
    }
    let dims = groups.iter().map(|(d, v)| (*d, v.len())).collect();
    Ok(FiniteComplex::new(k, dims, diffs)?)
}

/// Spread a vector given in the basis of one degree back to global coordinates.
pub(crate) fn globalize(k: &Field, n: usize, idx: &[usize], v: &[Scalar]) -> Vector {
    let mut out = vec![k.zero(); n];
    for (pos, &i) in idx.iter().enumerate() {
        out[i] = v[pos].clone();
    }
    out
}

/// A finite-dimensional DG algebra.
///
/// The unit is stored as a vector so that algebras whose identity is a sum of
/// basis elements (path algebras with several vertices) need no extra basis
/// element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DGAlgebra {
    field: Field,
    basis: GradedBasis,
    unit: Vector,
    mul: Vec<Sparse>,
    diff: Vec<Sparse>,
}

impl DGAlgebra {
    /// `mul[i * n + j]` is the product `b_i b_j`, `diff[i]` is `d(b_i)`.
    pub fn new(
        field: &Field,
        basis: GradedBasis,
        unit: Vector,
        mul: Vec<Sparse>,
        diff: Vec<Sparse>,
    ) -> Result<DGAlgebra, DgError> {
        let n = basis.len();
        if unit.len() != n || mul.len() != n * n || diff.len() != n {
            return Err(DgError::Shape(format!("algebra of dimension {n}")));
        }
        let in_range = |s: &Sparse| s.iter().all(|(i, _)| *i < n);
        if !mul.iter().all(in_range) || !diff.iter().all(in_range) {
            return Err(DgError::Shape(
                "structure constant index out of range".into(),
            ));
        }
        Ok(DGAlgebra {
            field: field.clone(),
            basis,
            unit,
            mul,
            diff,
        })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn basis(&self) -> &GradedBasis {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn degree(&self, i: usize) -> i32 {
        self.basis.degrees[i]
    }

    pub fn name(&self, i: usize) -> &str {
        &self.basis.names[i]
    }

    pub fn unit(&self) -> &Vector {
        &self.unit
    }

    /// `b_i b_j`.
    pub fn product(&self, i: usize, j: usize) -> &Sparse {
        &self.mul[i * self.dim() + j]
    }

    /// `d(b_i)`.
    pub fn differential(&self, i: usize) -> &Sparse {
        &self.diff[i]
    }

    pub fn zero_element(&self) -> Vector {
        vec![self.field.zero(); self.dim()]
    }

    pub fn basis_element(&self, i: usize) -> Vector {
        crate::linalg::unit_vector(&self.field, self.dim(), i)
    }

    pub fn element(&self, terms: &[(&str, Scalar)]) -> Result<Vector, DgError> {
        let mut v = self.zero_element();
        for (name, c) in terms {
            let i = self.basis.index_of(name)?;
            v[i] = self.field.add(&v[i], c);
        }
        Ok(v)
    }

    pub fn mul(&self, x: &[Scalar], y: &[Scalar]) -> Vector {
        let k = &self.field;
        let mut out = self.zero_element();
        for (i, a) in x.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in y.iter().enumerate() {
                if !b.is_zero() {
                    add_sparse(k, &mut out, &k.mul(a, b), self.product(i, j));
                }
            }
        }
        out
    }

    pub fn d(&self, x: &[Scalar]) -> Vector {
        let mut out = self.zero_element();
        for (i, a) in x.iter().enumerate() {
            if !a.is_zero() {
                add_sparse(&self.field, &mut out, a, &self.diff[i]);
            }
        }
        out
    }

    pub fn has_zero_differential(&self) -> bool {
        self.diff.iter().all(Vec::is_empty)
    }

    /// Concentrated in degree zero with zero differential.
    pub fn is_ordinary(&self) -> bool {
        self.has_zero_differential() && self.basis.degrees.iter().all(|d| *d == 0)
    }

    /// Matrix of `y ↦ x·y`.
    pub fn left_mult_matrix(&self, x: &[Scalar]) -> Matrix {
        let cols: Vec<Vector> = (0..self.dim())
            .map(|j| self.mul(x, &self.basis_element(j)))
            .collect();
        Matrix::from_columns(&self.field, self.dim(), &cols)
    }

    /// Matrix of `y ↦ y·x`.
    pub fn right_mult_matrix(&self, x: &[Scalar]) -> Matrix {
        let cols: Vec<Vector> = (0..self.dim())
            .map(|j| self.mul(&self.basis_element(j), x))
            .collect();
        Matrix::from_columns(&self.field, self.dim(), &cols)
    }

    pub fn validate(&self) -> ValidationReport {
        validate::algebra(self)
    }

    pub fn complex(&self) -> Result<FiniteComplex, DgError> {
        complex_of(&self.field, &self.basis, &self.diff)
    }

    /// Cohomology with the product induced on cocycle representatives.
    pub fn cohomology(&self) -> Result<AlgebraCohomology, DgError> {
        let k = &self.field;
        let groups = self.basis.by_degree();
        let h = self.complex()?.cohomology()?;
        let mut reps: Vec<(i32, Vector)> = Vec::new();
        for (deg, vs) in &h.representatives {
            for v in vs {
                reps.push((*deg, globalize(k, self.dim(), &groups[deg], v)));
            }
        }
        let coords = |deg: i32, v: &Vector| -> Option<Vector> {
            let idx = groups.get(&deg)?;
            let local: Vector = idx.iter().map(|&i| v[i].clone()).collect();
            let c = h.class_coordinates(deg, &local)?;
            let mut full = vec![k.zero(); reps.len()];
            let mut it = c.into_iter();
            for (slot, (d, _)) in full.iter_mut().zip(&reps) {
                if *d == deg {
                    *slot = it.next().unwrap();
                }
            }
            Some(full)
        };
        let mut products = Vec::with_capacity(reps.len() * reps.len());
        let mut well_defined = true;
        for (p, x) in &reps {
            for (q, y) in &reps {
                let xy = self.mul(x, y);
                if crate::linalg::is_zero_vec(&xy) {
                    products.push(vec![k.zero(); reps.len()]);
                    continue;
                }
                match coords(p + q, &xy) {
                    Some(c) => products.push(c),
                    None => {
                        well_defined = false;
                        products.push(vec![k.zero(); reps.len()]);
                    }
                }
            }
        }
        // boundaries times cocycles must again be boundaries
        let cx = self.complex()?;
        'outer: for (deg, idx) in &groups {
            let bd: Vec<Vector> = cx
                .differential(deg - 1)
                .image()
                .iter()
                .map(|b| globalize(k, self.dim(), idx, b))
                .collect();
            for b in &bd {
                for (q, y) in &reps {
                    for prod in [self.mul(b, y), self.mul(y, b)] {
                        if !crate::linalg::is_zero_vec(&prod)
                            && coords(deg + q, &prod)
                                .is_none_or(|c| !crate::linalg::is_zero_vec(&c))
                        {
                            well_defined = false;
                            break 'outer;
                        }
                    }
                }
            }
        }
        Ok(AlgebraCohomology {
            dims: h.support(),
            degrees: reps.iter().map(|(d, _)| *d).collect(),
            representatives: reps.into_iter().map(|(_, v)| v).collect(),
            products,
            well_defined,
        })
    }

    /// `a ·_op b = (-1)^{|a||b|} b a`.
    pub fn opposite(&self) -> DGAlgebra {
        let k = &self.field;
        let n = self.dim();
        let mut mul = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let s = sign(k, odd(self.degree(i) * self.degree(j)));
                mul.push(
                    self.product(j, i)
                        .iter()
                        .map(|(t, x)| (*t, k.mul(&s, x)))
                        .collect(),
                );
            }
        }
        DGAlgebra {
            field: k.clone(),
            basis: self.basis.clone(),
            unit: self.unit.clone(),
            mul,
            diff: self.diff.clone(),
        }
    }

    /// `A^op ⊗ B` with basis `a|b` ordered lexicographically, and product
    /// `(a₁⊗b₁)(a₂⊗b₂) = (-1)^{|b₁||a₂|} (a₁ ·_op a₂) ⊗ b₁b₂`.
    pub fn env(&self, b: &DGAlgebra) -> Result<DGAlgebra, DgError> {
        if self.field != b.field {
            return Err(DgError::FieldMismatch);
        }
        tensor(&self.opposite(), b)
    }

    /// Basis elements forming a complete set of orthogonal closed idempotents of
    /// degree zero, or the unit alone when the basis contains no such set.
    pub fn vertex_idempotents(&self) -> Vec<Vector> {
        let k = &self.field;
        let cands: Vec<usize> = (0..self.dim())
            .filter(|&i| {
                self.degree(i) == 0
                    && self.diff[i].is_empty()
                    && self.product(i, i).len() == 1
                    && self.product(i, i)[0].0 == i
                    && k.is_one(&self.product(i, i)[0].1)
            })
            .collect();
        let orthogonal = cands.iter().all(|&i| {
            cands
                .iter()
                .all(|&j| i == j || self.product(i, j).is_empty())
        });
        let mut sum = self.zero_element();
        for &i in &cands {
            sum[i] = k.one();
        }
        if cands.is_empty() || !orthogonal || sum != self.unit {
            return vec![self.unit.clone()];
        }
        cands.into_iter().map(|i| self.basis_element(i)).collect()
    }

    /// Random homogeneous element of degree `deg` (zero if that degree is empty).
    pub fn random_element<R: Rng>(&self, rng: &mut R, deg: i32, bound: i64) -> Vector {
        let mut v = self.zero_element();
        for (i, d) in self.basis.degrees.iter().enumerate() {
            if *d == deg && rng.gen_bool(0.7) {
                v[i] = self.field.random(rng, bound);
            }
        }
        v
    }
}

/// Graded tensor product of DG algebras.
pub fn tensor(a: &DGAlgebra, b: &DGAlgebra) -> Result<DGAlgebra, DgError> {
    if a.field != b.field {
        return Err(DgError::FieldMismatch);
    }
    let k = &a.field;
    let (na, nb) = (a.dim(), b.dim());
    let n = na * nb;
    let names = (0..na)
        .flat_map(|i| (0..nb).map(move |j| (i, j)))
        .map(|(i, j)| format!("{}|{}", a.name(i), b.name(j)))
        .collect();
    let degrees = (0..na)
        .flat_map(|i| (0..nb).map(move |j| a.degree(i) + b.degree(j)))
        .collect();
    let basis = GradedBasis { names, degrees };
    let mut mul = Vec::with_capacity(n * n);
    for i1 in 0..na {
        for j1 in 0..nb {
            for i2 in 0..na {
                for j2 in 0..nb {
                    let s = sign(k, odd(b.degree(j1) * a.degree(i2)));
                    let mut out = vec![k.zero(); n];
                    for (p, x) in a.product(i1, i2) {
                        for (q, y) in b.product(j1, j2) {
                            let c = k.mul(&s, &k.mul(x, y));
                            out[p * nb + q] = k.add(&out[p * nb + q], &c);
                        }
                    }
                    mul.push(to_sparse(&out));
                }
            }
        }
    }
    let mut diff = Vec::with_capacity(n);
    for i in 0..na {
        for j in 0..nb {
            let mut out = vec![k.zero(); n];
            for (p, x) in a.differential(i) {
                out[p * nb + j] = k.add(&out[p * nb + j], x);
            }
            let s = sign(k, odd(a.degree(i)));
            for (q, y) in b.differential(j) {
                out[i * nb + q] = k.add(&out[i * nb + q], &k.mul(&s, y));
            }
            diff.push(to_sparse(&out));
        }
    }
    let mut unit = vec![k.zero(); n];
    for (i, x) in a.unit.iter().enumerate() {
        for (j, y) in b.unit.iter().enumerate() {
            unit[i * nb + j] = k.mul(x, y);
        }
    }
    DGAlgebra::new(k, basis, unit, mul, diff)
}

/// `H^*(A)` with products of the chosen representatives expressed in the
/// representative basis.
#[derive(Debug, Clone)]
pub struct AlgebraCohomology {
    pub dims: BTreeMap<i32, usize>,
    pub degrees: Vec<i32>,
    pub representatives: Vec<Vector>,
    /// `products[i * r + j]` are the coordinates of `[rep_i][rep_j]`.
    pub products: Vec<Vector>,
    pub well_defined: bool,
}

impl AlgebraCohomology {
    pub fn total_dim(&self) -> usize {
        self.representatives.len()
    }
}

/// Convenience builder for algebras given by names.
pub struct AlgebraBuilder {
    field: Field,
    names: Vec<String>,
    degrees: Vec<i32>,
    unit: Vec<(String, Scalar)>,
    mul: Vec<(String, String, Vec<(String, Scalar)>)>,
    diff: Vec<(String, Vec<(String, Scalar)>)>,
}

impl AlgebraBuilder {
    pub fn new(field: &Field) -> AlgebraBuilder {
        AlgebraBuilder {
            field: field.clone(),
            names: Vec::new(),
            degrees: Vec::new(),
            unit: Vec::new(),
            mul: Vec::new(),
            diff: Vec::new(),
        }
    }

    pub fn basis(mut self, name: &str, degree: i32) -> Self {
        self.names.push(name.to_string());
        self.degrees.push(degree);
        self
    }

    /// Adds `name` with coefficient one to the unit.
    pub fn unit(mut self, name: &str) -> Self {
        self.unit.push((name.to_string(), self.field.one()));
        self
    }

    pub fn product(mut self, a: &str, b: &str, terms: Vec<(&str, Scalar)>) -> Self {
        self.mul.push((
            a.to_string(),
            b.to_string(),
            terms.into_iter().map(|(n, c)| (n.to_string(), c)).collect(),
        ));
        self
    }

    /// `a b = c`.
    pub fn rule(self, a: &str, b: &str, c: &str) -> Self {
        let one = self.field.one();
        self.product(a, b, vec![(c, one)])
    }

    pub fn differential(mut self, a: &str, terms: Vec<(&str, Scalar)>) -> Self {
        self.diff.push((
            a.to_string(),
            terms.into_iter().map(|(n, c)| (n.to_string(), c)).collect(),
        ));
        self
    }

    pub fn build(self) -> Result<DGAlgebra, DgError> {
        let k = self.field;
        let basis = GradedBasis::new(self.names, self.degrees)?;
        let n = basis.len();
        let mut unit = vec![k.zero(); n];
        for (name, c) in &self.unit {
            let i = basis.index_of(name)?;
            unit[i] = k.add(&unit[i], c);
        }
        let mut dense_mul = vec![vec![k.zero(); n]; n * n];
        for (a, b, terms) in &self.mul {
            let slot = &mut dense_mul[basis.index_of(a)? * n + basis.index_of(b)?];
            for (c, x) in terms {
                let j = basis.index_of(c)?;
                slot[j] = k.add(&slot[j], x);
            }
        }
        let mut dense_diff = vec![vec![k.zero(); n]; n];
        for (a, terms) in &self.diff {
            let slot = &mut dense_diff[basis.index_of(a)?];
            for (c, x) in terms {
                let j = basis.index_of(c)?;
                slot[j] = k.add(&slot[j], x);
            }
        }
        let mul = dense_mul.iter().map(|v| to_sparse(v)).collect();
        let diff = dense_diff.iter().map(|v| to_sparse(v)).collect();
        DGAlgebra::new(&k, basis, unit, mul, diff)
    }
}
