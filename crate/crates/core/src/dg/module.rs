use std::collections::BTreeMap;

use super::{
    add_sparse, complex_of, odd, sign, to_sparse, validate, Algebra, DgError, GradedBasis, Sparse,
    ValidationReport,
};
use crate::field::{Field, Scalar};
use crate::linalg::{is_zero_vec, Cohomology, Echelon, FiniteComplex, Matrix, Vector};

/// A finite-dimensional right DG module.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DGModule {
    algebra: Algebra,
    basis: GradedBasis,
    /// `action[t * dim A + i]` is `m_t · b_i`.
    action: Vec<Sparse>,
    diff: Vec<Sparse>,
}

/// A DG submodule together with the ambient vectors of its basis.
#[derive(Debug, Clone)]
pub struct Submodule {
    pub module: DGModule,
    pub inclusion: Vec<Vector>,
}

impl DGModule {
    pub fn new(
        algebra: &Algebra,
        basis: GradedBasis,
        action: Vec<Sparse>,
        diff: Vec<Sparse>,
    ) -> Result<DGModule, DgError> {
        let (n, na) = (basis.len(), algebra.dim());
        if action.len() != n * na || diff.len() != n {
            return Err(DgError::Shape(format!(
                "module of dimension {n} over an algebra of dimension {na}"
            )));
        }
        let in_range = |s: &Sparse| s.iter().all(|(i, _)| *i < n);
        if !action.iter().all(in_range) || !diff.iter().all(in_range) {
            return Err(DgError::Shape(
                "structure constant index out of range".into(),
            ));
        }
        Ok(DGModule {
            algebra: algebra.clone(),
            basis,
            action,
            diff,
        })
    }

    pub fn zero(algebra: &Algebra) -> DGModule {
        DGModule {
            algebra: algebra.clone(),
            basis: GradedBasis::empty(),
            action: Vec::new(),
            diff: Vec::new(),
        }
    }

    /// `A` as a right module over itself.
    pub fn free(algebra: &Algebra) -> DGModule {
        let n = algebra.dim();
        let action = (0..n * n)
            .map(|ij| algebra.product(ij / n, ij % n).clone())
            .collect();
        let diff = (0..n).map(|i| algebra.differential(i).clone()).collect();
        DGModule {
            algebra: algebra.clone(),
            basis: algebra.basis().clone(),
            action,
            diff,
        }
    }

    /// The right ideal `eA` for a closed degree-zero idempotent `e`.
    pub fn projective(algebra: &Algebra, e: &[Scalar]) -> Result<Submodule, DgError> {
        let free = DGModule::free(algebra);
        let gens: Vec<Vector> = (0..algebra.dim())
            .map(|i| algebra.mul(e, &algebra.basis_element(i)))
            .collect();
        free.submodule(&gens)
    }

    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    pub fn field(&self) -> &Field {
        self.algebra.field()
    }

    pub fn basis(&self) -> &GradedBasis {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn degree(&self, t: usize) -> i32 {
        self.basis.degrees[t]
    }

    pub fn action(&self, t: usize, i: usize) -> &Sparse {
        &self.action[t * self.algebra.dim() + i]
    }

    pub fn differential(&self, t: usize) -> &Sparse {
        &self.diff[t]
    }

    pub fn zero_vector(&self) -> Vector {
        vec![self.field().zero(); self.dim()]
    }

    pub fn basis_element(&self, t: usize) -> Vector {
        crate::linalg::unit_vector(self.field(), self.dim(), t)
    }

    pub fn act(&self, v: &[Scalar], a: &[Scalar]) -> Vector {
        let k = self.field();
        let mut out = self.zero_vector();
        for (t, x) in v.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (i, y) in a.iter().enumerate() {
                if !y.is_zero() {
                    add_sparse(k, &mut out, &k.mul(x, y), self.action(t, i));
                }
            }
        }
        out
    }

    pub fn act_basis(&self, v: &[Scalar], i: usize) -> Vector {
        let k = self.field();
        let mut out = self.zero_vector();
        for (t, x) in v.iter().enumerate() {
            if !x.is_zero() {
                add_sparse(k, &mut out, x, self.action(t, i));
            }
        }
        out
    }

    pub fn d(&self, v: &[Scalar]) -> Vector {
        let mut out = self.zero_vector();
        for (t, x) in v.iter().enumerate() {
            if !x.is_zero() {
                add_sparse(self.field(), &mut out, x, &self.diff[t]);
            }
        }
        out
    }

    /// Matrix of `m ↦ m · b_i`.
    pub fn action_matrix(&self, i: usize) -> Matrix {
        let mut m = Matrix::zeros(self.field(), self.dim(), self.dim());
        for t in 0..self.dim() {
            for (s, x) in self.action(t, i) {
                m.set(*s, t, x.clone());
            }
        }
        m
    }

    pub fn differential_matrix(&self) -> Matrix {
        let mut m = Matrix::zeros(self.field(), self.dim(), self.dim());
        for t in 0..self.dim() {
            for (s, x) in &self.diff[t] {
                m.set(*s, t, x.clone());
            }
        }
        m
    }

    pub fn has_zero_differential(&self) -> bool {
        self.diff.iter().all(Vec::is_empty)
    }

    pub fn validate(&self) -> ValidationReport {
        validate::module(self)
    }

    pub fn complex(&self) -> Result<FiniteComplex, DgError> {
        complex_of(self.field(), &self.basis, &self.diff)
    }

    pub fn cohomology(&self) -> Result<Cohomology, DgError> {
        Ok(self.complex()?.cohomology()?)
    }

    pub fn graded_dims(&self) -> BTreeMap<i32, usize> {
        self.basis.graded_dims()
    }

    pub fn renamed(&self, names: Vec<String>) -> Result<DGModule, DgError> {
        let basis = GradedBasis::new(names, self.basis.degrees.clone())?;
        Ok(DGModule {
            basis,
            ..self.clone()
        })
    }

    /// `M[n]`: degrees lowered by `n`, differential multiplied by `(-1)^n`.
    pub fn shift(&self, n: i32) -> DGModule {
        let k = self.field();
        let s = sign(k, odd(n));
        let degrees = self.basis.degrees.iter().map(|d| d - n).collect();
        let diff = self
            .diff
            .iter()
            .map(|v| v.iter().map(|(i, x)| (*i, k.mul(&s, x))).collect())
            .collect();
        DGModule {
            algebra: self.algebra.clone(),
            basis: GradedBasis {
                names: self.basis.names.clone(),
                degrees,
            },
            action: self.action.clone(),
            diff,
        }
    }

    pub fn direct_sum(&self, other: &DGModule) -> Result<DGModule, DgError> {
        if self.algebra != other.algebra {
            return Err(DgError::AlgebraMismatch);
        }
        let n = self.dim();
        let names = self
            .basis
            .names
            .iter()
            .map(|s| format!("{s}#1"))
            .chain(other.basis.names.iter().map(|s| format!("{s}#2")))
            .collect();
        let degrees = self
            .basis
            .degrees
            .iter()
            .chain(&other.basis.degrees)
            .copied()
            .collect();
        let shifted = |v: &Sparse| {
            v.iter()
                .map(|(i, x)| (i + n, x.clone()))
                .collect::<Sparse>()
        };
        let action = self
            .action
            .iter()
            .cloned()
            .chain(other.action.iter().map(shifted))
            .collect();
        let diff = self
            .diff
            .iter()
            .cloned()
            .chain(other.diff.iter().map(shifted))
            .collect();
        DGModule::new(&self.algebra, GradedBasis { names, degrees }, action, diff)
    }

    /// Smallest DG submodule containing `gens`, as an echelon basis.
    pub fn generated(&self, gens: &[Vector]) -> Echelon {
        let k = self.field();
        let mut span = Echelon::new(k, self.dim());
        let mut queue: Vec<Vector> = gens.to_vec();
        while let Some(v) = queue.pop() {
            if !span.insert(&v) {
                continue;
            }
            let dv = self.d(&v);
            if !is_zero_vec(&dv) {
                queue.push(dv);
            }
            for i in 0..self.algebra.dim() {
                let w = self.act_basis(&v, i);
                if !is_zero_vec(&w) {
                    queue.push(w);
                }
            }
        }
        span
    }

    /// The DG submodule spanned by `vectors`, which must be closed under the
    /// action and the differential. Basis names are `s0, s1, …`.
    pub fn submodule(&self, vectors: &[Vector]) -> Result<Submodule, DgError> {
        let span = Echelon::from_vectors(self.field(), self.dim(), vectors);
        self.submodule_of(&span)
    }

    pub fn submodule_of(&self, span: &Echelon) -> Result<Submodule, DgError> {
        let rows = span.rows().to_vec();
        let degrees = rows
            .iter()
            .map(|v| self.basis.degree_of(v).ok_or(DgError::NotHomogeneous))
            .collect::<Result<Vec<_>, _>>()?;
        let names = (0..rows.len()).map(|j| format!("s{j}")).collect();
        let coords = |v: Vector| -> Result<Sparse, DgError> {
            Ok(to_sparse(
                &span.coordinates(&v).ok_or(DgError::NotASubmodule)?,
            ))
        };
        let mut action = Vec::with_capacity(rows.len() * self.algebra.dim());
        let mut diff = Vec::with_capacity(rows.len());
        for v in &rows {
            for i in 0..self.algebra.dim() {
                action.push(coords(self.act_basis(v, i))?);
            }
            diff.push(coords(self.d(v))?);
        }
        let module = DGModule::new(&self.algebra, GradedBasis { names, degrees }, action, diff)?;
        Ok(Submodule {
            module,
            inclusion: rows,
        })
    }

    /// `M / S` for a DG submodule `S`, with basis the non-pivot basis vectors of `M`.
    pub fn quotient(&self, sub: &Echelon) -> Result<(DGModule, Vec<usize>), DgError> {
        let kept: Vec<usize> = (0..self.dim())
            .filter(|t| !sub.pivots().contains(t))
            .collect();
        let mut pos = vec![usize::MAX; self.dim()];
        for (p, &t) in kept.iter().enumerate() {
            pos[t] = p;
        }
        let project = |v: Vector| -> Sparse {
            let r = sub.reduce(&v);
            kept.iter()
                .enumerate()
                .filter(|(_, &t)| !r[t].is_zero())
                .map(|(p, &t)| (p, r[t].clone()))
                .collect()
        };
        let mut action = Vec::new();
        let mut diff = Vec::new();
        for &t in &kept {
            let e = self.basis_element(t);
            for i in 0..self.algebra.dim() {
                action.push(project(self.act_basis(&e, i)));
            }
            diff.push(project(self.d(&e)));
        }
        let basis = GradedBasis {
            names: kept.iter().map(|&t| self.basis.names[t].clone()).collect(),
            degrees: kept.iter().map(|&t| self.basis.degrees[t]).collect(),
        };
        Ok((DGModule::new(&self.algebra, basis, action, diff)?, kept))
    }

    /// The same module over an algebra with identical structure (for example a
    /// separately constructed copy).
    pub fn with_algebra(&self, algebra: &Algebra) -> Result<DGModule, DgError> {
        if **algebra != *self.algebra {
            return Err(DgError::AlgebraMismatch);
        }
        Ok(DGModule {
            algebra: algebra.clone(),
            ..self.clone()
        })
    }
}

/// Splits a degree-zero map `x → y` (a `dim y × dim x` matrix) into the blocks
/// of the complexes returned by [`DGModule::complex`].
pub fn chain_map_blocks(x: &DGModule, y: &DGModule, f: &Matrix) -> BTreeMap<i32, Matrix> {
    let (gx, gy) = (x.basis().by_degree(), y.basis().by_degree());
    let mut out = BTreeMap::new();
    for (deg, cols) in &gx {
        let Some(rows) = gy.get(deg) else { continue };
        let mut m = Matrix::zeros(x.field(), rows.len(), cols.len());
        for (r, &i) in rows.iter().enumerate() {
            for (c, &j) in cols.iter().enumerate() {
                m.set(r, c, f.get(i, j).clone());
            }
        }
        out.insert(*deg, m);
    }
    out
}

/// Whether a degree-zero chain map `x → y` induces an isomorphism on cohomology.
pub fn is_quasi_iso(x: &DGModule, y: &DGModule, f: &Matrix) -> Result<bool, DgError> {
    let cone = x
        .complex()?
        .mapping_cone(&y.complex()?, &chain_map_blocks(x, y, f))?;
    Ok(cone.cohomology()?.is_acyclic())
}
