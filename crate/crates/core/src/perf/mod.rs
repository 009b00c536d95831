//! Strict perfect objects: one-sided twisted complexes over a DG algebra,
//! optionally cut down by a strict idempotent.
//!
//! A cell `A[n]` contributes a generator `e` of degree `-n`. The twist `δ`
//! gives `d(e_j) = Σ_{i>j} e_i δ_ij`, extended by the Leibniz rule
//! `d(e_j a) = d(e_j) a + (-1)^{n_j} e_j d(a)`; `d² = 0` is the Maurer–Cartan
//! equation `(-1)^{n_i} d(δ_ij) + (δδ)_ij = 0`. A morphism `φ` of degree `p`
//! sends `e_j` to `Σ_i e'_i φ_ij` with `φ_ij` of degree `p + m_i - n_j`.

mod hom;
pub mod sample;

use serde::Serialize;
use thiserror::Error;

use crate::dg::{odd, sign, to_sparse, Algebra, DGModule, DgError, GradedBasis};
use crate::field::Scalar;
use crate::linalg::{is_zero_vec, Echelon, Vector};

pub use hom::{hom_complex, hom_into_module, HomComplex, ModuleHomComplex};

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize)]
pub enum PerfError {
    #[error("objects live over different algebras")]
    AlgebraMismatch,
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("entry ({row}, {col}) has the wrong degree")]
    WrongDegree { row: usize, col: usize },
    #[error("twist entry ({row}, {col}) is not strictly below the diagonal")]
    NotTriangular { row: usize, col: usize },
    #[error("Maurer–Cartan equation fails at ({row}, {col})")]
    MaurerCartan { row: usize, col: usize },
    #[error("morphism is not closed")]
    NotClosed,
    #[error("idempotent is not strict: {0}")]
    NotIdempotent(String),
    #[error("morphism does not factor through the summands")]
    NotInSummand,
    #[error("{0}")]
    Algebra(String),
}

impl From<DgError> for PerfError {
    fn from(e: DgError) -> Self {
        PerfError::Algebra(e.to_string())
    }
}

impl From<crate::linalg::LinalgError> for PerfError {
    fn from(e: crate::linalg::LinalgError) -> Self {
        PerfError::Algebra(e.to_string())
    }
}

/// A matrix with entries in the algebra, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Vector>,
}

impl AlgMatrix {
    pub fn zeros(a: &Algebra, rows: usize, cols: usize) -> AlgMatrix {
        AlgMatrix {
            rows,
            cols,
            entries: vec![a.zero_element(); rows * cols],
        }
    }

    pub fn identity(a: &Algebra, n: usize) -> AlgMatrix {
        AlgMatrix::diagonal(a, &vec![a.unit().clone(); n])
    }

    pub fn diagonal(a: &Algebra, diag: &[Vector]) -> AlgMatrix {
        let n = diag.len();
        let mut m = AlgMatrix::zeros(a, n, n);
        for (i, x) in diag.iter().enumerate() {
            m.set(i, i, x.clone());
        }
        m
    }

    pub fn from_entries(
        rows: usize,
        cols: usize,
        entries: Vec<Vector>,
    ) -> Result<AlgMatrix, PerfError> {
        if entries.len() != rows * cols {
            return Err(PerfError::Shape(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        Ok(AlgMatrix {
            rows,
            cols,
            entries,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Vector {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Vector) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> &[Vector] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|v| is_zero_vec(v))
    }

    pub fn mul(&self, a: &Algebra, other: &AlgMatrix) -> AlgMatrix {
        assert_eq!(self.cols, other.rows, "inner dimensions");
        let k = a.field();
        let mut out = AlgMatrix::zeros(a, self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let x = self.get(i, l);
                if is_zero_vec(x) {
                    continue;
                }
                for j in 0..other.cols {
                    let y = other.get(l, j);
                    if is_zero_vec(y) {
                        continue;
                    }
                    let p = a.mul(x, y);
                    let slot = &mut out.entries[i * other.cols + j];
                    for (s, v) in slot.iter_mut().zip(&p) {
                        if !v.is_zero() {
                            *s = k.add(s, v);
                        }
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, a: &Algebra, other: &AlgMatrix) -> AlgMatrix {
        let k = a.field();
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(x, y)| x.iter().zip(y).map(|(s, t)| k.add(s, t)).collect())
            .collect();
        AlgMatrix {
            rows: self.rows,
            cols: self.cols,
            entries,
        }
    }

    pub fn scale(&self, a: &Algebra, c: &Scalar) -> AlgMatrix {
        let k = a.field();
        AlgMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .map(|x| x.iter().map(|s| k.mul(c, s)).collect())
                .collect(),
        }
    }

    /// Entrywise differential, row `i` multiplied by `signs[i]`.
    fn signed_d(&self, a: &Algebra, negative_rows: &[bool]) -> AlgMatrix {
        let k = a.field();
        let mut out = self.clone();
        for i in 0..self.rows {
            let s = sign(k, negative_rows[i]);
            for j in 0..self.cols {
                let dx = a.d(self.get(i, j));
                out.set(i, j, dx.iter().map(|x| k.mul(&s, x)).collect());
            }
        }
        out
    }

    pub fn map_entries(&self, f: impl Fn(&Vector) -> Vector) -> AlgMatrix {
        AlgMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(f).collect(),
        }
    }

    /// `[[tl, tr], [bl, br]]`.
    pub fn block(tl: &AlgMatrix, tr: &AlgMatrix, bl: &AlgMatrix, br: &AlgMatrix) -> AlgMatrix {
        let (r1, c1, r2, c2) = (tl.rows, tl.cols, br.rows, br.cols);
        let mut entries = Vec::with_capacity((r1 + r2) * (c1 + c2));
        for i in 0..r1 {
            entries.extend_from_slice(&tl.entries[i * c1..(i + 1) * c1]);
            entries.extend_from_slice(&tr.entries[i * c2..(i + 1) * c2]);
        }
        for i in 0..r2 {
            entries.extend_from_slice(&bl.entries[i * c1..(i + 1) * c1]);
            entries.extend_from_slice(&br.entries[i * c2..(i + 1) * c2]);
        }
        AlgMatrix {
            rows: r1 + r2,
            cols: c1 + c2,
            entries,
        }
    }
}

/// One-sided twisted complex: cells `A[n_1], …, A[n_r]` and a strictly lower
/// triangular twist.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwistedComplex {
    algebra: Algebra,
    cells: Vec<i32>,
    twist: AlgMatrix,
}

fn check_degree(a: &Algebra, v: &[Scalar], expected: i32) -> bool {
    v.iter()
        .enumerate()
        .all(|(t, x)| x.is_zero() || a.degree(t) == expected)
}

impl TwistedComplex {
    pub fn new(
        algebra: &Algebra,
        cells: Vec<i32>,
        twist: AlgMatrix,
    ) -> Result<TwistedComplex, PerfError> {
        let r = cells.len();
        if twist.rows != r
            || twist.cols != r
            || twist.entries.iter().any(|v| v.len() != algebra.dim())
        {
            return Err(PerfError::Shape(format!(
                "twist must be {r}x{r} over an algebra of dimension {}",
                algebra.dim()
            )));
        }
        for i in 0..r {
            for j in 0..r {
                let x = twist.get(i, j);
                if is_zero_vec(x) {
                    continue;
                }
                if i <= j {
                    return Err(PerfError::NotTriangular { row: i, col: j });
                }
                if !check_degree(algebra, x, cells[i] - cells[j] + 1) {
                    return Err(PerfError::WrongDegree { row: i, col: j });
                }
            }
        }
        let tc = TwistedComplex {
            algebra: algebra.clone(),
            cells,
            twist,
        };
        let mc = tc
            .twist
            .signed_d(algebra, &tc.odd_cells())
            .add(algebra, &tc.twist.mul(algebra, &tc.twist));
        for i in 0..r {
            for j in 0..r {
                if !is_zero_vec(mc.get(i, j)) {
                    return Err(PerfError::MaurerCartan { row: i, col: j });
                }
            }
        }
        Ok(tc)
    }

    pub fn free(algebra: &Algebra) -> TwistedComplex {
        TwistedComplex {
            algebra: algebra.clone(),
            cells: vec![0],
            twist: AlgMatrix::zeros(algebra, 1, 1),
        }
    }

    pub fn zero(algebra: &Algebra) -> TwistedComplex {
        TwistedComplex {
            algebra: algebra.clone(),
            cells: Vec::new(),
            twist: AlgMatrix::zeros(algebra, 0, 0),
        }
    }

    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    pub fn cells(&self) -> &[i32] {
        &self.cells
    }

    pub fn twist(&self) -> &AlgMatrix {
        &self.twist
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub(crate) fn odd_cells(&self) -> Vec<bool> {
        self.cells.iter().map(|n| odd(*n)).collect()
    }

    /// The underlying DG module `⊕_j e_j A`, basis `c{j}:{b}`.
    pub fn underlying(&self) -> DGModule {
        let a = &self.algebra;
        let k = a.field();
        let (r, na) = (self.len(), a.dim());
        let mut names = Vec::with_capacity(r * na);
        let mut degrees = Vec::with_capacity(r * na);
        for (j, n) in self.cells.iter().enumerate() {
            for t in 0..na {
                names.push(format!("c{j}:{}", a.name(t)));
                degrees.push(a.degree(t) - n);
            }
        }
        let mut action = Vec::with_capacity(r * na * na);
        let mut diff = Vec::with_capacity(r * na);
        for j in 0..r {
            for t in 0..na {
                for c in 0..na {
                    action.push(
                        a.product(t, c)
                            .iter()
                            .map(|(s, x)| (j * na + s, x.clone()))
                            .collect(),
                    );
                }
                let bt = a.basis_element(t);
                let mut v = vec![k.zero(); r * na];
                for i in (j + 1)..r {
                    let prod = a.mul(self.twist.get(i, j), &bt);
                    for (s, x) in prod.into_iter().enumerate() {
                        v[i * na + s] = x;
                    }
                }
                let sg = sign(k, odd(self.cells[j]));
                for (s, x) in a.differential(t) {
                    v[j * na + s] = k.add(&v[j * na + s], &k.mul(&sg, x));
                }
                diff.push(to_sparse(&v));
            }
        }
        DGModule::new(a, GradedBasis { names, degrees }, action, diff)
            .expect("shapes are consistent")
    }
}

/// A twisted complex with an optional strict idempotent endomorphism.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PerfObject {
    complex: TwistedComplex,
    idempotent: Option<AlgMatrix>,
}

impl PerfObject {
    pub fn new(
        complex: TwistedComplex,
        idempotent: Option<AlgMatrix>,
    ) -> Result<PerfObject, PerfError> {
        let x = PerfObject {
            complex,
            idempotent: None,
        };
        if let Some(e) = &idempotent {
            let a = x.algebra().clone();
            let m = Morphism::raw(&x, &x, 0, e.clone())?;
            if !m.is_closed() {
                return Err(PerfError::NotIdempotent("not closed".into()));
            }
            if e.mul(&a, e) != *e {
                return Err(PerfError::NotIdempotent("e² ≠ e".into()));
            }
        }
        Ok(PerfObject { idempotent, ..x })
    }

    pub fn free(algebra: &Algebra) -> PerfObject {
        PerfObject {
            complex: TwistedComplex::free(algebra),
            idempotent: None,
        }
    }

    pub fn zero(algebra: &Algebra) -> PerfObject {
        PerfObject {
            complex: TwistedComplex::zero(algebra),
            idempotent: None,
        }
    }

    /// `eA[n]` for a closed degree-zero idempotent `e` of the algebra.
    pub fn projective(
        algebra: &Algebra,
        e: &[Scalar],
        shift: i32,
    ) -> Result<PerfObject, PerfError> {
        let tc = TwistedComplex::new(algebra, vec![shift], AlgMatrix::zeros(algebra, 1, 1))?;
        PerfObject::new(tc, Some(AlgMatrix::diagonal(algebra, &[e.to_vec()])))
    }

    pub fn complex(&self) -> &TwistedComplex {
        &self.complex
    }

    pub fn algebra(&self) -> &Algebra {
        &self.complex.algebra
    }

    pub fn cells(&self) -> &[i32] {
        &self.complex.cells
    }

    pub fn idempotent(&self) -> Option<&AlgMatrix> {
        self.idempotent.as_ref()
    }

    /// The idempotent, or the identity matrix.
    pub fn projector(&self) -> AlgMatrix {
        self.idempotent
            .clone()
            .unwrap_or_else(|| AlgMatrix::identity(self.algebra(), self.complex.len()))
    }

    pub fn shift(&self, n: i32) -> PerfObject {
        let a = self.algebra();
        let cells = self.complex.cells.iter().map(|c| c + n).collect();
        let twist = self.complex.twist.scale(a, &sign(a.field(), odd(n)));
        PerfObject {
            complex: TwistedComplex {
                algebra: a.clone(),
                cells,
                twist,
            },
            idempotent: self.idempotent.clone(),
        }
    }

    pub fn direct_sum(&self, other: &PerfObject) -> Result<PerfObject, PerfError> {
        if self.algebra() != other.algebra() {
            return Err(PerfError::AlgebraMismatch);
        }
        let a = self.algebra();
        let (r, s) = (self.complex.len(), other.complex.len());
        let cells = self
            .complex
            .cells
            .iter()
            .chain(&other.complex.cells)
            .copied()
            .collect();
        let twist = AlgMatrix::block(
            &self.complex.twist,
            &AlgMatrix::zeros(a, r, s),
            &AlgMatrix::zeros(a, s, r),
            &other.complex.twist,
        );
        let idempotent = (self.idempotent.is_some() || other.idempotent.is_some()).then(|| {
            AlgMatrix::block(
                &self.projector(),
                &AlgMatrix::zeros(a, r, s),
                &AlgMatrix::zeros(a, s, r),
                &other.projector(),
            )
        });
        Ok(PerfObject {
            complex: TwistedComplex {
                algebra: a.clone(),
                cells,
                twist,
            },
            idempotent,
        })
    }

    /// Cone of a closed degree-zero morphism: cells of the source shifted by
    /// one, then cells of the target; twist `[[-δx, 0], [φ, δy]]`.
    pub fn cone(f: &Morphism) -> Result<PerfObject, PerfError> {
        if f.degree != 0 {
            return Err(PerfError::WrongDegree { row: 0, col: 0 });
        }
        if !f.is_closed() {
            return Err(PerfError::NotClosed);
        }
        let x = f.source.shift(1);
        let y = &f.target;
        let a = x.algebra();
        let (r, s) = (x.complex.len(), y.complex.len());
        let cells = x
            .complex
            .cells
            .iter()
            .chain(&y.complex.cells)
            .copied()
            .collect();
        let twist = AlgMatrix::block(
            &x.complex.twist,
            &AlgMatrix::zeros(a, r, s),
            &f.matrix,
            &y.complex.twist,
        );
        let complex = TwistedComplex::new(a, cells, twist)?;
        let idempotent = (x.idempotent.is_some() || y.idempotent.is_some()).then(|| {
            AlgMatrix::block(
                &x.projector(),
                &AlgMatrix::zeros(a, r, s),
                &AlgMatrix::zeros(a, s, r),
                &y.projector(),
            )
        });
        PerfObject::new(complex, idempotent)
    }

    /// The summand cut out by a strict idempotent `e` with `e = p e p` for the
    /// current projector `p`.
    pub fn summand(&self, e: &AlgMatrix) -> Result<PerfObject, PerfError> {
        let a = self.algebra();
        let p = self.projector();
        if p.mul(a, e).mul(a, &p) != *e {
            return Err(PerfError::NotInSummand);
        }
        PerfObject::new(self.complex.clone(), Some(e.clone()))
    }

    /// The underlying DG module (the image of the idempotent when present).
    pub fn underlying(&self) -> Result<crate::dg::Submodule, PerfError> {
        let u = self.complex.underlying();
        let Some(e) = &self.idempotent else {
            let inclusion = (0..u.dim()).map(|t| u.basis_element(t)).collect();
            return Ok(crate::dg::Submodule {
                module: u,
                inclusion,
            });
        };
        let a = self.algebra();
        let na = a.dim();
        let r = self.complex.len();
        let k = a.field();
        let mut span = Echelon::new(k, u.dim());
        for j in 0..r {
            for t in 0..na {
                let bt = a.basis_element(t);
                let mut v = vec![k.zero(); u.dim()];
                for i in 0..r {
                    let x = a.mul(e.get(i, j), &bt);
                    for (s, c) in x.into_iter().enumerate() {
                        v[i * na + s] = c;
                    }
                }
                span.insert(&v);
            }
        }
        Ok(u.submodule_of(&span)?)
    }

    pub fn identity(&self) -> Morphism {
        Morphism {
            source: self.clone(),
            target: self.clone(),
            degree: 0,
            matrix: self.projector(),
        }
    }

    /// `dim H^p Hom(self, y)` for all `p` with nonzero value.
    pub fn ext_dims(
        &self,
        y: &PerfObject,
    ) -> Result<std::collections::BTreeMap<i32, usize>, PerfError> {
        Ok(hom_complex(self, y)?.complex.cohomology()?.support())
    }

    /// `cone(f)` is zero in the homotopy category.
    pub fn is_homotopy_iso(f: &Morphism) -> Result<IsoReport, PerfError> {
        let c = PerfObject::cone(f)?;
        let dims = c.ext_dims(&c)?;
        Ok(IsoReport {
            iso: dims.is_empty(),
            cone_endomorphism_dims: dims,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IsoReport {
    pub iso: bool,
    pub cone_endomorphism_dims: std::collections::BTreeMap<i32, usize>,
}

/// A morphism between perfect objects; rows index target cells.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Morphism {
    pub source: PerfObject,
    pub target: PerfObject,
    pub degree: i32,
    pub matrix: AlgMatrix,
}

impl Morphism {
    fn raw(
        source: &PerfObject,
        target: &PerfObject,
        degree: i32,
        matrix: AlgMatrix,
    ) -> Result<Morphism, PerfError> {
        if source.algebra() != target.algebra() {
            return Err(PerfError::AlgebraMismatch);
        }
        let a = source.algebra();
        let (rows, cols) = (target.cells().len(), source.cells().len());
        if matrix.rows != rows
            || matrix.cols != cols
            || matrix.entries.iter().any(|v| v.len() != a.dim())
        {
            return Err(PerfError::Shape(format!("morphism must be {rows}x{cols}")));
        }
        for i in 0..rows {
            for j in 0..cols {
                if !check_degree(
                    a,
                    matrix.get(i, j),
                    degree + target.cells()[i] - source.cells()[j],
                ) {
                    return Err(PerfError::WrongDegree { row: i, col: j });
                }
            }
        }
        Ok(Morphism {
            source: source.clone(),
            target: target.clone(),
            degree,
            matrix,
        })
    }

    /// Checks shape and entry degrees, and that `φ = f φ e` for the idempotents.
    pub fn new(
        source: &PerfObject,
        target: &PerfObject,
        degree: i32,
        matrix: AlgMatrix,
    ) -> Result<Morphism, PerfError> {
        let m = Morphism::raw(source, target, degree, matrix)?;
        let a = source.algebra();
        if target
            .projector()
            .mul(a, &m.matrix)
            .mul(a, &source.projector())
            != m.matrix
        {
            return Err(PerfError::NotInSummand);
        }
        Ok(m)
    }

    pub fn zero(source: &PerfObject, target: &PerfObject, degree: i32) -> Morphism {
        let a = source.algebra();
        Morphism {
            source: source.clone(),
            target: target.clone(),
            degree,
            matrix: AlgMatrix::zeros(a, target.cells().len(), source.cells().len()),
        }
    }

    /// `D φ = δ_y φ + S d(φ) - (-1)^p φ δ_x` with `S = diag((-1)^{m_i})`.
    pub fn differential(&self) -> AlgMatrix {
        let a = self.source.algebra();
        let ty = &self.target.complex;
        let tx = &self.source.complex;
        let first = ty.twist.mul(a, &self.matrix);
        let second = self.matrix.signed_d(a, &ty.odd_cells());
        let third = self
            .matrix
            .mul(a, &tx.twist)
            .scale(a, &sign(a.field(), !odd(self.degree)));
        first.add(a, &second).add(a, &third)
    }

    pub fn is_closed(&self) -> bool {
        self.differential().is_zero()
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Morphism) -> Result<Morphism, PerfError> {
        if other.target != self.source {
            return Err(PerfError::Shape(
                "composition of non-adjacent morphisms".into(),
            ));
        }
        let a = self.source.algebra();
        Ok(Morphism {
            source: other.source.clone(),
            target: self.target.clone(),
            degree: self.degree + other.degree,
            matrix: self.matrix.mul(a, &other.matrix),
        })
    }
}

#[cfg(test)]
mod tests;
