//! Scalar extension along a prefix of a field tower, the forgetful functor
//! back down, and the dimension comparisons between the two sides.
//!
//! Extension keeps every basis name and degree and embeds the structure
//! constants, so extended objects can be compared with `==`.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dg::{Algebra, DGAlgebra, DGBimodule, DGModule, GradedBasis, Sparse, ValidationReport};
use crate::field::{Field, FieldError, Scalar};
use crate::linalg::{Matrix, Vector};
use crate::perf::{hom_into_module, AlgMatrix, Morphism, PerfError, PerfObject, TwistedComplex};
use crate::resolve::{ext_dims, ResolveError, ResolveOptions};

#[cfg(test)]
mod tests;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BaseChangeError {
    #[error("{from} is not a prefix of {to}")]
    NotAPrefixTower { from: String, to: String },
    #[error("object does not live over the source algebra")]
    AlgebraMismatch,
    #[error("extended object fails validation: {0}")]
    Invalid(String),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Perf(#[from] PerfError),
    #[error(transparent)]
    Resolve(#[from] ResolveError),
}

impl From<crate::dg::DgError> for BaseChangeError {
    fn from(e: crate::dg::DgError) -> Self {
        BaseChangeError::Invalid(e.to_string())
    }
}

/// `k ⊂ k′` where `k` is a prefix of the tower defining `k′`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtensionMap {
    source: Field,
    target: Field,
    degree: usize,
}

fn check_valid(report: ValidationReport) -> Result<(), BaseChangeError> {
    match report.violation {
        None => Ok(()),
        Some(v) => Err(BaseChangeError::Invalid(format!(
            "{:?} at {:?}",
            v.axiom, v.witness
        ))),
    }
}

impl ExtensionMap {
    pub fn new(source: &Field, target: &Field) -> Result<ExtensionMap, BaseChangeError> {
        let degree =
            target
                .relative_degree(source)
                .ok_or_else(|| BaseChangeError::NotAPrefixTower {
                    from: source.to_string(),
                    to: target.to_string(),
                })?;
        Ok(ExtensionMap {
            source: source.clone(),
            target: target.clone(),
            degree,
        })
    }

    pub fn source(&self) -> &Field {
        &self.source
    }

    pub fn target(&self) -> &Field {
        &self.target
    }

    /// `[k′ : k]`.
    pub fn degree(&self) -> usize {
        self.degree
    }

    /// `k → k″` from `k → k′` and `k′ → k″`.
    pub fn then(&self, next: &ExtensionMap) -> Result<ExtensionMap, BaseChangeError> {
        if next.source != self.target {
            return Err(BaseChangeError::NotAPrefixTower {
                from: self.target.to_string(),
                to: next.source.to_string(),
            });
        }
        ExtensionMap::new(&self.source, &next.target)
    }

    pub fn scalar(&self, s: &Scalar) -> Result<Scalar, BaseChangeError> {
        Ok(self.target.embed(&self.source, s)?)
    }

    pub fn vector(&self, v: &[Scalar]) -> Result<Vector, BaseChangeError> {
        v.iter().map(|s| self.scalar(s)).collect()
    }

    pub fn matrix(&self, m: &Matrix) -> Result<Matrix, BaseChangeError> {
        let mut out = Matrix::zeros(&self.target, m.rows(), m.cols());
        for r in 0..m.rows() {
            for c in 0..m.cols() {
                out.set(r, c, self.scalar(m.get(r, c))?);
            }
        }
        Ok(out)
    }

    fn sparse(&self, s: &Sparse) -> Result<Sparse, BaseChangeError> {
        s.iter().map(|(i, c)| Ok((*i, self.scalar(c)?))).collect()
    }

    fn sparse_table(
        &self,
        rows: impl Iterator<Item = Sparse>,
    ) -> Result<Vec<Sparse>, BaseChangeError> {
        rows.map(|s| self.sparse(&s)).collect()
    }

    fn check_field(&self, k: &Field) -> Result<(), BaseChangeError> {
        if *k == self.source {
            Ok(())
        } else {
            Err(BaseChangeError::NotAPrefixTower {
                from: self.source.to_string(),
                to: k.to_string(),
            })
        }
    }

    pub fn algebra(&self, a: &DGAlgebra) -> Result<Algebra, BaseChangeError> {
        self.check_field(a.field())?;
        let n = a.dim();
        let mul = self.sparse_table((0..n * n).map(|ij| a.product(ij / n, ij % n).clone()))?;
        let diff = self.sparse_table((0..n).map(|i| a.differential(i).clone()))?;
        let out = DGAlgebra::new(
            &self.target,
            a.basis().clone(),
            self.vector(a.unit())?,
            mul,
            diff,
        )?;
        check_valid(out.validate())?;
        Ok(Arc::new(out))
    }

    pub fn module(&self, m: &DGModule) -> Result<DGModule, BaseChangeError> {
        let a = self.algebra(m.algebra())?;
        self.module_over(m, &a)
    }

    /// Extends `m` onto an already extended copy of its algebra.
    pub fn module_over(&self, m: &DGModule, a: &Algebra) -> Result<DGModule, BaseChangeError> {
        self.check_field(m.field())?;
        if a.basis() != m.algebra().basis() || a.field() != &self.target {
            return Err(BaseChangeError::AlgebraMismatch);
        }
        let (n, na) = (m.dim(), a.dim());
        let action = self.sparse_table((0..n * na).map(|ti| m.action(ti / na, ti % na).clone()))?;
        let diff = self.sparse_table((0..n).map(|t| m.differential(t).clone()))?;
        let out = DGModule::new(a, m.basis().clone(), action, diff)?;
        check_valid(out.validate())?;
        Ok(out)
    }

    pub fn bimodule(&self, t: &DGBimodule) -> Result<DGBimodule, BaseChangeError> {
        let left = self.algebra(t.left())?;
        let right = if t.left() == t.right() {
            left.clone()
        } else {
            self.algebra(t.right())?
        };
        self.bimodule_over(t, &left, &right)
    }

    pub fn bimodule_over(
        &self,
        t: &DGBimodule,
        left: &Algebra,
        right: &Algebra,
    ) -> Result<DGBimodule, BaseChangeError> {
        self.check_field(t.field())?;
        if left.basis() != t.left().basis() || right.basis() != t.right().basis() {
            return Err(BaseChangeError::AlgebraMismatch);
        }
        let (n, nl, nr) = (t.dim(), left.dim(), right.dim());
        let la = self.sparse_table((0..nl * n).map(|is| t.left_action(is / n, is % n).clone()))?;
        let ra =
            self.sparse_table((0..n * nr).map(|sj| t.right_action(sj / nr, sj % nr).clone()))?;
        let diff = self.sparse_table((0..n).map(|s| t.differential(s).clone()))?;
        let out = DGBimodule::new(left, right, t.basis().clone(), la, ra, diff)?;
        check_valid(out.validate())?;
        Ok(out)
    }

    fn alg_matrix(&self, m: &AlgMatrix) -> Result<AlgMatrix, BaseChangeError> {
        let entries = m
            .entries()
            .iter()
            .map(|v| self.vector(v))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(AlgMatrix::from_entries(m.rows(), m.cols(), entries)?)
    }

    pub fn perf(&self, x: &PerfObject) -> Result<PerfObject, BaseChangeError> {
        let a = self.algebra(x.algebra())?;
        self.perf_over(x, &a)
    }

    pub fn perf_over(&self, x: &PerfObject, a: &Algebra) -> Result<PerfObject, BaseChangeError> {
        self.check_field(x.algebra().field())?;
        if a.basis() != x.algebra().basis() {
            return Err(BaseChangeError::AlgebraMismatch);
        }
        let tc = TwistedComplex::new(a, x.cells().to_vec(), self.alg_matrix(x.complex().twist())?)?;
        let idempotent = x.idempotent().map(|e| self.alg_matrix(e)).transpose()?;
        Ok(PerfObject::new(tc, idempotent)?)
    }

    pub fn morphism(&self, f: &Morphism) -> Result<Morphism, BaseChangeError> {
        let a = self.algebra(f.source.algebra())?;
        self.morphism_over(f, &a)
    }

    pub fn morphism_over(&self, f: &Morphism, a: &Algebra) -> Result<Morphism, BaseChangeError> {
        let source = self.perf_over(&f.source, a)?;
        let target = if f.target == f.source {
            source.clone()
        } else {
            self.perf_over(&f.target, a)?
        };
        Ok(Morphism::new(
            &source,
            &target,
            f.degree,
            self.alg_matrix(&f.matrix)?,
        )?)
    }

    /// The forgetful functor: `m` over `A_{k′}` viewed over `A`, with basis
    /// `m_t ω_r` for the monomial basis `ω` of `k′` over `k`.
    pub fn restrict(&self, m: &DGModule, a: &Algebra) -> Result<DGModule, BaseChangeError> {
        self.check_field(a.field())?;
        if m.field() != &self.target || m.algebra().basis() != a.basis() {
            return Err(BaseChangeError::AlgebraMismatch);
        }
        let kp = &self.target;
        let omega = kp.monomial_basis_over(&self.source)?;
        let r = omega.len();
        let (n, na) = (m.dim(), a.dim());
        let mut names = Vec::with_capacity(n * r);
        let mut degrees = Vec::with_capacity(n * r);
        for t in 0..n {
            for q in 0..r {
                names.push(if r == 1 {
                    m.basis().names[t].clone()
                } else {
                    format!("{}·w{q}", m.basis().names[t])
                });
                degrees.push(m.degree(t));
            }
        }
        // (Σ_s c_s m_s)·ω_q = Σ_s Σ_p coord_p(c_s ω_q) m_s ω_p
        let lower = |s: &Sparse, q: usize| -> Result<Sparse, BaseChangeError> {
            let mut out = Vec::new();
            for (u, c) in s {
                let coords = kp.coordinates_over(&self.source, &kp.mul(c, &omega[q]))?;
                for (p, x) in coords.into_iter().enumerate() {
                    if !x.is_zero() {
                        out.push((u * r + p, x));
                    }
                }
            }
            Ok(out)
        };
        let mut action = Vec::with_capacity(n * r * na);
        let mut diff = Vec::with_capacity(n * r);
        for t in 0..n {
            for q in 0..r {
                for i in 0..na {
                    action.push(lower(m.action(t, i), q)?);
                }
                diff.push(lower(m.differential(t), q)?);
            }
        }
        Ok(DGModule::new(
            a,
            GradedBasis::new(names, degrees)?,
            action,
            diff,
        )?)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BaseChangeReport {
    pub window: (i32, i32),
    /// `dim_k Ext^i_A(x, f)`.
    #[serde(with = "crate::checkers::degree_keys")]
    pub source_dims: BTreeMap<i32, usize>,
    /// `dim_{k′} Ext^i_{A_{k′}}(x_{k′}, f_{k′})`.
    #[serde(with = "crate::checkers::degree_keys")]
    pub target_dims: BTreeMap<i32, usize>,
    pub agree: bool,
}

fn window_dims(h: &crate::linalg::Cohomology, window: (i32, i32)) -> BTreeMap<i32, usize> {
    (window.0..=window.1).map(|i| (i, h.dim(i))).collect()
}

/// Compares `Ext^i(x, f)` before and after extension. Both sides come from
/// finite Hom complexes, so every degree of the window is exact.
pub fn check_hom_base_change(
    x: &PerfObject,
    f: &DGModule,
    e: &ExtensionMap,
    window: (i32, i32),
) -> Result<BaseChangeReport, BaseChangeError> {
    if x.algebra() != f.algebra() {
        return Err(BaseChangeError::AlgebraMismatch);
    }
    let source = hom_into_module(x, f)?
        .complex
        .cohomology()
        .map_err(PerfError::from)?;
    let a = e.algebra(x.algebra())?;
    let (xe, fe) = (e.perf_over(x, &a)?, e.module_over(f, &a)?);
    let target = hom_into_module(&xe, &fe)?
        .complex
        .cohomology()
        .map_err(PerfError::from)?;
    let (source_dims, target_dims) = (window_dims(&source, window), window_dims(&target, window));
    Ok(BaseChangeReport {
        window,
        agree: source_dims == target_dims,
        source_dims,
        target_dims,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdjunctionReport {
    pub window: (i32, i32),
    pub degree: usize,
    /// `dim_k Ext^i_{A_{k′}}(x_{k′}, f) = [k′:k]·dim_{k′}`.
    #[serde(with = "crate::checkers::degree_keys")]
    pub extended_side: BTreeMap<i32, usize>,
    /// `dim_k Ext^i_A(x, f|_A)`.
    #[serde(with = "crate::checkers::degree_keys")]
    pub restricted_side: BTreeMap<i32, usize>,
    pub agree: bool,
}

/// Compares both sides of `Hom(x_{k′}, f) ≅ Hom(x, f|_A)` dimension-wise.
/// Each side is resolved independently.
pub fn check_adjunction_dims(
    x: &DGModule,
    f: &DGModule,
    e: &ExtensionMap,
    window: (i32, i32),
    options: ResolveOptions,
) -> Result<AdjunctionReport, BaseChangeError> {
    let a = x.algebra();
    let ae = e.algebra(a)?;
    if f.algebra() != &ae {
        return Err(BaseChangeError::AlgebraMismatch);
    }
    let xe = e.module_over(x, &ae)?;
    let up = ext_dims(&xe, f, window, options)?;
    let down = ext_dims(x, &e.restrict(f, a)?, window, options)?;
    let extended_side: BTreeMap<i32, usize> =
        up.dims.iter().map(|(i, d)| (*i, d * e.degree)).collect();
    Ok(AdjunctionReport {
        window,
        degree: e.degree,
        agree: extended_side == down.dims,
        extended_side,
        restricted_side: down.dims,
    })
}
