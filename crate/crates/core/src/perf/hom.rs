//! Hom complexes out of perfect objects.

use std::collections::{BTreeMap, HashMap};

use super::{AlgMatrix, Morphism, PerfError, PerfObject};
use crate::dg::{odd, DGModule};
use crate::field::{Field, Scalar};
use crate::linalg::{is_zero_vec, Echelon, FiniteComplex, Matrix, Vector};

/// Raw coordinates: one variable per index triple, grouped by degree.
struct Raw<V> {
    vars: BTreeMap<i32, Vec<V>>,
    pos: HashMap<V, (i32, usize)>,
}

impl<V: Copy + Eq + std::hash::Hash> Raw<V> {
    fn new(items: impl IntoIterator<Item = (i32, V)>) -> Raw<V> {
        let mut vars: BTreeMap<i32, Vec<V>> = BTreeMap::new();
        let mut pos = HashMap::new();
        for (p, v) in items {
            let list = vars.entry(p).or_default();
            pos.insert(v, (p, list.len()));
            list.push(v);
        }
        Raw { vars, pos }
    }

    fn dims(&self) -> BTreeMap<i32, usize> {
        self.vars.iter().map(|(p, v)| (*p, v.len())).collect()
    }
}

/// Cuts a raw complex down to the image of a chain projection, given by the
/// images of the raw unit vectors in each degree.
fn compress(
    k: &Field,
    dims: &BTreeMap<i32, usize>,
    raw_d: &BTreeMap<i32, Matrix>,
    images: Option<BTreeMap<i32, Vec<Vector>>>,
) -> Result<(FiniteComplex, Option<BTreeMap<i32, Echelon>>), PerfError> {
    let Some(images) = images else {
        return Ok((FiniteComplex::new(k, dims.clone(), raw_d.clone())?, None));
    };
    let spans: BTreeMap<i32, Echelon> = images
        .iter()
        .map(|(p, vs)| (*p, Echelon::from_vectors(k, dims[p], vs)))
        .collect();
    let mut cdims = BTreeMap::new();
    let mut diffs = BTreeMap::new();
    for (p, span) in &spans {
        cdims.insert(*p, span.dim());
        let (Some(d), Some(next)) = (raw_d.get(p), spans.get(&(p + 1))) else {
            continue;
        };
        let mut m = Matrix::zeros(k, next.dim(), span.dim());
        for (c, row) in span.rows().iter().enumerate() {
            let image = d.mul_vec(row)?;
            let coords = next
                .coordinates(&image)
                .ok_or_else(|| PerfError::Algebra("projection is not a chain map".into()))?;
            for (r, x) in coords.into_iter().enumerate() {
                if !x.is_zero() {
                    m.set(r, c, x);
                }
            }
        }
        diffs.insert(*p, m);
    }
    Ok((FiniteComplex::new(k, cdims, diffs)?, Some(spans)))
}

fn add_into(k: &Field, col: &mut [Scalar], at: usize, c: &Scalar) {
    col[at] = k.add(&col[at], c);
}

/// `Hom(x, y)`, compressed to `f Hom e` when the objects carry idempotents.
#[derive(Debug, Clone)]
pub struct HomComplex {
    pub complex: FiniteComplex,
    source: PerfObject,
    target: PerfObject,
    /// Variables `(i, j, a)`: entry `(i, j)` is the basis element `a`.
    vars: BTreeMap<i32, Vec<(usize, usize, usize)>>,
    spans: Option<BTreeMap<i32, Echelon>>,
}

pub fn hom_complex(x: &PerfObject, y: &PerfObject) -> Result<HomComplex, PerfError> {
    if x.algebra() != y.algebra() {
        return Err(PerfError::AlgebraMismatch);
    }
    let a = x.algebra();
    let k = a.field();
    let na = a.dim();
    let (nx, ny) = (x.cells(), y.cells());
    let mut items = Vec::with_capacity(nx.len() * ny.len() * na);
    for i in 0..ny.len() {
        for j in 0..nx.len() {
            for t in 0..na {
                items.push((a.degree(t) - ny[i] + nx[j], (i, j, t)));
            }
        }
    }
    let raw = Raw::new(items);
    let dims = raw.dims();
    let (dx, dy) = (x.complex().twist(), y.complex().twist());
    let mut raw_d = BTreeMap::new();
    for (p, vars) in &raw.vars {
        let Some(next) = raw.vars.get(&(p + 1)) else {
            continue;
        };
        let mut m = Matrix::zeros(k, next.len(), vars.len());
        let neg_p = !odd(*p);
        for (c, &(i, j, t)) in vars.iter().enumerate() {
            let mut col = vec![k.zero(); next.len()];
            let bt = a.basis_element(t);
            let mut deposit = |r: usize, s: usize, v: &Vector, negative: bool| {
                for (u, coef) in v.iter().enumerate() {
                    if coef.is_zero() {
                        continue;
                    }
                    let (q, at) = raw.pos[&(r, s, u)];
                    debug_assert_eq!(q, p + 1);
                    let coef = if negative { k.neg(coef) } else { coef.clone() };
                    add_into(k, &mut col, at, &coef);
                }
            };
            for r in (i + 1)..ny.len() {
                let e = dy.get(r, i);
                if !is_zero_vec(e) {
                    deposit(r, j, &a.mul(e, &bt), false);
                }
            }
            deposit(i, j, &a.d(&bt), odd(ny[i]));
            for l in 0..j {
                let e = dx.get(j, l);
                if !is_zero_vec(e) {
                    deposit(i, l, &a.mul(&bt, e), neg_p);
                }
            }
            for (r, v) in col.into_iter().enumerate() {
                if !v.is_zero() {
                    m.set(r, c, v);
                }
            }
        }
        raw_d.insert(*p, m);
    }
    let images = if x.idempotent().is_none() && y.idempotent().is_none() {
        None
    } else {
        let (e, f) = (x.projector(), y.projector());
        let mut images = BTreeMap::new();
        for (p, vars) in &raw.vars {
            let imgs: Vec<Vector> = vars
                .iter()
                .map(|&(i, j, t)| {
                    // (f E_ij b e)_{rs} = f_ri b e_js
                    let mut v = vec![k.zero(); vars.len()];
                    let bt = a.basis_element(t);
                    for r in 0..ny.len() {
                        let fb = a.mul(f.get(r, i), &bt);
                        if is_zero_vec(&fb) {
                            continue;
                        }
                        for s in 0..nx.len() {
                            let prod = a.mul(&fb, e.get(j, s));
                            for (u, coef) in prod.iter().enumerate() {
                                if !coef.is_zero() {
                                    add_into(k, &mut v, raw.pos[&(r, s, u)].1, coef);
                                }
                            }
                        }
                    }
                    v
                })
                .collect();
            images.insert(*p, imgs);
        }
        Some(images)
    };
    let (complex, spans) = compress(k, &dims, &raw_d, images)?;
    Ok(HomComplex {
        complex,
        source: x.clone(),
        target: y.clone(),
        vars: raw.vars,
        spans,
    })
}

impl HomComplex {
    pub fn source(&self) -> &PerfObject {
        &self.source
    }

    pub fn target(&self) -> &PerfObject {
        &self.target
    }

    fn raw_vector(&self, p: i32, coords: &[Scalar]) -> Vector {
        match &self.spans {
            None => coords.to_vec(),
            Some(spans) => {
                let span = &spans[&p];
                let k = self.source.algebra().field();
                let mut v = vec![k.zero(); span.ambient()];
                for (row, c) in span.rows().iter().zip(coords) {
                    crate::linalg::axpy(k, &mut v, c, row);
                }
                v
            }
        }
    }

    /// The morphism of degree `p` with the given coordinates.
    pub fn morphism(&self, p: i32, coords: &[Scalar]) -> Morphism {
        let a = self.source.algebra();
        let k = a.field();
        let mut m = AlgMatrix::zeros(a, self.target.cells().len(), self.source.cells().len());
        if let Some(vars) = self.vars.get(&p) {
            let raw = self.raw_vector(p, coords);
            for (&(i, j, t), c) in vars.iter().zip(&raw) {
                if !c.is_zero() {
                    let mut e = m.get(i, j).clone();
                    e[t] = k.add(&e[t], c);
                    m.set(i, j, e);
                }
            }
        }
        Morphism {
            source: self.source.clone(),
            target: self.target.clone(),
            degree: p,
            matrix: m,
        }
    }

    /// Coordinates of a morphism of degree `p` in the complex's basis.
    pub fn coordinates(&self, f: &Morphism) -> Option<Vector> {
        let vars = self.vars.get(&f.degree)?;
        let raw: Vector = vars
            .iter()
            .map(|&(i, j, t)| f.matrix.get(i, j)[t].clone())
            .collect();
        match &self.spans {
            None => Some(raw),
            Some(spans) => spans[&f.degree].coordinates(&raw),
        }
    }

    /// A basis of the closed morphisms of degree `p`.
    pub fn cocycles(&self, p: i32) -> Vec<Morphism> {
        let d = self.complex.differential(p);
        let n = self.complex.dim(p);
        let basis = if d.rows() == 0 {
            (0..n)
                .map(|c| crate::linalg::unit_vector(self.source.algebra().field(), n, c))
                .collect()
        } else {
            d.kernel()
        };
        basis.iter().map(|v| self.morphism(p, v)).collect()
    }
}

/// `Hom(x, N)` for a DG module `N`: a morphism sends `e_j` to `m_j ∈ N`.
#[derive(Debug, Clone)]
pub struct ModuleHomComplex {
    pub complex: FiniteComplex,
    /// Variables `(j, t)`: the image of `e_j` is the basis vector `t`.
    vars: BTreeMap<i32, Vec<(usize, usize)>>,
    spans: Option<BTreeMap<i32, Echelon>>,
    cells: usize,
    module_dim: usize,
}

/// `D(φ)(e_j) = d(m_j) - (-1)^p Σ_i m_i δ_ij`, compressed to `φ ↦ φE`.
pub fn hom_into_module(x: &PerfObject, n: &DGModule) -> Result<ModuleHomComplex, PerfError> {
    if x.algebra() != n.algebra() {
        return Err(PerfError::AlgebraMismatch);
    }
    let a = x.algebra();
    let k = a.field();
    let cells = x.cells();
    let mut items = Vec::new();
    for (j, nj) in cells.iter().enumerate() {
        for t in 0..n.dim() {
            items.push((n.degree(t) + nj, (j, t)));
        }
    }
    let raw = Raw::new(items);
    let dims = raw.dims();
    let dx = x.complex().twist();
    let mut raw_d = BTreeMap::new();
    for (p, vars) in &raw.vars {
        let Some(next) = raw.vars.get(&(p + 1)) else {
            continue;
        };
        let mut m = Matrix::zeros(k, next.len(), vars.len());
        for (c, &(j, t)) in vars.iter().enumerate() {
            let mut col = vec![k.zero(); next.len()];
            for (s, coef) in n.differential(t) {
                add_into(k, &mut col, raw.pos[&(j, *s)].1, coef);
            }
            let bt = n.basis_element(t);
            for l in 0..j {
                let e = dx.get(j, l);
                if is_zero_vec(e) {
                    continue;
                }
                for (s, coef) in n.act(&bt, e).iter().enumerate() {
                    if !coef.is_zero() {
                        let coef = if odd(*p) { coef.clone() } else { k.neg(coef) };
                        add_into(k, &mut col, raw.pos[&(l, s)].1, &coef);
                    }
                }
            }
            for (r, v) in col.into_iter().enumerate() {
                if !v.is_zero() {
                    m.set(r, c, v);
                }
            }
        }
        raw_d.insert(*p, m);
    }
    let images = x.idempotent().map(|e| {
        raw.vars
            .iter()
            .map(|(p, vars)| {
                let imgs = vars
                    .iter()
                    .map(|&(j, t)| {
                        let mut v = vec![k.zero(); vars.len()];
                        let bt = n.basis_element(t);
                        for l in 0..cells.len() {
                            for (s, coef) in n.act(&bt, e.get(j, l)).iter().enumerate() {
                                if !coef.is_zero() {
                                    add_into(k, &mut v, raw.pos[&(l, s)].1, coef);
                                }
                            }
                        }
                        v
                    })
                    .collect();
                (*p, imgs)
            })
            .collect()
    });
    let (complex, spans) = compress(k, &dims, &raw_d, images)?;
    Ok(ModuleHomComplex {
        complex,
        vars: raw.vars,
        spans,
        cells: cells.len(),
        module_dim: n.dim(),
    })
}

impl ModuleHomComplex {
    /// Images of the generators `e_j` under the degree-`p` map with the given
    /// coordinates.
    pub fn images(&self, p: i32, coords: &[Scalar], k: &Field) -> Vec<Vector> {
        let mut out = vec![vec![k.zero(); self.module_dim]; self.cells];
        let Some(vars) = self.vars.get(&p) else {
            return out;
        };
        let raw = match &self.spans {
            None => coords.to_vec(),
            Some(spans) => {
                let span = &spans[&p];
                let mut v = vec![k.zero(); span.ambient()];
                for (row, c) in span.rows().iter().zip(coords) {
                    crate::linalg::axpy(k, &mut v, c, row);
                }
                v
            }
        };
        for (&(j, t), c) in vars.iter().zip(&raw) {
            out[j][t] = k.add(&out[j][t], c);
        }
        out
    }
}

impl ModuleHomComplex {
    /// Coordinates of the degree-`p` map sending `e_j` to `images[j]`.
    pub fn coordinates(&self, p: i32, images: &[Vector]) -> Option<Vector> {
        let vars = self.vars.get(&p)?;
        let raw: Vector = vars.iter().map(|&(j, t)| images[j][t].clone()).collect();
        match &self.spans {
            None => Some(raw),
            Some(spans) => spans[&p].coordinates(&raw),
        }
    }
}
