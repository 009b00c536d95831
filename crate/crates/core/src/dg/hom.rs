//! Hom complexes between finite-dimensional DG modules by raw linear algebra.

use std::collections::BTreeMap;

use super::{odd, sign, DGModule, DgError};
use crate::field::Scalar;
use crate::linalg::{Echelon, FiniteComplex, Matrix, Vector};

/// `Hom_A(M, N)` with, in each degree `p`, a basis of `A`-linear maps.
#[derive(Debug, Clone)]
pub struct ModuleHom {
    pub complex: FiniteComplex,
    /// Basis maps of degree `p`, each a `dim N × dim M` matrix.
    pub maps: BTreeMap<i32, Vec<Matrix>>,
}

impl ModuleHom {
    /// The map with the given coordinates in the degree-`p` basis.
    pub fn combine(&self, p: i32, coords: &[Scalar]) -> Option<Matrix> {
        let maps = self.maps.get(&p)?;
        let first = maps.first()?;
        let k = first.field().clone();
        let mut out = Matrix::zeros(&k, first.rows(), first.cols());
        for (m, c) in maps.iter().zip(coords) {
            if c.is_zero() {
                continue;
            }
            for r in 0..m.rows() {
                for col in 0..m.cols() {
                    let x = m.get(r, col);
                    if !x.is_zero() {
                        out.add_at(r, col, &k.mul(c, x));
                    }
                }
            }
        }
        Some(out)
    }
}

/// Hom complex with `D f = d_N f - (-1)^p f d_M`.
pub fn module_hom_complex(m: &DGModule, n: &DGModule) -> Result<ModuleHom, DgError> {
    if m.algebra() != n.algebra() {
        return Err(DgError::AlgebraMismatch);
    }
    let k = m.field().clone();
    let a = m.algebra();
    let (dm, dn, na) = (m.dim(), n.dim(), a.dim());
    let (Some(lo), Some(hi)) = (
        n.basis()
            .min_degree()
            .zip(m.basis().max_degree())
            .map(|(x, y)| x - y),
        n.basis()
            .max_degree()
            .zip(m.basis().min_degree())
            .map(|(x, y)| x - y),
    ) else {
        return Ok(ModuleHom {
            complex: FiniteComplex::new(&k, BTreeMap::new(), BTreeMap::new())?,
            maps: BTreeMap::new(),
        });
    };
    // variables of degree p: pairs (target s, source t) with |s| = |t| + p
    let vars = |p: i32| -> Vec<(usize, usize)> {
        let mut v = Vec::new();
        for t in 0..dm {
            for s in 0..dn {
                if n.degree(s) == m.degree(t) + p {
                    v.push((s, t));
                }
            }
        }
        v
    };
    let to_matrix = |vs: &[(usize, usize)], x: &[Scalar]| -> Matrix {
        let mut f = Matrix::zeros(&k, dn, dm);
        for ((s, t), c) in vs.iter().zip(x) {
            if !c.is_zero() {
                f.set(*s, *t, c.clone());
            }
        }
        f
    };
    let act_m: Vec<Matrix> = (0..na).map(|i| m.action_matrix(i)).collect();
    let act_n: Vec<Matrix> = (0..na).map(|i| n.action_matrix(i)).collect();
    let mut linear: BTreeMap<i32, (Vec<(usize, usize)>, Vec<Vector>, Echelon)> = BTreeMap::new();
    for p in lo..=hi {
        let vs = vars(p);
        if vs.is_empty() {
            continue;
        }
        // f ρ_M(a) - ρ_N(a) f = 0, one block of rows per basis element a
        let mut rows: Vec<Vector> = Vec::new();
        for i in 0..na {
            for s in 0..dn {
                for t in 0..dm {
                    let mut row = vec![k.zero(); vs.len()];
                    for (v, (s2, t2)) in vs.iter().enumerate() {
                        let mut c = k.zero();
                        if *s2 == s {
                            c = k.add(&c, act_m[i].get(*t2, t));
                        }
                        if *t2 == t {
                            c = k.sub(&c, act_n[i].get(s, *s2));
                        }
                        row[v] = c;
                    }
                    if row.iter().any(|x| !x.is_zero()) {
                        rows.push(row);
                    }
                }
            }
        }
        let basis = if rows.is_empty() {
            (0..vs.len())
                .map(|j| crate::linalg::unit_vector(&k, vs.len(), j))
                .collect()
        } else {
            Matrix::from_rows(&k, rows)?.kernel()
        };
        if basis.is_empty() {
            continue;
        }
        let span = Echelon::from_vectors(&k, vs.len(), &basis);
        linear.insert(p, (vs, basis, span));
    }
    let dmat = m.differential_matrix();
    let dnat = n.differential_matrix();
    let mut dims = BTreeMap::new();
    let mut diffs = BTreeMap::new();
    let mut maps = BTreeMap::new();
    for (&p, (vs, basis, _)) in &linear {
        dims.insert(p, basis.len());
        maps.insert(
            p,
            basis.iter().map(|x| to_matrix(vs, x)).collect::<Vec<_>>(),
        );
        let Some((vs1, basis1, span1)) = linear.get(&(p + 1)) else {
            continue;
        };
        let s = sign(&k, odd(p));
        let mut dmatrix = Matrix::zeros(&k, basis1.len(), basis.len());
        for (c, x) in basis.iter().enumerate() {
            let f = to_matrix(vs, x);
            let mut df = dnat.mul(&f)?;
            let fd = f.mul(&dmat)?;
            for r in 0..dn {
                for col in 0..dm {
                    let y = fd.get(r, col);
                    if !y.is_zero() {
                        df.add_at(r, col, &k.neg(&k.mul(&s, y)));
                    }
                }
            }
            let flat: Vector = vs1
                .iter()
                .map(|(s2, t2)| df.get(*s2, *t2).clone())
                .collect();
            let coords = span1.coordinates(&flat).ok_or(DgError::NotASubmodule)?;
            // coordinates are read in echelon-row order; convert to the kernel basis
            let in_basis = echelon_to_basis(&k, span1, basis1, &coords)?;
            for (r, y) in in_basis.into_iter().enumerate() {
                dmatrix.set(r, c, y);
            }
        }
        diffs.insert(p, dmatrix);
    }
    Ok(ModuleHom {
        complex: FiniteComplex::new(&k, dims, diffs)?,
        maps,
    })
}

/// Re-express coordinates relative to echelon rows in terms of the original basis.
fn echelon_to_basis(
    k: &crate::field::Field,
    span: &Echelon,
    basis: &[Vector],
    coords: &[Scalar],
) -> Result<Vector, DgError> {
    let target: Vector = {
        let mut v = vec![k.zero(); span.ambient()];
        for (row, c) in span.rows().iter().zip(coords) {
            crate::linalg::axpy(k, &mut v, c, row);
        }
        v
    };
    let m = Matrix::from_columns(k, span.ambient(), basis);
    match m.solve(&target)? {
        crate::linalg::Solution::Solved(x) => Ok(x),
        crate::linalg::Solution::NoSolution { .. } => Err(DgError::NotASubmodule),
    }
}
