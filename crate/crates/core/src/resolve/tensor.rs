use serde::Serialize;

use super::{
    ext_dims_with, minimal_resolution, Resolution, ResolutionStatus, ResolveError, ResolveOptions,
};
use crate::dg::{odd, sign, to_sparse, Algebra, DGBimodule, DGModule, GradedBasis};
use crate::linalg::{is_zero_vec, Echelon};
use crate::perf::{hom_into_module, PerfObject};

/// `x ⊗_A T` for a perfect `A`-object and an `A`-`B` bimodule: each cell
/// `A[n]` becomes `T[n]` and twist entries act on `T` from the left.
pub fn derived_tensor(x: &PerfObject, t: &DGBimodule) -> Result<DGModule, ResolveError> {
    if x.algebra() != t.left() {
        return Err(ResolveError::ActionMismatch(
            "object and bimodule live over different algebras".into(),
        ));
    }
    let k = t.field();
    let (cells, nt, nb) = (x.cells(), t.dim(), t.right().dim());
    let r = cells.len();
    let twist = x.complex().twist();
    let mut names = Vec::with_capacity(r * nt);
    let mut degrees = Vec::with_capacity(r * nt);
    for (j, n) in cells.iter().enumerate() {
        for s in 0..nt {
            names.push(format!("c{j}:{}", t.basis().names[s]));
            degrees.push(t.basis().degrees[s] - n);
        }
    }
    let mut action = Vec::with_capacity(r * nt * nb);
    let mut diff = Vec::with_capacity(r * nt);
    for j in 0..r {
        for s in 0..nt {
            for b in 0..nb {
                action.push(
                    t.right_action(s, b)
                        .iter()
                        .map(|(u, c)| (j * nt + u, c.clone()))
                        .collect(),
                );
            }
            let ts = t.basis_element(s);
            let mut v = vec![k.zero(); r * nt];
            for i in (j + 1)..r {
                let e = twist.get(i, j);
                if is_zero_vec(e) {
                    continue;
                }
                for (u, c) in t.left_act(e, &ts).into_iter().enumerate() {
                    v[i * nt + u] = c;
                }
            }
            let sg = sign(k, odd(cells[j]));
            for (u, c) in t.differential(s) {
                v[j * nt + u] = k.add(&v[j * nt + u], &k.mul(&sg, c));
            }
            diff.push(to_sparse(&v));
        }
    }
    let full = DGModule::new(t.right(), GradedBasis { names, degrees }, action, diff)?;
    let Some(e) = x.idempotent() else {
        return Ok(full);
    };
    let mut span = Echelon::new(k, full.dim());
    for j in 0..r {
        for s in 0..nt {
            let ts = t.basis_element(s);
            let mut v = vec![k.zero(); r * nt];
            for i in 0..r {
                for (u, c) in t.left_act(e.get(i, j), &ts).into_iter().enumerate() {
                    v[i * nt + u] = c;
                }
            }
            span.insert(&v);
        }
    }
    Ok(full.submodule_of(&span)?.module)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegreeCheck {
    pub degree: i32,
    pub algebra_dim: usize,
    pub ext_dim: usize,
    /// Rank of the induced map `H^i(A) → Ext^i(T, T)`.
    pub rank: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QuasiIsoReport {
    pub passed: bool,
    pub degrees: Vec<DegreeCheck>,
}

/// Whether `a ↦ (p ↦ a·ρ(p))` induces `H^i(A) ≅ Ext^i_B(T, T)` for `i` in the
/// window, with `ρ` the augmentation of a resolution of `T`.
pub fn action_quasi_iso_check(
    a: &Algebra,
    t: &DGBimodule,
    window: (i32, i32),
    options: ResolveOptions,
) -> Result<QuasiIsoReport, ResolveError> {
    let res = minimal_resolution(&t.right_module(), options)?;
    action_quasi_iso_with(a, t, res, window)
}

pub(crate) fn action_quasi_iso_with(
    a: &Algebra,
    t: &DGBimodule,
    mut res: Resolution,
    window: (i32, i32),
) -> Result<QuasiIsoReport, ResolveError> {
    if a != t.left() {
        return Err(ResolveError::ActionMismatch(
            "left action is not by the given algebra".into(),
        ));
    }
    let tm = t.right_module();
    ext_dims_with(&mut res, &tm, window)?;
    let model = res.model()?;
    let rho = res.augmentation()?;
    let hom = hom_into_module(&model, &tm)?;
    let hom_h = hom.complex.cohomology()?;
    let ha = a.cohomology()?;
    let k = a.field();
    let mut degrees = Vec::new();
    let mut passed = true;
    for i in window.0..=window.1 {
        let reps: Vec<_> = ha
            .representatives
            .iter()
            .zip(&ha.degrees)
            .filter(|(_, d)| **d == i)
            .map(|(v, _)| v)
            .collect();
        let ext = hom_h.dim(i);
        let dim = hom.complex.dim(i);
        let boundaries = if dim == 0 {
            Vec::new()
        } else {
            hom.complex.differential(i - 1).image()
        };
        let mut span = Echelon::from_vectors(k, dim, &boundaries);
        let base = span.dim();
        for r in &reps {
            let images: Vec<_> = rho.iter().map(|g| t.left_act(r, g)).collect();
            let c = hom
                .coordinates(i, &images)
                .ok_or_else(|| ResolveError::Algebra("action map leaves the Hom complex".into()))?;
            span.insert(&c);
        }
        let rank = span.dim() - base;
        let ok = rank == reps.len() && reps.len() == ext;
        passed &= ok;
        degrees.push(DegreeCheck {
            degree: i,
            algebra_dim: reps.len(),
            ext_dim: ext,
            rank,
        });
    }
    Ok(QuasiIsoReport { passed, degrees })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind")]
pub enum SmoothnessVerdict {
    /// The diagonal has a finite resolution of this length.
    Smooth {
        length: usize,
        cells: usize,
    },
    /// A minimal syzygy of the diagonal repeats.
    NotSmooth {
        period: usize,
        syzygy: usize,
        shift: i32,
    },
    Undetermined {
        depth: usize,
    },
}

#[derive(Debug, Clone)]
pub struct Smoothness {
    pub verdict: SmoothnessVerdict,
    pub resolution: Resolution,
}

/// Resolves the diagonal bimodule as a right module over `A^op ⊗ A`.
pub fn smoothness_probe(a: &Algebra, options: ResolveOptions) -> Result<Smoothness, ResolveError> {
    let diagonal = DGBimodule::diagonal(a).to_env_module()?;
    let resolution = minimal_resolution(&diagonal, options)?;
    let verdict = match resolution.status() {
        ResolutionStatus::Finite { length } => SmoothnessVerdict::Smooth {
            length,
            cells: resolution.total_cells(),
        },
        ResolutionStatus::Periodic { period, syzygy } => SmoothnessVerdict::NotSmooth {
            period,
            syzygy,
            shift: resolution.periodicity().map_or(0, |c| c.shift),
        },
        ResolutionStatus::Truncated { depth } => SmoothnessVerdict::Undetermined { depth },
    };
    Ok(Smoothness {
        verdict,
        resolution,
    })
}
