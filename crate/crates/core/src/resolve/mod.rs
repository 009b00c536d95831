//! Semifree resolutions of finite-dimensional DG modules, Ext, derived tensor
//! products and the smoothness probe.
//!
//! Step `s` covers the current module `N_s` (with `N_0 = M`) by a twisted
//! complex `F_s` of projective cells `e_v A`, chosen minimally against the
//! radical, and passes to the kernel `N_{s+1}` of `F_s → N_s`. The model is
//! the totalization `F_D[D] → ⋯ → F_0`, whose augmentation to `M` has cone
//! equivalent to `N_{D+1}[D+1]`.

mod radical;
mod tensor;

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::dg::{is_quasi_iso, module_hom_complex, odd, sign, Algebra, DGModule, DgError};
use crate::linalg::{axpy, is_zero_vec, Echelon, LinalgError, Matrix, Vector};
use crate::perf::{hom_into_module, AlgMatrix, PerfError, PerfObject, TwistedComplex};

pub use radical::{radical, Radical, RadicalMode};
pub(crate) use tensor::action_quasi_iso_with;
pub use tensor::{
    action_quasi_iso_check, derived_tensor, smoothness_probe, DegreeCheck, QuasiIsoReport,
    Smoothness, SmoothnessVerdict,
};

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize)]
pub enum ResolveError {
    #[error("resolution needs {cells} cells, above the size bound {bound}")]
    SizeBoundExceeded { cells: usize, bound: usize },
    #[error("degree {requested} requested but results are only guaranteed up to {guaranteed:?}")]
    WindowNotGuaranteed {
        requested: i32,
        guaranteed: Option<i32>,
    },
    #[error("action mismatch: {0}")]
    ActionMismatch(String),
    #[error(transparent)]
    Perf(#[from] PerfError),
    #[error("{0}")]
    Algebra(String),
}

impl From<DgError> for ResolveError {
    fn from(e: DgError) -> Self {
        ResolveError::Algebra(e.to_string())
    }
}

impl From<LinalgError> for ResolveError {
    fn from(e: LinalgError) -> Self {
        ResolveError::Algebra(e.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ResolveOptions {
    pub depth_bound: usize,
    pub size_bound: usize,
}

impl Default for ResolveOptions {
    fn default() -> Self {
        ResolveOptions {
            depth_bound: 24,
            size_bound: 2000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind")]
pub enum ResolutionStatus {
    Finite {
        length: usize,
    },
    /// `syzygy` is isomorphic (up to shift) to the syzygy `period` steps later.
    Periodic {
        period: usize,
        syzygy: usize,
    },
    Truncated {
        depth: usize,
    },
}

/// Graded dimensions relative to the lowest degree, ranks of the action of
/// each algebra basis element, and the rank of the differential.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Fingerprint {
    pub dims: Vec<(i32, usize)>,
    pub action_ranks: Vec<usize>,
    pub differential_rank: usize,
}

pub fn fingerprint(m: &DGModule) -> Fingerprint {
    let lo = m.basis().min_degree().unwrap_or(0);
    Fingerprint {
        dims: m
            .graded_dims()
            .into_iter()
            .map(|(d, n)| (d - lo, n))
            .collect(),
        action_ranks: (0..m.algebra().dim())
            .map(|i| m.action_matrix(i).rank())
            .collect(),
        differential_rank: m.differential_matrix().rank(),
    }
}

/// `iso: syzygy[from] → syzygy[to]` raising degrees by `shift`.
#[derive(Debug, Clone)]
pub struct PeriodicityCertificate {
    pub from: usize,
    pub to: usize,
    pub shift: i32,
    pub iso: Matrix,
}

/// Whether `f` (a `dim y × dim x` matrix) is a closed bijective module map
/// `x → y` raising degrees by `shift`.
pub fn verify_module_iso(x: &DGModule, y: &DGModule, shift: i32, f: &Matrix) -> bool {
    if x.algebra() != y.algebra()
        || x.dim() != y.dim()
        || f.rows() != y.dim()
        || f.cols() != x.dim()
    {
        return false;
    }
    for s in 0..y.dim() {
        for t in 0..x.dim() {
            if !f.get(s, t).is_zero() && y.degree(s) != x.degree(t) + shift {
                return false;
            }
        }
    }
    let k = x.field();
    let linear = (0..x.algebra().dim())
        .all(|i| f.mul(&x.action_matrix(i)).ok() == y.action_matrix(i).mul(f).ok());
    let fd = f
        .mul(&x.differential_matrix())
        .expect("shapes agree")
        .map_entries(k, |v| k.mul(&sign(k, odd(shift)), v));
    let closed = y.differential_matrix().mul(f).ok() == Some(fd);
    linear && closed && f.rank() == x.dim()
}

fn find_iso(
    x: &DGModule,
    y: &DGModule,
    shift: i32,
    seed: u64,
) -> Result<Option<Matrix>, ResolveError> {
    if x.dim() != y.dim() {
        return Ok(None);
    }
    let hom = module_hom_complex(x, y)?;
    let d = hom.complex.differential(shift);
    let n = hom.complex.dim(shift);
    if n == 0 {
        return Ok(None);
    }
    let k = x.field().clone();
    let cocycles: Vec<Vector> = if d.rows() == 0 {
        (0..n)
            .map(|i| crate::linalg::unit_vector(&k, n, i))
            .collect()
    } else {
        d.kernel()
    };
    let mut tries: Vec<Vector> = cocycles.clone();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..64 {
        let mut v = vec![k.zero(); n];
        for c in &cocycles {
            axpy(&k, &mut v, &k.random(&mut rng, 5), c);
        }
        tries.push(v);
    }
    for v in tries {
        let f = hom.combine(shift, &v).expect("degree present");
        if f.rank() == x.dim() && verify_module_iso(x, y, shift, &f) {
            return Ok(Some(f));
        }
    }
    Ok(None)
}

#[derive(Debug, Clone)]
struct Generator {
    vertex: usize,
    vector: Vector,
    cocycle: bool,
}

/// Adds the DG submodule generated by `v` to `image` (and to `covered`).
fn close_into(n: &DGModule, image: &mut Echelon, covered: &mut Echelon, v: Vector) {
    let mut queue = vec![v];
    while let Some(v) = queue.pop() {
        if !image.insert(&v) {
            continue;
        }
        covered.insert(&v);
        let dv = n.d(&v);
        if !is_zero_vec(&dv) {
            queue.push(dv);
        }
        for i in 0..n.algebra().dim() {
            let w = n.act_basis(&v, i);
            if !is_zero_vec(&w) {
                queue.push(w);
            }
        }
    }
}

/// Generators of `n` not in `nJ` + the part already generated; degrees
/// ascending, vertices in order, cocycles before other candidates.
fn choose_generators(n: &DGModule, vertices: &[Vector], rad: &Radical) -> Vec<Generator> {
    let k = n.field();
    let mut covered = Echelon::new(k, n.dim());
    for t in 0..n.dim() {
        for j in rad.span.rows() {
            covered.insert(&n.act(&n.basis_element(t), j));
        }
    }
    let mut image = Echelon::new(k, n.dim());
    let mut gens = Vec::new();
    for (_, idx) in n.basis().by_degree() {
        for (vi, e) in vertices.iter().enumerate() {
            let span = Echelon::from_vectors(
                k,
                n.dim(),
                &idx.iter()
                    .map(|&t| n.act(&n.basis_element(t), e))
                    .collect::<Vec<_>>(),
            );
            if span.dim() == 0 {
                continue;
            }
            let rows = span.rows().to_vec();
            let dmat =
                Matrix::from_columns(k, n.dim(), &rows.iter().map(|r| n.d(r)).collect::<Vec<_>>());
            let mut candidates: Vec<Vector> = dmat
                .kernel()
                .iter()
                .map(|c| {
                    let mut v = vec![k.zero(); n.dim()];
                    for (row, x) in rows.iter().zip(c) {
                        axpy(k, &mut v, x, row);
                    }
                    v
                })
                .collect();
            candidates.extend(rows);
            for c in candidates {
                if covered.contains(&c) {
                    continue;
                }
                let cocycle = is_zero_vec(&n.d(&c));
                close_into(n, &mut image, &mut covered, c.clone());
                gens.push(Generator {
                    vertex: vi,
                    vector: c,
                    cocycle,
                });
            }
        }
    }
    gens
}

#[derive(Debug, Clone)]
struct Step {
    cells: Vec<i32>,
    vertices: Vec<usize>,
    twist: AlgMatrix,
    /// Images of the cells in `N_s`.
    images: Vec<Vector>,
    /// Images of the cells in the raw coordinates of `F_{s-1}` (empty for `s = 0`).
    raw_images: Vec<Vector>,
    /// Raw coordinates in `F_s` of the basis of `N_{s+1}`.
    kernel_raw: Vec<Vector>,
}

/// A (possibly partial) resolution with its syzygy log.
#[derive(Debug, Clone)]
pub struct Resolution {
    module: DGModule,
    vertices: Vec<Vector>,
    radical: Radical,
    steps: Vec<Step>,
    syzygies: Vec<DGModule>,
    fingerprints: Vec<Fingerprint>,
    status: ResolutionStatus,
    periodicity: Option<PeriodicityCertificate>,
    options: ResolveOptions,
}

impl Resolution {
    pub fn module(&self) -> &DGModule {
        &self.module
    }

    pub fn algebra(&self) -> &Algebra {
        self.module.algebra()
    }

    pub fn status(&self) -> ResolutionStatus {
        self.status
    }

    pub fn fingerprints(&self) -> &[Fingerprint] {
        &self.fingerprints
    }

    pub fn syzygies(&self) -> &[DGModule] {
        &self.syzygies
    }

    pub fn periodicity(&self) -> Option<&PeriodicityCertificate> {
        self.periodicity.as_ref()
    }

    pub fn radical_mode(&self) -> RadicalMode {
        self.radical.mode
    }

    /// Number of steps built so far.
    pub fn depth(&self) -> usize {
        self.steps.len()
    }

    pub fn total_cells(&self) -> usize {
        self.steps.iter().map(|s| s.cells.len()).sum()
    }

    /// Syzygy iso detection is sound only when generator choices are minimal.
    pub fn minimality_assumed(&self) -> bool {
        self.radical.is_exact()
            && self.algebra().has_zero_differential()
            && self.module.has_zero_differential()
    }

    fn build_step(&mut self) -> Result<(), ResolveError> {
        let s = self.steps.len();
        let n = self.syzygies[s].clone();
        let a = self.algebra().clone();
        let k = a.field().clone();
        let na = a.dim();
        let gens = choose_generators(&n, &self.vertices, &self.radical);
        let mut cells = Vec::new();
        let mut vertices = Vec::new();
        let mut images = Vec::new();
        let mut disks = Vec::new();
        for g in gens {
            let deg = n
                .basis()
                .degree_of(&g.vector)
                .ok_or(DgError::NotHomogeneous)?;
            cells.push(-deg);
            vertices.push(g.vertex);
            if !g.cocycle {
                disks.push((cells.len(), cells.len() - 1, g.vertex));
                cells.push(-deg - 1);
                vertices.push(g.vertex);
                images.push(g.vector.clone());
                images.push(n.d(&g.vector));
            } else {
                images.push(g.vector);
            }
        }
        let total = self.total_cells() + cells.len();
        if total > self.options.size_bound {
            return Err(ResolveError::SizeBoundExceeded {
                cells: total,
                bound: self.options.size_bound,
            });
        }
        let r = cells.len();
        let mut twist = AlgMatrix::zeros(&a, r, r);
        for (row, col, v) in disks {
            twist.set(row, col, self.vertices[v].clone());
        }
        let idem = AlgMatrix::diagonal(
            &a,
            &vertices
                .iter()
                .map(|&v| self.vertices[v].clone())
                .collect::<Vec<_>>(),
        );
        let f = PerfObject::new(
            TwistedComplex::new(&a, cells.clone(), twist.clone())?,
            Some(idem),
        )?;
        let p = f.underlying()?;
        let mut pi = Matrix::zeros(&k, n.dim(), p.module.dim());
        for (c, raw) in p.inclusion.iter().enumerate() {
            let mut v = n.zero_vector();
            for (j, g) in images.iter().enumerate() {
                let slice = &raw[j * na..(j + 1) * na];
                if !is_zero_vec(slice) {
                    let w = n.act(g, slice);
                    axpy(&k, &mut v, &k.one(), &w);
                }
            }
            for (row, x) in v.into_iter().enumerate() {
                if !x.is_zero() {
                    pi.set(row, c, x);
                }
            }
        }
        if pi.rank() != n.dim() {
            return Err(ResolveError::Algebra(format!(
                "generators chosen at step {s} do not span"
            )));
        }
        let kernel = p.module.submodule(&pi.kernel())?;
        let kernel_raw: Vec<Vector> = kernel
            .inclusion
            .iter()
            .map(|c| {
                let mut v = vec![k.zero(); r * na];
                for (x, raw) in c.iter().zip(&p.inclusion) {
                    if !x.is_zero() {
                        axpy(&k, &mut v, x, raw);
                    }
                }
                v
            })
            .collect();
        let raw_images = if s == 0 {
            Vec::new()
        } else {
            let prev = &self.steps[s - 1].kernel_raw;
            let width = self.steps[s - 1].cells.len() * na;
            images
                .iter()
                .map(|g| {
                    let mut v = vec![k.zero(); width];
                    for (x, raw) in g.iter().zip(prev) {
                        if !x.is_zero() {
                            axpy(&k, &mut v, x, raw);
                        }
                    }
                    v
                })
                .collect()
        };
        self.steps.push(Step {
            cells,
            vertices,
            twist,
            images,
            raw_images,
            kernel_raw,
        });
        self.fingerprints.push(fingerprint(&kernel.module));
        self.syzygies.push(kernel.module);
        Ok(())
    }

    fn classify_last(&mut self) -> Result<Option<ResolutionStatus>, ResolveError> {
        let s = self.steps.len() - 1;
        let last = &self.syzygies[s + 1];
        if last.dim() == 0 || last.cohomology()?.is_acyclic() {
            return Ok(Some(ResolutionStatus::Finite { length: s }));
        }
        if self.minimality_assumed() {
            let fp = &self.fingerprints[s + 1];
            for from in 0..=s {
                if self.fingerprints[from] != *fp {
                    continue;
                }
                let x = &self.syzygies[from];
                let shift =
                    last.basis().min_degree().unwrap_or(0) - x.basis().min_degree().unwrap_or(0);
                if let Some(iso) = find_iso(x, last, shift, 0x5eed ^ (s as u64))? {
                    self.periodicity = Some(PeriodicityCertificate {
                        from,
                        to: s + 1,
                        shift,
                        iso,
                    });
                    return Ok(Some(ResolutionStatus::Periodic {
                        period: s + 1 - from,
                        syzygy: from,
                    }));
                }
            }
        }
        if self.steps.len() >= self.options.depth_bound {
            return Ok(Some(ResolutionStatus::Truncated {
                depth: self.steps.len(),
            }));
        }
        Ok(None)
    }

    /// One more step past the recorded status (no-op when finite).
    pub fn extend(&mut self) -> Result<(), ResolveError> {
        if matches!(self.status, ResolutionStatus::Finite { .. }) {
            return Ok(());
        }
        self.build_step()?;
        let last = &self.syzygies[self.steps.len()];
        if last.dim() == 0 || last.cohomology()?.is_acyclic() {
            self.status = ResolutionStatus::Finite {
                length: self.steps.len() - 1,
            };
        }
        Ok(())
    }

    /// The totalization `F_D[D] → ⋯ → F_0` as a perfect object, deepest step
    /// first, together with the cell offsets of each step.
    fn totalize(&self) -> Result<(PerfObject, Vec<usize>), ResolveError> {
        let a = self.algebra();
        let na = a.dim();
        let d = self.steps.len();
        let mut offsets = vec![0; d];
        let mut acc = 0;
        for s in (0..d).rev() {
            offsets[s] = acc;
            acc += self.steps[s].cells.len();
        }
        let mut cells = vec![0; acc];
        let mut diag = vec![a.zero_element(); acc];
        let mut twist = AlgMatrix::zeros(a, acc, acc);
        for (s, step) in self.steps.iter().enumerate() {
            let o = offsets[s];
            let sg = sign(a.field(), odd(s as i32));
            for (j, n) in step.cells.iter().enumerate() {
                cells[o + j] = n + s as i32;
                diag[o + j] = self.vertices[step.vertices[j]].clone();
                for i in 0..step.cells.len() {
                    let e = step.twist.get(i, j);
                    if !is_zero_vec(e) {
                        twist.set(
                            o + i,
                            o + j,
                            e.iter().map(|x| a.field().mul(&sg, x)).collect(),
                        );
                    }
                }
            }
            if s > 0 {
                let po = offsets[s - 1];
                for (c, raw) in step.raw_images.iter().enumerate() {
                    for j in 0..self.steps[s - 1].cells.len() {
                        let e = &raw[j * na..(j + 1) * na];
                        if !is_zero_vec(e) {
                            twist.set(po + j, o + c, e.to_vec());
                        }
                    }
                }
            }
        }
        let model = PerfObject::new(
            TwistedComplex::new(a, cells, twist)?,
            Some(AlgMatrix::diagonal(a, &diag)),
        )?;
        Ok((model, offsets))
    }

    pub fn model(&self) -> Result<PerfObject, ResolveError> {
        Ok(self.totalize()?.0)
    }

    /// Images in `M` of the model's cells (zero off the last block).
    pub fn augmentation(&self) -> Result<Vec<Vector>, ResolveError> {
        let (model, offsets) = self.totalize()?;
        let mut out = vec![self.module.zero_vector(); model.cells().len()];
        if let Some(step) = self.steps.first() {
            for (j, g) in step.images.iter().enumerate() {
                out[offsets[0] + j] = g.clone();
            }
        }
        Ok(out)
    }

    /// Exact check that the augmentation `model → M` is a quasi-isomorphism.
    pub fn verify_augmentation(&self) -> Result<bool, ResolveError> {
        let model = self.model()?;
        let images = self.augmentation()?;
        let u = model.underlying()?;
        let na = self.algebra().dim();
        let k = self.module.field();
        let mut eps = Matrix::zeros(k, self.module.dim(), u.module.dim());
        for (c, raw) in u.inclusion.iter().enumerate() {
            let mut v = self.module.zero_vector();
            for (j, g) in images.iter().enumerate() {
                let slice = &raw[j * na..(j + 1) * na];
                if !is_zero_vec(g) && !is_zero_vec(slice) {
                    axpy(k, &mut v, &k.one(), &self.module.act(g, slice));
                }
            }
            for (r, x) in v.into_iter().enumerate() {
                eps.set(r, c, x);
            }
        }
        Ok(is_quasi_iso(&u.module, &self.module, &eps)?)
    }

    /// Largest `i` for which `H^i Hom(model, n)` equals `Ext^i(M, n)`, or
    /// `None` when every degree is exact.
    pub fn guaranteed_upper(&self, n: &DGModule) -> Option<i32> {
        if matches!(self.status, ResolutionStatus::Finite { .. }) || n.dim() == 0 {
            return None;
        }
        if !self.algebra().is_ordinary() {
            return Some(i32::MIN);
        }
        let last = &self.syzygies[self.steps.len()];
        let Some(top) = last.basis().max_degree() else {
            return None;
        };
        let lo = n.basis().min_degree().expect("nonzero module");
        Some(self.steps.len() as i32 - 1 + lo - top - 1)
    }
}

/// Resolves `m` until the augmentation is exact, a syzygy repeats up to
/// isomorphism, or the depth bound is reached.
pub fn minimal_resolution(
    m: &DGModule,
    options: ResolveOptions,
) -> Result<Resolution, ResolveError> {
    let a = m.algebra();
    let mut res = Resolution {
        module: m.clone(),
        vertices: a.vertex_idempotents(),
        radical: radical(a),
        steps: Vec::new(),
        syzygies: vec![m.clone()],
        fingerprints: vec![fingerprint(m)],
        status: ResolutionStatus::Truncated { depth: 0 },
        periodicity: None,
        options,
    };
    if m.dim() == 0 || m.cohomology()?.is_acyclic() {
        res.status = ResolutionStatus::Finite { length: 0 };
        return Ok(res);
    }
    loop {
        res.build_step()?;
        if let Some(status) = res.classify_last()? {
            res.status = status;
            break;
        }
    }
    if matches!(res.status, ResolutionStatus::Finite { .. }) && !res.verify_augmentation()? {
        return Err(ResolveError::Algebra(
            "augmentation is not a quasi-isomorphism".into(),
        ));
    }
    Ok(res)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExtReport {
    pub window: (i32, i32),
    /// `dim Ext^i` for every `i` in the window.
    pub dims: BTreeMap<i32, usize>,
    /// `None` when exact in every degree.
    pub guaranteed_up_to: Option<i32>,
}

/// `Ext^i(M, n)` for `i` in the window, deepening the resolution as needed.
pub fn ext_dims_with(
    res: &mut Resolution,
    n: &DGModule,
    window: (i32, i32),
) -> Result<ExtReport, ResolveError> {
    if n.algebra() != res.algebra() {
        return Err(ResolveError::Algebra(
            "modules over different algebras".into(),
        ));
    }
    loop {
        let g = res.guaranteed_upper(n);
        if g.is_none_or(|g| g >= window.1) {
            break;
        }
        let may_continue = res.algebra().is_ordinary()
            && (matches!(res.status, ResolutionStatus::Periodic { .. })
                || res.depth() < res.options.depth_bound);
        if !may_continue {
            return Err(ResolveError::WindowNotGuaranteed {
                requested: window.1,
                guaranteed: g,
            });
        }
        res.extend()?;
    }
    let model = res.model()?;
    let h = hom_into_module(&model, n)?.complex.cohomology()?;
    let dims = (window.0..=window.1).map(|i| (i, h.dim(i))).collect();
    Ok(ExtReport {
        window,
        dims,
        guaranteed_up_to: res.guaranteed_upper(n),
    })
}

pub fn ext_dims(
    m: &DGModule,
    n: &DGModule,
    window: (i32, i32),
    options: ResolveOptions,
) -> Result<ExtReport, ResolveError> {
    let mut res = minimal_resolution(m, options)?;
    ext_dims_with(&mut res, n, window)
}

#[cfg(test)]
mod tests;
