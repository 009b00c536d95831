//! Seeded random perfect objects and modules for tests and sweeps.

use rand::Rng;

use super::{hom_complex, Morphism, PerfError, PerfObject};
use crate::dg::{Algebra, DGModule};
use crate::linalg::Vector;

/// A random closed morphism of degree `p`, or `None` when there is none
/// besides zero.
pub fn random_closed<R: Rng>(
    rng: &mut R,
    x: &PerfObject,
    y: &PerfObject,
    p: i32,
) -> Result<Option<Morphism>, PerfError> {
    let cocycles = hom_complex(x, y)?.cocycles(p);
    let Some(first) = cocycles.first() else {
        return Ok(None);
    };
    let a = x.algebra();
    let k = a.field();
    let mut m = Morphism::zero(x, y, p);
    for c in &cocycles {
        m.matrix = m.matrix.add(a, &c.matrix.scale(a, &k.random(rng, 3)));
    }
    if m.matrix.is_zero() {
        m.matrix = first.matrix.clone();
    }
    Ok(Some(m))
}

fn random_projective<R: Rng>(
    rng: &mut R,
    a: &Algebra,
    shifts: i32,
) -> Result<PerfObject, PerfError> {
    let vs = a.vertex_idempotents();
    let e = &vs[rng.gen_range(0..vs.len())];
    PerfObject::projective(a, e, rng.gen_range(-shifts..=shifts))
}

/// A random twisted complex of at most `max_cells` projective cells, built by
/// iterated cones of random closed maps.
pub fn random_perf<R: Rng>(
    rng: &mut R,
    a: &Algebra,
    max_cells: usize,
) -> Result<PerfObject, PerfError> {
    let mut x = random_projective(rng, a, 1)?;
    let target = rng.gen_range(1..=max_cells.max(1));
    while x.cells().len() < target {
        let z = random_projective(rng, a, 1)?;
        let next = match rng.gen_range(0..3) {
            0 => match random_closed(rng, &z, &x, 0)? {
                Some(f) => PerfObject::cone(&f)?,
                None => x.direct_sum(&z)?,
            },
            1 => match random_closed(rng, &x, &z, 0)? {
                Some(f) if x.cells().len() + 1 <= max_cells => PerfObject::cone(&f)?,
                _ => z.direct_sum(&x)?,
            },
            _ => x.direct_sum(&z)?,
        };
        x = next;
    }
    Ok(x)
}

/// A random finite-dimensional module: the underlying module of a random
/// perfect object modulo a random DG submodule.
pub fn random_module<R: Rng>(
    rng: &mut R,
    a: &Algebra,
    max_cells: usize,
) -> Result<DGModule, PerfError> {
    let x = random_perf(rng, a, max_cells)?;
    let u = x.underlying()?.module;
    let k = a.field().clone();
    let gens: Vec<Vector> = (0..rng.gen_range(0..=2))
        .map(|_| {
            let t = rng.gen_range(0..u.dim().max(1));
            let mut v = u.zero_vector();
            if u.dim() > 0 {
                v[t] = k.one();
                // mix in other vectors of the same degree
                for s in 0..u.dim() {
                    if s != t && u.degree(s) == u.degree(t) && rng.gen_bool(0.3) {
                        v[s] = k.random(rng, 3);
                    }
                }
            }
            v
        })
        .collect();
    let sub = u.generated(&gens);
    Ok(u.quotient(&sub)?.0)
}
