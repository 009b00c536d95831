use serde::Serialize;

use crate::dg::DGAlgebra;
use crate::linalg::{is_zero_vec, Echelon, Matrix, Vector};

/// How the radical used for minimal generator choices was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum RadicalMode {
    /// Span of the basis elements other than the vertex idempotents.
    Arrows,
    /// Kernel of the trace form (characteristic zero).
    TraceForm,
    /// Kernel of the trace form, checked to be a nilpotent ideal.
    TraceNilpotent,
    /// No nilpotent ideal was found; zero is used and minimality is lost.
    Zero,
}

#[derive(Debug, Clone)]
pub struct Radical {
    pub span: Echelon,
    pub mode: RadicalMode,
}

impl Radical {
    /// Generator choices are minimal only against a genuine radical.
    pub fn is_exact(&self) -> bool {
        self.mode != RadicalMode::Zero
    }
}

fn is_nilpotent_ideal(a: &DGAlgebra, j: &Echelon) -> bool {
    let basis: Vec<Vector> = (0..a.dim()).map(|i| a.basis_element(i)).collect();
    for x in j.rows() {
        for b in &basis {
            if !j.contains(&a.mul(b, x)) || !j.contains(&a.mul(x, b)) {
                return false;
            }
        }
    }
    let mut power = j.clone();
    while power.dim() > 0 {
        let mut next = Echelon::new(a.field(), a.dim());
        for x in power.rows() {
            for y in j.rows() {
                let p = a.mul(x, y);
                if !is_zero_vec(&p) {
                    next.insert(&p);
                }
            }
        }
        if next.dim() >= power.dim() {
            return false;
        }
        power = next;
    }
    true
}

fn trace_kernel(a: &DGAlgebra) -> Echelon {
    let k = a.field();
    let n = a.dim();
    // tr(L_{b_i}) for every basis element
    let traces: Vector = (0..n)
        .map(|i| {
            let mut t = k.zero();
            for c in 0..n {
                if let Some((_, x)) = a.product(i, c).iter().find(|(s, _)| *s == c) {
                    t = k.add(&t, x);
                }
            }
            t
        })
        .collect();
    let mut form = Matrix::zeros(k, n, n);
    for x in 0..n {
        for y in 0..n {
            let mut t = k.zero();
            for (s, c) in a.product(x, y) {
                t = k.add(&t, &k.mul(c, &traces[*s]));
            }
            form.set(y, x, t);
        }
    }
    Echelon::from_vectors(k, n, &form.kernel())
}

/// A nilpotent two-sided ideal playing the role of the Jacobson radical.
pub fn radical(a: &DGAlgebra) -> Radical {
    let k = a.field();
    let vertices = a.vertex_idempotents();
    if vertices
        .iter()
        .all(|v| v.iter().filter(|x| !x.is_zero()).count() == 1)
    {
        let idem: Vec<usize> = vertices
            .iter()
            .filter_map(|v| v.iter().position(|x| !x.is_zero()))
            .collect();
        let rest: Vec<Vector> = (0..a.dim())
            .filter(|i| !idem.contains(i))
            .map(|i| a.basis_element(i))
            .collect();
        let span = Echelon::from_vectors(k, a.dim(), &rest);
        if is_nilpotent_ideal(a, &span) {
            return Radical {
                span,
                mode: RadicalMode::Arrows,
            };
        }
    }
    let span = trace_kernel(a);
    if k.characteristic() == 0 {
        return Radical {
            span,
            mode: RadicalMode::TraceForm,
        };
    }
    if is_nilpotent_ideal(a, &span) {
        return Radical {
            span,
            mode: RadicalMode::TraceNilpotent,
        };
    }
    Radical {
        span: Echelon::new(k, a.dim()),
        mode: RadicalMode::Zero,
    }
}
