use std::collections::BTreeMap;

use super::{Echelon, LinalgError, Matrix, Solution, Vector};
use crate::field::Field;

/// A bounded cochain complex of finite-dimensional spaces; `d_n: C^n → C^{n+1}`
/// is stored as a `dim(n+1) × dim(n)` matrix. Missing differentials are zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteComplex {
    field: Field,
    dims: BTreeMap<i32, usize>,
    diffs: BTreeMap<i32, Matrix>,
}

#[derive(Debug, Clone)]
pub struct Cohomology {
    pub dims: BTreeMap<i32, usize>,
    /// Cocycles whose classes form a basis of `H^n`.
    pub representatives: BTreeMap<i32, Vec<Vector>>,
    quotients: BTreeMap<i32, Matrix>,
}

impl Cohomology {
    pub fn dim(&self, n: i32) -> usize {
        self.dims.get(&n).copied().unwrap_or(0)
    }

    pub fn total_dim(&self) -> usize {
        self.dims.values().sum()
    }

    pub fn is_acyclic(&self) -> bool {
        self.total_dim() == 0
    }

    /// Nonzero dimensions only.
    pub fn support(&self) -> BTreeMap<i32, usize> {
        self.dims
            .iter()
            .filter(|(_, d)| **d > 0)
            .map(|(n, d)| (*n, *d))
            .collect()
    }

    /// Coordinates of the class of the cocycle `v` in the representative basis.
    pub fn class_coordinates(&self, n: i32, v: &[crate::field::Scalar]) -> Option<Vector> {
        let reps = self.representatives.get(&n)?;
        let m = self.quotients.get(&n)?;
        match m.solve(v).ok()? {
            Solution::Solved(x) => Some(x[..reps.len()].to_vec()),
            Solution::NoSolution { .. } => None,
        }
    }
}

impl FiniteComplex {
    pub fn new(
        field: &Field,
        dims: BTreeMap<i32, usize>,
        diffs: BTreeMap<i32, Matrix>,
    ) -> Result<FiniteComplex, LinalgError> {
        let dims: BTreeMap<i32, usize> = dims.into_iter().filter(|(_, d)| *d > 0).collect();
        let dim = |n: i32| dims.get(&n).copied().unwrap_or(0);
        for (n, m) in &diffs {
            if m.rows() != dim(n + 1) || m.cols() != dim(*n) {
                return Err(LinalgError::ShapeMismatch {
                    expected: format!("d_{n} of shape {}x{}", dim(n + 1), dim(*n)),
                    got: format!("{}x{}", m.rows(), m.cols()),
                });
            }
        }
        let diffs = diffs
            .into_iter()
            .filter(|(_, m)| m.rows() > 0 && m.cols() > 0)
            .collect();
        Ok(FiniteComplex {
            field: field.clone(),
            dims,
            diffs,
        })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn dim(&self, n: i32) -> usize {
        self.dims.get(&n).copied().unwrap_or(0)
    }

    pub fn dims(&self) -> &BTreeMap<i32, usize> {
        &self.dims
    }

    /// `d_n` as a matrix (zero if not stored).
    pub fn differential(&self, n: i32) -> Matrix {
        self.diffs
            .get(&n)
            .cloned()
            .unwrap_or_else(|| Matrix::zeros(&self.field, self.dim(n + 1), self.dim(n)))
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.dims
            .iter()
            .map(|(n, d)| if n % 2 == 0 { *d as i64 } else { -(*d as i64) })
            .sum()
    }

    pub fn validate(&self) -> Result<(), LinalgError> {
        for (n, d) in &self.diffs {
            if let Some(next) = self.diffs.get(&(n + 1)) {
                if !next.mul(d)?.is_zero() {
                    return Err(LinalgError::NotAComplex { degree: *n });
                }
            }
        }
        Ok(())
    }

    /// Cone of a chain map `f: self → y`, given degreewise: `C^n = X^{n+1} ⊕ Y^n`
    /// with `d(x, y) = (-dx, f x + dy)`.
    pub fn mapping_cone(
        &self,
        y: &FiniteComplex,
        f: &BTreeMap<i32, Matrix>,
    ) -> Result<FiniteComplex, LinalgError> {
        let k = &self.field;
        let degrees: std::collections::BTreeSet<i32> = self
            .dims
            .keys()
            .map(|n| n - 1)
            .chain(y.dims.keys().copied())
            .collect();
        let dims: BTreeMap<i32, usize> = degrees
            .iter()
            .map(|&n| (n, self.dim(n + 1) + y.dim(n)))
            .collect();
        let mut diffs = BTreeMap::new();
        for &n in &degrees {
            let (xs, ys) = (self.dim(n + 1), y.dim(n));
            let (xt, yt) = (self.dim(n + 2), y.dim(n + 1));
            if xs + ys == 0 || xt + yt == 0 {
                continue;
            }
            let mut m = Matrix::zeros(k, xt + yt, xs + ys);
            let dx = self.differential(n + 1);
            for r in 0..xt {
                for c in 0..xs {
                    let v = dx.get(r, c);
                    if !v.is_zero() {
                        m.set(r, c, k.neg(v));
                    }
                }
            }
            if let Some(fm) = f.get(&(n + 1)) {
                if fm.rows() != yt || fm.cols() != xs {
                    return Err(LinalgError::ShapeMismatch {
                        expected: format!("f_{} of shape {yt}x{xs}", n + 1),
                        got: format!("{}x{}", fm.rows(), fm.cols()),
                    });
                }
                for r in 0..yt {
                    for c in 0..xs {
                        m.set(xt + r, c, fm.get(r, c).clone());
                    }
                }
            }
            let dy = y.differential(n);
            for r in 0..yt {
                for c in 0..ys {
                    m.set(xt + r, xs + c, dy.get(r, c).clone());
                }
            }
            diffs.insert(n, m);
        }
        FiniteComplex::new(k, dims, diffs)
    }

    pub fn cohomology(&self) -> Result<Cohomology, LinalgError> {
        self.validate()?;
        let k = &self.field;
        let mut out = Cohomology {
            dims: BTreeMap::new(),
            representatives: BTreeMap::new(),
            quotients: BTreeMap::new(),
        };
        for (&n, &dim) in &self.dims {
            let cycles = match self.diffs.get(&n) {
                Some(d) => d.kernel(),
                None => (0..dim).map(|i| super::unit_vector(k, dim, i)).collect(),
            };
            let boundaries = self
                .diffs
                .get(&(n - 1))
                .map(Matrix::image)
                .unwrap_or_default();
            let mut span = Echelon::from_vectors(k, dim, &boundaries);
            let reps: Vec<Vector> = cycles.into_iter().filter(|z| span.insert(z)).collect();
            let mut columns = reps.clone();
            columns.extend(boundaries);
            out.quotients
                .insert(n, Matrix::from_columns(k, dim, &columns));
            out.dims.insert(n, reps.len());
            out.representatives.insert(n, reps);
        }
        Ok(out)
    }
}
