//! Dense exact linear algebra over a tower level.
//!
//! Elimination always pivots on the first nonzero entry in column order, so
//! kernel, image and representative bases are deterministic functions of the
//! input.

mod complex;

use serde::Serialize;
use thiserror::Error;

use crate::field::{Field, Scalar};

pub use complex::{Cohomology, FiniteComplex};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("shape mismatch: expected {expected}, got {got}")]
    ShapeMismatch { expected: String, got: String },
    #[error("d∘d ≠ 0 starting in degree {degree}")]
    NotAComplex { degree: i32 },
}

pub type Vector = Vec<Scalar>;

#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl std::fmt::Debug for Matrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "Matrix {}x{} over {}", self.rows, self.cols, self.field)?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(|x| self.field.format(x)).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Result of reducing a matrix to reduced row echelon form.
#[derive(Debug, Clone)]
pub struct Rref {
    pub matrix: Matrix,
    pub pivots: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RankKernelImage {
    pub rank: usize,
    #[serde(skip)]
    pub kernel: Vec<Vector>,
    #[serde(skip)]
    pub image: Vec<Vector>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Solution {
    Solved(Vector),
    /// `certificate · m = 0` while `certificate · rhs ≠ 0`.
    NoSolution {
        certificate: Vector,
    },
}

impl Matrix {
    pub fn zeros(field: &Field, rows: usize, cols: usize) -> Matrix {
        Matrix {
            field: field.clone(),
            rows,
            cols,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: &Field, n: usize) -> Matrix {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn from_rows(field: &Field, rows: Vec<Vector>) -> Result<Matrix, LinalgError> {
        let cols = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(LinalgError::ShapeMismatch {
                expected: format!("rows of length {cols}"),
                got: format!("{}", bad.len()),
            });
        }
        let n = rows.len();
        Ok(Matrix {
            field: field.clone(),
            rows: n,
            cols,
            data: rows.into_iter().flatten().collect(),
        })
    }

    /// Matrix whose columns are the given vectors, with `rows` rows.
    pub fn from_columns(field: &Field, rows: usize, columns: &[Vector]) -> Matrix {
        let mut m = Matrix::zeros(field, rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows, "column length");
            for (i, x) in c.iter().enumerate() {
                if !x.is_zero() {
                    m.set(i, j, x.clone());
                }
            }
        }
        m
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        self.data[r * self.cols + c] = v;
    }

    pub fn add_at(&mut self, r: usize, c: usize, v: &Scalar) {
        if v.is_zero() {
            return;
        }
        let idx = r * self.cols + c;
        self.data[idx] = self.field.add(&self.data[idx], v);
    }

    pub fn row(&self, r: usize) -> &[Scalar] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vector {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(&self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                let v = self.get(r, c);
                if !v.is_zero() {
                    t.set(c, r, v.clone());
                }
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix, LinalgError> {
        if self.cols != other.rows {
            return Err(LinalgError::ShapeMismatch {
                expected: format!("{} rows", self.cols),
                got: format!("{}x{}", other.rows, other.cols),
            });
        }
        let k = &self.field;
        let mut out = Matrix::zeros(k, self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.get(i, l);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(l, j);
                    if !b.is_zero() {
                        out.add_at(i, j, &k.mul(a, b));
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Result<Vector, LinalgError> {
        if v.len() != self.cols {
            return Err(LinalgError::ShapeMismatch {
                expected: format!("vector of length {}", self.cols),
                got: format!("{}", v.len()),
            });
        }
        let k = &self.field;
        Ok((0..self.rows)
            .map(|i| {
                let mut acc = k.zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc = k.add(&acc, &k.mul(a, b));
                    }
                }
                acc
            })
            .collect())
    }

    pub fn map_entries(&self, field: &Field, f: impl Fn(&Scalar) -> Scalar) -> Matrix {
        Matrix {
            field: field.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn rref(&self) -> Rref {
        let k = &self.field;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(p) = (row..m.rows).find(|&r| !m.get(r, col).is_zero()) else {
                continue;
            };
            if p != row {
                for c in 0..m.cols {
                    m.data.swap(p * m.cols + c, row * m.cols + c);
                }
            }
            let inv = k.inv(m.get(row, col)).unwrap();
            if !k.is_one(&inv) {
                for c in col..m.cols {
                    let v = k.mul(m.get(row, c), &inv);
                    m.set(row, c, v);
                }
            }
            let pivot_row: Vector = m.row(row)[col..].to_vec();
            for r in 0..m.rows {
                if r == row {
                    continue;
                }
                let factor = m.get(r, col).clone();
                if factor.is_zero() {
                    continue;
                }
                for (off, pv) in pivot_row.iter().enumerate() {
                    if !pv.is_zero() {
                        let c = col + off;
                        let v = k.sub(m.get(r, c), &k.mul(&factor, pv));
                        m.set(r, c, v);
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        Rref { matrix: m, pivots }
    }

    pub fn rank(&self) -> usize {
        self.rref().pivots.len()
    }

    /// Kernel basis: one vector per free column, with a 1 in that column.
    pub fn kernel(&self) -> Vec<Vector> {
        let k = &self.field;
        let Rref { matrix, pivots } = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        (0..self.cols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut v = vec![k.zero(); self.cols];
                v[free] = k.one();
                for (r, &p) in pivots.iter().enumerate() {
                    let x = matrix.get(r, free);
                    if !x.is_zero() {
                        v[p] = k.neg(x);
                    }
                }
                v
            })
            .collect()
    }

    /// Image basis: the pivot columns of the matrix itself.
    pub fn image(&self) -> Vec<Vector> {
        self.rref().pivots.iter().map(|&c| self.column(c)).collect()
    }

    pub fn rank_kernel_image(&self) -> RankKernelImage {
        let image = self.image();
        RankKernelImage {
            rank: image.len(),
            kernel: self.kernel(),
            image,
        }
    }

    pub fn solve(&self, rhs: &[Scalar]) -> Result<Solution, LinalgError> {
        if rhs.len() != self.rows {
            return Err(LinalgError::ShapeMismatch {
                expected: format!("rhs of length {}", self.rows),
                got: format!("{}", rhs.len()),
            });
        }
        let k = &self.field;
        let mut aug = Matrix::zeros(k, self.rows, self.cols + 1);
        for r in 0..self.rows {
            for c in 0..self.cols {
                aug.set(r, c, self.get(r, c).clone());
            }
            aug.set(r, self.cols, rhs[r].clone());
        }
        let Rref { matrix, pivots } = aug.rref();
        if pivots.last() == Some(&self.cols) {
            let certificate = self
                .transpose()
                .kernel()
                .into_iter()
                .find(|y| !dot(k, y, rhs).is_zero())
                .expect("inconsistent system has a separating left-kernel vector");
            return Ok(Solution::NoSolution { certificate });
        }
        let mut x = vec![k.zero(); self.cols];
        for (r, &p) in pivots.iter().enumerate() {
            x[p] = matrix.get(r, self.cols).clone();
        }
        Ok(Solution::Solved(x))
    }
}

pub fn dot(k: &Field, a: &[Scalar], b: &[Scalar]) -> Scalar {
    let mut acc = k.zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            acc = k.add(&acc, &k.mul(x, y));
        }
    }
    acc
}

pub fn axpy(k: &Field, acc: &mut [Scalar], c: &Scalar, v: &[Scalar]) {
    if c.is_zero() {
        return;
    }
    for (a, x) in acc.iter_mut().zip(v) {
        if !x.is_zero() {
            *a = k.add(a, &k.mul(c, x));
        }
    }
}

pub fn scale(k: &Field, c: &Scalar, v: &[Scalar]) -> Vector {
    v.iter().map(|x| k.mul(c, x)).collect()
}

pub fn is_zero_vec(v: &[Scalar]) -> bool {
    v.iter().all(Scalar::is_zero)
}

pub fn unit_vector(k: &Field, n: usize, i: usize) -> Vector {
    let mut v = vec![k.zero(); n];
    v[i] = k.one();
    v
}

/// Incrementally maintained reduced echelon basis of a subspace of `k^n`.
///
/// Every stored row has a 1 in its pivot column and zeros in the pivot
/// columns of all other rows, so the coordinates of a vector in the span are
/// read off at the pivot positions.
#[derive(Debug, Clone)]
pub struct Echelon {
    field: Field,
    ambient: usize,
    rows: Vec<Vector>,
    pivots: Vec<usize>,
}

impl Echelon {
    pub fn new(field: &Field, ambient: usize) -> Echelon {
        Echelon {
            field: field.clone(),
            ambient,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn from_vectors<'a>(
        field: &Field,
        ambient: usize,
        vectors: impl IntoIterator<Item = &'a Vector>,
    ) -> Echelon {
        let mut e = Echelon::new(field, ambient);
        for v in vectors {
            e.insert(v);
        }
        e
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn rows(&self) -> &[Vector] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Remainder of `v` after eliminating all pivot columns.
    pub fn reduce(&self, v: &[Scalar]) -> Vector {
        let k = &self.field;
        let mut r = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            let c = r[p].clone();
            if !c.is_zero() {
                axpy(k, &mut r, &k.neg(&c), row);
            }
        }
        r
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        is_zero_vec(&self.reduce(v))
    }

    /// Coordinates in the stored rows, if `v` lies in the span.
    pub fn coordinates(&self, v: &[Scalar]) -> Option<Vector> {
        self.contains(v)
            .then(|| self.pivots.iter().map(|&p| v[p].clone()).collect())
    }

    /// Adds `v` to the span; returns `false` if it was already contained.
    pub fn insert(&mut self, v: &[Scalar]) -> bool {
        let k = self.field.clone();
        let mut r = self.reduce(v);
        let Some(p) = r.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = k.inv(&r[p]).unwrap();
        r = scale(&k, &inv, &r);
        for row in &mut self.rows {
            let c = row[p].clone();
            if !c.is_zero() {
                axpy(&k, row, &k.neg(&c), &r);
            }
        }
        let pos = self.pivots.partition_point(|&q| q < p);
        self.pivots.insert(pos, p);
        self.rows.insert(pos, r);
        true
    }
}

#[cfg(test)]
mod tests;
