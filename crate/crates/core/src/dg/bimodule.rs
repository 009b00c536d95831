use std::sync::Arc;

use super::{
    add_sparse, odd, sign, to_sparse, validate, Algebra, DGModule, DgError, GradedBasis, Sparse,
    ValidationReport,
};
use crate::field::{Field, Scalar};
use crate::linalg::Vector;

/// An `A`-`B` DG bimodule: left `A`-action, right `B`-action, one differential.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DGBimodule {
    left: Algebra,
    right: Algebra,
    basis: GradedBasis,
    /// `left_action[i * dim T + s]` is `a_i · t_s`.
    left_action: Vec<Sparse>,
    /// `right_action[s * dim B + j]` is `t_s · b_j`.
    right_action: Vec<Sparse>,
    diff: Vec<Sparse>,
}

impl DGBimodule {
    pub fn new(
        left: &Algebra,
        right: &Algebra,
        basis: GradedBasis,
        left_action: Vec<Sparse>,
        right_action: Vec<Sparse>,
        diff: Vec<Sparse>,
    ) -> Result<DGBimodule, DgError> {
        if left.field() != right.field() {
            return Err(DgError::FieldMismatch);
        }
        let n = basis.len();
        if left_action.len() != left.dim() * n
            || right_action.len() != n * right.dim()
            || diff.len() != n
        {
            return Err(DgError::Shape(format!("bimodule of dimension {n}")));
        }
        let in_range = |s: &Sparse| s.iter().all(|(i, _)| *i < n);
        if !left_action
            .iter()
            .chain(&right_action)
            .chain(&diff)
            .all(in_range)
        {
            return Err(DgError::Shape(
                "structure constant index out of range".into(),
            ));
        }
        Ok(DGBimodule {
            left: left.clone(),
            right: right.clone(),
            basis,
            left_action,
            right_action,
            diff,
        })
    }

    pub fn zero(left: &Algebra, right: &Algebra) -> Result<DGBimodule, DgError> {
        DGBimodule::new(
            left,
            right,
            GradedBasis::empty(),
            Vec::new(),
            Vec::new(),
            Vec::new(),
        )
    }

    /// `A` as an `A`-`A` bimodule.
    pub fn diagonal(a: &Algebra) -> DGBimodule {
        let n = a.dim();
        let table: Vec<Sparse> = (0..n * n)
            .map(|ij| a.product(ij / n, ij % n).clone())
            .collect();
        let diff = (0..n).map(|i| a.differential(i).clone()).collect();
        DGBimodule {
            left: a.clone(),
            right: a.clone(),
            basis: a.basis().clone(),
            left_action: table.clone(),
            right_action: table,
            diff,
        }
    }

    pub fn left(&self) -> &Algebra {
        &self.left
    }

    pub fn right(&self) -> &Algebra {
        &self.right
    }

    pub fn field(&self) -> &Field {
        self.left.field()
    }

    pub fn basis(&self) -> &GradedBasis {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn left_action(&self, i: usize, s: usize) -> &Sparse {
        &self.left_action[i * self.dim() + s]
    }

    pub fn right_action(&self, s: usize, j: usize) -> &Sparse {
        &self.right_action[s * self.right.dim() + j]
    }

    pub fn differential(&self, s: usize) -> &Sparse {
        &self.diff[s]
    }

    pub fn basis_element(&self, s: usize) -> Vector {
        crate::linalg::unit_vector(self.field(), self.dim(), s)
    }

    pub fn left_act(&self, a: &[Scalar], t: &[Scalar]) -> Vector {
        let k = self.field();
        let mut out = vec![k.zero(); self.dim()];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (s, y) in t.iter().enumerate() {
                if !y.is_zero() {
                    add_sparse(k, &mut out, &k.mul(x, y), self.left_action(i, s));
                }
            }
        }
        out
    }

    pub fn right_act(&self, t: &[Scalar], b: &[Scalar]) -> Vector {
        let k = self.field();
        let mut out = vec![k.zero(); self.dim()];
        for (s, x) in t.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if !y.is_zero() {
                    add_sparse(k, &mut out, &k.mul(x, y), self.right_action(s, j));
                }
            }
        }
        out
    }

    pub fn d(&self, t: &[Scalar]) -> Vector {
        let k = self.field();
        let mut out = vec![k.zero(); self.dim()];
        for (s, x) in t.iter().enumerate() {
            if !x.is_zero() {
                add_sparse(k, &mut out, x, &self.diff[s]);
            }
        }
        out
    }

    pub fn validate(&self) -> ValidationReport {
        validate::bimodule(self)
    }

    /// The underlying right `B`-module.
    pub fn right_module(&self) -> DGModule {
        DGModule::new(
            &self.right,
            self.basis.clone(),
            self.right_action.clone(),
            self.diff.clone(),
        )
        .expect("shapes checked at construction")
    }

    /// The right module over `A^op ⊗ B` with `t·(a⊗b) = (-1)^{|a||t|} a t b`.
    pub fn to_env_module(&self) -> Result<DGModule, DgError> {
        let env = Arc::new(self.left.env(&self.right)?);
        let k = self.field();
        let (na, nb, nt) = (self.left.dim(), self.right.dim(), self.dim());
        let mut action = Vec::with_capacity(nt * na * nb);
        for s in 0..nt {
            for i in 0..na {
                let s_sign = sign(k, odd(self.left.degree(i) * self.basis.degrees[s]));
                let at = self.left_act(&self.left.basis_element(i), &self.basis_element(s));
                for j in 0..nb {
                    let atb = self.right_act(&at, &self.right.basis_element(j));
                    let v: Vector = atb.iter().map(|x| k.mul(&s_sign, x)).collect();
                    action.push(to_sparse(&v));
                }
            }
        }
        DGModule::new(&env, self.basis.clone(), action, self.diff.clone())
    }

    /// Inverse of [`DGBimodule::to_env_module`]; `m` must live over `left.env(right)`.
    pub fn from_env_module(
        m: &DGModule,
        left: &Algebra,
        right: &Algebra,
    ) -> Result<DGBimodule, DgError> {
        let env = left.env(right)?;
        if **m.algebra() != env {
            return Err(DgError::AlgebraMismatch);
        }
        let k = left.field();
        let (na, nb, nt) = (left.dim(), right.dim(), m.dim());
        let lift = |a: &[Scalar], b: &[Scalar]| -> Vector {
            let mut v = vec![k.zero(); na * nb];
            for (i, x) in a.iter().enumerate() {
                for (j, y) in b.iter().enumerate() {
                    v[i * nb + j] = k.mul(x, y);
                }
            }
            v
        };
        let mut left_action = Vec::with_capacity(na * nt);
        for i in 0..na {
            let ai = lift(&left.basis_element(i), right.unit());
            for s in 0..nt {
                let s_sign = sign(k, odd(left.degree(i) * m.degree(s)));
                let v: Vector = m
                    .act(&m.basis_element(s), &ai)
                    .iter()
                    .map(|x| k.mul(&s_sign, x))
                    .collect();
                left_action.push(to_sparse(&v));
            }
        }
        let mut right_action = Vec::with_capacity(nt * nb);
        for s in 0..nt {
            for j in 0..nb {
                let bj = lift(left.unit(), &right.basis_element(j));
                right_action.push(to_sparse(&m.act(&m.basis_element(s), &bj)));
            }
        }
        let diff = (0..nt).map(|s| m.differential(s).clone()).collect();
        DGBimodule::new(
            left,
            right,
            m.basis().clone(),
            left_action,
            right_action,
            diff,
        )
    }
}
