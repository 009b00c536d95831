//! Level-recursive arithmetic on flat coefficient vectors.
//!
//! An element of level `L` is a polynomial of degree `< d_L` in the level
//! generator whose coefficients are level `L - 1` elements. The flat layout
//! stores coefficient `j` of the top generator in the `j`-th chunk of size
//! `dims[L - 1]`, so a lower-level element embeds as a prefix.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub(crate) trait Base {
    type E: Clone + PartialEq;

    fn zero(&self) -> Self::E;
    fn one(&self) -> Self::E;
    fn is_zero(&self, a: &Self::E) -> bool;
    fn add(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn sub(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn inv(&self, a: &Self::E) -> Option<Self::E>;
}

pub(crate) struct RatBase;

impl Base for RatBase {
    type E = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        if a.is_zero() {
            return b.clone();
        }
        if b.is_zero() {
            return a.clone();
        }
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        if b.is_zero() {
            return a.clone();
        }
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        if a.is_zero() || b.is_zero() {
            return BigRational::zero();
        }
        if a.is_one() {
            return b.clone();
        }
        if b.is_one() {
            return a.clone();
        }
        a * b
    }
    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        if a.is_zero() {
            None
        } else if a.abs().is_one() {
            Some(a.clone())
        } else {
            Some(a.recip())
        }
    }
}

/// Integers modulo a prime `p < 2^32`.
pub(crate) struct ModBase(pub u64);

impl ModBase {
    pub(crate) fn pow(&self, mut a: u64, mut e: u64) -> u64 {
        let p = self.0;
        let mut acc = 1 % p;
        a %= p;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * a % p;
            }
            a = a * a % p;
            e >>= 1;
        }
        acc
    }
}

impl Base for ModBase {
    type E = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.0
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        (a + b) % self.0
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        (a + self.0 - b) % self.0
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        a * b % self.0
    }
    fn inv(&self, a: &u64) -> Option<u64> {
        if *a == 0 {
            None
        } else {
            Some(self.pow(*a, self.0 - 2))
        }
    }
}

pub(crate) struct Levels<'a, B: Base> {
    pub base: &'a B,
    /// `dims[L]` is the degree of level `L` over the base; `dims[0] == 1`.
    pub dims: &'a [usize],
    /// Non-leading minimal polynomial coefficients of each step, flattened.
    pub minpolys: &'a [Vec<B::E>],
}

impl<'a, B: Base> Levels<'a, B> {
    fn step_degree(&self, level: usize) -> usize {
        self.dims[level] / self.dims[level - 1]
    }

    fn is_zero_slice(&self, a: &[B::E]) -> bool {
        a.iter().all(|x| self.base.is_zero(x))
    }

    pub fn add_into(&self, acc: &mut [B::E], b: &[B::E]) {
        for (x, y) in acc.iter_mut().zip(b) {
            if !self.base.is_zero(y) {
                *x = self.base.add(x, y);
            }
        }
    }

    pub fn sub_into(&self, acc: &mut [B::E], b: &[B::E]) {
        for (x, y) in acc.iter_mut().zip(b) {
            if !self.base.is_zero(y) {
                *x = self.base.sub(x, y);
            }
        }
    }

    pub fn mul(&self, level: usize, a: &[B::E], b: &[B::E]) -> Vec<B::E> {
        if level == 0 {
            return vec![self.base.mul(&a[0], &b[0])];
        }
        let d = self.step_degree(level);
        let sub = self.dims[level - 1];
        let zero_chunk = vec![self.base.zero(); sub];
        let mut prod: Vec<Vec<B::E>> = vec![zero_chunk; 2 * d - 1];
        for i in 0..d {
            let ai = &a[i * sub..(i + 1) * sub];
            if self.is_zero_slice(ai) {
                continue;
            }
            for j in 0..d {
                let bj = &b[j * sub..(j + 1) * sub];
                if self.is_zero_slice(bj) {
                    continue;
                }
                let t = self.mul(level - 1, ai, bj);
                self.add_into(&mut prod[i + j], &t);
            }
        }
        let minpoly = &self.minpolys[level - 1];
        for k in (d..2 * d - 1).rev() {
            if self.is_zero_slice(&prod[k]) {
                continue;
            }
            let top = std::mem::replace(&mut prod[k], vec![self.base.zero(); sub]);
            for i in 0..d {
                let mi = &minpoly[i * sub..(i + 1) * sub];
                if self.is_zero_slice(mi) {
                    continue;
                }
                let t = self.mul(level - 1, &top, mi);
                self.sub_into(&mut prod[k - d + i], &t);
            }
        }
        prod.truncate(d);
        prod.into_iter().flatten().collect()
    }

    pub fn inv(&self, level: usize, a: &[B::E]) -> Option<Vec<B::E>> {
        if self.is_zero_slice(a) {
            return None;
        }
        if level == 0 {
            return self.base.inv(&a[0]).map(|x| vec![x]);
        }
        let d = self.step_degree(level);
        let sub = self.dims[level - 1];
        let chunk = |v: &[B::E], i: usize| v[i * sub..(i + 1) * sub].to_vec();
        let mut modulus: Vec<Vec<B::E>> = (0..d)
            .map(|i| chunk(&self.minpolys[level - 1], i))
            .collect();
        let mut one = vec![self.base.zero(); sub];
        one[0] = self.base.one();
        modulus.push(one.clone());
        let elem: Vec<Vec<B::E>> = (0..d).map(|i| chunk(a, i)).collect();

        let poly = PolyOps {
            levels: self,
            level: level - 1,
            sub,
        };
        let mut r0 = poly.trim(modulus);
        let mut r1 = poly.trim(elem);
        let mut s0: Vec<Vec<B::E>> = Vec::new();
        let mut s1: Vec<Vec<B::E>> = vec![one];
        while !r1.is_empty() {
            let (q, r) = poly.divmod(&r0, &r1)?;
            let s2 = poly.sub(&s0, &poly.mul(&q, &s1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
        }
        if r0.len() != 1 {
            // gcd of positive degree: minimal polynomial was reducible
            return None;
        }
        let c = self.inv(level - 1, &r0[0])?;
        let mut out = vec![self.base.zero(); self.dims[level]];
        for (i, coeff) in s0.iter().enumerate() {
            let scaled = self.mul(level - 1, coeff, &c);
            out[i * sub..(i + 1) * sub].clone_from_slice(&scaled);
        }
        Some(out)
    }
}

struct PolyOps<'b, 'a, B: Base> {
    levels: &'b Levels<'a, B>,
    level: usize,
    sub: usize,
}

impl<'b, 'a, B: Base> PolyOps<'b, 'a, B> {
    fn trim(&self, mut p: Vec<Vec<B::E>>) -> Vec<Vec<B::E>> {
        while p.last().is_some_and(|c| self.levels.is_zero_slice(c)) {
            p.pop();
        }
        p
    }

    fn zero_chunk(&self) -> Vec<B::E> {
        vec![self.levels.base.zero(); self.sub]
    }

    fn sub(&self, a: &[Vec<B::E>], b: &[Vec<B::E>]) -> Vec<Vec<B::E>> {
        let n = a.len().max(b.len());
        let mut out: Vec<Vec<B::E>> = (0..n)
            .map(|i| a.get(i).cloned().unwrap_or_else(|| self.zero_chunk()))
            .collect();
        for (i, c) in b.iter().enumerate() {
            self.levels.sub_into(&mut out[i], c);
        }
        self.trim(out)
    }

    fn mul(&self, a: &[Vec<B::E>], b: &[Vec<B::E>]) -> Vec<Vec<B::E>> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![self.zero_chunk(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                let t = self.levels.mul(self.level, x, y);
                self.levels.add_into(&mut out[i + j], &t);
            }
        }
        self.trim(out)
    }

    fn divmod(&self, a: &[Vec<B::E>], b: &[Vec<B::E>]) -> Option<(Vec<Vec<B::E>>, Vec<Vec<B::E>>)> {
        let lead_inv = self.levels.inv(self.level, b.last()?)?;
        let mut rem: Vec<Vec<B::E>> = a.to_vec();
        if rem.len() < b.len() {
            return Some((Vec::new(), self.trim(rem)));
        }
        let mut quot = vec![self.zero_chunk(); rem.len() - b.len() + 1];
        for k in (0..quot.len()).rev() {
            let top = &rem[k + b.len() - 1];
            if self.levels.is_zero_slice(top) {
                continue;
            }
            let c = self.levels.mul(self.level, top, &lead_inv);
            for (i, bi) in b.iter().enumerate() {
                let t = self.levels.mul(self.level, &c, bi);
                self.levels.sub_into(&mut rem[k + i], &t);
            }
            quot[k] = c;
        }
        rem.truncate(b.len() - 1);
        Some((self.trim(quot), self.trim(rem)))
    }
}
