//! Exact arithmetic in towers `k0 ⊂ k1 ⊂ … ⊂ kn` where `k0` is the rationals
//! or a prime field and each step adjoins a root of an irreducible monic
//! polynomial over the previous level.
//!
//! A [`Field`] is a handle to one level of a tower. Elements are plain
//! [`Scalar`] values (dense coefficient vectors over the base in the monomial
//! basis of the tower); all arithmetic goes through the field handle.

mod arith;
mod literal;
pub mod poly;

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;
use thiserror::Error;

use arith::{Base, Levels, ModBase, RatBase};
pub use poly::Irreducibility;

/// Default bound on the degree of polynomials passed to the irreducibility test.
pub const DEFAULT_DEGREE_BOUND: usize = 6;

/// Largest finite field whose elements are enumerated for root exhaustion.
const ENUMERATION_LIMIT: u64 = 1 << 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("polynomial is reducible; factor {factor}")]
    ReduciblePolynomial {
        factor: String,
        coefficients: Vec<Scalar>,
    },
    #[error("polynomial is not monic")]
    NonMonic,
    #[error("extension polynomial must have degree at least 2, got {0}")]
    DegreeTooSmall(usize),
    #[error("degree {degree} exceeds the irreducibility bound {bound}")]
    DegreeBoundExceeded { degree: usize, bound: usize },
    #[error("irreducibility test unsupported: {0}")]
    Unsupported(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("scalar does not belong to this tower level")]
    TowerMismatch,
    #[error("{0} is not a prime below 2^32")]
    NotPrime(u64),
    #[error("generator name {0:?} is empty, reserved or already used")]
    BadGeneratorName(String),
    #[error("cannot parse scalar literal {literal:?}: {reason}")]
    Literal { literal: String, reason: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BaseField {
    Rationals,
    PrimeField(u64),
}

pub type RatCoeffs = SmallVec<[BigRational; 2]>;
pub type ModCoeffs = SmallVec<[u64; 2]>;

/// Dense coefficient vector of a field element over the base field.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scalar {
    Rat(RatCoeffs),
    Mod(ModCoeffs),
}

impl Scalar {
    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rat(v) => v.iter().all(Zero::is_zero),
            Scalar::Mod(v) => v.iter().all(|x| *x == 0),
        }
    }

    pub fn len(&self) -> usize {
        match self {
            Scalar::Rat(v) => v.len(),
            Scalar::Mod(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// One adjunction step: a generator name and its minimal polynomial over the
/// previous level, coefficients from the constant term up, leading one included.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtensionStep {
    pub generator: String,
    pub minpoly: Vec<Scalar>,
}

impl ExtensionStep {
    pub fn degree(&self) -> usize {
        self.minpoly.len() - 1
    }
}

enum TowerData {
    Rat(Vec<Vec<BigRational>>),
    Mod(u64, Vec<Vec<u64>>),
}

struct Tower {
    base: BaseField,
    steps: Vec<ExtensionStep>,
    dims: Vec<usize>,
    data: TowerData,
    parent: Option<Field>,
}

/// A level of a field tower.
#[derive(Clone)]
pub struct Field {
    tower: Arc<Tower>,
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.tower, &other.tower)
            || (self.tower.base == other.tower.base && self.tower.steps == other.tower.steps)
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Field({self})")
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.tower.base {
            BaseField::Rationals => write!(f, "Q")?,
            BaseField::PrimeField(p) => write!(f, "F{p}")?,
        }
        if !self.tower.steps.is_empty() {
            let names: Vec<&str> = self
                .tower
                .steps
                .iter()
                .map(|s| s.generator.as_str())
                .collect();
            write!(f, "({})", names.join(","))?;
        }
        Ok(())
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl Field {
    pub fn rationals() -> Field {
        Field {
            tower: Arc::new(Tower {
                base: BaseField::Rationals,
                steps: Vec::new(),
                dims: vec![1],
                data: TowerData::Rat(Vec::new()),
                parent: None,
            }),
        }
    }

    pub fn prime_field(p: u64) -> Result<Field, FieldError> {
        if p >= 1 << 32 || !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        Ok(Field {
            tower: Arc::new(Tower {
                base: BaseField::PrimeField(p),
                steps: Vec::new(),
                dims: vec![1],
                data: TowerData::Mod(p, Vec::new()),
                parent: None,
            }),
        })
    }

    pub fn base_field(&self) -> BaseField {
        self.tower.base
    }

    pub fn steps(&self) -> &[ExtensionStep] {
        &self.tower.steps
    }

    /// Number of adjunction steps above the base.
    pub fn height(&self) -> usize {
        self.tower.steps.len()
    }

    /// Degree over the base field.
    pub fn degree(&self) -> usize {
        *self.tower.dims.last().unwrap()
    }

    pub fn characteristic(&self) -> u64 {
        match self.tower.base {
            BaseField::Rationals => 0,
            BaseField::PrimeField(p) => p,
        }
    }

    /// Number of elements, for finite fields small enough to count in a `u128`.
    pub fn order(&self) -> Option<u128> {
        let p = self.characteristic() as u128;
        if p == 0 {
            return None;
        }
        let mut q: u128 = 1;
        for _ in 0..self.degree() {
            q = q.checked_mul(p)?;
        }
        Some(q)
    }

    pub fn parent(&self) -> Option<&Field> {
        self.tower.parent.as_ref()
    }

    /// The prefix of this tower with `height` steps.
    pub fn level(&self, height: usize) -> Option<Field> {
        let mut cur = self.clone();
        if height > cur.height() {
            return None;
        }
        while cur.height() > height {
            cur = cur.parent().unwrap().clone();
        }
        Some(cur)
    }

    pub fn is_prefix_of(&self, other: &Field) -> bool {
        self.tower.base == other.tower.base
            && self.height() <= other.height()
            && other.tower.steps[..self.height()] == self.tower.steps[..]
    }

    /// Degree of `self` over the prefix `sub`.
    pub fn relative_degree(&self, sub: &Field) -> Option<usize> {
        sub.is_prefix_of(self).then(|| self.degree() / sub.degree())
    }

    pub fn generator_names(&self) -> impl Iterator<Item = &str> {
        self.tower.steps.iter().map(|s| s.generator.as_str())
    }

    /// Adjoin a root of `minpoly` (coefficients over this level, constant term
    /// first). Irreducibility is verified with the default degree bound.
    pub fn extend(&self, generator: &str, minpoly: Vec<Scalar>) -> Result<Field, FieldError> {
        let valid_name = !generator.is_empty()
            && generator
                .chars()
                .next()
                .is_some_and(|c| c.is_ascii_alphabetic())
            && generator
                .chars()
                .all(|c| c.is_ascii_alphanumeric() || c == '_');
        if !valid_name || self.generator_names().any(|g| g == generator) {
            return Err(FieldError::BadGeneratorName(generator.to_string()));
        }
        for c in &minpoly {
            self.check(c)?;
        }
        let degree = minpoly.len().saturating_sub(1);
        if minpoly.last().is_none_or(|c| *c != self.one()) {
            return Err(FieldError::NonMonic);
        }
        if degree < 2 {
            return Err(FieldError::DegreeTooSmall(degree));
        }
        match poly::irreducibility(self, &minpoly, DEFAULT_DEGREE_BOUND)? {
            Irreducibility::Irreducible => {}
            Irreducibility::Factor(factor) => {
                return Err(FieldError::ReduciblePolynomial {
                    factor: poly::format_poly(self, &factor, "x"),
                    coefficients: factor,
                })
            }
        }
        Ok(self.extend_unchecked(generator, minpoly))
    }

    fn extend_unchecked(&self, generator: &str, minpoly: Vec<Scalar>) -> Field {
        let degree = minpoly.len() - 1;
        let mut steps = self.tower.steps.clone();
        let mut dims = self.tower.dims.clone();
        dims.push(self.degree() * degree);
        let data = match &self.tower.data {
            TowerData::Rat(m) => {
                let mut m = m.clone();
                m.push(
                    minpoly[..degree]
                        .iter()
                        .flat_map(|c| rat_coeffs(c).iter().cloned())
                        .collect(),
                );
                TowerData::Rat(m)
            }
            TowerData::Mod(p, m) => {
                let mut m = m.clone();
                m.push(
                    minpoly[..degree]
                        .iter()
                        .flat_map(|c| mod_coeffs(c).iter().copied())
                        .collect(),
                );
                TowerData::Mod(*p, m)
            }
        };
        steps.push(ExtensionStep {
            generator: generator.to_string(),
            minpoly,
        });
        Field {
            tower: Arc::new(Tower {
                base: self.tower.base,
                steps,
                dims,
                data,
                parent: Some(self.clone()),
            }),
        }
    }

    pub fn zero(&self) -> Scalar {
        let n = self.degree();
        match &self.tower.data {
            TowerData::Rat(_) => Scalar::Rat((0..n).map(|_| BigRational::zero()).collect()),
            TowerData::Mod(..) => Scalar::Mod(SmallVec::from_elem(0, n)),
        }
    }

    pub fn one(&self) -> Scalar {
        self.from_int(1)
    }

    pub fn from_int(&self, n: i64) -> Scalar {
        self.from_rational(&BigRational::from_integer(BigInt::from(n)))
    }

    /// Image of a rational number; fails in characteristic `p` when `p`
    /// divides the denominator.
    pub fn try_from_rational(&self, q: &BigRational) -> Result<Scalar, FieldError> {
        let mut out = self.zero();
        match &mut out {
            Scalar::Rat(v) => v[0] = q.clone(),
            Scalar::Mod(v) => {
                let p = BigInt::from(self.characteristic());
                let num = ((q.numer() % &p) + &p) % &p;
                let den = ((q.denom() % &p) + &p) % &p;
                let den = den.to_u64().unwrap();
                let inv = ModBase(self.characteristic())
                    .inv(&den)
                    .ok_or(FieldError::DivisionByZero)?;
                v[0] = num.to_u64().unwrap() * inv % self.characteristic();
            }
        }
        Ok(out)
    }

    pub fn from_rational(&self, q: &BigRational) -> Scalar {
        self.try_from_rational(q)
            .expect("denominator divisible by the characteristic")
    }

    /// The generator adjoined at step `step` (0-based), as an element of this level.
    pub fn generator(&self, step: usize) -> Scalar {
        let mut out = self.zero();
        let pos = self.tower.dims[step];
        match &mut out {
            Scalar::Rat(v) => v[pos] = BigRational::one(),
            Scalar::Mod(v) => v[pos] = 1 % self.characteristic(),
        }
        out
    }

    /// Verifies that `a` is a canonical element of this level.
    pub fn check(&self, a: &Scalar) -> Result<(), FieldError> {
        let ok = match (&self.tower.data, a) {
            (TowerData::Rat(_), Scalar::Rat(v)) => v.len() == self.degree(),
            (TowerData::Mod(p, _), Scalar::Mod(v)) => {
                v.len() == self.degree() && v.iter().all(|x| x < p)
            }
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            Err(FieldError::TowerMismatch)
        }
    }

    pub fn canonicalize(&self, a: &Scalar) -> Scalar {
        match a {
            Scalar::Rat(v) => Scalar::Rat(
                v.iter()
                    .map(|x| BigRational::new(x.numer().clone(), x.denom().clone()))
                    .collect(),
            ),
            Scalar::Mod(v) => Scalar::Mod(v.iter().map(|x| x % self.characteristic()).collect()),
        }
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (a, b) {
            (Scalar::Rat(x), Scalar::Rat(y)) => {
                if y.iter().all(Zero::is_zero) {
                    return a.clone();
                }
                if x.iter().all(Zero::is_zero) {
                    return b.clone();
                }
                Scalar::Rat(x.iter().zip(y).map(|(u, v)| RatBase.add(u, v)).collect())
            }
            (Scalar::Mod(x), Scalar::Mod(y)) => {
                let p = self.characteristic();
                Scalar::Mod(x.iter().zip(y).map(|(u, v)| (u + v) % p).collect())
            }
            _ => panic!("scalar from a different base field"),
        }
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.add(a, &self.neg(b))
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        match a {
            Scalar::Rat(x) => Scalar::Rat(x.iter().map(|u| -u).collect()),
            Scalar::Mod(x) => {
                let p = self.characteristic();
                Scalar::Mod(x.iter().map(|u| (p - u) % p).collect())
            }
        }
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        if a.is_zero() || b.is_zero() {
            return self.zero();
        }
        let top = self.height();
        if top == 0 {
            return match (a, b) {
                (Scalar::Rat(x), Scalar::Rat(y)) => {
                    Scalar::Rat(smallvec::smallvec![RatBase.mul(&x[0], &y[0])])
                }
                (Scalar::Mod(x), Scalar::Mod(y)) => {
                    Scalar::Mod(smallvec::smallvec![x[0] * y[0] % self.characteristic()])
                }
                _ => panic!("scalar from a different base field"),
            };
        }
        match (&self.tower.data, a, b) {
            (TowerData::Rat(m), Scalar::Rat(x), Scalar::Rat(y)) => {
                let lv = Levels {
                    base: &RatBase,
                    dims: &self.tower.dims,
                    minpolys: m,
                };
                Scalar::Rat(lv.mul(top, x, y).into())
            }
            (TowerData::Mod(p, m), Scalar::Mod(x), Scalar::Mod(y)) => {
                let base = ModBase(*p);
                let lv = Levels {
                    base: &base,
                    dims: &self.tower.dims,
                    minpolys: m,
                };
                Scalar::Mod(lv.mul(top, x, y).into())
            }
            _ => panic!("scalar from a different base field"),
        }
    }

    pub fn inv(&self, a: &Scalar) -> Result<Scalar, FieldError> {
        let top = self.height();
        let out = match (&self.tower.data, a) {
            (TowerData::Rat(m), Scalar::Rat(x)) => {
                let lv = Levels {
                    base: &RatBase,
                    dims: &self.tower.dims,
                    minpolys: m,
                };
                lv.inv(top, x).map(|v| Scalar::Rat(v.into()))
            }
            (TowerData::Mod(p, m), Scalar::Mod(x)) => {
                let base = ModBase(*p);
                let lv = Levels {
                    base: &base,
                    dims: &self.tower.dims,
                    minpolys: m,
                };
                lv.inv(top, x).map(|v| Scalar::Mod(v.into()))
            }
            _ => return Err(FieldError::TowerMismatch),
        };
        out.ok_or(FieldError::DivisionByZero)
    }

    pub fn div(&self, a: &Scalar, b: &Scalar) -> Result<Scalar, FieldError> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    pub fn pow(&self, a: &Scalar, mut e: u64) -> Scalar {
        let mut acc = self.one();
        let mut base = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// Lift an element of a prefix level into this level.
    pub fn embed(&self, from: &Field, a: &Scalar) -> Result<Scalar, FieldError> {
        if !from.is_prefix_of(self) {
            return Err(FieldError::TowerMismatch);
        }
        from.check(a)?;
        let mut out = self.zero();
        match (&mut out, a) {
            (Scalar::Rat(v), Scalar::Rat(x)) => v[..x.len()].clone_from_slice(x),
            (Scalar::Mod(v), Scalar::Mod(x)) => v[..x.len()].copy_from_slice(x),
            _ => return Err(FieldError::TowerMismatch),
        }
        Ok(out)
    }

    /// Coordinates of `a` over the prefix level `sub`, in the monomial basis
    /// returned by [`Field::monomial_basis_over`].
    pub fn coordinates_over(&self, sub: &Field, a: &Scalar) -> Result<Vec<Scalar>, FieldError> {
        let rel = self.relative_degree(sub).ok_or(FieldError::TowerMismatch)?;
        let n = sub.degree();
        Ok((0..rel)
            .map(|t| match a {
                Scalar::Rat(v) => Scalar::Rat(v[t * n..(t + 1) * n].iter().cloned().collect()),
                Scalar::Mod(v) => Scalar::Mod(v[t * n..(t + 1) * n].iter().copied().collect()),
            })
            .collect())
    }

    /// Monomials in the generators above `sub`, forming a `sub`-basis of this level.
    pub fn monomial_basis_over(&self, sub: &Field) -> Result<Vec<Scalar>, FieldError> {
        let rel = self.relative_degree(sub).ok_or(FieldError::TowerMismatch)?;
        let n = sub.degree();
        Ok((0..rel)
            .map(|t| {
                let mut out = self.zero();
                match &mut out {
                    Scalar::Rat(v) => v[t * n] = BigRational::one(),
                    Scalar::Mod(v) => v[t * n] = 1,
                }
                out
            })
            .collect())
    }

    /// Random element; rational coordinates are integers in `[-bound, bound]`.
    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R, bound: i64) -> Scalar {
        match &self.tower.data {
            TowerData::Rat(_) => Scalar::Rat(
                (0..self.degree())
                    .map(|_| BigRational::from_integer(BigInt::from(rng.gen_range(-bound..=bound))))
                    .collect(),
            ),
            TowerData::Mod(p, _) => {
                Scalar::Mod((0..self.degree()).map(|_| rng.gen_range(0..*p)).collect())
            }
        }
    }

    /// All elements of a finite field with at most 2^16 elements.
    pub fn elements(&self) -> Option<Vec<Scalar>> {
        let q = self.order()?;
        if q > ENUMERATION_LIMIT as u128 {
            return None;
        }
        let p = self.characteristic();
        let n = self.degree();
        Some(
            (0..q as u64)
                .map(|mut idx| {
                    let mut v = ModCoeffs::from_elem(0, n);
                    for c in v.iter_mut() {
                        *c = idx % p;
                        idx /= p;
                    }
                    Scalar::Mod(v)
                })
                .collect(),
        )
    }

    /// Rational value of an element lying in the base field, if it does.
    pub fn as_base_rational(&self, a: &Scalar) -> Option<BigRational> {
        match a {
            Scalar::Rat(v) if v[1..].iter().all(Zero::is_zero) => Some(v[0].clone()),
            Scalar::Mod(v) if v[1..].iter().all(|x| *x == 0) => {
                Some(BigRational::from_integer(BigInt::from(v[0])))
            }
            _ => None,
        }
    }

    pub fn is_one(&self, a: &Scalar) -> bool {
        match a {
            Scalar::Rat(v) => v[0].is_one() && v[1..].iter().all(Zero::is_zero),
            Scalar::Mod(v) => v[0] == 1 % self.characteristic() && v[1..].iter().all(|x| *x == 0),
        }
    }

    /// `true` when `a` is `-1`.
    pub fn is_minus_one(&self, a: &Scalar) -> bool {
        match a {
            Scalar::Rat(v) => {
                v[0].is_negative() && v[0].abs().is_one() && v[1..].iter().all(Zero::is_zero)
            }
            Scalar::Mod(v) => v[0] == self.characteristic() - 1 && v[1..].iter().all(|x| *x == 0),
        }
    }

    pub fn parse(&self, literal: &str) -> Result<Scalar, FieldError> {
        literal::parse(self, literal)
    }

    pub fn format(&self, a: &Scalar) -> String {
        literal::format(self, a)
    }

    pub(crate) fn step_minpoly(&self, step: usize) -> &[Scalar] {
        &self.tower.steps[step].minpoly
    }
}

fn rat_coeffs(a: &Scalar) -> &RatCoeffs {
    match a {
        Scalar::Rat(v) => v,
        Scalar::Mod(_) => panic!("expected a rational-tower scalar"),
    }
}

fn mod_coeffs(a: &Scalar) -> &ModCoeffs {
    match a {
        Scalar::Mod(v) => v,
        Scalar::Rat(_) => panic!("expected a prime-field-tower scalar"),
    }
}
