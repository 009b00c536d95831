//! Univariate polynomials over a tower level and the irreducibility test
//! used when adjoining a generator.
//!
//! Polynomials are coefficient vectors, constant term first, with no trailing
//! zeros (the zero polynomial is empty).

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::SeedableRng;

use super::{Field, FieldError, Scalar};

pub type Poly = Vec<Scalar>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Irreducibility {
    Irreducible,
    /// A nontrivial monic factor.
    Factor(Poly),
}

pub fn trim(mut p: Poly) -> Poly {
    while p.last().is_some_and(Scalar::is_zero) {
        p.pop();
    }
    p
}

pub fn degree(p: &[Scalar]) -> Option<usize> {
    p.iter().rposition(|c| !c.is_zero())
}

pub fn add(k: &Field, a: &[Scalar], b: &[Scalar]) -> Poly {
    let n = a.len().max(b.len());
    trim(
        (0..n)
            .map(|i| match (a.get(i), b.get(i)) {
                (Some(x), Some(y)) => k.add(x, y),
                (Some(x), None) | (None, Some(x)) => x.clone(),
                (None, None) => unreachable!(),
            })
            .collect(),
    )
}

pub fn sub(k: &Field, a: &[Scalar], b: &[Scalar]) -> Poly {
    let neg: Poly = b.iter().map(|c| k.neg(c)).collect();
    add(k, a, &neg)
}

pub fn mul(k: &Field, a: &[Scalar], b: &[Scalar]) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![k.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = k.add(&out[i + j], &k.mul(x, y));
        }
    }
    trim(out)
}

pub fn divmod(k: &Field, a: &[Scalar], b: &[Scalar]) -> Result<(Poly, Poly), FieldError> {
    let b = trim(b.to_vec());
    let lead_inv = k.inv(b.last().ok_or(FieldError::DivisionByZero)?)?;
    let mut rem = trim(a.to_vec());
    if rem.len() < b.len() {
        return Ok((Vec::new(), rem));
    }
    let mut quot = vec![k.zero(); rem.len() - b.len() + 1];
    for i in (0..quot.len()).rev() {
        let c = k.mul(&rem[i + b.len() - 1], &lead_inv);
        if c.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            rem[i + j] = k.sub(&rem[i + j], &k.mul(&c, bj));
        }
        quot[i] = c;
    }
    rem.truncate(b.len() - 1);
    Ok((trim(quot), trim(rem)))
}

pub fn make_monic(k: &Field, p: &[Scalar]) -> Poly {
    match p.last() {
        None => Vec::new(),
        Some(lead) => {
            let inv = k
                .inv(lead)
                .expect("trimmed polynomial has a nonzero leading coefficient");
            p.iter().map(|c| k.mul(c, &inv)).collect()
        }
    }
}

/// Monic greatest common divisor.
pub fn gcd(k: &Field, a: &[Scalar], b: &[Scalar]) -> Poly {
    let mut r0 = trim(a.to_vec());
    let mut r1 = trim(b.to_vec());
    while !r1.is_empty() {
        let (_, r) = divmod(k, &r0, &r1).expect("nonzero divisor");
        r0 = std::mem::replace(&mut r1, r);
    }
    make_monic(k, &r0)
}

pub fn eval(k: &Field, p: &[Scalar], x: &Scalar) -> Scalar {
    p.iter()
        .rev()
        .fold(k.zero(), |acc, c| k.add(&k.mul(&acc, x), c))
}

fn mulmod(k: &Field, a: &[Scalar], b: &[Scalar], m: &[Scalar]) -> Poly {
    divmod(k, &mul(k, a, b), m).expect("nonzero modulus").1
}

fn powmod(k: &Field, base: &[Scalar], mut e: u64, m: &[Scalar]) -> Poly {
    let mut acc = vec![k.one()];
    let mut b = divmod(k, base, m).expect("nonzero modulus").1;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(k, &acc, &b, m);
        }
        b = mulmod(k, &b, &b, m);
        e >>= 1;
    }
    trim(acc)
}

/// `h^q mod m` for `q` the order of the finite field `k`, as `degree(k)`
/// successive `p`-th powers.
fn frobenius(k: &Field, h: &[Scalar], m: &[Scalar]) -> Poly {
    let mut out = h.to_vec();
    for _ in 0..k.degree() {
        out = powmod(k, &out, k.characteristic(), m);
    }
    out
}

pub fn format_poly(k: &Field, p: &[Scalar], var: &str) -> String {
    let mut terms = Vec::new();
    for (i, c) in p.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let mono = match i {
            0 => String::new(),
            1 => var.to_string(),
            _ => format!("{var}^{i}"),
        };
        let coeff = k.format(c);
        let term = if mono.is_empty() {
            coeff
        } else if k.is_one(c) {
            mono
        } else if coeff.contains(['+', '-', '*']) {
            format!("({coeff})*{mono}")
        } else {
            format!("{coeff}*{mono}")
        };
        terms.push(term);
    }
    if terms.is_empty() {
        "0".to_string()
    } else {
        terms.join(" + ")
    }
}

/// Decide irreducibility of a monic polynomial over `k`, or return a factor.
///
/// Finite fields: root exhaustion up to degree 3, otherwise distinct-degree
/// gcds with the Frobenius (Ben-Or) and equal-degree splitting for the
/// witness. Characteristic zero: rational root test for degree 2 and 3 over
/// the rationals, discriminant square test for quadratics over towers of
/// quadratic steps; everything else is rejected as unsupported.
pub fn irreducibility(k: &Field, p: &[Scalar], bound: usize) -> Result<Irreducibility, FieldError> {
    let p = trim(p.to_vec());
    let deg = degree(&p).ok_or(FieldError::DegreeTooSmall(0))?;
    if deg > bound {
        return Err(FieldError::DegreeBoundExceeded { degree: deg, bound });
    }
    if !k.is_one(p.last().unwrap()) {
        return Err(FieldError::NonMonic);
    }
    if deg <= 1 {
        return Ok(Irreducibility::Irreducible);
    }
    if k.characteristic() != 0 {
        return finite_irreducibility(k, &p, deg);
    }
    if k.height() == 0 {
        if deg > 3 {
            return Err(FieldError::Unsupported(format!(
                "degree {deg} over the rationals"
            )));
        }
        return Ok(match rational_root(k, &p) {
            Some(r) => Irreducibility::Factor(vec![k.neg(&r), k.one()]),
            None => Irreducibility::Irreducible,
        });
    }
    let quadratic_tower = k.steps().iter().all(|s| s.degree() == 2);
    if deg == 2 && quadratic_tower {
        let disc = k.sub(&k.mul(&p[1], &p[1]), &k.mul(&k.from_int(4), &p[0]));
        return Ok(match sqrt(k, &disc) {
            Some(s) => {
                let two_inv = k.inv(&k.from_int(2))?;
                let root = k.mul(&k.sub(&s, &p[1]), &two_inv);
                Irreducibility::Factor(vec![k.neg(&root), k.one()])
            }
            None => Irreducibility::Irreducible,
        });
    }
    Err(FieldError::Unsupported(format!("degree {deg} over {k}")))
}

fn finite_irreducibility(
    k: &Field,
    p: &[Scalar],
    deg: usize,
) -> Result<Irreducibility, FieldError> {
    if deg <= 3 {
        if let Some(elements) = k.elements() {
            for r in elements {
                if eval(k, p, &r).is_zero() {
                    return Ok(Irreducibility::Factor(vec![k.neg(&r), k.one()]));
                }
            }
            return Ok(Irreducibility::Irreducible);
        }
    }
    let x = vec![k.zero(), k.one()];
    let mut h = x.clone();
    for i in 1..=deg / 2 {
        h = frobenius(k, &h, p);
        let g = gcd(k, p, &sub(k, &h, &x));
        if g.len() > 1 {
            if g.len() < p.len() {
                return Ok(Irreducibility::Factor(g));
            }
            return Ok(Irreducibility::Factor(equal_degree_factor(k, p, i)));
        }
    }
    Ok(Irreducibility::Irreducible)
}

/// Proper factor of a polynomial whose irreducible factors all have degree `d`.
fn equal_degree_factor(k: &Field, f: &[Scalar], d: usize) -> Poly {
    let n = degree(f).unwrap();
    let mut rng = rand::rngs::StdRng::seed_from_u64(0x5eed);
    let p = k.characteristic();
    loop {
        let a: Poly = trim((0..n).map(|_| k.random(&mut rng, 1)).collect());
        if degree(&a).is_none_or(|e| e == 0) {
            continue;
        }
        let g = gcd(k, f, &a);
        if g.len() > 1 && g.len() < f.len() {
            return g;
        }
        let candidate = if p == 2 {
            // trace map a + a^2 + ... + a^(2^(m d - 1)), m = degree of k over F_2
            let mut t = a.clone();
            let mut acc = a.clone();
            for _ in 1..k.degree() * d {
                t = mulmod(k, &t, &t, f);
                acc = add(k, &acc, &t);
            }
            acc
        } else {
            // a^((q^d - 1) / 2) - 1, computed as a product of Frobenius images
            let mut pow_q = a.clone();
            let mut prod = vec![k.one()];
            for _ in 0..k.degree() * d {
                prod = mulmod(k, &prod, &pow_q, f);
                pow_q = powmod(k, &pow_q, p, f);
            }
            // prod = a^(1 + p + ... + p^(md-1)) = a^((q^d - 1)/(p - 1))
            let half = powmod(k, &prod, (p - 1) / 2, f);
            sub(k, &half, &[k.one()])
        };
        let g = gcd(k, f, &candidate);
        if g.len() > 1 && g.len() < f.len() {
            return g;
        }
    }
}

fn rational_root(k: &Field, p: &[Scalar]) -> Option<Scalar> {
    let coeffs: Vec<BigRational> = p.iter().map(|c| k.as_base_rational(c).unwrap()).collect();
    let lcm = coeffs
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = coeffs
        .iter()
        .map(|c| (c * BigRational::from_integer(lcm.clone())).to_integer())
        .collect();
    if ints[0].is_zero() {
        return Some(k.zero());
    }
    let nums = divisors(&ints[0].abs());
    let dens = divisors(&ints.last().unwrap().abs());
    for q in &dens {
        for n in &nums {
            for sign in [1, -1] {
                let r = BigRational::new(n * BigInt::from(sign), q.clone());
                let v = ints.iter().rev().fold(BigRational::zero(), |acc, c| {
                    acc * &r + BigRational::from_integer(c.clone())
                });
                if v.is_zero() {
                    return Some(k.from_rational(&r));
                }
            }
        }
    }
    None
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= *n {
        if (n % &d).is_zero() {
            small.push(d.clone());
            let other = n / &d;
            if other != d {
                large.push(other);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

fn rational_sqrt(q: &BigRational) -> Option<BigRational> {
    if q.is_negative() {
        return None;
    }
    let n = q.numer().sqrt();
    let d = q.denom().sqrt();
    (&n * &n == *q.numer() && &d * &d == *q.denom()).then(|| BigRational::new(n, d))
}

/// Square root in a characteristic-zero tower whose steps are all quadratic.
pub fn sqrt(k: &Field, a: &Scalar) -> Option<Scalar> {
    if a.is_zero() {
        return Some(k.zero());
    }
    if k.height() == 0 {
        return rational_sqrt(&k.as_base_rational(a)?).map(|r| k.from_rational(&r));
    }
    let parent = k.parent()?.clone();
    let m = k.step_minpoly(k.height() - 1);
    if m.len() != 3 {
        return None;
    }
    // gamma = beta + b/2 satisfies gamma^2 = disc
    let half = parent.inv(&parent.from_int(2)).ok()?;
    let b_half = parent.mul(&m[1], &half);
    let disc = parent.sub(&parent.mul(&b_half, &b_half), &m[0]);
    let coords = k.coordinates_over(&parent, a).ok()?;
    let (u, v) = (&coords[0], &coords[1]);
    let s = parent.sub(u, &parent.mul(v, &b_half));
    let t = v.clone();
    // (x + y gamma) in beta coordinates
    let assemble = |x: &Scalar, y: &Scalar| -> Scalar {
        let c0 = parent.add(x, &parent.mul(y, &b_half));
        let mut out = k.embed(&parent, &c0).unwrap();
        let beta = k.generator(k.height() - 1);
        out = k.add(&out, &k.mul(&k.embed(&parent, y).unwrap(), &beta));
        out
    };
    let mut candidates = Vec::new();
    if t.is_zero() {
        if let Some(x) = sqrt(&parent, &s) {
            candidates.push(assemble(&x, &parent.zero()));
        }
        if let Some(y) = parent.div(&s, &disc).ok().and_then(|w| sqrt(&parent, &w)) {
            candidates.push(assemble(&parent.zero(), &y));
        }
    } else {
        // disc w^2 - s w + t^2/4 = 0 with w = y^2
        let quarter_t2 = parent.mul(&parent.mul(&t, &t), &parent.mul(&half, &half));
        let inner = parent.sub(
            &parent.mul(&s, &s),
            &parent.mul(&parent.from_int(4), &parent.mul(&disc, &quarter_t2)),
        );
        if let Some(r) = sqrt(&parent, &inner) {
            let denom = parent.inv(&parent.mul(&parent.from_int(2), &disc)).ok()?;
            for w in [parent.add(&s, &r), parent.sub(&s, &r)] {
                let w = parent.mul(&w, &denom);
                if let Some(y) = sqrt(&parent, &w) {
                    if !y.is_zero() {
                        let x =
                            parent.mul(&t, &parent.inv(&parent.mul(&parent.from_int(2), &y)).ok()?);
                        candidates.push(assemble(&x, &y));
                    }
                }
            }
        }
    }
    candidates.into_iter().find(|c| k.mul(c, c) == *a)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q_poly(k: &Field, coeffs: &[i64]) -> Poly {
        coeffs.iter().map(|c| k.from_int(*c)).collect()
    }

    #[test]
    fn cubic_over_rationals_without_rational_roots_is_irreducible() {
        let q = Field::rationals();
        assert_eq!(
            irreducibility(&q, &q_poly(&q, &[-2, 0, 0, 1]), 6).unwrap(),
            Irreducibility::Irreducible
        );
    }

    #[test]
    fn x2_plus_1_over_f3_is_irreducible_by_exhausting_roots() {
        let f3 = Field::prime_field(3).unwrap();
        let p = q_poly(&f3, &[1, 0, 1]);
        // oracle: evaluate at 0, 1, 2 directly
        for r in 0..3 {
            assert_ne!((r * r + 1) % 3, 0);
        }
        assert_eq!(
            irreducibility(&f3, &p, 6).unwrap(),
            Irreducibility::Irreducible
        );
    }

    #[test]
    fn x2_plus_1_over_f2_factors() {
        let f2 = Field::prime_field(2).unwrap();
        let res = irreducibility(&f2, &q_poly(&f2, &[1, 0, 1]), 6).unwrap();
        assert_eq!(res, Irreducibility::Factor(q_poly(&f2, &[1, 1])));
    }

    #[test]
    fn quartic_over_f2_uses_frobenius_gcds() {
        let f2 = Field::prime_field(2).unwrap();
        // x^4 + x + 1 is irreducible
        assert_eq!(
            irreducibility(&f2, &q_poly(&f2, &[1, 1, 0, 0, 1]), 6).unwrap(),
            Irreducibility::Irreducible
        );
        // (x^2 + x + 1)^2 = x^4 + x^2 + 1 has only degree-2 factors
        let Irreducibility::Factor(g) =
            irreducibility(&f2, &q_poly(&f2, &[1, 0, 1, 0, 1]), 6).unwrap()
        else {
            panic!("expected a factor");
        };
        assert_eq!(g, q_poly(&f2, &[1, 1, 1]));
        // (x^2+x+1)(x^3+x+1) has a proper gcd at i = 2? no: degree-2 factor found at i = 2
        let prod = mul(&f2, &q_poly(&f2, &[1, 1, 1]), &q_poly(&f2, &[1, 1, 0, 1]));
        let Irreducibility::Factor(g) = irreducibility(&f2, &prod, 6).unwrap() else {
            panic!("expected a factor");
        };
        assert!(divmod(&f2, &prod, &g).unwrap().1.is_empty());
        assert!(g.len() > 1 && g.len() < prod.len());
    }

    #[test]
    fn equal_degree_split_in_odd_characteristic() {
        let f3 = Field::prime_field(3).unwrap();
        // (x^2+1)(x^2+x+2): both irreducible quadratics over F_3
        let prod = mul(&f3, &q_poly(&f3, &[1, 0, 1]), &q_poly(&f3, &[2, 1, 1]));
        let Irreducibility::Factor(g) = irreducibility(&f3, &prod, 6).unwrap() else {
            panic!("expected a factor");
        };
        assert_eq!(degree(&g), Some(2));
        assert!(divmod(&f3, &prod, &g).unwrap().1.is_empty());
    }

    #[test]
    fn degree_bound_is_enforced() {
        let f2 = Field::prime_field(2).unwrap();
        let mut p = vec![f2.one()];
        p.extend((0..6).map(|_| f2.zero()));
        p.push(f2.one());
        assert!(matches!(
            irreducibility(&f2, &p, 6),
            Err(FieldError::DegreeBoundExceeded {
                degree: 7,
                bound: 6
            })
        ));
    }

    #[test]
    fn quadratic_over_quadratic_field() {
        let q = Field::rationals();
        let k = q.extend("s", q_poly(&q, &[-2, 0, 1])).unwrap();
        // x^2 - 3 stays irreducible over Q(sqrt 2)
        assert_eq!(
            irreducibility(&k, &q_poly(&k, &[-3, 0, 1]), 6).unwrap(),
            Irreducibility::Irreducible
        );
        // x^2 - 8 = (x - 2s)(x + 2s)
        let Irreducibility::Factor(g) = irreducibility(&k, &q_poly(&k, &[-8, 0, 1]), 6).unwrap()
        else {
            panic!("expected a factor");
        };
        let root = k.neg(&g[0]);
        assert_eq!(k.mul(&root, &root), k.from_int(8));
        // 3 + 2s = (1 + s)^2
        let a = k.add(&k.from_int(3), &k.mul(&k.from_int(2), &k.generator(0)));
        let r = sqrt(&k, &a).unwrap();
        assert_eq!(k.mul(&r, &r), a);
    }
}
