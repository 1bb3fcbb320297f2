//! Finite fields `F_{p^m}` in a polynomial basis over `F_p`.

use std::fmt;
use std::sync::Arc;

use rand::Rng;

use crate::error::{Error, Result};

/// Element of a finite field: coefficients `c_0 + c_1 x + ... ` of the
/// polynomial basis, each in `[0, p)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fe(pub Vec<u64>);

impl fmt::Debug for Fe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// Descriptor of `F_p[x]/(f)` with `f` monic irreducible of degree `m`.
pub struct FiniteField {
    p: u64,
    degree: usize,
    modulus: Vec<u64>,
    order: u64,
    primitive: Fe,
    /// discrete log table indexed by element index (0 unused)
    logs: Vec<u32>,
    /// powers of the primitive element
    powers: Vec<Fe>,
}

/// Shared handle to a finite field.
pub type Fq = Arc<FiniteField>;

/// Largest field order for which log tables are built.
const MAX_ORDER: u64 = 1 << 16;

pub(crate) fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

// ---- polynomials over F_p, low coefficient first ----

fn trim(mut a: Vec<u64>) -> Vec<u64> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn inv_mod_p(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * a % p;
        }
        a = a * a % p;
        e >>= 1;
    }
    r
}

fn poly_rem(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let b = trim(b.to_vec());
    let mut r = trim(a.to_vec());
    let db = b.len() - 1;
    let lead_inv = inv_mod_p(b[db], p);
    while r.len() > db {
        let k = r.len() - 1 - db;
        let c = r[r.len() - 1] * lead_inv % p;
        for (i, bi) in b.iter().enumerate() {
            r[k + i] = (r[k + i] + p - c * bi % p) % p;
        }
        r = trim(r);
    }
    r
}

fn poly_mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut r = vec![0u64; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if *x == 0 {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            r[i + j] = (r[i + j] + x * y) % p;
        }
    }
    trim(r)
}

fn poly_gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
    while !b.is_empty() {
        let r = poly_rem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

fn poly_powmod(base: &[u64], mut e: u128, m: &[u64], p: u64) -> Vec<u64> {
    let mut r = vec![1u64];
    let mut b = poly_rem(base, m, p);
    while e > 0 {
        if e & 1 == 1 {
            r = poly_rem(&poly_mul(&r, &b, p), m, p);
        }
        b = poly_rem(&poly_mul(&b, &b, p), m, p);
        e >>= 1;
    }
    r
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Rabin irreducibility test for a monic polynomial over `F_p`.
pub fn is_irreducible(f: &[u64], p: u64) -> bool {
    let f = trim(f.to_vec());
    let m = f.len().saturating_sub(1);
    if m == 0 {
        return false;
    }
    if m == 1 {
        return true;
    }
    let x = vec![0, 1];
    let pm = (p as u128).pow(m as u32);
    let xq = poly_powmod(&x, pm, &f, p);
    if trim(xq) != x {
        return false;
    }
    for r in prime_factors(m as u64) {
        let e = (p as u128).pow((m as u64 / r) as u32);
        let mut h = poly_powmod(&x, e, &f, p);
        h.resize(h.len().max(2), 0);
        h[1] = (h[1] + p - 1) % p;
        let g = poly_gcd(&f, &h, p);
        if g.len() != 1 {
            return false;
        }
    }
    true
}

impl FiniteField {
    /// Field `F_p[x]/(modulus)`; `modulus` is monic, lowest coefficient first.
    pub fn new(p: u64, modulus: Vec<u64>) -> Result<Fq> {
        if !is_prime(p) {
            return Err(Error::Validation(format!("{p} is not prime")));
        }
        let modulus = trim(modulus.into_iter().map(|c| c % p).collect());
        if modulus.len() < 2 || *modulus.last().unwrap() != 1 {
            return Err(Error::Validation(
                "defining polynomial must be monic of degree >= 1".into(),
            ));
        }
        if !is_irreducible(&modulus, p) {
            return Err(Error::Validation(format!(
                "polynomial {modulus:?} is reducible over F_{p}"
            )));
        }
        let degree = modulus.len() - 1;
        let order = p
            .checked_pow(degree as u32)
            .filter(|&o| o <= MAX_ORDER)
            .ok_or_else(|| Error::Unsupported(format!("field of order {p}^{degree} exceeds {MAX_ORDER}")))?;
        let mut f = FiniteField {
            p,
            degree,
            modulus,
            order,
            primitive: Fe(vec![0; degree]),
            logs: Vec::new(),
            powers: Vec::new(),
        };
        f.build_tables();
        Ok(Arc::new(f))
    }

    /// The prime field `F_p`.
    pub fn prime(p: u64) -> Result<Fq> {
        Self::new(p, vec![0, 1])
    }

    /// `F_{p^m}` defined by the first monic irreducible polynomial in the
    /// order of its coefficient index `sum c_i p^i`.
    pub fn standard(p: u64, m: usize) -> Result<Fq> {
        if m == 1 {
            return Self::prime(p);
        }
        let count = p
            .checked_pow(m as u32)
            .ok_or_else(|| Error::Unsupported("degree too large".into()))?;
        for idx in 0..count {
            let mut c = digits_base(idx, p, m);
            c.push(1);
            if c[0] != 0 && is_irreducible(&c, p) {
                return Self::new(p, c);
            }
        }
        unreachable!("irreducible polynomials exist in every degree")
    }

    fn build_tables(&mut self) {
        let n = self.order as usize;
        let group = self.order - 1;
        let factors = prime_factors(group);
        for idx in 1..self.order {
            let g = self.from_index(idx);
            if factors
                .iter()
                .all(|&r| !self.is_one(&self.pow(&g, (group / r) as u128)))
            {
                self.primitive = g;
                break;
            }
        }
        let mut logs = vec![0u32; n];
        let mut powers = Vec::with_capacity(group as usize);
        let mut x = self.one();
        for k in 0..group {
            logs[self.index(&x) as usize] = k as u32;
            powers.push(x.clone());
            x = self.mul_poly(&x, &self.primitive);
        }
        self.logs = logs;
        self.powers = powers;
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    /// Degree over the prime field.
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn zero(&self) -> Fe {
        Fe(vec![0; self.degree])
    }

    pub fn one(&self) -> Fe {
        let mut c = vec![0; self.degree];
        c[0] = 1;
        Fe(c)
    }

    pub fn from_u64(&self, v: u64) -> Fe {
        let mut c = vec![0; self.degree];
        c[0] = v % self.p;
        Fe(c)
    }

    /// Basis element `x^j`.
    pub fn basis(&self, j: usize) -> Fe {
        let mut c = vec![0; self.degree];
        c[j] = 1;
        Fe(c)
    }

    pub fn from_coeffs(&self, c: &[u64]) -> Fe {
        let r = poly_rem(c, &self.modulus, self.p);
        let mut v = vec![0; self.degree];
        for (i, x) in r.into_iter().enumerate() {
            v[i] = x;
        }
        Fe(v)
    }

    pub fn is_zero(&self, a: &Fe) -> bool {
        a.0.iter().all(|&c| c == 0)
    }

    pub fn is_one(&self, a: &Fe) -> bool {
        a.0[0] == 1 && a.0[1..].iter().all(|&c| c == 0)
    }

    /// Index `sum c_i p^i` in `[0, q)`.
    pub fn index(&self, a: &Fe) -> u64 {
        a.0.iter().rev().fold(0, |acc, &c| acc * self.p + c)
    }

    pub fn from_index(&self, idx: u64) -> Fe {
        Fe(digits_base(idx, self.p, self.degree))
    }

    pub fn elements(&self) -> impl Iterator<Item = Fe> + '_ {
        (0..self.order).map(move |i| self.from_index(i))
    }

    pub fn add(&self, a: &Fe, b: &Fe) -> Fe {
        Fe(a.0.iter().zip(&b.0).map(|(x, y)| (x + y) % self.p).collect())
    }

    pub fn sub(&self, a: &Fe, b: &Fe) -> Fe {
        Fe(a.0.iter().zip(&b.0).map(|(x, y)| (x + self.p - y) % self.p).collect())
    }

    pub fn neg(&self, a: &Fe) -> Fe {
        Fe(a.0.iter().map(|x| (self.p - x) % self.p).collect())
    }

    pub fn scale(&self, k: u64, a: &Fe) -> Fe {
        Fe(a.0.iter().map(|x| x * (k % self.p) % self.p).collect())
    }

    pub fn mul(&self, a: &Fe, b: &Fe) -> Fe {
        if self.powers.is_empty() {
            return self.mul_poly(a, b);
        }
        match (self.log(a), self.log(b)) {
            (Some(x), Some(y)) => self.primitive_power(x + y),
            _ => self.zero(),
        }
    }

    fn mul_poly(&self, a: &Fe, b: &Fe) -> Fe {
        self.from_coeffs(&poly_mul(&a.0, &b.0, self.p))
    }

    pub fn pow(&self, a: &Fe, e: u128) -> Fe {
        if !self.powers.is_empty() {
            return match self.log(a) {
                None if e == 0 => self.one(),
                None => self.zero(),
                Some(l) => {
                    let n = (self.order - 1) as u128;
                    self.primitive_power(((l as u128 * (e % n)) % n) as u64)
                }
            };
        }
        let mut r = self.one();
        let mut b = a.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(&r, &b);
            }
            b = self.mul(&b, &b);
            e >>= 1;
        }
        r
    }

    pub fn inv(&self, a: &Fe) -> Option<Fe> {
        let l = self.log(a)?;
        Some(self.primitive_power(self.order - 1 - l))
    }

    /// Absolute Frobenius `a -> a^p`.
    pub fn frobenius(&self, a: &Fe) -> Fe {
        self.pow(a, self.p as u128)
    }

    /// `a -> a^{p^k}` for any integer `k` (negative = inverse Frobenius).
    pub fn frobenius_pow(&self, a: &Fe, k: i64) -> Fe {
        let k = k.rem_euclid(self.degree as i64) as u32;
        self.pow(a, (self.p as u128).pow(k))
    }

    pub fn primitive_element(&self) -> &Fe {
        &self.primitive
    }

    /// Discrete logarithm to the base of [`FiniteField::primitive_element`].
    pub fn log(&self, a: &Fe) -> Option<u64> {
        if self.is_zero(a) || self.powers.is_empty() {
            return None;
        }
        Some(self.logs[self.index(a) as usize] as u64)
    }

    pub fn primitive_power(&self, k: u64) -> Fe {
        self.powers[(k % (self.order - 1)) as usize].clone()
    }

    pub fn random<R: Rng>(&self, rng: &mut R) -> Fe {
        self.from_index(rng.gen_range(0..self.order))
    }

    /// Same field (same characteristic and defining polynomial).
    pub fn same_as(&self, o: &FiniteField) -> bool {
        self.p == o.p && self.modulus == o.modulus
    }

    /// Roots in `self` of a polynomial with coefficients in `self`.
    pub fn roots(&self, poly: &[Fe]) -> Vec<Fe> {
        self.elements().filter(|x| self.is_zero(&self.eval(poly, x))).collect()
    }

    pub fn eval(&self, poly: &[Fe], x: &Fe) -> Fe {
        poly.iter()
            .rev()
            .fold(self.zero(), |acc, c| self.add(&self.mul(&acc, x), c))
    }

    /// All field embeddings `self -> big`, each given by the image of the
    /// generator `x`. Empty if the degree does not divide.
    pub fn embeddings_into(&self, big: &FiniteField) -> Vec<Embedding> {
        if self.p != big.p || !big.degree.is_multiple_of(self.degree) {
            return Vec::new();
        }
        let poly: Vec<Fe> = self.modulus.iter().map(|&c| big.from_u64(c)).collect();
        big.roots(&poly)
            .into_iter()
            .map(|r| Embedding { image_of_generator: r })
            .collect()
    }

    /// The trace `Tr_{self/F_p}` as an element of `F_p`.
    pub fn trace(&self, a: &Fe) -> u64 {
        let mut s = self.zero();
        let mut x = a.clone();
        for _ in 0..self.degree {
            s = self.add(&s, &x);
            x = self.frobenius(&x);
        }
        s.0[0]
    }
}

impl fmt::Debug for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}[x]/{:?}", self.p, self.modulus)
    }
}

/// Embedding `F_small -> F_big` of finite fields, given by the image of the
/// polynomial-basis generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Embedding {
    pub image_of_generator: Fe,
}

impl Embedding {
    pub fn apply(&self, small: &FiniteField, big: &FiniteField, a: &Fe) -> Fe {
        assert_eq!(a.0.len(), small.degree());
        let mut acc = big.zero();
        for c in a.0.iter().rev() {
            acc = big.add(&big.mul(&acc, &self.image_of_generator), &big.from_u64(*c));
        }
        acc
    }

    /// Identity of a field onto itself.
    pub fn identity(f: &FiniteField) -> Embedding {
        let g = if f.degree() == 1 { f.zero() } else { f.basis(1) };
        // for F_p the generator x satisfies x = 0 (modulus is x)
        Embedding { image_of_generator: g }
    }
}

fn digits_base(mut idx: u64, p: u64, len: usize) -> Vec<u64> {
    let mut c = Vec::with_capacity(len);
    for _ in 0..len {
        c.push(idx % p);
        idx /= p;
    }
    c
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_fields() {
        let f4 = FiniteField::standard(2, 2).unwrap();
        assert_eq!(f4.modulus(), &[1, 1, 1]);
        let f8 = FiniteField::standard(2, 3).unwrap();
        assert_eq!(f8.modulus(), &[1, 1, 0, 1]);
        let f9 = FiniteField::standard(3, 2).unwrap();
        assert_eq!(f9.order(), 9);
        assert!(FiniteField::new(2, vec![1, 0, 1]).is_err());
    }

    #[test]
    fn field_axioms_small() {
        for (p, m) in [(2, 1), (2, 2), (2, 3), (3, 2), (5, 1)] {
            let f = FiniteField::standard(p, m).unwrap();
            let els: Vec<Fe> = f.elements().collect();
            for a in &els {
                if !f.is_zero(a) {
                    assert!(f.is_one(&f.mul(a, &f.inv(a).unwrap())));
                    assert_eq!(f.primitive_power(f.log(a).unwrap()), *a);
                }
                assert_eq!(f.frobenius_pow(&f.frobenius(a), -1), *a);
                for b in &els {
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                }
            }
        }
    }

    #[test]
    fn embeddings_count() {
        let f2 = FiniteField::prime(2).unwrap();
        let f4 = FiniteField::standard(2, 2).unwrap();
        let f16 = FiniteField::standard(2, 4).unwrap();
        let f8 = FiniteField::standard(2, 3).unwrap();
        assert_eq!(f4.embeddings_into(&f16).len(), 2);
        assert_eq!(f4.embeddings_into(&f8).len(), 0);
        assert_eq!(f2.embeddings_into(&f8).len(), 1);
        for e in f4.embeddings_into(&f16) {
            for a in f4.elements() {
                for b in f4.elements() {
                    let lhs = e.apply(&f4, &f16, &f4.mul(&a, &b));
                    let rhs = f16.mul(&e.apply(&f4, &f16, &a), &e.apply(&f4, &f16, &b));
                    assert_eq!(lhs, rhs);
                }
            }
        }
        let id = Embedding::identity(&f2);
        assert_eq!(id.apply(&f2, &f2, &f2.one()), f2.one());
    }
}
