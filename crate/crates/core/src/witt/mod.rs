//! Truncated Witt vectors over finite perfect rings (finite products of
//! finite fields), Teichmüller lifts, Frobenius, Verschiebung and the
//! perfect Greenberg functor on finite test rings.

mod greenberg;
pub mod poly;

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::Zero;
use rand::Rng;

use crate::error::{Error, Result};
use crate::ffield::{Fe, FiniteField, Fq};

pub use greenberg::{greenberg_points, GreenbergPoints, ProfiniteModule};
use poly::{structure_polys, Op, Poly};

/// Finite perfect ring: a finite product of finite fields of one
/// characteristic.
#[derive(Clone)]
pub struct PerfRing {
    components: Vec<Fq>,
}

impl fmt::Debug for PerfRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.components.iter()).finish()
    }
}

impl PartialEq for PerfRing {
    fn eq(&self, o: &PerfRing) -> bool {
        self.components.len() == o.components.len()
            && self.components.iter().zip(&o.components).all(|(a, b)| a.same_as(b))
    }
}

/// Element of a [`PerfRing`], one field element per component.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RingElem(pub Vec<Fe>);

impl PerfRing {
    pub fn new(components: Vec<Fq>) -> Result<Arc<PerfRing>> {
        let Some(first) = components.first() else {
            return Err(Error::Validation("a perfect ring needs at least one component".into()));
        };
        let p = first.characteristic();
        if components.iter().any(|c| c.characteristic() != p) {
            return Err(Error::Validation(
                "components of a perfect ring must share the characteristic".into(),
            ));
        }
        Ok(Arc::new(PerfRing { components }))
    }

    pub fn field(f: Fq) -> Arc<PerfRing> {
        Arc::new(PerfRing { components: vec![f] })
    }

    /// `F_{p^m}` in its standard presentation.
    pub fn standard(p: u64, m: usize) -> Result<Arc<PerfRing>> {
        Ok(Self::field(FiniteField::standard(p, m)?))
    }

    pub fn product(a: &PerfRing, b: &PerfRing) -> Result<Arc<PerfRing>> {
        Self::new(a.components.iter().chain(&b.components).cloned().collect())
    }

    pub fn characteristic(&self) -> u64 {
        self.components[0].characteristic()
    }

    pub fn components(&self) -> &[Fq] {
        &self.components
    }

    pub fn zero(&self) -> RingElem {
        RingElem(self.components.iter().map(|f| f.zero()).collect())
    }

    pub fn one(&self) -> RingElem {
        RingElem(self.components.iter().map(|f| f.one()).collect())
    }

    /// Constant `(x, x, ...)` from an element of the prime field.
    pub fn from_u64(&self, v: u64) -> RingElem {
        RingElem(self.components.iter().map(|f| f.from_u64(v)).collect())
    }

    pub fn add(&self, a: &RingElem, b: &RingElem) -> RingElem {
        RingElem(
            self.components
                .iter()
                .enumerate()
                .map(|(i, f)| f.add(&a.0[i], &b.0[i]))
                .collect(),
        )
    }

    pub fn mul(&self, a: &RingElem, b: &RingElem) -> RingElem {
        RingElem(
            self.components
                .iter()
                .enumerate()
                .map(|(i, f)| f.mul(&a.0[i], &b.0[i]))
                .collect(),
        )
    }

    pub fn is_zero(&self, a: &RingElem) -> bool {
        self.components.iter().zip(&a.0).all(|(f, x)| f.is_zero(x))
    }

    /// `x -> x^{p^k}`, `k` of either sign.
    pub fn frobenius_pow(&self, a: &RingElem, k: i64) -> RingElem {
        RingElem(
            self.components
                .iter()
                .zip(&a.0)
                .map(|(f, x)| f.frobenius_pow(x, k))
                .collect(),
        )
    }

    pub fn order(&self) -> u64 {
        self.components.iter().map(|f| f.order()).product()
    }

    pub fn elements(&self) -> Vec<RingElem> {
        let mut out = vec![Vec::new()];
        for f in &self.components {
            let mut next = Vec::new();
            for prefix in &out {
                for x in f.elements() {
                    let mut v = prefix.clone();
                    v.push(x);
                    next.push(v);
                }
            }
            out = next;
        }
        out.into_iter().map(RingElem).collect()
    }

    pub fn random<R: Rng>(&self, rng: &mut R) -> RingElem {
        RingElem(self.components.iter().map(|f| f.random(rng)).collect())
    }

    fn check(&self, a: &RingElem) -> Result<()> {
        if a.0.len() != self.components.len()
            || a.0
                .iter()
                .zip(&self.components)
                .any(|(x, f)| x.0.len() != f.degree() || x.0.iter().any(|&c| c >= f.characteristic()))
        {
            return Err(Error::Structural(format!("{a:?} is not an element of {self:?}")));
        }
        Ok(())
    }
}

/// Length-`n` Witt vector `(a_0, ..., a_{n-1})` over a finite perfect ring.
#[derive(Clone, PartialEq)]
pub struct WittVector {
    ring: Arc<PerfRing>,
    digits: Vec<RingElem>,
}

impl fmt::Debug for WittVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "W{}{:?}", self.len(), self.digits)
    }
}

/// Evaluate a structure polynomial at field points via discrete logarithms.
fn eval_poly(f: &FiniteField, poly: &Poly, vars: &[Option<u64>]) -> Fe {
    let n = f.order() - 1;
    let mut acc = f.zero();
    let dense = (n as usize) <= 4 * poly.len();
    let mut buckets = if dense { vec![0u64; n as usize] } else { Vec::new() };
    let p = f.characteristic();
    'terms: for (e, c) in &poly.terms {
        let mut l = 0u64;
        for (i, &k) in e.iter().enumerate() {
            if k == 0 {
                continue;
            }
            match vars[i] {
                Some(x) => l = (l + x * (k as u64 % n)) % n,
                None => continue 'terms,
            }
        }
        if dense {
            buckets[l as usize] = (buckets[l as usize] + c) % p;
        } else {
            acc = f.add(&acc, &f.scale(*c, &f.primitive_power(l)));
        }
    }
    for (l, c) in buckets.into_iter().enumerate() {
        if c != 0 {
            acc = f.add(&acc, &f.scale(c, &f.primitive_power(l as u64)));
        }
    }
    acc
}

fn apply_op(ring: &PerfRing, op: Op, a: &[RingElem], b: &[RingElem]) -> Vec<RingElem> {
    let n = a.len();
    let polys = structure_polys(ring.characteristic(), op, n);
    let mut out: Vec<Vec<Fe>> = vec![Vec::with_capacity(ring.components.len()); n];
    for (ci, f) in ring.components.iter().enumerate() {
        let mut vars = Vec::with_capacity(2 * n);
        for i in 0..n {
            vars.push(f.log(&a[i].0[ci]));
            vars.push(f.log(&b[i].0[ci]));
        }
        for (k, s) in polys.iter().enumerate() {
            out[k].push(eval_poly(f, s, &vars));
        }
    }
    out.into_iter().map(RingElem).collect()
}

impl WittVector {
    pub fn new(ring: Arc<PerfRing>, digits: Vec<RingElem>) -> Result<WittVector> {
        if digits.is_empty() {
            return Err(Error::Structural("Witt vectors have length at least 1".into()));
        }
        for d in &digits {
            ring.check(d)?;
        }
        Ok(WittVector { ring, digits })
    }

    pub fn zero(ring: &Arc<PerfRing>, n: usize) -> WittVector {
        WittVector {
            ring: ring.clone(),
            digits: vec![ring.zero(); n],
        }
    }

    pub fn one(ring: &Arc<PerfRing>, n: usize) -> WittVector {
        teichmuller(ring, &ring.one(), n)
    }

    /// Image of the integer `k` under `Z -> W_n(R)`.
    pub fn from_integer(ring: &Arc<PerfRing>, n: usize, k: &BigInt) -> WittVector {
        let modulus = BigInt::from(ring.characteristic()).pow(n as u32);
        let k = ((k % &modulus) + &modulus) % &modulus;
        WittVector::one(ring, n).scale_unsigned(&k)
    }

    pub fn ring(&self) -> &Arc<PerfRing> {
        &self.ring
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    pub fn digits(&self) -> &[RingElem] {
        &self.digits
    }

    pub fn is_zero(&self) -> bool {
        self.digits.iter().all(|d| self.ring.is_zero(d))
    }

    fn compatible(&self, o: &WittVector) -> Result<()> {
        if self.len() != o.len() {
            return Err(Error::Structural(format!(
                "Witt lengths differ: {} vs {}",
                self.len(),
                o.len()
            )));
        }
        if self.ring != o.ring {
            return Err(Error::Structural("Witt vectors over different rings".into()));
        }
        Ok(())
    }

    /// `W_n(R) -> W_m(R)` for `m <= n`.
    pub fn truncate(&self, m: usize) -> WittVector {
        WittVector {
            ring: self.ring.clone(),
            digits: self.digits[..m].to_vec(),
        }
    }

    /// Multiply by a non-negative integer (double and add).
    pub fn scale_unsigned(&self, k: &BigInt) -> WittVector {
        let mut acc = WittVector::zero(&self.ring, self.len());
        let bits = k.to_str_radix(2);
        if k.is_zero() {
            return acc;
        }
        for b in bits.chars() {
            acc = witt_add(&acc, &acc).expect("same ring");
            if b == '1' {
                acc = witt_add(&acc, self).expect("same ring");
            }
        }
        acc
    }

    /// Multiply by an arbitrary integer.
    pub fn scale(&self, k: i64) -> WittVector {
        let m = BigInt::from(self.ring.characteristic()).pow(self.len() as u32);
        let k = ((BigInt::from(k) % &m) + &m) % &m;
        self.scale_unsigned(&k)
    }

    pub fn neg(&self) -> WittVector {
        self.scale(-1)
    }

    /// Value in `Z/p^n` of a vector over the prime field `F_p`.
    pub fn to_integer(&self) -> Result<BigInt> {
        let f = &self.ring.components;
        if f.len() != 1 || f[0].degree() != 1 {
            return Err(Error::Structural(
                "to_integer needs the prime field as coefficients".into(),
            ));
        }
        let g = greenberg::coordinates(self);
        Ok(g.into_iter().next().unwrap())
    }
}

/// Sum under the universal Witt addition polynomials.
pub fn witt_add(a: &WittVector, b: &WittVector) -> Result<WittVector> {
    a.compatible(b)?;
    Ok(WittVector {
        ring: a.ring.clone(),
        digits: apply_op(&a.ring, Op::Add, &a.digits, &b.digits),
    })
}

pub fn witt_sub(a: &WittVector, b: &WittVector) -> Result<WittVector> {
    a.compatible(b)?;
    witt_add(a, &b.neg())
}

/// Product under the universal Witt multiplication polynomials.
pub fn witt_mul(a: &WittVector, b: &WittVector) -> Result<WittVector> {
    a.compatible(b)?;
    Ok(WittVector {
        ring: a.ring.clone(),
        digits: apply_op(&a.ring, Op::Mul, &a.digits, &b.digits),
    })
}

/// Teichmüller lift `(x, 0, ..., 0)`.
pub fn teichmuller(ring: &Arc<PerfRing>, x: &RingElem, n: usize) -> WittVector {
    let mut digits = vec![ring.zero(); n];
    digits[0] = x.clone();
    WittVector {
        ring: ring.clone(),
        digits,
    }
}

/// Witt vector Frobenius; digitwise `p`-th power over a perfect ring.
pub fn frobenius(a: &WittVector) -> WittVector {
    frobenius_pow(a, 1)
}

/// `F^k` for `k` of either sign.
pub fn frobenius_pow(a: &WittVector, k: i64) -> WittVector {
    WittVector {
        ring: a.ring.clone(),
        digits: a.digits.iter().map(|d| a.ring.frobenius_pow(d, k)).collect(),
    }
}

/// Verschiebung `(a_0, ..., a_{n-1}) -> (0, a_0, ..., a_{n-2})`.
pub fn verschiebung(a: &WittVector) -> WittVector {
    let mut digits = Vec::with_capacity(a.len());
    digits.push(a.ring.zero());
    digits.extend_from_slice(&a.digits[..a.len() - 1]);
    WittVector {
        ring: a.ring.clone(),
        digits,
    }
}

/// `W_n(F_p) -> Z/p^n` as a table indexed by the digit tuple.
pub fn integer_table(p: u64, n: usize) -> Result<Vec<(WittVector, u64)>> {
    let ring = PerfRing::standard(p, 1)?;
    let mut out = Vec::new();
    for k in 0..p.pow(n as u32) {
        let w = WittVector::from_integer(&ring, n, &BigInt::from(k));
        out.push((w, k));
    }
    Ok(out)
}

#[cfg(test)]
pub(crate) fn big_to_u64(x: &BigInt) -> u64 {
    num_traits::ToPrimitive::to_u64(x).expect("non-negative machine integer")
}

#[cfg(test)]
mod tests;
