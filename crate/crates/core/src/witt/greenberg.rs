use std::sync::Arc;

use num_bigint::BigInt;

use super::{teichmuller, witt_add, witt_sub, PerfRing, RingElem, WittVector};
use crate::abgroup::FinAbGroup;
use crate::error::{Error, Result};
use crate::ffield::Fq;

/// Finite-length `W(k)`-module `⊕ W_{l_i}(k)`.
#[derive(Clone, Debug)]
pub struct ProfiniteModule {
    k: Fq,
    lengths: Vec<usize>,
}

impl ProfiniteModule {
    pub fn new(k: Fq, lengths: Vec<usize>) -> Result<ProfiniteModule> {
        if lengths.contains(&0) {
            return Err(Error::Validation("summand lengths must be positive".into()));
        }
        Ok(ProfiniteModule { k, lengths })
    }

    /// `W_l(k)`.
    pub fn cyclic(k: Fq, l: usize) -> Result<ProfiniteModule> {
        Self::new(k, vec![l])
    }

    pub fn coefficient_field(&self) -> &Fq {
        &self.k
    }

    pub fn lengths(&self) -> &[usize] {
        &self.lengths
    }

    /// Length as a `W(k)`-module; `p^{length · deg k}` is the order.
    pub fn length(&self) -> usize {
        self.lengths.iter().sum()
    }

    /// Underlying abelian group.
    pub fn presentation(&self) -> FinAbGroup {
        let p = self.k.characteristic() as i64;
        let inv: Vec<i64> = self
            .lengths
            .iter()
            .flat_map(|&l| std::iter::repeat_n(p.pow(l as u32), self.k.degree()))
            .collect();
        FinAbGroup::from_invariants(&inv)
    }
}

/// `W(R) ⊗_{W(k)} M` at finite length, with coordinates.
#[derive(Clone, Debug)]
pub struct GreenbergPoints {
    pub module: ProfiniteModule,
    pub ring: Arc<PerfRing>,
    pub group: FinAbGroup,
}

/// Evaluate the perfect Greenberg functor of `m` on the finite perfect ring `r`.
pub fn greenberg_points(m: &ProfiniteModule, r: &Arc<PerfRing>) -> Result<GreenbergPoints> {
    let k = &m.k;
    for c in r.components() {
        if c.characteristic() != k.characteristic() || c.degree() % k.degree() != 0 {
            return Err(Error::Structural(format!("{c:?} is not an algebra over {k:?}")));
        }
    }
    let p = k.characteristic() as i64;
    let mut inv = Vec::new();
    for &l in &m.lengths {
        for c in r.components() {
            inv.extend(std::iter::repeat_n(p.pow(l as u32), c.degree()));
        }
    }
    Ok(GreenbergPoints {
        module: m.clone(),
        ring: r.clone(),
        group: FinAbGroup::from_invariants(&inv),
    })
}

impl GreenbergPoints {
    /// Canonical coordinates of a point given as one Witt vector per summand.
    pub fn classify(&self, x: &[WittVector]) -> Result<Vec<BigInt>> {
        if x.len() != self.module.lengths.len() {
            return Err(Error::Structural("one Witt vector per summand expected".into()));
        }
        let mut out = Vec::new();
        for (w, &l) in x.iter().zip(&self.module.lengths) {
            if w.len() != l || **w.ring() != *self.ring {
                return Err(Error::Structural("summand has wrong length or ring".into()));
            }
            out.extend(coordinates(w));
        }
        Ok(self.group.classify(&out))
    }

    /// Point with the given canonical coordinates.
    pub fn element(&self, c: &[BigInt]) -> Vec<WittVector> {
        let c = self.group.lift(&self.group.reduce_canonical(c.to_vec()));
        let mut out = Vec::new();
        let mut pos = 0;
        for &l in &self.module.lengths {
            let width: usize = self.ring.components().iter().map(|f| f.degree()).sum();
            out.push(from_coordinates(&self.ring, l, &c[pos..pos + width]));
            pos += width;
        }
        out
    }
}

fn basis_vector(ring: &Arc<PerfRing>, comp: usize, j: usize, n: usize) -> WittVector {
    let mut e = ring.zero();
    e.0[comp] = ring.components()[comp].basis(j);
    teichmuller(ring, &e, n)
}

fn combination(ring: &Arc<PerfRing>, n: usize, c: &[BigInt]) -> WittVector {
    let mut acc = WittVector::zero(ring, n);
    let mut idx = 0;
    for (ci, f) in ring.components().iter().enumerate() {
        for j in 0..f.degree() {
            if c[idx] != BigInt::from(0) {
                let b = basis_vector(ring, ci, j, n);
                acc = witt_add(&acc, &b.scale_unsigned(&c[idx])).expect("same ring");
            }
            idx += 1;
        }
    }
    acc
}

fn from_coordinates(ring: &Arc<PerfRing>, n: usize, c: &[BigInt]) -> WittVector {
    combination(ring, n, c)
}

/// Coordinates of `w ∈ W_n(R)` over `Z/p^n` in the Teichmüller basis
/// `ω(x^j)` of each component.
pub(crate) fn coordinates(w: &WittVector) -> Vec<BigInt> {
    let ring = w.ring().clone();
    let n = w.len();
    let p = BigInt::from(ring.characteristic());
    let width: usize = ring.components().iter().map(|f| f.degree()).sum();
    let mut c = vec![BigInt::from(0); width];
    let mut r = w.clone();
    let mut ps = BigInt::from(1);
    for s in 0..n {
        let d: RingElem = ring.frobenius_pow(&r.digits()[s], -(s as i64));
        let mut coef = Vec::with_capacity(width);
        for x in &d.0 {
            coef.extend(x.0.iter().map(|&v| BigInt::from(v)));
        }
        if coef.iter().any(|v| *v != BigInt::from(0)) {
            for (ci, v) in c.iter_mut().zip(&coef) {
                *ci += &ps * v;
            }
            let t = combination(&ring, n, &coef).scale_unsigned(&ps);
            r = witt_sub(&r, &t).expect("same ring");
        }
        ps *= &p;
    }
    c
}
