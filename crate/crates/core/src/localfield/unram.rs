//! The coefficient ring `A = Z[y, t]/(p^a, t^b, f(y))`.
//!
//! With `a = M, b = 1` this is `W_M(F_q)`; with `a = 1, b = M` it is
//! `F_q[[t]]/(t^M)`. The uniformizer `ϖ` is `p` or `t` accordingly.

use std::collections::HashMap;
use std::sync::Mutex;

use crate::ffield::{Fe, Fq};

/// Element of `A`: coefficient of `t^k y^j` at index `k·m + j`, in `[0, p^a)`.
pub type AElem = Vec<u64>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Mixed,
    Equal,
}

pub struct UnramRing {
    kind: Kind,
    p: u64,
    a: usize,
    pa: u64,
    b: usize,
    m: usize,
    fmod: Vec<u64>,
    residue: Fq,
    phi_y: AElem,
    teich: Mutex<HashMap<u64, AElem>>,
}

impl std::fmt::Debug for UnramRing {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "A({:?}, p^{} t^{}, {:?})", self.kind, self.a, self.b, self.residue)
    }
}

fn mulmod(x: u64, y: u64, m: u64) -> u64 {
    ((x as u128 * y as u128) % m as u128) as u64
}

impl UnramRing {
    /// `depth` is the number of `ϖ`-adic digits kept.
    pub fn new(kind: Kind, residue: Fq, depth: usize) -> UnramRing {
        let p = residue.characteristic();
        let m = residue.degree();
        let (a, b) = match kind {
            Kind::Mixed => (depth, 1),
            Kind::Equal => (1, depth),
        };
        let pa = p
            .checked_pow(a as u32)
            .filter(|v| *v < (1 << 62))
            .expect("p-adic depth exceeds machine range");
        let mut r = UnramRing {
            kind,
            p,
            a,
            pa,
            b,
            m,
            fmod: residue.modulus().to_vec(),
            residue,
            phi_y: Vec::new(),
            teich: Mutex::new(HashMap::new()),
        };
        r.phi_y = r.frobenius_root();
        r
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// Number of `ϖ`-adic digits kept.
    pub fn depth(&self) -> usize {
        self.a.max(self.b)
    }

    pub fn residue(&self) -> &Fq {
        &self.residue
    }

    pub fn residue_degree(&self) -> usize {
        self.m
    }

    fn len(&self) -> usize {
        self.b * self.m
    }

    pub fn zero(&self) -> AElem {
        vec![0; self.len()]
    }

    pub fn one(&self) -> AElem {
        self.from_i64(1)
    }

    pub fn from_i64(&self, v: i64) -> AElem {
        let mut x = self.zero();
        let md = match self.kind {
            Kind::Mixed => self.pa,
            Kind::Equal => self.p,
        };
        x[0] = v.rem_euclid(md as i64) as u64;
        x
    }

    /// The uniformizer `ϖ`.
    pub fn uniformizer(&self) -> AElem {
        self.mul_varpi(&self.one(), 1)
    }

    /// Lift of a residue element with coefficients in `[0, p)`.
    pub fn lift(&self, a: &Fe) -> AElem {
        let mut x = self.zero();
        x[..self.m].copy_from_slice(&a.0);
        x
    }

    pub fn residue_of(&self, x: &AElem) -> Fe {
        Fe(x[..self.m].iter().map(|c| c % self.p).collect())
    }

    pub fn is_zero(&self, x: &AElem) -> bool {
        x.iter().all(|&c| c == 0)
    }

    pub fn add(&self, x: &AElem, y: &AElem) -> AElem {
        x.iter().zip(y).map(|(u, v)| (u + v) % self.pa).collect()
    }

    pub fn sub(&self, x: &AElem, y: &AElem) -> AElem {
        x.iter().zip(y).map(|(u, v)| (u + self.pa - v) % self.pa).collect()
    }

    pub fn neg(&self, x: &AElem) -> AElem {
        x.iter().map(|u| (self.pa - u) % self.pa).collect()
    }

    pub fn scale(&self, k: i64, x: &AElem) -> AElem {
        let k = k.rem_euclid(self.pa as i64) as u64;
        x.iter().map(|u| mulmod(*u, k, self.pa)).collect()
    }

    fn reduce_y(&self, mut c: Vec<u64>) -> Vec<u64> {
        let m = self.m;
        for i in (m..c.len()).rev() {
            let lead = c[i];
            if lead == 0 {
                continue;
            }
            c[i] = 0;
            for j in 0..m {
                let s = i - m + j;
                c[s] = (c[s] + self.pa - mulmod(lead, self.fmod[j], self.pa)) % self.pa;
            }
        }
        c.truncate(m);
        c
    }

    pub fn mul(&self, x: &AElem, y: &AElem) -> AElem {
        let m = self.m;
        let mut out = self.zero();
        for k1 in 0..self.b {
            let xs = &x[k1 * m..(k1 + 1) * m];
            if xs.iter().all(|&c| c == 0) {
                continue;
            }
            for k2 in 0..self.b - k1 {
                let ys = &y[k2 * m..(k2 + 1) * m];
                if ys.iter().all(|&c| c == 0) {
                    continue;
                }
                let mut prod = vec![0u64; 2 * m - 1];
                for (i, &u) in xs.iter().enumerate() {
                    if u == 0 {
                        continue;
                    }
                    for (j, &v) in ys.iter().enumerate() {
                        prod[i + j] = (prod[i + j] + mulmod(u, v, self.pa)) % self.pa;
                    }
                }
                let r = self.reduce_y(prod);
                let blk = &mut out[(k1 + k2) * m..(k1 + k2 + 1) * m];
                for (o, v) in blk.iter_mut().zip(r) {
                    *o = (*o + v) % self.pa;
                }
            }
        }
        out
    }

    pub fn pow(&self, x: &AElem, mut e: u64) -> AElem {
        let mut r = self.one();
        let mut b = x.clone();
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(&r, &b);
            }
            e >>= 1;
            if e > 0 {
                b = self.mul(&b, &b);
            }
        }
        r
    }

    /// `ϖ`-adic valuation; `depth()` for zero.
    pub fn val(&self, x: &AElem) -> usize {
        match self.kind {
            Kind::Mixed => x
                .iter()
                .filter(|&&c| c != 0)
                .map(|&c| {
                    let mut v = 0;
                    let mut c = c;
                    while c % self.p == 0 {
                        c /= self.p;
                        v += 1;
                    }
                    v
                })
                .min()
                .unwrap_or(self.a),
            Kind::Equal => (0..self.b)
                .find(|k| x[k * self.m..(k + 1) * self.m].iter().any(|&c| c != 0))
                .unwrap_or(self.b),
        }
    }

    /// `x · ϖ^k`.
    pub fn mul_varpi(&self, x: &AElem, k: usize) -> AElem {
        match self.kind {
            Kind::Mixed => {
                if k >= self.a {
                    return self.zero();
                }
                let s = self.p.pow(k as u32);
                x.iter().map(|&c| mulmod(c, s, self.pa)).collect()
            }
            Kind::Equal => {
                let mut out = self.zero();
                let sh = k * self.m;
                if sh < out.len() {
                    let n = out.len() - sh;
                    out[sh..].copy_from_slice(&x[..n]);
                }
                out
            }
        }
    }

    /// `x / ϖ^k` for `x` divisible by `ϖ^k`; the top `k` digits become 0.
    pub fn div_varpi(&self, x: &AElem, k: usize) -> AElem {
        match self.kind {
            Kind::Mixed => {
                let s = self.p.pow(k.min(self.a) as u32);
                x.iter()
                    .map(|&c| {
                        debug_assert!(c % s == 0);
                        c / s
                    })
                    .collect()
            }
            Kind::Equal => {
                let mut out = self.zero();
                let sh = k * self.m;
                if sh < out.len() {
                    let n = out.len() - sh;
                    out[..n].copy_from_slice(&x[sh..]);
                }
                out
            }
        }
    }

    /// Inverse of a unit by Newton iteration.
    pub fn inv(&self, x: &AElem) -> Option<AElem> {
        let r = self.residue.inv(&self.residue_of(x))?;
        let mut y = self.lift(&r);
        let two = self.from_i64(2);
        let mut steps = 1;
        while (1usize << (steps - 1)) < self.depth() {
            steps += 1;
        }
        for _ in 0..steps {
            y = self.mul(&y, &self.sub(&two, &self.mul(x, &y)));
        }
        Some(y)
    }

    /// Teichmüller representative of a residue element.
    pub fn teichmuller(&self, a: &Fe) -> AElem {
        let idx = self.residue.index(a);
        if let Some(v) = self.teich.lock().unwrap().get(&idx) {
            return v.clone();
        }
        let q = self.residue.order();
        let mut x = self.lift(a);
        if self.kind == Kind::Mixed {
            for _ in 0..self.a {
                x = self.pow(&x, q);
            }
        }
        self.teich.lock().unwrap().insert(idx, x.clone());
        x
    }

    /// Evaluate the y-polynomial `g` (coefficients in `A`) at `z`.
    fn eval_y(&self, g: &[u64], z: &AElem) -> AElem {
        let mut acc = self.zero();
        for c in g.iter().rev() {
            acc = self.add(&self.mul(&acc, z), &self.from_i64(*c as i64));
        }
        acc
    }

    fn frobenius_root(&self) -> AElem {
        // Newton iteration for the root of f lifting y^p
        let y = self.lift(&self.residue.basis(1.min(self.m - 1)));
        if self.m == 1 {
            return self.from_i64(0);
        }
        let mut z = self.pow(&y, self.p);
        let df: Vec<u64> = (1..self.fmod.len())
            .map(|i| self.fmod[i] * i as u64 % self.pa)
            .collect();
        for _ in 0..self.depth() + 1 {
            let fz = self.eval_y(&self.fmod, &z);
            if self.is_zero(&fz) {
                break;
            }
            let d = self.inv(&self.eval_y(&df, &z)).expect("f is separable mod p");
            z = self.sub(&z, &self.mul(&fz, &d));
        }
        z
    }

    /// Apply the ring map determined by `y -> image` (fixing `t` and `Z`).
    pub fn substitute_y(&self, x: &AElem, image: &AElem) -> AElem {
        let m = self.m;
        let mut pows = vec![self.one()];
        for j in 1..m {
            pows.push(self.mul(&pows[j - 1], image));
        }
        let mut out = self.zero();
        for k in 0..self.b {
            let mut blk = self.zero();
            for j in 0..m {
                let c = x[k * m + j];
                if c != 0 {
                    blk = self.add(&blk, &self.scale(c as i64, &pows[j]));
                }
            }
            out = self.add(&out, &self.mul_varpi_t(&blk, k));
        }
        out
    }

    fn mul_varpi_t(&self, x: &AElem, k: usize) -> AElem {
        match self.kind {
            Kind::Mixed => x.clone(),
            Kind::Equal => self.mul_varpi(x, k),
        }
    }

    /// Image of `y` under `Φ^k`, where `Φ` lifts the absolute Frobenius.
    pub fn frobenius_image_of_y(&self, k: i64) -> AElem {
        let k = k.rem_euclid(self.m as i64);
        let mut z = self.lift(&self.residue.basis(1.min(self.m - 1)));
        if self.m == 1 {
            return z;
        }
        for _ in 0..k {
            z = self.substitute_y(&z, &self.phi_y);
        }
        z
    }

    /// `Φ^k(x)` for the absolute Frobenius lift `Φ`.
    pub fn frobenius(&self, x: &AElem, k: i64) -> AElem {
        if self.m == 1 || k.rem_euclid(self.m as i64) == 0 {
            return x.clone();
        }
        self.substitute_y(x, &self.frobenius_image_of_y(k))
    }

    /// Root in `A` of the monic y-polynomial `g` (coefficients in `A`) lifting
    /// the simple residue root `r`.
    pub fn newton_root(&self, g: &[AElem], r: &Fe) -> Option<AElem> {
        let eval = |z: &AElem| {
            let mut acc = self.zero();
            for c in g.iter().rev() {
                acc = self.add(&self.mul(&acc, z), c);
            }
            acc
        };
        let dg: Vec<AElem> = (1..g.len()).map(|i| self.scale(i as i64, &g[i])).collect();
        let deval = |z: &AElem| {
            let mut acc = self.zero();
            for c in dg.iter().rev() {
                acc = self.add(&self.mul(&acc, z), c);
            }
            acc
        };
        let mut z = self.lift(r);
        for _ in 0..self.depth() + 1 {
            let d = self.inv(&deval(&z))?;
            z = self.sub(&z, &self.mul(&eval(&z), &d));
        }
        if self.is_zero(&eval(&z)) {
            Some(z)
        } else {
            None
        }
    }

    /// Embed an element of a ring with smaller residue field, given the image
    /// of its `y`.
    pub fn embed_from(&self, src: &UnramRing, x: &AElem, y_image: &AElem) -> AElem {
        let mut pows = vec![self.one()];
        for j in 1..src.m {
            pows.push(self.mul(&pows[j - 1], y_image));
        }
        let mut out = self.zero();
        for k in 0..src.b.min(self.b) {
            let mut blk = self.zero();
            for j in 0..src.m {
                let c = x[k * src.m + j] % self.pa;
                if c != 0 {
                    blk = self.add(&blk, &self.scale(c as i64, &pows[j]));
                }
            }
            out = self.add(&out, &self.mul_varpi_t(&blk, k));
        }
        out
    }

    /// Image of `y_src` for the embedding lifting the residue embedding
    /// `x -> root`.
    pub fn embedding_image(&self, src: &UnramRing, root: &Fe) -> AElem {
        let g: Vec<AElem> = src.fmod.iter().map(|&c| self.from_i64(c as i64)).collect();
        self.newton_root(&g, root).expect("separable residue polynomial")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffield::FiniteField;

    #[test]
    fn teichmuller_is_multiplicative_and_q_torsion() {
        for kind in [Kind::Mixed, Kind::Equal] {
            let f = FiniteField::standard(2, 2).unwrap();
            let a = UnramRing::new(kind, f.clone(), 6);
            for x in f.elements() {
                let t = a.teichmuller(&x);
                assert_eq!(a.pow(&t, 4), t);
                assert_eq!(a.residue_of(&t), x);
                for y in f.elements() {
                    assert_eq!(a.mul(&t, &a.teichmuller(&y)), a.teichmuller(&f.mul(&x, &y)));
                }
            }
        }
    }

    #[test]
    fn frobenius_is_ring_map() {
        let f = FiniteField::standard(3, 2).unwrap();
        let a = UnramRing::new(Kind::Mixed, f.clone(), 4);
        for x in f.elements() {
            let t = a.teichmuller(&x);
            assert_eq!(a.frobenius(&t, 1), a.teichmuller(&f.frobenius(&x)));
            assert_eq!(a.frobenius(&a.frobenius(&t, 1), 1), t);
        }
        let u = a.add(&a.teichmuller(&f.basis(1)), &a.from_i64(3));
        let v = a.add(&a.from_i64(7), &a.uniformizer());
        assert_eq!(
            a.frobenius(&a.mul(&u, &v), 1),
            a.mul(&a.frobenius(&u, 1), &a.frobenius(&v, 1))
        );
        let ui = a.inv(&u).unwrap();
        assert_eq!(a.mul(&u, &ui), a.one());
    }
}
