//! Universal Witt addition and multiplication polynomials, reduced mod p.
//!
//! Variables are interleaved: `X_i` has index `2i`, `Y_i` has index `2i + 1`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

/// Multivariate polynomial with coefficients in `Z/m` for a modulus kept by
/// the caller. Exponent vectors carry no trailing zeros.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Poly {
    pub terms: HashMap<Vec<u32>, u64>,
}

fn trim(mut e: Vec<u32>) -> Vec<u32> {
    while e.last() == Some(&0) {
        e.pop();
    }
    e
}

impl Poly {
    pub fn var(i: usize) -> Poly {
        let mut e = vec![0; i + 1];
        e[i] = 1;
        Poly::monomial(e, 1)
    }

    pub fn monomial(e: Vec<u32>, c: u64) -> Poly {
        let mut terms = HashMap::new();
        if c != 0 {
            terms.insert(trim(e), c);
        }
        Poly { terms }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_scaled(&mut self, o: &Poly, k: u64, m: u64) {
        for (e, c) in &o.terms {
            let v = self.terms.entry(e.clone()).or_insert(0);
            *v = (*v + c % m * (k % m)) % m;
            if *v == 0 {
                self.terms.remove(e);
            }
        }
    }

    pub fn mul(&self, o: &Poly, m: u64) -> Poly {
        let mut terms: HashMap<Vec<u32>, u64> = HashMap::with_capacity(self.len() * o.len() / 2 + 1);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &o.terms {
                let n = ea.len().max(eb.len());
                let mut e = vec![0u32; n];
                for (i, x) in ea.iter().enumerate() {
                    e[i] += x;
                }
                for (i, x) in eb.iter().enumerate() {
                    e[i] += x;
                }
                let v = terms.entry(e).or_insert(0);
                *v = (*v + ca * cb % m) % m;
            }
        }
        terms.retain(|_, c| *c != 0);
        Poly { terms }
    }

    pub fn pow(&self, k: u64, m: u64) -> Poly {
        let mut r = Poly::monomial(Vec::new(), 1 % m);
        let mut b = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                r = r.mul(&b, m);
            }
            k >>= 1;
            if k > 0 {
                b = b.mul(&b, m);
            }
        }
        r
    }

    fn reduce(&mut self, m: u64) {
        for c in self.terms.values_mut() {
            *c %= m;
        }
        self.terms.retain(|_, c| *c != 0);
    }
}

/// Which structure polynomials.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Op {
    Add,
    Mul,
}

/// Structure polynomials for one prime and operation, grown on demand.
#[derive(Default)]
struct Family {
    /// `S_k mod p`
    polys: Vec<Arc<Poly>>,
    /// `powers[j][m] = S_j^{p^m} mod p^{m+1}`
    powers: Vec<Vec<Poly>>,
}

type Cache = Mutex<HashMap<(u64, Op), Arc<Mutex<Family>>>>;

fn cache() -> &'static Cache {
    static CACHE: OnceLock<Cache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Ghost component `w_k` of the `X` (side 0) or `Y` (side 1) variables,
/// modulo `p^{k+1}`.
fn ghost(p: u64, k: usize, side: usize) -> Poly {
    let m = p.pow(k as u32 + 1);
    let mut g = Poly::default();
    for j in 0..=k {
        let x = Poly::var(2 * j + side);
        let e = p.pow((k - j) as u32);
        let mut mono = x.terms.into_iter().next().unwrap().0;
        mono[2 * j + side] = e as u32;
        g.add_scaled(&Poly::monomial(mono, 1), p.pow(j as u32), m);
    }
    g
}

/// The first `n` structure polynomials `S_0, ..., S_{n-1}` (mod p).
pub fn structure_polys(p: u64, op: Op, n: usize) -> Vec<Arc<Poly>> {
    let fam = {
        let mut c = cache().lock().unwrap();
        c.entry((p, op)).or_default().clone()
    };
    let mut fam = fam.lock().unwrap();
    while fam.polys.len() < n {
        let k = fam.polys.len();
        let m = p.pow(k as u32 + 1);
        let mut bracket = match op {
            Op::Add => {
                let mut g = ghost(p, k, 0);
                g.add_scaled(&ghost(p, k, 1), 1, m);
                g
            }
            Op::Mul => ghost(p, k, 0).mul(&ghost(p, k, 1), m),
        };
        for j in 0..k {
            let steps = k - j;
            while fam.powers[j].len() <= steps {
                let mm = fam.powers[j].len();
                let next = fam.powers[j][mm - 1].pow(p, p.pow(mm as u32 + 1));
                fam.powers[j].push(next);
            }
            let pj = p.pow(j as u32);
            bracket.add_scaled(&fam.powers[j][steps], m - pj % m, m);
        }
        let pk = p.pow(k as u32);
        let mut s = Poly::default();
        for (e, c) in bracket.terms {
            assert!(c % pk == 0, "ghost equation not divisible by p^k");
            let v = (c / pk) % p;
            if v != 0 {
                s.terms.insert(e, v);
            }
        }
        s.reduce(p);
        fam.powers.push(vec![s.clone()]);
        fam.polys.push(Arc::new(s));
    }
    fam.polys[..n].to_vec()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn low_degree_add_polys() {
        // S_1 = X_1 + Y_1 - sum_{0<i<p} binom(p,i)/p X_0^i Y_0^{p-i}
        let s = structure_polys(2, Op::Add, 2);
        assert_eq!(s[0].len(), 2);
        let mut expected = Poly::default();
        expected.add_scaled(&Poly::var(2), 1, 2);
        expected.add_scaled(&Poly::var(3), 1, 2);
        expected.add_scaled(&Poly::monomial(vec![1, 1], 1), 1, 2);
        assert_eq!(*s[1], expected);
        let m = structure_polys(3, Op::Mul, 2);
        assert_eq!(*m[0], Poly::monomial(vec![1, 1], 1));
    }
}
