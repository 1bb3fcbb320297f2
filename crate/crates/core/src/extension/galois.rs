use std::fmt;

use super::hensel::roots_integral;
use super::Extension;
use crate::error::{Error, Result};
use crate::localfield::{LocalFieldElem, OElem};
use crate::tatecoh::FiniteGroup;

/// Automorphism of `L/K`: `Φ_q^frob` on the unramified part and `π -> pi_image`.
#[derive(Clone)]
pub struct GaloisElem {
    pub frob: usize,
    pub pi_image: LocalFieldElem,
}

impl fmt::Debug for GaloisElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "σ(Frob^{}, π ↦ {})", self.frob, self.pi_image)
    }
}

impl GaloisElem {
    /// `σ(x)`; relative precision drops by at most the loss in `σ(π)`.
    pub fn apply(&self, ext: &Extension, x: &LocalFieldElem) -> LocalFieldElem {
        let l = &ext.top;
        let r = self.pi_image.to_integral().expect("σ(π) is integral");
        let rp = self.pi_image.precision();
        match x.unit_body() {
            None => LocalFieldElem::zero_to(l, x.precision().min(rp + x.precision() - 1)),
            Some(b) => {
                let s = x.valuation().finite().unwrap();
                let coeffs: Vec<OElem> = b
                    .iter()
                    .map(|c| l.o_from_a(&ext.frobenius_q(c, self.frob as i64)))
                    .collect();
                let su = l.o_eval(&coeffs, &r);
                let rel = (x.relative_precision()).min(rp) as usize;
                let u = LocalFieldElem::from_parts(l, 0, su, rel);
                if s == 0 {
                    u
                } else {
                    u.mul(&self.pi_image.pow(s).expect("σ(π) nonzero"))
                }
            }
        }
    }

    /// Agreement on the generators, to precision − 1.
    pub fn same_as(&self, o: &GaloisElem) -> bool {
        let p = self.pi_image.precision().min(o.pi_image.precision()) - 1;
        self.frob == o.frob && self.pi_image.eq_mod(&o.pi_image, p)
    }
}

/// `Gal(L/K)` realized on generator images, with its multiplication table.
#[derive(Clone, Debug)]
pub struct GaloisGroup {
    pub elements: Vec<GaloisElem>,
    /// `table[i][j]` is the index of `σ_i ∘ σ_j`.
    pub table: Vec<Vec<usize>>,
    pub identity: usize,
}

impl GaloisGroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn inverse(&self, i: usize) -> usize {
        (0..self.order()).find(|&j| self.table[i][j] == self.identity).unwrap()
    }

    pub fn compose(&self, i: usize, j: usize) -> usize {
        self.table[i][j]
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order()).all(|i| (0..self.order()).all(|j| self.table[i][j] == self.table[j][i]))
    }

    /// Abstract group with labels `σ0, σ1, ...`.
    pub fn finite_group(&self) -> FiniteGroup {
        let labels = (0..self.order()).map(|i| format!("σ{i}")).collect();
        FiniteGroup::from_table(self.table.clone(), labels).expect("verified group table")
    }

    /// Index of the element matching `g`.
    pub fn find(&self, g: &GaloisElem) -> Option<usize> {
        self.elements.iter().position(|h| h.same_as(g))
    }

    /// Inertia subgroup `G_0` (trivial Frobenius part).
    pub fn inertia(&self) -> Vec<usize> {
        (0..self.order()).filter(|&i| self.elements[i].frob == 0).collect()
    }
}

/// Realize `Gal(L/K)` from the Hensel roots of the conjugate Eisenstein
/// polynomials; errors with the missing conjugates if `L/K` is not Galois.
pub fn galois_group(ext: &Extension) -> Result<GaloisGroup> {
    let l = &ext.top;
    let e = ext.e;
    let mut elements = Vec::new();
    let mut missing = Vec::new();
    for k in 0..ext.f {
        if e == 1 {
            elements.push(GaloisElem {
                frob: k,
                pi_image: LocalFieldElem::pi(l),
            });
            continue;
        }
        // E^{Φ^k}(X), monic
        let mut g: Vec<OElem> = l
            .eisenstein()
            .iter()
            .map(|c| l.o_from_a(&ext.frobenius_q(c, k as i64)))
            .collect();
        g.push(l.o_one());
        let roots = roots_integral(l, &g, l.precision())?;
        if roots.len() < e {
            missing.push(format!("Frob^{k}: {} of {e} conjugates of π found", roots.len()));
        }
        for r in roots {
            let pi_image = LocalFieldElem::from_integral(l, r.root, r.digits as i64);
            elements.push(GaloisElem { frob: k, pi_image });
        }
    }
    if !missing.is_empty() {
        return Err(Error::NotGalois(missing.join("; ")));
    }
    // identity first
    let pi = LocalFieldElem::pi(l);
    let id = elements
        .iter()
        .position(|g| g.frob == 0 && g.pi_image.eq_mod(&pi, g.pi_image.precision() - 1))
        .ok_or_else(|| Error::Structural("identity not among the conjugates".into()))?;
    elements.swap(0, id);
    let n = elements.len();
    let mut table = vec![vec![0usize; n]; n];
    for i in 0..n {
        for j in 0..n {
            let comp = GaloisElem {
                frob: (elements[i].frob + elements[j].frob) % ext.f,
                pi_image: elements[i].apply(ext, &elements[j].pi_image),
            };
            table[i][j] = elements
                .iter()
                .position(|h| h.same_as(&comp))
                .ok_or_else(|| Error::Structural(format!("composition σ{i}∘σ{j} not found in the group")))?;
        }
    }
    let gg = GaloisGroup {
        elements,
        table,
        identity: 0,
    };
    FiniteGroup::from_table(gg.table.clone(), (0..n).map(|i| format!("σ{i}")).collect())?;
    Ok(gg)
}
