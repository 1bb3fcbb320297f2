use num_integer::Integer;

use super::tensor::k_embeddings;
use crate::abgroup::FinAbGroup;
use crate::error::{Error, Result};
use crate::ffield::{Fe, FiniteField, Fq};
use crate::localfield::{unit_group_quotient, Field};
use crate::witt::PerfRing;

/// Functor `F` over `k'` whose Weil restriction is evaluated.
#[derive(Clone, Debug)]
pub enum PointFunctor {
    /// `F(ℓ) = ℓ`
    Additive,
    /// `F(ℓ) = ℓ^×`
    Multiplicative,
    /// `F(ℓ) = U / U^level` of the unramified base change of `field` to `ℓ`.
    UnitQuotient { field: Field, level: usize },
}

impl PointFunctor {
    fn eval(&self, l: &Fq) -> Result<FinAbGroup> {
        match self {
            PointFunctor::Additive => {
                let p = l.characteristic() as i64;
                Ok(FinAbGroup::from_invariants(&vec![p; l.degree()]))
            }
            PointFunctor::Multiplicative => Ok(FinAbGroup::cyclic(l.order() as i64 - 1)),
            PointFunctor::UnitQuotient { field, level } => {
                let big = if field.residue().same_as(l) {
                    field.clone()
                } else {
                    field.base_change(l)?.0
                };
                Ok(unit_group_quotient(&big, *level)?.group)
            }
        }
    }
}

/// One field factor of `R ⊗_k k'`.
#[derive(Clone, Debug)]
pub struct WeilFactor {
    /// Index of the component of `R` it comes from.
    pub component: usize,
    /// The factor, a finite field of degree `lcm([ℓ:k], [k':k])` over `k`.
    pub field: Fq,
    /// `k`-embeddings `k' -> field` in this Frobenius orbit.
    pub orbit: Vec<Fe>,
    pub points: FinAbGroup,
}

#[derive(Clone, Debug)]
pub struct WeilPoints {
    pub factors: Vec<WeilFactor>,
    /// `F(R ⊗_k k') = ⊕ F(factor)`.
    pub group: FinAbGroup,
}

/// `(Res_{k'/k} F)(R) = F(R ⊗_k k')` for `R` a product of finite fields
/// containing `k`. Each `ℓ ⊗_k k'` splits into the orbits of
/// `Gal(k_big/ℓ)` on the `k`-embeddings `k' -> k_big`.
pub fn weil_restriction_points(k: &Fq, kp: &Fq, functor: &PointFunctor, r: &PerfRing) -> Result<WeilPoints> {
    if !kp.degree().is_multiple_of(k.degree()) {
        return Err(Error::Structural("k' is not an extension of k".into()));
    }
    let f = kp.degree() / k.degree();
    let mut factors = Vec::new();
    for (idx, l) in r.components().iter().enumerate() {
        if l.characteristic() != k.characteristic() || l.degree() % k.degree() != 0 {
            return Err(Error::Structural(format!("component {idx} of R is not a k-algebra")));
        }
        let d = l.degree() / k.degree();
        let big = FiniteField::standard(k.characteristic(), k.degree() * d.lcm(&f))?;
        let embs = k_embeddings(k, kp, &big)?;
        // Gal(big/ℓ) is generated by the |ℓ|-power map
        let mut seen = vec![false; embs.len()];
        for s in 0..embs.len() {
            if seen[s] {
                continue;
            }
            let mut orbit = Vec::new();
            let mut a = embs[s].clone();
            loop {
                let pos = embs.iter().position(|b| *b == a).expect("orbit stays among embeddings");
                if seen[pos] {
                    break;
                }
                seen[pos] = true;
                orbit.push(a.clone());
                a = big.frobenius_pow(&a, l.degree() as i64);
            }
            factors.push(WeilFactor {
                component: idx,
                field: big.clone(),
                orbit,
                points: functor.eval(&big)?,
            });
        }
        if factors.iter().filter(|w| w.component == idx).count() != d.gcd(&f) {
            return Err(Error::Structural("orbit count differs from gcd([ℓ:k], [k':k])".into()));
        }
    }
    let group = factors
        .iter()
        .fold(FinAbGroup::trivial(), |acc, w| acc.direct_sum(&w.points));
    Ok(WeilPoints { factors, group })
}
