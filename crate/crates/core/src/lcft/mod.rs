//! Verification harness: unit groups as Galois modules, norm cosets, the
//! reciprocity symbol, base change, norm-equation approximation over
//! unramified enlargements and the truncated Hilbert 90 check.

mod checks;
mod norms;
mod symbol;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::abgroup::{from_moduli, FinAbGroup};
use crate::error::{Error, Result};
use crate::extension::{galois_group, Extension, GaloisGroup};
use crate::localfield::{unit_group_quotient, Field, FieldEmbedding, LocalFieldElem, OElem, UnitQuotient};
use crate::tatecoh::GModule;
use crate::IntMatrix;

pub use checks::{hilbert90_check, ramification_reciprocity_check, Hilbert90Report, ReciprocityReport};
pub use norms::{norm_coset_group, vanishing_approx, NormCosetGroup, NormMap, VanishingWitness};
pub use symbol::{artin_symbol, base_change_check, h_minus_one_stabilized, BaseChangeReport, HMinusOne, SymbolValue};

/// Search bounds for enlargements and truncation levels.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bounds {
    /// Largest unramified enlargement degree tried.
    pub r_max: usize,
    /// Largest truncation level `n` of `U_L/U_L^n` tried.
    pub n_max: usize,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds { r_max: 4, n_max: 16 }
    }
}

/// Outcome of a single verification.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Verdict {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }
}

/// `L_r/K_r` together with `K -> K_r` and `L -> L_r`; `r = 1` is `L/K`
/// itself, `r > 1` needs `f | r` and gives the compositum `L·K_r`.
#[derive(Clone, Debug)]
pub struct Enlarged {
    pub r: usize,
    pub ext: Extension,
    pub k_to_kr: FieldEmbedding,
    pub l_to_lr: FieldEmbedding,
}

pub fn enlarge(ext: &Extension, r: usize) -> Result<Enlarged> {
    if r == 1 {
        return Ok(Enlarged {
            r,
            ext: ext.clone(),
            k_to_kr: ext.base.identity_embedding(),
            l_to_lr: ext.top.identity_embedding(),
        });
    }
    let (e, k_to_kr, l_to_lr) = ext.unramified_base_change(r)?;
    Ok(Enlarged {
        r,
        ext: e,
        k_to_kr,
        l_to_lr,
    })
}

/// `x ↦ Σ Φ^deg(a_i) t^i` for `x = Σ a_i π^i`: the ring map fixing the
/// coefficient-ring Frobenius power `deg` and sending `π` to `t`.
pub(crate) fn twisted_apply(l: &Field, deg: i64, t: &LocalFieldElem, x: &LocalFieldElem) -> LocalFieldElem {
    let a = l.coeff_ring();
    let r = t.to_integral().expect("image of π is integral");
    match x.unit_body() {
        None => x.clone(),
        Some(b) => {
            let s = x.valuation().finite().unwrap();
            let coeffs: Vec<OElem> = b.iter().map(|c| l.o_from_a(&a.frobenius(c, deg))).collect();
            let rel = x.relative_precision().min(t.relative_precision()) as usize;
            let u = LocalFieldElem::from_parts(l, 0, l.o_eval(&coeffs, &r), rel);
            if s == 0 {
                u
            } else {
                u.mul(&t.pow(s).expect("nonzero"))
            }
        }
    }
}

/// `U_L/U_L^n` and `L^×/U_L^n = Z·π ⊕ U_L/U_L^n` as `Gal(L_r/K_r)`-modules.
#[derive(Clone, Debug)]
pub struct UnitGModule {
    pub enlarged: Enlarged,
    pub level: usize,
    pub galois: GaloisGroup,
    pub quotient: UnitQuotient,
    /// On the canonical coordinates of `U/U^n`.
    pub units: GModule,
    /// Coordinates `(v, u)`, with `σ(π) = π · σ(π)/π`.
    pub multiplicative: GModule,
}

impl UnitGModule {
    /// Canonical group `U/U^n` with presentation = canonical coordinates.
    pub fn unit_group(&self) -> FinAbGroup {
        from_moduli(self.units.moduli())
    }

    pub fn coords(&self, u: &LocalFieldElem) -> Result<Vec<BigInt>> {
        self.quotient.to_group(u)
    }

    pub fn element(&self, c: &[BigInt]) -> LocalFieldElem {
        self.quotient.from_group(c)
    }
}

/// Build the unit modules of `L_r/K_r` at level `n`.
pub fn unit_gmodule(ext: &Extension, n: usize, r: usize) -> Result<UnitGModule> {
    let enlarged = enlarge(ext, r)?;
    let galois = galois_group(&enlarged.ext)?;
    unit_gmodule_with(enlarged, galois, n)
}

pub(crate) fn unit_gmodule_with(enlarged: Enlarged, galois: GaloisGroup, n: usize) -> Result<UnitGModule> {
    let e = &enlarged.ext;
    let l = &e.top;
    let quotient = unit_group_quotient(l, n)?;
    let moduli: Vec<BigInt> = quotient.group.invariant_factors().to_vec();
    let c = moduli.len();
    let basis: Vec<LocalFieldElem> = (0..c)
        .map(|j| {
            let mut v = vec![BigInt::from(0); c];
            v[j] = BigInt::from(1);
            quotient.from_group(&v)
        })
        .collect();
    let pi = LocalFieldElem::pi(l);
    let mut unit_action = Vec::with_capacity(galois.order());
    let mut mult_action = Vec::with_capacity(galois.order());
    for s in &galois.elements {
        let cols = basis
            .iter()
            .map(|b| quotient.to_group(&s.apply(e, b)))
            .collect::<Result<Vec<_>>>()?;
        let a = IntMatrix::from_columns(c, &cols);
        let ratio = s.pi_image.div(&pi)?;
        let cr = quotient.to_group(&ratio)?;
        let mut m = IntMatrix::zeros(c + 1, c + 1);
        m[(0, 0)] = BigInt::from(1);
        for i in 0..c {
            m[(i + 1, 0)] = cr[i].clone();
            for j in 0..c {
                m[(i + 1, j + 1)] = a[(i, j)].clone();
            }
        }
        unit_action.push(a);
        mult_action.push(m);
    }
    let group = galois.finite_group();
    let units = GModule::new(group.clone(), moduli.clone(), unit_action)?;
    let mut mm = vec![BigInt::from(0)];
    mm.extend(moduli);
    let multiplicative = GModule::new(group, mm, mult_action)?;
    Ok(UnitGModule {
        enlarged,
        level: n,
        galois,
        quotient,
        units,
        multiplicative,
    })
}

pub(crate) fn inconclusive(msg: impl Into<String>) -> Error {
    Error::Inconclusive(msg.into())
}
