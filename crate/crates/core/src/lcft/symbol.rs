use std::collections::BTreeMap;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::norms::{norm_coset_group, NormMap};
use super::{enlarge, inconclusive, twisted_apply, unit_gmodule_with, Bounds, Enlarged, UnitGModule};
use crate::abgroup::{FinAbGroup, GroupShape};
use crate::error::{Error, Result};
use crate::extension::{galois_group, Extension, GaloisGroup};
use crate::localfield::LocalFieldElem;
use crate::tatecoh::{tate_group, TateGroup};

/// `Ĥ^{-1}(Gal(L_r/K_r), U_{L_r}/U^n)` with the classes of `σ(π)/π`.
pub struct HMinusOne {
    pub module: UnitGModule,
    pub tate: TateGroup,
    /// Class of `σ(π)/π` for each element of `Gal(L_r/K_r)`.
    pub classes: Vec<Vec<BigInt>>,
    pub levels: (usize, usize),
    pub hom_onto: bool,
}

impl HMinusOne {
    pub fn group(&self) -> &FinAbGroup {
        &self.tate.group
    }

    pub fn level(&self) -> usize {
        self.module.level
    }

    /// Class of a unit of norm one (modulo `U^n`).
    pub fn classify(&self, w: &LocalFieldElem) -> Result<Vec<BigInt>> {
        self.tate.classify(&self.module.coords(w)?)
    }
}

fn h_minus_one_at(en: &Enlarged, galois: &GaloisGroup, n: usize) -> Result<HMinusOne> {
    let module = unit_gmodule_with(en.clone(), galois.clone(), n)?;
    let tate = tate_group(&module.units, -1)?;
    let l = &en.ext.top;
    let pi = LocalFieldElem::pi(l);
    let classes = galois
        .elements
        .iter()
        .map(|s| tate.classify(&module.coords(&s.pi_image.div(&pi)?)?))
        .collect::<Result<Vec<_>>>()?;
    let g = &tate.group;
    let hom = (0..galois.order())
        .all(|a| (0..galois.order()).all(|b| g.add(&classes[a], &classes[b]) == classes[galois.compose(a, b)]));
    let onto = g.order().is_some() && g.subgroup_order(&lift_all(g, &classes)) == g.order();
    Ok(HMinusOne {
        module,
        tate,
        classes,
        levels: (n, n),
        hom_onto: hom && onto,
    })
}

fn lift_all(g: &FinAbGroup, cs: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    cs.iter().map(|c| g.lift(c)).collect()
}

/// Stabilized `Ĥ^{-1}` over `K_r`: the first level `n` such that levels
/// `n` and `n + e|G|` give the same group and `σ ↦ σ(π)/π` is a
/// homomorphism onto it at both.
pub fn h_minus_one_stabilized(ext: &Extension, r: usize, bounds: Bounds) -> Result<HMinusOne> {
    let en = enlarge(ext, r)?;
    let galois = galois_group(&en.ext)?;
    stabilized_on(&en, &galois, bounds)
}

pub(crate) fn stabilized_on(en: &Enlarged, galois: &GaloisGroup, bounds: Bounds) -> Result<HMinusOne> {
    let step = en.ext.e * galois.order();
    let rd = crate::ramify::lower_filtration_of(&en.ext, galois.clone())?;
    let start = rd.lower_breaks().last().map_or(1, |b| *b as usize + 2);
    let cap = en.ext.top.precision();
    let mut cache: BTreeMap<usize, (GroupShape, bool)> = BTreeMap::new();
    let mut probe = |n: usize| -> Result<(GroupShape, bool)> {
        if let Some(v) = cache.get(&n) {
            return Ok(v.clone());
        }
        let h = h_minus_one_at(en, galois, n)?;
        let v = (h.group().shape(), h.hom_onto);
        cache.insert(n, v.clone());
        Ok(v)
    };
    for n in start..=bounds.n_max {
        if n + step > cap {
            break;
        }
        let a = probe(n)?;
        if !a.1 {
            continue;
        }
        let b = probe(n + step)?;
        if a == b {
            let mut h = h_minus_one_at(en, galois, n)?;
            h.levels = (n, n + step);
            return Ok(h);
        }
    }
    Err(inconclusive(format!(
        "Ĥ^-1 did not stabilize for levels up to {} (precision {cap})",
        bounds.n_max
    )))
}

/// Value of the reciprocity symbol: an element of `Gal(L/K)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymbolValue {
    /// Index into `galois_group(ext)`.
    pub index: usize,
    /// Frobenius exponent of the element on the unramified part.
    pub frob: usize,
    /// Enlargement degree used for the norm equation.
    pub r: usize,
    /// Truncation level of `Ĥ^{-1}`.
    pub level: usize,
}

/// The classical map sends a prime to the arithmetic Frobenius; the
/// symbol reported here is its inverse.
fn normalize(g: &GaloisGroup, classical: usize) -> usize {
    g.inverse(classical)
}

fn galois_pow(g: &GaloisGroup, a: usize, k: i64) -> usize {
    let base = if k < 0 { g.inverse(a) } else { a };
    let mut acc = g.identity;
    for _ in 0..k.unsigned_abs() {
        acc = g.compose(acc, base);
    }
    acc
}

fn agree(a: &LocalFieldElem, b: &LocalFieldElem) -> bool {
    let p = a.precision().min(b.precision()) - 1;
    let (da, db) = (a.with_precision(p), b.with_precision(p));
    da.valuation() == db.valuation() && da.digits() == db.digits()
}

/// Reciprocity symbol of `x ∈ K^×` for abelian `L/K`: the unramified part
/// is `Frob^{-v(x)}`; the inertia part comes from a solution of
/// `N(y) = x` over `K_r` and the class of `φ(y)/y` in `Ĥ^{-1}`.
pub fn artin_symbol(ext: &Extension, x: &LocalFieldElem, bounds: Bounds) -> Result<SymbolValue> {
    let g = galois_group(ext)?;
    artin_symbol_with(ext, &g, x, bounds)
}

pub(crate) fn artin_symbol_with(
    ext: &Extension,
    g: &GaloisGroup,
    x: &LocalFieldElem,
    bounds: Bounds,
) -> Result<SymbolValue> {
    if !g.is_abelian() {
        return Err(Error::Structural(
            "the reciprocity symbol needs an abelian extension".into(),
        ));
    }
    let v = x
        .valuation()
        .finite()
        .ok_or_else(|| Error::Validation("the symbol of an element that is zero to precision".into()))?;
    let tau = if ext.f == 1 {
        g.identity
    } else {
        (0..g.order())
            .find(|&i| g.elements[i].frob == 1)
            .expect("a Frobenius lift exists")
    };
    let done = |classical: usize, r: usize, level: usize| {
        let index = normalize(g, classical);
        SymbolValue {
            index,
            frob: g.elements[index].frob,
            r,
            level,
        }
    };
    if ext.e == 1 {
        return Ok(done(galois_pow(g, tau, v), 1, 0));
    }
    let deg = ext.base.residue().degree() as i64;
    let mut r = ext.f;
    while r <= bounds.r_max.max(ext.f) {
        let en = enlarge(ext, r)?;
        let gr = galois_group(&en.ext)?;
        let h = stabilized_on(&en, &gr, bounds)?;
        let n = h.level();
        let nm = NormMap::new(&en.ext, n)?;
        let lr = &en.ext.top;
        let pi = LocalFieldElem::pi(lr);
        let xr = en.k_to_kr.apply(x);
        let npi = en.ext.norm(&pi)?;
        let u = xr.div(&npi.pow(v)?)?.with_precision(n as i64);
        if let Some(beta) = nm.solve(&u)? {
            let y = pi.pow(v)?.mul(&beta);
            let t = en.l_to_lr.apply(&g.elements[tau].pi_image);
            let w = twisted_apply(lr, deg, &t, &y).div(&y)?;
            let class = h.classify(&w)?;
            let sr = (0..gr.order())
                .find(|&i| h.classes[i] == class)
                .ok_or_else(|| inconclusive("class of φ(y)/y is not of the form σ(π)/π"))?;
            let kappa = (0..g.order())
                .filter(|&i| g.elements[i].frob == 0)
                .find(|&i| agree(&en.l_to_lr.apply(&g.elements[i].pi_image), &gr.elements[sr].pi_image))
                .ok_or_else(|| Error::Structural("inertia element not matched in Gal(L/K)".into()))?;
            let classical = g.compose(galois_pow(g, tau, v), g.inverse(kappa));
            return Ok(done(classical, r, n));
        }
        r += ext.f;
    }
    Err(inconclusive(format!("norm equation unsolved for r ≤ {}", bounds.r_max)))
}

/// Compatibility of the symbols of `L/K` and `L/E` under `N_{E/K}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BaseChangeReport {
    pub samples: usize,
    pub matches: usize,
    /// Symbols over `E` cover `Gal(L/E)`.
    pub onto_subgroup: bool,
    pub passed: bool,
}

/// `L/E` must have base `E = K` or the maximal unramified subextension of
/// `L/K`. Checks `symbol_K(N_{E/K} x) = symbol_E(x)` on coset
/// representatives of `E^×/N L^×`.
pub fn base_change_check(over_k: &Extension, over_e: &Extension, bounds: Bounds) -> Result<BaseChangeReport> {
    let e_is_k = over_e.base.same_as(&over_k.base);
    if !e_is_k && !over_e.base.same_as(&over_k.mid) {
        return Err(Error::Unsupported(
            "E must be K or the maximal unramified subextension".into(),
        ));
    }
    let gk = galois_group(over_k)?;
    let ge = galois_group(over_e)?;
    let cosets = norm_coset_group(over_e)?;
    let reps = cosets.representatives();
    let mut matches = 0;
    let mut seen = std::collections::BTreeSet::new();
    for x in &reps {
        let se = artin_symbol_with(over_e, &ge, x, bounds)?;
        let nx = if e_is_k { x.clone() } else { over_k.norm_m_over_k(x)? };
        let sk = artin_symbol_with(over_k, &gk, &nx, bounds)?;
        seen.insert(se.index);
        let a = &ge.elements[se.index];
        let b = &gk.elements[sk.index];
        let frob_ok = if e_is_k { a.frob == b.frob } else { b.frob == 0 };
        if frob_ok && agree(&a.pi_image, &b.pi_image) {
            matches += 1;
        }
    }
    let onto_subgroup = seen.len() == ge.order();
    Ok(BaseChangeReport {
        samples: reps.len(),
        matches,
        onto_subgroup,
        passed: matches == reps.len() && onto_subgroup,
    })
}
