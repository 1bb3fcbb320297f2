use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::{enlarge, inconclusive, Bounds};
use crate::abgroup::{from_moduli, iso_check, AbHom, FinAbGroup, GroupShape};
use crate::error::{Error, Result};
use crate::extension::{galois_group, Extension};
use crate::localfield::{unit_group_quotient, LocalFieldElem, UnitQuotient};
use crate::ramify::{lower_filtration_of, unit_filtration_gens};

/// `N_{L/K}` on `U_L/U_L^{e n} -> U_K/U_K^n` through explicit generators.
#[derive(Clone, Debug)]
pub struct NormMap {
    pub level: usize,
    pub target: UnitQuotient,
    pub gens: Vec<LocalFieldElem>,
    pub hom: AbHom,
}

impl NormMap {
    pub fn new(ext: &Extension, n: usize) -> Result<NormMap> {
        if n > ext.base.precision() {
            return Err(Error::PrecisionLoss {
                what: format!("norm map modulo U_K^{n}"),
                required: n as i64,
                available: ext.base.precision() as i64,
            });
        }
        let target = unit_group_quotient(&ext.base, n)?;
        let gens = unit_filtration_gens(&ext.top, 0, ext.e * n)?;
        let images = gens
            .iter()
            .map(|g| target.to_group(&ext.norm(g)?))
            .collect::<Result<Vec<_>>>()?;
        let codomain = from_moduli(target.group.invariant_factors());
        let hom = AbHom::from_presentation_images(FinAbGroup::free(gens.len()), codomain, &images)
            .ok_or_else(|| Error::Structural("norm map is not well defined".into()))?;
        Ok(NormMap {
            level: n,
            target,
            gens,
            hom,
        })
    }

    /// A unit `β` of `L` with `N(β) ≡ u mod U_K^n`, if one exists.
    pub fn solve(&self, u: &LocalFieldElem) -> Result<Option<LocalFieldElem>> {
        let c = self.target.to_group(u)?;
        let Some(pre) = self.hom.preimage(&c) else {
            return Ok(None);
        };
        let exps = self.hom.domain.lift(&pre);
        let l = self.gens[0].field();
        let mut b = LocalFieldElem::one(l);
        for (g, k) in self.gens.iter().zip(&exps) {
            if !k.is_zero() {
                b = b.mul(&g.pow(k.to_i64().expect("small exponent"))?);
            }
        }
        Ok(Some(b))
    }

    /// `U_K / (U_K^n · N U_L)`.
    pub fn cokernel(&self) -> FinAbGroup {
        self.hom.cokernel()
    }
}

/// `K^×/N L^×` computed in `Z ⊕ U_K/U_K^n`, certified at two levels and
/// presented at the lower one.
#[derive(Clone, Debug)]
pub struct NormCosetGroup {
    pub group: FinAbGroup,
    pub levels: (usize, usize),
    pub shapes: (GroupShape, GroupShape),
    pub stable: bool,
    pub iso_to_galois: bool,
    pub(crate) units: UnitQuotient,
    /// Quotient of `Z ⊕ U_K/U_K^n` (canonical coordinates) by the norms.
    pub(crate) quotient: FinAbGroup,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormCosetSummary {
    pub invariants: GroupShape,
    pub levels: (usize, usize),
    pub stable: bool,
    pub iso_to_galois: bool,
}

fn coset_quotient(ext: &Extension, n: usize) -> Result<(UnitQuotient, FinAbGroup)> {
    let nm = NormMap::new(ext, n)?;
    let uq = nm.target.clone();
    let inv = uq.group.invariant_factors().to_vec();
    let mut moduli = vec![BigInt::zero()];
    moduli.extend(inv);
    let amb = from_moduli(&moduli);
    let mut rels: Vec<Vec<BigInt>> = nm
        .hom
        .image_generators()
        .into_iter()
        .map(|c| {
            let mut v = vec![BigInt::zero()];
            v.extend(c);
            v
        })
        .collect();
    let npi = ext.norm(&LocalFieldElem::pi(&ext.top))?;
    rels.push(k_coords(&uq, &npi)?);
    Ok((uq, amb.subgroup_quotient(&rels)))
}

/// `(v(x), class of x/π_K^{v(x)})`.
fn k_coords(uq: &UnitQuotient, x: &LocalFieldElem) -> Result<Vec<BigInt>> {
    let (v, u) = x.unit_decompose()?;
    let mut c = vec![BigInt::from(v)];
    c.extend(uq.to_group(&u)?);
    Ok(c)
}

impl NormCosetGroup {
    /// Class of `x ∈ K^×` in canonical coordinates.
    pub fn classify(&self, x: &LocalFieldElem) -> Result<Vec<BigInt>> {
        Ok(self.quotient.classify(&k_coords(&self.units, x)?))
    }

    /// An element of `K^×` in the class with canonical coordinates `c`.
    pub fn representative(&self, c: &[BigInt]) -> LocalFieldElem {
        let raw = self.quotient.lift(&self.quotient.reduce_canonical(c.to_vec()));
        let k = &self.units.field;
        let units = &self.units.group;
        let u = self
            .units
            .from_raw_full(&units.lift(&units.reduce_canonical(raw[1..].to_vec())));
        let v = raw[0].to_i64().expect("small valuation");
        u.mul(&LocalFieldElem::pi(k).pow(v).expect("nonzero"))
            .with_precision(k.precision() as i64)
    }

    /// Representatives of every class.
    pub fn representatives(&self) -> Vec<LocalFieldElem> {
        self.group.elements().iter().map(|c| self.representative(c)).collect()
    }

    pub fn summary(&self) -> NormCosetSummary {
        NormCosetSummary {
            invariants: self.group.shape(),
            levels: self.levels,
            stable: self.stable,
            iso_to_galois: self.iso_to_galois,
        }
    }
}

/// Largest upper break rounded up, or `-1` when `G_0` is trivial.
pub(crate) fn conductor_bound(ext: &Extension, g: &crate::extension::GaloisGroup) -> Result<i64> {
    let rd = lower_filtration_of(ext, g.clone())?;
    Ok(rd
        .upper_breaks()
        .iter()
        .map(|b| b.ceil().to_integer().to_i64().unwrap())
        .max()
        .unwrap_or(-1))
}

/// `K^×/N L^×` for abelian `L/K`, stable at `n` and `n + e|G|` past the
/// largest upper break, compared with `G`.
pub fn norm_coset_group(ext: &Extension) -> Result<NormCosetGroup> {
    let g = galois_group(ext)?;
    if !g.is_abelian() {
        return Err(Error::Structural("norm coset group needs an abelian extension".into()));
    }
    let n1 = (conductor_bound(ext, &g)? + 1).max(1) as usize;
    let n2 = n1 + ext.e * g.order();
    let (u1, q1) = coset_quotient(ext, n1)?;
    let (u2, q2) = coset_quotient(ext, n2)?;
    // reduction Z ⊕ U/U^{n2} -> Z ⊕ U/U^{n1} on the generators of level n2
    let c2 = u2.group.canonical_count();
    let mut images = Vec::with_capacity(c2 + 1);
    let mut first = vec![BigInt::zero(); c2 + 1];
    first[0] = BigInt::from(1);
    images.push(first_image(&u1)?);
    for j in 0..c2 {
        let mut e = vec![BigInt::zero(); c2];
        e[j] = BigInt::from(1);
        let mut v = vec![BigInt::zero()];
        v.extend(u1.to_group(&u2.from_group(&e))?);
        images.push(v);
    }
    let stable = match AbHom::from_presentation_images(q2.clone(), q1.clone(), &images) {
        Some(h) => h.is_injective() && h.is_surjective(),
        None => false,
    };
    let gab = g.finite_group().abelianization();
    let iso_to_galois = iso_check(&q2, &gab);
    if !stable {
        return Err(inconclusive(format!(
            "K^×/N L^× not stable between levels {n1} and {n2}"
        )));
    }
    Ok(NormCosetGroup {
        group: q1.clone(),
        levels: (n1, n2),
        shapes: (q1.shape(), q2.shape()),
        stable,
        iso_to_galois,
        units: u1,
        quotient: q1,
    })
}

fn first_image(u1: &UnitQuotient) -> Result<Vec<BigInt>> {
    let mut v = vec![BigInt::from(1)];
    v.extend(u1.group.zero());
    Ok(v)
}

/// A unit `β ∈ L_r` with `N(β) ≡ u mod U_{K_r}^m` for the least `r ≤ r_max`.
#[derive(Clone, Debug)]
pub struct VanishingWitness {
    pub r: usize,
    pub beta: LocalFieldElem,
    pub level: usize,
}

/// Approximate surjectivity of the norm on units after unramified base
/// change: the least `r` for which `u` is a norm modulo `U^m`.
pub fn vanishing_approx(ext: &Extension, u: &LocalFieldElem, m: usize, bounds: Bounds) -> Result<VanishingWitness> {
    if ext.f != 1 {
        return Err(Error::Unsupported(
            "vanishing_approx needs a totally ramified extension".into(),
        ));
    }
    let mut last = None;
    for r in 1..=bounds.r_max {
        let en = enlarge(ext, r)?;
        let nm = NormMap::new(&en.ext, m)?;
        let ur = en.k_to_kr.apply(u);
        if let Some(beta) = nm.solve(&ur)? {
            let check = en.ext.norm(&beta)?.div(&ur)?;
            let one = LocalFieldElem::one(&en.ext.base);
            if !check.eq_mod(&one, m as i64) {
                return Err(Error::Structural("norm equation solution does not verify".into()));
            }
            return Ok(VanishingWitness { r, beta, level: m });
        }
        let cok = nm.cokernel();
        let class = cok.classify(&nm.target.to_group(&ur)?);
        last = Some(format!("r = {r}: class {class:?} in U/U^{m}N ≅ {}", cok.shape()));
    }
    Err(inconclusive(format!(
        "no r ≤ {} makes u a norm modulo U^{m}; obstruction {}",
        bounds.r_max,
        last.unwrap_or_default()
    )))
}
