use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use super::{lower_filtration, RamData};
use crate::abgroup::{from_moduli, GroupShape};
use crate::error::{Error, Result};
use crate::extension::Extension;
use crate::localfield::{unit_group_quotient, Field, LocalFieldElem, UnitQuotient};
use crate::Rational;

/// Generators of `U^s / U^n` (`U^0` includes the Teichmüller generator).
pub(crate) fn unit_filtration_gens(field: &Field, s: usize, n: usize) -> Result<Vec<LocalFieldElem>> {
    let k = field.residue();
    let prec = field.precision() as i64;
    let mut out = Vec::new();
    if s == 0 {
        out.push(LocalFieldElem::teichmuller(field, k.primitive_element()));
    }
    let one = LocalFieldElem::one(field);
    let pi = LocalFieldElem::pi(field);
    for i in s.max(1)..n {
        let pii = pi.pow(i as i64)?;
        for j in 0..k.degree() {
            out.push(
                one.add(&LocalFieldElem::teichmuller(field, &k.basis(j)).mul(&pii))
                    .with_precision(prec),
            );
        }
    }
    Ok(out)
}

/// Canonical coordinates of `U^s` inside `U/U^n` for `uq = U/U^n`.
pub(crate) fn level_subgroup(uq: &UnitQuotient, s: usize) -> Result<Vec<Vec<BigInt>>> {
    unit_filtration_gens(&uq.field, s, uq.level)?
        .iter()
        .map(|g| uq.to_group(g))
        .collect()
}

/// Coordinates in `U_K/U_K^n` of the norms of generators of `U_L^s`.
pub(crate) fn norm_level_image(ext: &Extension, s: usize, n: usize) -> Result<(UnitQuotient, Vec<Vec<BigInt>>)> {
    if n > ext.base.precision() {
        return Err(Error::PrecisionLoss {
            what: format!("norm image modulo U_K^{n}"),
            required: n as i64,
            available: ext.base.precision() as i64,
        });
    }
    let uq = unit_group_quotient(&ext.base, n)?;
    let top = ext.e * n;
    let gens = unit_filtration_gens(&ext.top, s, top.max(s + 1))?;
    let img = gens
        .iter()
        .map(|g| uq.to_group(&ext.norm(g)?))
        .collect::<Result<Vec<_>>>()?;
    Ok((uq, img))
}

fn ceil_usize(x: &Rational) -> usize {
    x.ceil().to_integer().to_usize().unwrap_or(0)
}

/// Comparison of `N(U_L^{ψ(m-1)+1})` with `U_K^m` modulo `U_K^{m+ℓ}` over
/// the unramified enlargement of degree `r`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormFiltrationReport {
    pub m: usize,
    pub window: usize,
    pub r: usize,
    /// `⌈ψ(m-1)⌉ + 1`
    pub source_level: usize,
    pub image_order: u64,
    pub target_order: u64,
    /// `U_K^m / (image ∩ U_K^m)`
    pub defect: GroupShape,
    pub contained: bool,
    pub exact: bool,
}

/// Check `N(U_L^{ψ(m-1)+1}) = U_K^m` modulo `U_K^{m+window}` over `K_r`.
/// The window defaults to `e + 1`.
pub fn norm_filtration_check(
    ext: &Extension,
    m: usize,
    window: Option<usize>,
    r: usize,
) -> Result<NormFiltrationReport> {
    if m == 0 {
        return Err(Error::Validation("filtration level m must be at least 1".into()));
    }
    let window = window.unwrap_or(ext.e + 1);
    let rd = lower_filtration(ext)?;
    if rd.g0() != ext.degree() {
        return Err(Error::Unsupported(
            "norm filtration check needs a totally ramified extension".into(),
        ));
    }
    let (ext_r, _, _) = ext.unramified_base_change(r)?;
    let source_level = ceil_usize(&rd.herbrand_psi(&Rational::from_integer(BigInt::from(m as i64 - 1)))) + 1;
    let n = m + window;
    let (uq, img) = norm_level_image(&ext_r, source_level, n)?;
    let target = level_subgroup(&uq, m)?;
    let g = &from_moduli(uq.group.invariant_factors());
    let contained = img.iter().all(|x| g.in_subgroup(&target, x));
    let image_order = g.subgroup_order(&img).and_then(|o| o.to_u64()).unwrap_or(0);
    let target_order = g.subgroup_order(&target).and_then(|o| o.to_u64()).unwrap_or(0);
    let exact = contained && image_order == target_order;
    let defect = if contained {
        let sub = crate::abgroup::subgroup_of(g, &target);
        // coordinates of the image inside the target subgroup
        let inner: Vec<Vec<BigInt>> = img
            .iter()
            .map(|x| subgroup_coords(g, &target, &sub, x))
            .collect::<Result<_>>()?;
        sub.subgroup_quotient(&inner).shape()
    } else {
        g.subgroup_quotient(&img).shape()
    };
    Ok(NormFiltrationReport {
        m,
        window,
        r,
        source_level,
        image_order,
        target_order,
        defect,
        contained,
        exact,
    })
}

fn subgroup_coords(
    g: &crate::abgroup::FinAbGroup,
    gens: &[Vec<BigInt>],
    sub: &crate::abgroup::FinAbGroup,
    x: &[BigInt],
) -> Result<Vec<BigInt>> {
    let inc = crate::abgroup::AbHom::from_presentation_images(sub.clone(), g.clone(), gens)
        .ok_or_else(|| Error::Structural("subgroup inclusion".into()))?;
    inc.preimage(x)
        .map(|c| sub.lift(&c))
        .ok_or_else(|| Error::Structural("element outside the subgroup".into()))
}

/// `|U_K^{m-1} / U_K^m N(U_L^{ψ(m-1)})|` against `|G^{m-1} / G^m|`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradedNormReport {
    pub m: usize,
    pub source_level: usize,
    pub unit_index: u64,
    pub group_index: u64,
    pub passed: bool,
}

/// Graded comparison at level `m ≥ 1` over `K` itself.
pub fn graded_norm_check(ext: &Extension, m: usize) -> Result<GradedNormReport> {
    let rd = lower_filtration(ext)?;
    graded_norm_check_with(ext, &rd, m)
}

pub fn graded_norm_check_with(ext: &Extension, rd: &RamData, m: usize) -> Result<GradedNormReport> {
    if m == 0 {
        return Err(Error::Validation("filtration level m must be at least 1".into()));
    }
    let r = |k: i64| Rational::from_integer(BigInt::from(k));
    let source_level = ceil_usize(&rd.herbrand_psi(&r(m as i64 - 1)));
    let (uq, img) = norm_level_image(ext, source_level, m)?;
    let g = &from_moduli(uq.group.invariant_factors());
    let lower = level_subgroup(&uq, m - 1)?;
    let lower_order = g.subgroup_order(&lower).and_then(|o| o.to_u64()).unwrap_or(0);
    let mut both = img.clone();
    both.extend(level_subgroup(&uq, m)?);
    let joined: Vec<Vec<BigInt>> = both.iter().filter(|x| g.in_subgroup(&lower, x)).cloned().collect();
    if joined.len() != both.len() {
        return Err(Error::Structural(format!(
            "norms of U_L^{source_level} leave U_K^{}",
            m - 1
        )));
    }
    let img_order = g.subgroup_order(&joined).and_then(|o| o.to_u64()).unwrap_or(0);
    let unit_index = lower_order / img_order.max(1);
    let hi = rd.upper_group(&r(m as i64 - 1)).len() as u64;
    let lo = rd.upper_group(&r(m as i64)).len() as u64;
    let group_index = hi / lo;
    Ok(GradedNormReport {
        m,
        source_level,
        unit_index,
        group_index,
        passed: unit_index == group_index,
    })
}
