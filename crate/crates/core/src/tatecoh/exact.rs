use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::complex::{apply_differential, map_cochain, tate_cohomology_general, tate_group, TateGroup};
use super::group::{FiniteGroup, Subgroup};
use super::module::{induced_module, GModule};
use crate::abgroup::{iso_check, AbHom, FinAbGroup, GroupShape};
use crate::error::{Error, Result};
use crate::IntMatrix;

/// Outcome of comparing `Ĥ^i(G, Ind_H^G M)` with `Ĥ^i(H, M)`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ShapiroReport {
    pub degree: i64,
    pub induced: GroupShape,
    pub restricted: GroupShape,
    pub isomorphic: bool,
}

pub fn shapiro_check(g: &FiniteGroup, h: &Subgroup, m: &GModule, i: i64) -> Result<ShapiroReport> {
    let ind = induced_module(g, h, m)?;
    let a = tate_cohomology_general(&ind, i)?;
    let b = tate_cohomology_general(m, i)?;
    Ok(ShapiroReport {
        degree: i,
        induced: a.shape(),
        restricted: b.shape(),
        isomorphic: iso_check(&a, &b),
    })
}

/// One node of the long exact sequence.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct NodeCheck {
    pub position: String,
    pub exact: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LongExactReport {
    /// `(i, Ĥ^i(A), Ĥ^i(B), Ĥ^i(C))`.
    pub groups: Vec<(i64, GroupShape, GroupShape, GroupShape)>,
    pub nodes: Vec<NodeCheck>,
    /// Degrees whose connecting map `Ĥ^i(C) -> Ĥ^{i+1}(A)` vanishes.
    pub zero_connecting: Vec<i64>,
}

impl LongExactReport {
    pub fn passed(&self) -> bool {
        self.nodes.iter().all(|n| n.exact)
    }
}

/// `im f = ker g` for `X -f-> Y -g-> Z`.
pub(crate) fn exact_at(f: &AbHom, g: &AbHom) -> bool {
    let y = &f.codomain;
    let comp = f.compose(g);
    if (0..comp.matrix.cols()).any(|j| {
        !comp
            .codomain
            .is_zero_element(&comp.codomain.lift(&comp.matrix.column(j)))
    }) {
        return false;
    }
    let im: Vec<Vec<BigInt>> = f.image_generators().iter().map(|v| y.lift(v)).collect();
    let q = y.subgroup_quotient(&im);
    g.kernel_generators().iter().all(|k| q.is_zero_element(&y.lift(k)))
}

fn induced_map(src: &TateGroup, dst: &TateGroup, f: &IntMatrix) -> Result<AbHom> {
    let imgs = (0..src.group.canonical_count())
        .map(|j| {
            let mut e = src.group.zero();
            e[j] = BigInt::from(1);
            dst.classify(&map_cochain(f, &src.representative(&e)))
        })
        .collect::<Result<Vec<_>>>()?;
    AbHom::from_images(src.group.clone(), dst.group.clone(), &imgs)
        .ok_or_else(|| Error::Structural("induced map is not well defined".into()))
}

/// Blockwise preimage under a map of underlying groups.
fn pull_back(h: &AbHom, rank: usize, w: &[BigInt]) -> Result<Vec<BigInt>> {
    let mut out = Vec::new();
    for blk in w.chunks(rank.max(1)) {
        let y = h.codomain.classify(blk);
        let x = h
            .preimage(&y)
            .ok_or_else(|| Error::Structural("cochain has no preimage".into()))?;
        out.extend(h.domain.lift(&x));
    }
    Ok(out)
}

/// Verifies exactness of `... -> Ĥ^i(A) -> Ĥ^i(B) -> Ĥ^i(C) -> Ĥ^{i+1}(A) -> ...`
/// for `i` in `lo..=hi`, for a short exact sequence `0 -> A -f-> B -g-> C -> 0`.
pub fn long_exact_check(
    a: &GModule,
    b: &GModule,
    c: &GModule,
    f: &IntMatrix,
    g: &IntMatrix,
    lo: i64,
    hi: i64,
) -> Result<LongExactReport> {
    if !a.is_equivariant(b, f) {
        return Err(Error::Structural("position A -> B: map is not G-equivariant".into()));
    }
    if !b.is_equivariant(c, g) {
        return Err(Error::Structural("position B -> C: map is not G-equivariant".into()));
    }
    let fh = a.hom(b, f)?;
    let gh = b.hom(c, g)?;
    if !fh.is_injective() {
        return Err(Error::Structural("position A: A -> B is not injective".into()));
    }
    if !gh.is_surjective() {
        return Err(Error::Structural("position C: B -> C is not surjective".into()));
    }
    let zero = FinAbGroup::trivial();
    let into_a = AbHom::from_images(zero.clone(), fh.domain.clone(), &[]).expect("zero map");
    let from_c =
        AbHom::from_images(gh.codomain.clone(), zero, &vec![vec![]; gh.codomain.canonical_count()]).expect("zero map");
    if !exact_at(&into_a, &fh) || !exact_at(&fh, &gh) || !exact_at(&gh, &from_c) {
        return Err(Error::Structural(
            "position B: image of A -> B differs from kernel of B -> C".into(),
        ));
    }
    // set-theoretic section of g on coordinates
    let section: Vec<Vec<BigInt>> = (0..c.rank())
        .map(|t| {
            let mut e = vec![BigInt::zero(); c.rank()];
            e[t] = BigInt::from(1);
            let y = gh.codomain.classify(&e);
            gh.domain.lift(&gh.preimage(&y).expect("surjective"))
        })
        .collect();
    let s = crate::abgroup::Matrix::from_columns(b.rank(), &section);

    let mut groups = Vec::new();
    let mut ha = Vec::new();
    let mut hb = Vec::new();
    let mut hc = Vec::new();
    for i in lo..=hi + 1 {
        ha.push(tate_group(a, i)?);
        hb.push(tate_group(b, i)?);
        hc.push(tate_group(c, i)?);
    }
    let mut nodes = Vec::new();
    let mut zero_connecting = Vec::new();
    let mut maps: Vec<(String, AbHom)> = Vec::new();
    for (k, i) in (lo..=hi).enumerate() {
        groups.push((i, ha[k].group.shape(), hb[k].group.shape(), hc[k].group.shape()));
        let fi = induced_map(&ha[k], &hb[k], f)?;
        let gi = induced_map(&hb[k], &hc[k], g)?;
        // connecting map
        let imgs = (0..hc[k].group.canonical_count())
            .map(|j| {
                let mut e = hc[k].group.zero();
                e[j] = BigInt::from(1);
                let z = hc[k].representative(&e);
                let lifted = map_cochain(&s, &z);
                let w = apply_differential(b, i, &lifted);
                let pre = pull_back(&fh, b.rank(), &w)?;
                ha[k + 1].classify(&pre)
            })
            .collect::<Result<Vec<_>>>()?;
        let delta = AbHom::from_images(hc[k].group.clone(), ha[k + 1].group.clone(), &imgs)
            .ok_or_else(|| Error::Structural("connecting map is not well defined".into()))?;
        if delta.image_generators().iter().all(|v| v.iter().all(|x| x.is_zero())) {
            zero_connecting.push(i);
        }
        maps.push((format!("Ĥ^{i}(A)"), fi));
        maps.push((format!("Ĥ^{i}(B)"), gi));
        maps.push((format!("Ĥ^{i}(C)"), delta));
    }
    for w in maps.windows(2) {
        nodes.push(NodeCheck {
            position: w[1].0.clone(),
            exact: exact_at(&w[0].1, &w[1].1),
        });
    }
    Ok(LongExactReport {
        groups,
        nodes,
        zero_connecting,
    })
}
