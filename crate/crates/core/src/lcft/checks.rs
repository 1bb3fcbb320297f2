use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use super::norms::conductor_bound;
use super::{enlarge, unit_gmodule_with, Bounds};
use crate::abgroup::GroupShape;
use crate::error::Result;
use crate::extension::{galois_group, Extension};
use crate::ramify::{graded_norm_check_with, lower_filtration_of, GradedNormReport};
use crate::tatecoh::tate_cohomology;

/// `Ĥ^i(G, L^×/U^n)` for increasing `n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Hilbert90Report {
    /// `(n, Ĥ^0, Ĥ^1, Ĥ^2)` for every level computed.
    pub levels: Vec<(usize, GroupShape, GroupShape, GroupShape)>,
    /// Levels `(n, n + window)` at which `Ĥ^1` vanishes.
    pub certificate: Option<(usize, usize)>,
    pub window: usize,
}

impl Hilbert90Report {
    pub fn passed(&self) -> bool {
        self.certificate.is_some()
    }
}

/// Vanishing of `Ĥ^1(G, L^×/U_L^n)` at two levels `n` and `n + window`
/// (default `e|G|`).
pub fn hilbert90_check(ext: &Extension, window: Option<usize>, bounds: Bounds) -> Result<Hilbert90Report> {
    let en = enlarge(ext, 1)?;
    let galois = galois_group(ext)?;
    let window = window.unwrap_or(ext.e * galois.order());
    let cap = ext.top.precision();
    let mut levels = Vec::new();
    let mut h1_zero = std::collections::BTreeMap::new();
    let mut at = |n: usize, levels: &mut Vec<_>| -> Result<bool> {
        if let Some(z) = h1_zero.get(&n) {
            return Ok(*z);
        }
        let m = unit_gmodule_with(en.clone(), galois.clone(), n)?.multiplicative;
        let h0 = tate_cohomology(&m, 0)?.shape();
        let h1 = tate_cohomology(&m, 1)?;
        let h2 = tate_cohomology(&m, 2)?.shape();
        levels.push((n, h0, h1.shape(), h2));
        h1_zero.insert(n, h1.is_trivial());
        Ok(h1.is_trivial())
    };
    let mut certificate = None;
    for n in 1..=bounds.n_max {
        if n + window > cap {
            break;
        }
        if at(n, &mut levels)? && at(n + window, &mut levels)? {
            certificate = Some((n, n + window));
            break;
        }
    }
    levels.sort_by_key(|l| l.0);
    Ok(Hilbert90Report {
        levels,
        certificate,
        window,
    })
}

/// Graded norm comparison for every `m` up to the largest upper break + 1.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReciprocityReport {
    pub rows: Vec<GradedNormReport>,
    pub passed: bool,
}

pub fn ramification_reciprocity_check(ext: &Extension, m_max: Option<usize>) -> Result<ReciprocityReport> {
    let g = galois_group(ext)?;
    let rd = lower_filtration_of(ext, g.clone())?;
    let top = m_max.unwrap_or_else(|| (conductor_bound(ext, &g).unwrap_or(0) + 2).max(1).to_usize().unwrap());
    let rows = (1..=top)
        .map(|m| graded_norm_check_with(ext, &rd, m))
        .collect::<Result<Vec<_>>>()?;
    let passed = rows.iter().all(|r| r.passed);
    Ok(ReciprocityReport { rows, passed })
}
