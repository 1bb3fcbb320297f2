use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::group::{FiniteGroup, Subgroup};
use crate::abgroup::{from_moduli, AbHom, FinAbGroup, Matrix};
use crate::error::{Error, Result};
use crate::IntMatrix;

/// Finitely generated `G`-module `M = Z^c / diag(moduli)` (modulus 0 is a
/// copy of `Z`) with one integer matrix per group element acting on the
/// coordinates.
#[derive(Clone, Debug)]
pub struct GModule {
    group: FiniteGroup,
    moduli: Vec<BigInt>,
    action: Vec<IntMatrix>,
}

pub(crate) fn reduce(moduli: &[BigInt], x: &mut [BigInt]) {
    for (v, d) in x.iter_mut().zip(moduli) {
        if !d.is_zero() {
            *v = v.mod_floor(d);
        }
    }
}

/// Whether `a` induces a well-defined map `Z^c/diag(src) -> Z^r/diag(dst)`.
pub(crate) fn well_defined(a: &IntMatrix, src: &[BigInt], dst: &[BigInt]) -> bool {
    (0..a.cols()).all(|j| {
        (0..a.rows()).all(|i| {
            let v = &a[(i, j)] * &src[j];
            if dst[i].is_zero() {
                v.is_zero()
            } else {
                v.is_multiple_of(&dst[i])
            }
        })
    })
}

pub(crate) fn congruent(a: &IntMatrix, b: &IntMatrix, moduli: &[BigInt]) -> bool {
    (0..a.rows()).all(|i| {
        (0..a.cols()).all(|j| {
            let d = &a[(i, j)] - &b[(i, j)];
            if moduli[i].is_zero() {
                d.is_zero()
            } else {
                d.is_multiple_of(&moduli[i])
            }
        })
    })
}

impl GModule {
    /// Checks that the matrices are well defined on `M` and form a group
    /// action by automorphisms.
    pub fn new(group: FiniteGroup, moduli: Vec<BigInt>, action: Vec<IntMatrix>) -> Result<Self> {
        let c = moduli.len();
        if action.len() != group.order() || action.iter().any(|a| a.rows() != c || a.cols() != c) {
            return Err(Error::Structural(
                "one c x c action matrix per group element is required".into(),
            ));
        }
        for (g, a) in action.iter().enumerate() {
            if !well_defined(a, &moduli, &moduli) {
                return Err(Error::Structural(format!(
                    "action of element {g} does not respect the relations"
                )));
            }
        }
        if !congruent(&action[group.identity()], &Matrix::identity(c), &moduli) {
            return Err(Error::Structural("the identity does not act trivially".into()));
        }
        for g in 0..group.order() {
            for h in 0..group.order() {
                let gh = action[g].try_mul(&action[h]).expect("bigint");
                if !congruent(&gh, &action[group.mul(g, h)], &moduli) {
                    return Err(Error::Structural(format!(
                        "action(g)·action(h) != action(gh) at ({g}, {h})"
                    )));
                }
            }
        }
        Ok(GModule { group, moduli, action })
    }

    /// `M` with trivial action; `moduli` are coordinate orders (0 for `Z`).
    pub fn trivial(group: FiniteGroup, moduli: &[i64]) -> Self {
        let moduli: Vec<BigInt> = moduli.iter().map(|&d| BigInt::from(d)).collect();
        let c = moduli.len();
        let action = vec![Matrix::identity(c); group.order()];
        GModule { group, moduli, action }
    }

    /// Action of a cyclic group determined by the matrix of its generator.
    pub fn cyclic(group: FiniteGroup, moduli: Vec<BigInt>, generator: usize, a: IntMatrix) -> Result<Self> {
        let n = group.order();
        let c = moduli.len();
        let mut action = vec![Matrix::identity(c); n];
        let mut x = group.identity();
        let mut m: IntMatrix = Matrix::identity(c);
        for _ in 0..n {
            x = group.mul(x, generator);
            m = a.try_mul(&m).expect("bigint");
            action[x] = m.clone();
        }
        Self::new(group, moduli, action)
    }

    /// Permutation module `Z[G]` (left regular action).
    pub fn regular(group: FiniteGroup) -> Self {
        let n = group.order();
        let action = (0..n)
            .map(|g| {
                let mut a = Matrix::zeros(n, n);
                for x in 0..n {
                    a[(group.mul(g, x), x)] = BigInt::one();
                }
                a
            })
            .collect();
        GModule {
            moduli: vec![BigInt::zero(); n],
            group,
            action,
        }
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn moduli(&self) -> &[BigInt] {
        &self.moduli
    }

    pub fn rank(&self) -> usize {
        self.moduli.len()
    }

    /// Underlying abelian group, presented on the coordinates.
    pub fn module(&self) -> FinAbGroup {
        from_moduli(&self.moduli)
    }

    pub fn action(&self, g: usize) -> &IntMatrix {
        &self.action[g]
    }

    /// `g·x`, reduced.
    pub fn act(&self, g: usize, x: &[BigInt]) -> Vec<BigInt> {
        let mut y = self.action[g].try_mul_vec(x).expect("bigint");
        reduce(&self.moduli, &mut y);
        y
    }

    pub fn reduce(&self, mut x: Vec<BigInt>) -> Vec<BigInt> {
        reduce(&self.moduli, &mut x);
        x
    }

    /// Norm element `N_G = Σ_g g` as a matrix.
    pub fn norm_matrix(&self) -> IntMatrix {
        let c = self.rank();
        let mut n: IntMatrix = Matrix::zeros(c, c);
        for a in &self.action {
            for i in 0..c {
                for j in 0..c {
                    n[(i, j)] += &a[(i, j)];
                }
            }
        }
        n
    }

    pub fn direct_sum(&self, o: &GModule) -> Result<GModule> {
        if self.group != o.group {
            return Err(Error::Structural("direct sum of modules over different groups".into()));
        }
        let (a, b) = (self.rank(), o.rank());
        let action = (0..self.group.order())
            .map(|g| block_diag(&self.action[g], &o.action[g], a, b))
            .collect();
        let mut moduli = self.moduli.clone();
        moduli.extend(o.moduli.iter().cloned());
        Ok(GModule {
            group: self.group.clone(),
            moduli,
            action,
        })
    }

    /// Restriction to a subgroup.
    pub fn restrict(&self, h: &Subgroup) -> GModule {
        let action = h.embedding.iter().map(|&g| self.action[g].clone()).collect();
        GModule {
            group: h.group.clone(),
            moduli: self.moduli.clone(),
            action,
        }
    }

    /// Checks that `f` (matrix from `self` coordinates to `o` coordinates)
    /// is a well-defined `G`-map.
    pub fn is_equivariant(&self, o: &GModule, f: &IntMatrix) -> bool {
        if f.rows() != o.rank() || f.cols() != self.rank() || !well_defined(f, &self.moduli, &o.moduli) {
            return false;
        }
        (0..self.group.order()).all(|g| {
            let l = f.try_mul(&self.action[g]).expect("bigint");
            let r = o.action[g].try_mul(f).expect("bigint");
            congruent(&l, &r, &o.moduli)
        })
    }

    /// `f` as a homomorphism of underlying groups.
    pub fn hom(&self, o: &GModule, f: &IntMatrix) -> Result<AbHom> {
        AbHom::from_presentation_images(self.module(), o.module(), &f.columns())
            .ok_or_else(|| Error::Structural("map does not respect the relations".into()))
    }
}

fn block_diag(x: &IntMatrix, y: &IntMatrix, a: usize, b: usize) -> IntMatrix {
    let mut m = Matrix::zeros(a + b, a + b);
    for i in 0..a {
        for j in 0..a {
            m[(i, j)] = x[(i, j)].clone();
        }
    }
    for i in 0..b {
        for j in 0..b {
            m[(a + i, a + j)] = y[(i, j)].clone();
        }
    }
    m
}

/// `Ind_H^G M = Z[G] ⊗_{Z[H]} M`, one copy of `M` per left coset `g_i H`
/// (transversal from [`FiniteGroup::left_transversal`]).
pub fn induced_module(g: &FiniteGroup, h: &Subgroup, m: &GModule) -> Result<GModule> {
    if m.group() != &h.group {
        return Err(Error::Structural("module is not over the given subgroup".into()));
    }
    let reps = g.left_transversal(h);
    let k = reps.len();
    let c = m.rank();
    // g·(g_i ⊗ x) = g_j ⊗ (h x) where g g_i = g_j h
    let mut action = Vec::with_capacity(g.order());
    for x in 0..g.order() {
        let mut a: IntMatrix = Matrix::zeros(k * c, k * c);
        for (i, &gi) in reps.iter().enumerate() {
            let y = g.mul(x, gi);
            let (j, hh) = reps
                .iter()
                .enumerate()
                .find_map(|(j, &gj)| h.index_of(g.mul(g.inv(gj), y)).map(|hh| (j, hh)))
                .expect("transversal covers G");
            let b = m.action(hh);
            for r in 0..c {
                for s in 0..c {
                    a[(j * c + r, i * c + s)] = b[(r, s)].clone();
                }
            }
        }
        action.push(a);
    }
    let moduli = (0..k).flat_map(|_| m.moduli().iter().cloned()).collect();
    GModule::new(g.clone(), moduli, action)
}
