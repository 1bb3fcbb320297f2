use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::lattice::{kernel_mod, Lattice};
use super::matrix::Matrix;
use super::snf::{cokernel_invariants, snf, Snf};
use crate::IntMatrix;

/// Finitely generated abelian group `Z^g / R` given by a presentation, kept
/// together with its Smith normal form so that elements written on the
/// presentation generators can be put in canonical coordinates.
///
/// Canonical coordinates are residues modulo the invariant factors (least
/// nonnegative representative); an invariant factor of 0 is a copy of `Z`.
#[derive(Clone)]
pub struct FinAbGroup {
    presentation: IntMatrix,
    snf: Snf<BigInt>,
    /// rows of the Smith form that survive (diagonal entry != 1)
    kept: Vec<usize>,
    invariants: Vec<BigInt>,
}

/// Serializable summary of a group: its invariant factors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupShape(pub Vec<String>);

impl fmt::Display for GroupShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|d| if d == "0" { "Z".to_string() } else { format!("Z/{d}") })
            .collect();
        write!(f, "{}", parts.join(" x "))
    }
}

impl FinAbGroup {
    /// `Z^rows / column-span(m)`.
    pub fn cokernel(m: &IntMatrix) -> Self {
        let s = snf(m).expect("BigInt arithmetic does not overflow");
        let rows = m.rows();
        let mut kept = Vec::new();
        for i in 0..rows {
            let di = if i < m.cols() {
                s.d[(i, i)].clone()
            } else {
                BigInt::zero()
            };
            if !di.is_one() {
                kept.push(i);
            }
        }
        let invariants = cokernel_invariants(&s);
        FinAbGroup {
            presentation: m.clone(),
            snf: s,
            kept,
            invariants,
        }
    }

    /// Group on `gens` generators subject to the given relation vectors.
    pub fn from_relations(gens: usize, relations: &[Vec<BigInt>]) -> Self {
        Self::cokernel(&Matrix::from_columns(gens, relations))
    }

    /// `Z/d_1 + ... + Z/d_k`, each `d_i` on its own generator.
    pub fn from_invariants(ds: &[i64]) -> Self {
        let rel: Vec<Vec<BigInt>> = ds
            .iter()
            .enumerate()
            .map(|(i, &d)| {
                let mut v = vec![BigInt::zero(); ds.len()];
                v[i] = BigInt::from(d);
                v
            })
            .collect();
        Self::from_relations(ds.len(), &rel)
    }

    pub fn cyclic(n: i64) -> Self {
        Self::from_invariants(&[n])
    }

    pub fn trivial() -> Self {
        Self::from_invariants(&[])
    }

    pub fn free(rank: usize) -> Self {
        Self::from_relations(rank, &[])
    }

    pub fn direct_sum(&self, o: &FinAbGroup) -> FinAbGroup {
        let (a, b) = (self.generator_count(), o.generator_count());
        let mut rels = Vec::new();
        for c in self.presentation.columns() {
            let mut v = c.clone();
            v.extend(std::iter::repeat_n(BigInt::zero(), b));
            rels.push(v);
        }
        for c in o.presentation.columns() {
            let mut v = vec![BigInt::zero(); a];
            v.extend(c);
            rels.push(v);
        }
        FinAbGroup::from_relations(a + b, &rels)
    }

    pub fn invariant_factors(&self) -> &[BigInt] {
        &self.invariants
    }

    pub fn shape(&self) -> GroupShape {
        GroupShape(self.invariants.iter().map(|d| d.to_string()).collect())
    }

    /// Number of presentation generators.
    pub fn generator_count(&self) -> usize {
        self.presentation.rows()
    }

    /// Number of canonical generators (= number of invariant factors).
    pub fn canonical_count(&self) -> usize {
        self.invariants.len()
    }

    pub fn presentation(&self) -> &IntMatrix {
        &self.presentation
    }

    pub fn free_rank(&self) -> usize {
        self.invariants.iter().filter(|d| d.is_zero()).count()
    }

    pub fn is_trivial(&self) -> bool {
        self.invariants.is_empty()
    }

    /// Order, or `None` when the group is infinite.
    pub fn order(&self) -> Option<BigInt> {
        if self.free_rank() > 0 {
            return None;
        }
        Some(self.invariants.iter().product())
    }

    pub fn order_u64(&self) -> Option<u64> {
        self.order().and_then(|o| o.to_u64())
    }

    /// Canonical coordinates of an element written on presentation generators.
    pub fn classify(&self, x: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(x.len(), self.generator_count(), "element has wrong length");
        let y = self.snf.u.try_mul_vec(x).expect("bigint");
        self.reduce_canonical(self.kept.iter().map(|&i| y[i].clone()).collect())
    }

    pub fn classify_i64(&self, x: &[i64]) -> Vec<BigInt> {
        let v: Vec<BigInt> = x.iter().map(|&a| BigInt::from(a)).collect();
        self.classify(&v)
    }

    /// Reduce canonical coordinates modulo the invariant factors.
    pub fn reduce_canonical(&self, mut c: Vec<BigInt>) -> Vec<BigInt> {
        assert_eq!(c.len(), self.invariants.len());
        for (x, d) in c.iter_mut().zip(&self.invariants) {
            if !d.is_zero() {
                *x = x.mod_floor(d);
            }
        }
        c
    }

    /// Presentation-generator coordinates of an element given canonically.
    pub fn lift(&self, c: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(c.len(), self.canonical_count());
        let mut y = vec![BigInt::zero(); self.generator_count()];
        for (&i, v) in self.kept.iter().zip(c) {
            y[i] = v.clone();
        }
        self.snf.u_inv.try_mul_vec(&y).expect("bigint")
    }

    /// Presentation coordinates of canonical generator `i`.
    pub fn canonical_generator(&self, i: usize) -> Vec<BigInt> {
        let mut c = vec![BigInt::zero(); self.canonical_count()];
        c[i] = BigInt::one();
        self.lift(&c)
    }

    pub fn zero(&self) -> Vec<BigInt> {
        vec![BigInt::zero(); self.canonical_count()]
    }

    pub fn is_zero_element(&self, x: &[BigInt]) -> bool {
        self.classify(x).iter().all(|v| v.is_zero())
    }

    pub fn add(&self, a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        self.reduce_canonical(a.iter().zip(b).map(|(x, y)| x + y).collect())
    }

    pub fn scale(&self, k: &BigInt, a: &[BigInt]) -> Vec<BigInt> {
        self.reduce_canonical(a.iter().map(|x| x * k).collect())
    }

    /// Order of a canonical element (`None` if infinite).
    pub fn element_order(&self, c: &[BigInt]) -> Option<BigInt> {
        let mut o = BigInt::one();
        for (x, d) in c.iter().zip(&self.invariants) {
            if x.is_zero() {
                continue;
            }
            if d.is_zero() {
                return None;
            }
            o = o.lcm(&(d / x.gcd(d)));
        }
        Some(o)
    }

    /// `self / <gens>`, gens on presentation generators. The quotient keeps
    /// the same presentation generators, so [`FinAbGroup::classify`] on it is
    /// the composite classification map.
    pub fn subgroup_quotient(&self, gens: &[Vec<BigInt>]) -> FinAbGroup {
        let mut rels = self.presentation.columns();
        for g in gens {
            assert_eq!(g.len(), self.generator_count(), "generator length");
            rels.push(g.clone());
        }
        FinAbGroup::from_relations(self.generator_count(), &rels)
    }

    /// Order of the subgroup generated by `gens`; `None` when infinite.
    pub fn subgroup_order(&self, gens: &[Vec<BigInt>]) -> Option<BigInt> {
        let q = self.subgroup_quotient(gens);
        if q.free_rank() < self.free_rank() {
            return None;
        }
        let whole = self.order()?;
        Some(whole / q.order()?)
    }

    /// Whether `x` (presentation coords) lies in `<gens>`.
    pub fn in_subgroup(&self, gens: &[Vec<BigInt>], x: &[BigInt]) -> bool {
        self.subgroup_quotient(gens).is_zero_element(x)
    }

    /// Enumerate all canonical elements of a finite group (small groups only).
    pub fn elements(&self) -> Vec<Vec<BigInt>> {
        assert_eq!(self.free_rank(), 0, "cannot enumerate an infinite group");
        let mut out = vec![Vec::new()];
        for d in &self.invariants {
            let d = d.to_i64().expect("small group");
            let mut next = Vec::with_capacity(out.len() * d as usize);
            for prefix in &out {
                for v in 0..d {
                    let mut p = prefix.clone();
                    p.push(BigInt::from(v));
                    next.push(p);
                }
            }
            out = next;
        }
        out
    }
}

/// True iff the invariant factor lists (zeros included) coincide.
pub fn iso_check(a: &FinAbGroup, b: &FinAbGroup) -> bool {
    a.invariants == b.invariants
}

impl PartialEq for FinAbGroup {
    /// Groups compare by isomorphism type.
    fn eq(&self, o: &Self) -> bool {
        iso_check(self, o)
    }
}

impl fmt::Debug for FinAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for FinAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.invariants.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .invariants
            .iter()
            .map(|d| if d.is_zero() { "Z".to_string() } else { format!("Z/{d}") })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Homomorphism between groups, as a matrix on canonical generators:
/// column `j` holds the canonical coordinates of the image of canonical
/// generator `j` of the domain.
#[derive(Clone, Debug)]
pub struct AbHom {
    pub domain: FinAbGroup,
    pub codomain: FinAbGroup,
    pub matrix: IntMatrix,
}

impl AbHom {
    /// Builds the map from images of the domain's canonical generators.
    /// Returns `None` if the images do not respect the domain relations.
    pub fn from_images(domain: FinAbGroup, codomain: FinAbGroup, images: &[Vec<BigInt>]) -> Option<AbHom> {
        assert_eq!(images.len(), domain.canonical_count());
        let cols: Vec<Vec<BigInt>> = images.iter().map(|c| codomain.reduce_canonical(c.clone())).collect();
        let matrix = Matrix::from_columns(codomain.canonical_count(), &cols);
        let h = AbHom {
            domain,
            codomain,
            matrix,
        };
        for (j, d) in h.domain.invariants.iter().enumerate() {
            let img = h.codomain.scale(d, &h.matrix.column(j));
            if img.iter().any(|x| !x.is_zero()) {
                return None;
            }
        }
        Some(h)
    }

    /// Map given on presentation generators of the domain: `images[i]` is
    /// the image (presentation coordinates of the codomain) of generator `i`.
    pub fn from_presentation_images(domain: FinAbGroup, codomain: FinAbGroup, images: &[Vec<BigInt>]) -> Option<AbHom> {
        assert_eq!(images.len(), domain.generator_count());
        let m = Matrix::from_columns(codomain.generator_count(), images);
        let canon: Vec<Vec<BigInt>> = (0..domain.canonical_count())
            .map(|j| {
                let x = domain.canonical_generator(j);
                codomain.classify(&m.try_mul_vec(&x).expect("bigint"))
            })
            .collect();
        // relations of the presentation must map to zero
        for rel in domain.presentation.columns() {
            if !codomain.is_zero_element(&m.try_mul_vec(&rel).expect("bigint")) {
                return None;
            }
        }
        Self::from_images(domain, codomain, &canon)
    }

    pub fn apply(&self, x: &[BigInt]) -> Vec<BigInt> {
        self.codomain
            .reduce_canonical(self.matrix.try_mul_vec(x).expect("bigint"))
    }

    pub fn compose(&self, after: &AbHom) -> AbHom {
        let m = after.matrix.try_mul(&self.matrix).expect("bigint");
        let cols: Vec<Vec<BigInt>> = m.columns();
        AbHom::from_images(self.domain.clone(), after.codomain.clone(), &cols).expect("composite respects relations")
    }

    /// Basis of the kernel, as canonical elements of the domain.
    pub fn kernel_generators(&self) -> Vec<Vec<BigInt>> {
        let basis = kernel_mod(&self.matrix, self.codomain.invariant_factors()).expect("bigint");
        basis.into_iter().map(|v| self.domain.reduce_canonical(v)).collect()
    }

    pub fn image_generators(&self) -> Vec<Vec<BigInt>> {
        self.matrix
            .columns()
            .into_iter()
            .map(|c| self.codomain.reduce_canonical(c))
            .collect()
    }

    pub fn kernel(&self) -> FinAbGroup {
        subgroup_of(&self.domain, &self.kernel_generators())
    }

    pub fn image(&self) -> FinAbGroup {
        subgroup_of(&self.codomain, &self.image_generators())
    }

    pub fn cokernel(&self) -> FinAbGroup {
        let gens: Vec<Vec<BigInt>> = self.image_generators().iter().map(|g| self.codomain.lift(g)).collect();
        self.codomain.subgroup_quotient(&gens)
    }

    pub fn is_injective(&self) -> bool {
        self.kernel().is_trivial()
    }

    pub fn is_surjective(&self) -> bool {
        self.cokernel().is_trivial()
    }

    /// Some `x` with `self(x) = y`, if one exists.
    pub fn preimage(&self, y: &[BigInt]) -> Option<Vec<BigInt>> {
        let n = self.codomain.canonical_count();
        let mut gens = self.matrix.columns();
        let k = gens.len();
        for (i, d) in self.codomain.invariant_factors().iter().enumerate() {
            if !d.is_zero() {
                let mut v = vec![BigInt::zero(); n];
                v[i] = d.clone();
                gens.push(v);
            }
        }
        let l = Lattice::span_tracked(n, &gens).expect("bigint");
        let y = self.codomain.reduce_canonical(y.to_vec());
        let c = l.solve(&y).expect("bigint")?;
        Some(self.domain.reduce_canonical(c[..k].to_vec()))
    }
}

/// The subgroup of `g` generated by canonical elements `gens`, presented on
/// those generators.
pub fn subgroup_of(g: &FinAbGroup, gens: &[Vec<BigInt>]) -> FinAbGroup {
    let n = g.canonical_count();
    let k = gens.len();
    // relations: integer vectors c with sum c_i gens_i = 0 in g
    let m = Matrix::from_columns(n, gens);
    let rel = kernel_mod(&m, g.invariant_factors()).expect("bigint");
    FinAbGroup::from_relations(k, &rel)
}

/// Abelian group `Z^n` modulo the given canonical moduli, convenience for
/// presenting `Z/d_1 + ...` from a slice of `BigInt`.
pub fn from_moduli(ds: &[BigInt]) -> FinAbGroup {
    let rels: Vec<Vec<BigInt>> = ds
        .iter()
        .enumerate()
        .map(|(i, d)| {
            let mut v = vec![BigInt::zero(); ds.len()];
            v[i] = d.clone();
            v
        })
        .collect();
    FinAbGroup::from_relations(ds.len(), &rels)
}

#[cfg(test)]
pub(crate) fn bigs(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}
