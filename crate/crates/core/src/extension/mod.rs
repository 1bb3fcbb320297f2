//! Finite extensions `L/K` in tower form: an unramified step of degree `f`
//! followed by an Eisenstein step of degree `e`, over an absolutely
//! unramified base.

mod galois;
mod hensel;
mod spec;
mod tensor;
mod weil;

use crate::error::{Error, Result};
use crate::ffield::{FiniteField, Fq};
use crate::localfield::coeff_to_a;
use crate::localfield::{
    residue_embedding_root, AElem, CoeffSpec, Field, FieldEmbedding, LocalField, LocalFieldElem, OElem, UnramRing,
};

pub use galois::{galois_group, GaloisElem, GaloisGroup};
pub use hensel::hensel_roots;
pub use spec::{parse_extension_steps, ExtensionSpec, Step};
pub use tensor::{tensor_decompose, TensorDecomposition};
pub use weil::{weil_restriction_points, PointFunctor, WeilPoints};

/// `K ⊆ M ⊆ L` with `M/K` unramified of degree `f` and `L/M` totally
/// ramified of degree `e`.
#[derive(Clone, Debug)]
pub struct Extension {
    pub base: Field,
    pub mid: Field,
    pub top: Field,
    pub e: usize,
    pub f: usize,
    pub k_to_m: FieldEmbedding,
    pub m_to_l: FieldEmbedding,
    pub k_to_l: FieldEmbedding,
    /// Eisenstein coefficients as given (empty for `e = 1`).
    pub eisenstein: Vec<CoeffSpec>,
}

impl Extension {
    /// Build the tower over an absolutely unramified `base`; `L` carries
    /// `e · precision(K)` digits.
    pub fn new(base: &Field, f: usize, eisenstein: &[CoeffSpec]) -> Result<Extension> {
        let coeffs = eisenstein.to_vec();
        Self::assemble(
            base,
            f,
            move |a| coeffs.iter().map(|c| coeff_to_a(a, c)).collect(),
            eisenstein.to_vec(),
        )
    }

    fn assemble<F>(base: &Field, f: usize, coeffs: F, spec: Vec<CoeffSpec>) -> Result<Extension>
    where
        F: Fn(&UnramRing) -> Result<Vec<AElem>>,
    {
        if base.e() != 1 {
            return Err(Error::Unsupported(
                "the base field must be absolutely unramified".into(),
            ));
        }
        if f == 0 {
            return Err(Error::Validation("residue degree must be positive".into()));
        }
        let k = base.residue();
        let (mid, k_to_m) = if f == 1 {
            (base.clone(), base.identity_embedding())
        } else {
            let big = FiniteField::standard(k.characteristic(), k.degree() * f)?;
            base.base_change(&big)?
        };
        let e = coeffs(&UnramRing::new(base.kind(), mid.residue().clone(), 2))?
            .len()
            .max(1);
        let n = base.precision();
        let (top, m_to_l) = if e == 1 {
            (mid.clone(), mid.identity_embedding())
        } else {
            let top = LocalField::eisenstein_with(base.kind(), mid.residue().clone(), e * n, coeffs)?;
            let varpi = top.o_from_a(&top.coeff_ring().uniformizer());
            let pi_image = LocalFieldElem::from_parts(&top, 0, varpi, top.precision() + e);
            let y = generator_lift(&top, mid.residue());
            (
                top.clone(),
                FieldEmbedding {
                    src: mid.clone(),
                    dst: top,
                    y_image: y,
                    pi_image,
                    ram: e,
                },
            )
        };
        let root = residue_embedding_root(k, top.residue())?;
        let k_to_l = if e == 1 && f == 1 {
            base.identity_embedding()
        } else {
            let y_image = top.coeff_ring().embedding_image(base.coeff_ring(), &root);
            let varpi = top.o_from_a(&top.coeff_ring().uniformizer());
            let pi_image = LocalFieldElem::from_parts(&top, 0, varpi, top.precision() + e);
            FieldEmbedding {
                src: base.clone(),
                dst: top.clone(),
                y_image,
                pi_image,
                ram: e,
            }
        };
        Ok(Extension {
            base: base.clone(),
            mid,
            top,
            e,
            f,
            k_to_m,
            m_to_l,
            k_to_l,
            eisenstein: spec,
        })
    }

    /// `L_r/K_r` for the unramified extension `K_r` of degree `r` (`f | r`):
    /// a totally ramified extension by `ρ(E)` for the first `k`-embedding
    /// `ρ : k' -> k_r`, with the embeddings `K -> K_r` and `L -> L_r`.
    pub fn unramified_base_change(&self, r: usize) -> Result<(Extension, FieldEmbedding, FieldEmbedding)> {
        if r == 0 || !r.is_multiple_of(self.f) {
            return Err(Error::Structural(format!(
                "residue degree {} does not divide r = {r}",
                self.f
            )));
        }
        let k = self.base.residue();
        let kr = FiniteField::standard(k.characteristic(), k.degree() * r)?;
        let (base_r, k_to_kr) = if r == 1 {
            (self.base.clone(), self.base.identity_embedding())
        } else {
            self.base.base_change(&kr)?
        };
        let kr = base_r.residue().clone();
        let root = tensor::k_embeddings(k, self.top.residue(), &kr)?
            .into_iter()
            .next()
            .ok_or_else(|| Error::Structural("no k-embedding of k' into k_r".into()))?;
        let l = self.top.clone();
        let root2 = root.clone();
        let ext = if self.e == 1 {
            Extension::trivial(&base_r)?
        } else {
            Self::assemble(
                &base_r,
                1,
                move |a| {
                    let y = a.embedding_image(l.coeff_ring(), &root2);
                    Ok(l.eisenstein()
                        .iter()
                        .map(|c| a.embed_from(l.coeff_ring(), c, &y))
                        .collect())
                },
                Vec::new(),
            )?
        };
        let lr = &ext.top;
        let y_image = lr.coeff_ring().embedding_image(self.top.coeff_ring(), &root);
        let l_to_lr = FieldEmbedding {
            src: self.top.clone(),
            dst: lr.clone(),
            y_image,
            pi_image: LocalFieldElem::pi(lr),
            ram: 1,
        };
        Ok((ext, k_to_kr, l_to_lr))
    }

    /// The trivial extension `K/K`.
    pub fn trivial(base: &Field) -> Result<Extension> {
        Self::new(base, 1, &[])
    }

    /// `[L:K]`
    pub fn degree(&self) -> usize {
        self.e * self.f
    }

    /// `q = |k|`
    pub fn base_residue_order(&self) -> u64 {
        self.base.residue().order()
    }

    /// The maximal unramified subextension `M/K`.
    pub fn max_unramified_subext(&self) -> Result<Extension> {
        Extension::new(&self.base, self.f, &[])
    }

    /// Image of an element of `K` in `L`.
    pub fn embed(&self, x: &LocalFieldElem) -> LocalFieldElem {
        self.k_to_l.apply(x)
    }

    /// Image of an element of `M` in `L`.
    pub fn embed_mid(&self, x: &LocalFieldElem) -> LocalFieldElem {
        self.m_to_l.apply(x)
    }

    /// `Φ_q^k` on the coefficient ring of `L` (`q = |k|`).
    pub fn frobenius_q(&self, c: &AElem, k: i64) -> AElem {
        let m = self.base.residue().degree() as i64;
        self.top.coeff_ring().frobenius(c, k * m)
    }

    /// `N_{L/M}` of an integral unit of `L`, as a unit of `A`.
    fn norm_unit_l_over_m(&self, u: &OElem) -> AElem {
        let l = &self.top;
        let a = l.coeff_ring();
        let e = self.e;
        if e == 1 {
            return u[0].clone();
        }
        // matrix of multiplication by u on the basis 1, π, ..., π^{e-1}
        let mut cols: Vec<OElem> = Vec::with_capacity(e);
        let mut b = u.clone();
        for _ in 0..e {
            cols.push(b.clone());
            b = l.o_mul_pi(&b, 1);
        }
        let mut m: Vec<Vec<AElem>> = (0..e).map(|i| (0..e).map(|j| cols[j][i].clone()).collect()).collect();
        determinant_units(a, &mut m)
    }

    /// `N_{M/K}` of an element of `M`.
    pub fn norm_m_over_k(&self, x: &LocalFieldElem) -> Result<LocalFieldElem> {
        let m = &self.mid;
        if self.f == 1 {
            return Ok(x.clone());
        }
        let mut acc = LocalFieldElem::one(m);
        let deg = self.base.residue().degree() as i64;
        for k in 0..self.f as i64 {
            acc = acc.mul(&frobenius_elem(m, x, k * deg));
        }
        self.k_to_m.preimage(&acc)
    }

    /// `N_{L/M}`.
    pub fn norm_l_over_m(&self, x: &LocalFieldElem) -> Result<LocalFieldElem> {
        let m = &self.mid;
        if self.e == 1 {
            return Ok(x.clone());
        }
        let (s, u) = x.unit_decompose()?;
        let body = u.unit_body().expect("unit");
        let nu = self.norm_unit_l_over_m(body);
        let rel = (u.relative_precision() as usize) / self.e;
        let nu = LocalFieldElem::from_parts(m, 0, m.o_from_a(&nu), rel);
        // N(π) = (-1)^e E(0)
        let a0 = &self.top.eisenstein()[0];
        let sign = if self.e.is_multiple_of(2) { 1 } else { -1 };
        let npi_int = m.o_from_a(&m.coeff_ring().scale(sign, a0));
        let npi = LocalFieldElem::from_parts(m, 0, npi_int, m.precision() + 1);
        Ok(nu.mul(&npi.pow(s)?))
    }

    /// `N_{L/K}` by composing the step norms.
    pub fn norm(&self, x: &LocalFieldElem) -> Result<LocalFieldElem> {
        if x.is_zero() {
            return Err(Error::PrecisionLoss {
                what: "norm of an element that is zero to precision".into(),
                required: x.precision() + 1,
                available: x.precision(),
            });
        }
        self.norm_m_over_k(&self.norm_l_over_m(x)?)
    }

    /// `Tr_{L/K}`.
    pub fn trace(&self, x: &LocalFieldElem) -> Result<LocalFieldElem> {
        let l = &self.top;
        let m = &self.mid;
        let t_lm = if self.e == 1 {
            x.clone()
        } else {
            // scale into O_L by a power of ϖ
            let s = match x.valuation().finite() {
                Some(v) if v < 0 => (-v as usize).div_ceil(self.e) as i64,
                _ => 0,
            };
            let varpi = LocalFieldElem::from_i64(m, m.p() as i64);
            let varpi = if m.kind() == crate::localfield::Kind::Mixed {
                varpi
            } else {
                LocalFieldElem::pi(m)
            };
            let scale = self.m_to_l.apply(&varpi).pow(s)?;
            let y = x.mul(&scale);
            let yi = y
                .to_integral()
                .ok_or_else(|| Error::Structural("scaling failed".into()))?;
            let mut tr = m.coeff_ring().zero();
            let mut b = yi.clone();
            for i in 0..self.e {
                tr = m.coeff_ring().add(&tr, &b[i]);
                b = l.o_mul_pi(&b, 1);
            }
            let rel = (y.precision().max(0) as usize) / self.e;
            let t = LocalFieldElem::from_parts(m, 0, m.o_from_a(&tr), rel);
            t.div(&varpi.pow(s)?)?
        };
        if self.f == 1 {
            return Ok(t_lm);
        }
        let deg = self.base.residue().degree() as i64;
        let mut acc = LocalFieldElem::zero_to(m, t_lm.precision());
        for k in 0..self.f as i64 {
            acc = acc.add(&frobenius_elem(m, &t_lm, k * deg));
        }
        self.k_to_m.preimage(&acc)
    }

    /// `v_K(N(x)) = f · v_L(x)`.
    pub fn norm_valuation(&self, v_l: i64) -> i64 {
        self.f as i64 * v_l
    }
}

/// Lift of the polynomial generator of `k` into the coefficient ring of `f`
/// (same residue field).
fn generator_lift(f: &Field, k: &Fq) -> AElem {
    let a = f.coeff_ring();
    if k.degree() == 1 {
        a.zero()
    } else {
        a.lift(&k.basis(1))
    }
}

/// Apply the absolute Frobenius lift `Φ^k` to an element of an absolutely
/// unramified field.
pub(crate) fn frobenius_elem(m: &Field, x: &LocalFieldElem, k: i64) -> LocalFieldElem {
    match x.unit_body() {
        None => x.clone(),
        Some(b) => {
            let s = x.valuation().finite().unwrap();
            let fb = m.o_frobenius_coeffs(b, k);
            let u = LocalFieldElem::from_parts(m, 0, fb, x.relative_precision() as usize);
            u.mul(&LocalFieldElem::pi(m).pow(s).unwrap())
        }
    }
}

/// Determinant over `A` of a matrix whose determinant is a unit, by
/// elimination with unit pivots.
pub(crate) fn determinant_units(a: &UnramRing, m: &mut [Vec<AElem>]) -> AElem {
    let n = m.len();
    let mut det = a.one();
    for c in 0..n {
        let piv = (c..n).find(|&r| a.val(&m[r][c]) == 0).expect("unit determinant");
        if piv != c {
            m.swap(piv, c);
            det = a.neg(&det);
        }
        let inv = a.inv(&m[c][c]).unwrap();
        det = a.mul(&det, &m[c][c]);
        for r in c + 1..n {
            if a.is_zero(&m[r][c]) {
                continue;
            }
            let fac = a.mul(&m[r][c], &inv);
            for k in c..n {
                let t = a.mul(&fac, &m[c][k]);
                m[r][k] = a.sub(&m[r][k], &t);
            }
        }
    }
    det
}

/// Solve `m x = b` over `A` for `m` with unit determinant.
pub(crate) fn solve_units(a: &UnramRing, m: &[Vec<AElem>], b: &[AElem]) -> Vec<AElem> {
    let n = m.len();
    let mut aug: Vec<Vec<AElem>> = m
        .iter()
        .zip(b)
        .map(|(r, v)| {
            let mut r = r.clone();
            r.push(v.clone());
            r
        })
        .collect();
    for c in 0..n {
        let piv = (c..n).find(|&r| a.val(&aug[r][c]) == 0).expect("unit determinant");
        aug.swap(piv, c);
        let inv = a.inv(&aug[c][c]).unwrap();
        for k in c..=n {
            aug[c][k] = a.mul(&aug[c][k], &inv);
        }
        for r in 0..n {
            if r == c || a.is_zero(&aug[r][c]) {
                continue;
            }
            let fac = aug[r][c].clone();
            for k in c..=n {
                let t = a.mul(&fac, &aug[c][k]);
                aug[r][k] = a.sub(&aug[r][k], &t);
            }
        }
    }
    aug.into_iter().map(|r| r[n].clone()).collect()
}
