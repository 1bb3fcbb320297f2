use serde::{Deserialize, Serialize};

use super::galois::galois_group;
use super::{determinant_units, solve_units, Extension};
use crate::error::{Error, Result};
use crate::ffield::{Fe, FiniteField, Fq};
use crate::localfield::{residue_embedding_root, AElem, Field, LocalField, LocalFieldElem, OElem};

/// `O_{K_r} ⊗_{O_K} O_L ≅ ∏_ρ O_{K_r} ⊗_{O_M, ρ} O_L`, one factor per
/// `k`-embedding `ρ : k' -> k_r`, realized on the basis `y^j π^i`.
#[derive(Clone, Debug)]
pub struct TensorDecomposition {
    pub r: usize,
    pub residue_r: Fq,
    /// Image of the generator of `k'` under each `ρ`.
    pub embeddings: Vec<Fe>,
    /// `L_ρ = K_r(π_ρ)`, `π_ρ` a root of `ρ(E)`.
    pub factors: Vec<Field>,
    /// Coefficients `a[j][i] ∈ O_{K_r}` of `ε_ρ = Σ a[j][i] ⊗ y^j π^i`.
    pub idempotents: Vec<Vec<Vec<AElem>>>,
    pub report: TensorReport,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TensorReport {
    pub factor_count: usize,
    pub determinant_is_unit: bool,
    pub idempotents_sum_to_one: bool,
    /// `Frob_q ⊗ 1` sends factor `ρ` to factor `perm[ρ]`.
    pub frobenius_permutation: Vec<usize>,
    pub frobenius_action_ok: bool,
    /// For each `σ ∈ G`, the map `ρ ↦ ρ ∘ σ|_M` on factor indices; empty if
    /// `L/K` is not Galois.
    pub galois_permutations: Vec<Vec<usize>>,
    pub galois_action_ok: bool,
}

impl TensorReport {
    pub fn passed(&self) -> bool {
        self.determinant_is_unit && self.idempotents_sum_to_one && self.frobenius_action_ok && self.galois_action_ok
    }
}

/// Residue images of the `k`-embeddings `k' -> k_r` (compatible with the
/// standard embeddings of `k`), sorted by index.
pub(crate) fn k_embeddings(k: &Fq, kp: &Fq, kr: &Fq) -> Result<Vec<Fe>> {
    let into_kp = residue_embedding_root(k, kp)?;
    let into_kr = residue_embedding_root(k, kr)?;
    let gen_k = crate::ffield::Embedding {
        image_of_generator: into_kp,
    };
    let mut out: Vec<Fe> = kp
        .embeddings_into(kr)
        .into_iter()
        .filter(|rho| k.degree() == 1 || rho.apply(kp, kr, &gen_k.image_of_generator) == into_kr)
        .map(|rho| rho.image_of_generator)
        .collect();
    out.sort_by_key(|a| kr.index(a));
    out.dedup();
    Ok(out)
}

pub fn tensor_decompose(ext: &Extension, r: usize) -> Result<TensorDecomposition> {
    let f = ext.f;
    let e = ext.e;
    if r == 0 || !r.is_multiple_of(f) {
        return Err(Error::Structural(format!("residue degree {f} does not divide r = {r}")));
    }
    let k = ext.base.residue();
    let kp = ext.top.residue();
    let kr = FiniteField::standard(k.characteristic(), k.degree() * r)?;
    let embeddings = k_embeddings(k, kp, &kr)?;
    if embeddings.len() != f {
        return Err(Error::Structural(format!(
            "found {} k-embeddings of k' into k_r, expected {f}",
            embeddings.len()
        )));
    }
    let l = &ext.top;
    let mut factors = Vec::with_capacity(f);
    for root in &embeddings {
        let la = l.coeff_ring();
        let eis = l.eisenstein().to_vec();
        let root = root.clone();
        let lr = LocalField::eisenstein_with(l.kind(), kr.clone(), l.precision(), move |a| {
            let y = a.embedding_image(la, &root);
            Ok(eis.iter().map(|c| a.embed_from(la, c, &y)).collect())
        })?;
        factors.push(lr);
    }
    let ar = factors[0].coeff_ring();
    let la = l.coeff_ring();
    let rho_y: Vec<AElem> = embeddings.iter().map(|root| ar.embedding_image(la, root)).collect();
    let push = |rho: usize, x: &OElem| -> OElem {
        let fr = &factors[rho];
        let pi = fr.o_pi();
        let mut acc = fr.o_zero();
        for c in x.iter().rev() {
            acc = fr.o_add(&fr.o_mul(&acc, &pi), &fr.o_from_a(&ar.embed_from(la, c, &rho_y[rho])));
        }
        acc
    };
    // Ψ on the basis 1 ⊗ y^j π^i, column (j, i) -> rows (ρ, i')
    let n = e * f;
    let col = |j: usize, i: usize| j * e + i;
    let row = |rho: usize, i: usize| rho * e + i;
    let mut psi = vec![vec![ar.zero(); n]; n];
    for j in 0..f {
        for i in 0..e {
            for rho in 0..f {
                let c = ar.pow(&rho_y[rho], j as u64);
                let v = factors[rho].o_mul_pi(&factors[rho].o_from_a(&c), i);
                for (ii, coef) in v.iter().enumerate().take(e) {
                    psi[row(rho, ii)][col(j, i)] = coef.clone();
                }
            }
        }
    }
    let det = determinant_units(ar, &mut psi.clone());
    let determinant_is_unit = ar.val(&det) == 0;
    if !determinant_is_unit {
        return Err(Error::Structural("tensor map is not invertible".into()));
    }
    let flat_to_grid = |v: Vec<AElem>| -> Vec<Vec<AElem>> { (0..f).map(|j| v[j * e..(j + 1) * e].to_vec()).collect() };
    let mut idempotents = Vec::with_capacity(f);
    for rho in 0..f {
        let mut t = vec![ar.zero(); n];
        t[row(rho, 0)] = ar.one();
        idempotents.push(flat_to_grid(solve_units(ar, &psi, &t)));
    }
    let mut sum = vec![vec![ar.zero(); e]; f];
    for eps in &idempotents {
        for j in 0..f {
            for i in 0..e {
                sum[j][i] = ar.add(&sum[j][i], &eps[j][i]);
            }
        }
    }
    let idempotents_sum_to_one =
        (0..f).all(|j| (0..e).all(|i| sum[j][i] == if i == 0 && j == 0 { ar.one() } else { ar.zero() }));

    // Frobenius of k_r over k: ρ ↦ Frob_q ∘ ρ
    let m = k.degree() as i64;
    let find = |a: &Fe| embeddings.iter().position(|b| b == a);
    let frobenius_permutation: Vec<usize> = embeddings
        .iter()
        .map(|a| find(&kr.frobenius_pow(a, m)).expect("Frobenius permutes the embeddings"))
        .collect();
    let frobenius_action_ok = (0..f).all(|rho| {
        let moved: Vec<Vec<AElem>> = idempotents[rho]
            .iter()
            .map(|row| row.iter().map(|c| ar.frobenius(c, m)).collect())
            .collect();
        moved == idempotents[frobenius_permutation[rho]]
    });

    // Galois action on the second factor
    let mut galois_permutations = Vec::new();
    let mut galois_action_ok = true;
    if let Ok(gal) = galois_group(ext) {
        let y = if kp.degree() == 1 {
            la.zero()
        } else {
            la.lift(&kp.basis(1))
        };
        for s in &gal.elements {
            let perm: Vec<usize> = embeddings
                .iter()
                .map(|a| find(&kr.frobenius_pow(a, m * s.frob as i64)).expect("σ permutes the embeddings"))
                .collect();
            let r_img = s.pi_image.to_integral().expect("integral");
            let prec = s.pi_image.precision() - 1;
            for rho in 0..f {
                let r_rho = push(rho, &r_img);
                let rho2 = perm[rho];
                for j in 0..f {
                    for i in 0..e {
                        let z = LocalFieldElem::from_integral(
                            l,
                            l.o_mul_pi(&l.o_from_a(&la.pow(&y, j as u64)), i),
                            l.precision() as i64,
                        );
                        let lhs_int = s.apply(ext, &z).to_integral().expect("integral");
                        let lhs = LocalFieldElem::from_integral(&factors[rho], push(rho, &lhs_int), prec);
                        let c = ar.pow(&rho_y[rho2], j as u64);
                        let fr = &factors[rho];
                        let rhs_int = fr.o_mul(&fr.o_from_a(&c), &fr.o_pow(&r_rho, i as u64));
                        let rhs = LocalFieldElem::from_integral(fr, rhs_int, prec);
                        if !lhs.eq_mod(&rhs, prec) {
                            galois_action_ok = false;
                        }
                    }
                }
            }
            galois_permutations.push(perm);
        }
    }
    Ok(TensorDecomposition {
        r,
        residue_r: kr,
        embeddings,
        factors,
        idempotents,
        report: TensorReport {
            factor_count: f,
            determinant_is_unit,
            idempotents_sum_to_one,
            frobenius_permutation,
            frobenius_action_ok,
            galois_permutations,
            galois_action_ok,
        },
    })
}
