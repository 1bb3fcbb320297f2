//! Complete discrete valuation fields with finite residue field, at finite
//! precision.
//!
//! A field is `K_0(π)` where `K_0` is `Q_q` or `F_q((t))` and `π` is a root of
//! an Eisenstein polynomial `E` over the coefficient ring `A` of `K_0`. The
//! ring of integers is held as `A[π]/(E(π))` truncated at `π^cap`.

mod elem;
mod points;
mod spec;
mod unit_group;
pub mod unram;

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::ffield::{Fe, FiniteField, Fq};

pub use elem::{LocalFieldElem, Valuation};
pub use points::{points_split_check, RingPoint, SplitReport};
pub(crate) use spec::{coeff_to_a, tokenize, Cursor};
pub use spec::{parse_field_spec, CoeffSpec, FieldSpec};
pub use unit_group::{unit_group_quotient, units_mod_level, UnitQuotient};
pub use unram::{AElem, Kind, UnramRing};

/// Element of the truncated ring of integers: coefficients of `1, π, ..., π^{e-1}`.
pub type OElem = Vec<AElem>;

pub struct LocalField {
    a: UnramRing,
    e: usize,
    /// `E = π^e + eis[e-1] π^{e-1} + ... + eis[0]`
    eis: Vec<AElem>,
    /// `ϖ / π`
    varpi_over_pi: OElem,
    /// `ϖ / π^e`
    varpi_over_pi_e: OElem,
    /// `π^e / ϖ`
    pi_e_over_varpi: OElem,
    precision: usize,
    cap: usize,
    name: String,
}

/// Shared field descriptor.
pub type Field = Arc<LocalField>;

impl fmt::Debug for LocalField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name)
    }
}

impl LocalField {
    /// `Q_q` (mixed) or `F_q((t))` (equal) with `precision` significant digits.
    pub fn unramified(kind: Kind, residue: Fq, precision: usize) -> Result<Field> {
        Self::eisenstein_with(kind, residue, precision, |_| Ok(Vec::new()))
    }

    /// `Q_p` with the given precision.
    pub fn qp(p: u64, precision: usize) -> Result<Field> {
        Self::unramified(Kind::Mixed, FiniteField::prime(p)?, precision)
    }

    /// Field generated over `Q_q` / `F_q((t))` by a root of the Eisenstein
    /// polynomial with the given non-leading coefficients (lowest first),
    /// built in the coefficient ring by `coeffs`.
    pub fn eisenstein_with<F>(kind: Kind, residue: Fq, precision: usize, coeffs: F) -> Result<Field>
    where
        F: Fn(&UnramRing) -> Result<Vec<AElem>>,
    {
        if precision == 0 {
            return Err(Error::Validation("precision must be positive".into()));
        }
        let probe = UnramRing::new(kind, residue.clone(), 2);
        let e = coeffs(&probe)?.len().max(1);
        let depth = precision.div_ceil(e) + 1;
        let p = residue.characteristic();
        if kind == Kind::Mixed && (depth as f64) * (p as f64).log2() > 61.0 {
            return Err(Error::Unsupported(format!(
                "precision {precision} too large for p = {p}"
            )));
        }
        let a = UnramRing::new(kind, residue.clone(), depth);
        let mut eis = coeffs(&a)?;
        if eis.is_empty() {
            // trivial step: π = ϖ
            eis = vec![a.neg(&a.uniformizer())];
        }
        if eis[0].len() != a.zero().len() {
            return Err(Error::Structural("coefficient shape mismatch".into()));
        }
        if a.val(&eis[0]) != 1 {
            return Err(Error::Validation(
                "Eisenstein constant term must have valuation exactly 1".into(),
            ));
        }
        if eis.iter().skip(1).any(|c| a.val(c) < 1) {
            return Err(Error::Validation(
                "Eisenstein non-leading coefficients must be divisible by the uniformizer".into(),
            ));
        }
        let u0 = a.div_varpi(&eis[0], 1);
        let u0_inv = a
            .inv(&u0)
            .ok_or_else(|| Error::Validation("Eisenstein constant term is not ϖ times a unit".into()))?;
        // ϖ/π = -u0^{-1} (π^{e-1} + a_{e-1} π^{e-2} + ... + a_1)
        let mut w = vec![a.zero(); e];
        let nu = a.neg(&u0_inv);
        for i in 1..e {
            w[i - 1] = a.mul(&nu, &eis[i]);
        }
        w[e - 1] = a.add(&w[e - 1], &nu);
        let cap = e * depth;
        let base = match kind {
            Kind::Mixed => format!("Q_{}", residue.order()),
            Kind::Equal => format!("F_{}((t))", residue.order()),
        };
        let name = if e == 1 { base } else { format!("{base}(π), e = {e}") };
        let mut field = LocalField {
            a,
            e,
            eis,
            varpi_over_pi: w,
            varpi_over_pi_e: Vec::new(),
            pi_e_over_varpi: Vec::new(),
            precision,
            cap,
            name,
        };
        // π^e/ϖ is a unit; its inverse converts division by π^e into division by ϖ
        let pie = field.o_pow(&field.o_pi(), e as u64);
        let q: OElem = pie.iter().map(|c| field.a.div_varpi(c, 1)).collect();
        field.varpi_over_pi_e = field.o_inv(&q).expect("π^e/ϖ is a unit");
        field.pi_e_over_varpi = q;
        Ok(Arc::new(field))
    }

    pub fn kind(&self) -> Kind {
        self.a.kind()
    }

    pub fn p(&self) -> u64 {
        self.a.p()
    }

    pub fn residue(&self) -> &Fq {
        self.a.residue()
    }

    /// Absolute ramification index over `K_0`.
    pub fn e(&self) -> usize {
        self.e
    }

    /// Default number of significant `π`-digits.
    pub fn precision(&self) -> usize {
        self.precision
    }

    /// Largest relative precision representable.
    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn coeff_ring(&self) -> &UnramRing {
        &self.a
    }

    pub fn eisenstein(&self) -> &[AElem] {
        &self.eis
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn same_as(&self, o: &LocalField) -> bool {
        std::ptr::eq(self, o)
            || (self.kind() == o.kind()
                && self.residue().same_as(o.residue())
                && self.e == o.e
                && self.eis == o.eis
                && self.precision == o.precision)
    }

    // ---- ring of integers mod π^cap ----

    pub fn o_zero(&self) -> OElem {
        vec![self.a.zero(); self.e]
    }

    pub fn o_one(&self) -> OElem {
        self.o_from_a(&self.a.one())
    }

    pub fn o_from_a(&self, c: &AElem) -> OElem {
        let mut x = self.o_zero();
        x[0] = c.clone();
        x
    }

    pub fn o_pi(&self) -> OElem {
        if self.e == 1 {
            return self.o_from_a(&self.a.uniformizer());
        }
        let mut x = self.o_zero();
        x[1] = self.a.one();
        x
    }

    pub fn o_is_zero(&self, x: &OElem) -> bool {
        x.iter().all(|c| self.a.is_zero(c))
    }

    pub fn o_add(&self, x: &OElem, y: &OElem) -> OElem {
        x.iter().zip(y).map(|(u, v)| self.a.add(u, v)).collect()
    }

    pub fn o_sub(&self, x: &OElem, y: &OElem) -> OElem {
        x.iter().zip(y).map(|(u, v)| self.a.sub(u, v)).collect()
    }

    pub fn o_neg(&self, x: &OElem) -> OElem {
        x.iter().map(|u| self.a.neg(u)).collect()
    }

    /// Multiply by an element of `A`.
    pub fn o_scale(&self, c: &AElem, x: &OElem) -> OElem {
        x.iter().map(|u| self.a.mul(c, u)).collect()
    }

    fn o_reduce(&self, mut c: Vec<AElem>) -> OElem {
        let e = self.e;
        for i in (e..c.len()).rev() {
            if self.a.is_zero(&c[i]) {
                continue;
            }
            let lead = std::mem::replace(&mut c[i], self.a.zero());
            for j in 0..e {
                let t = self.a.mul(&lead, &self.eis[j]);
                c[i - e + j] = self.a.sub(&c[i - e + j], &t);
            }
        }
        c.truncate(e);
        c
    }

    pub fn o_mul(&self, x: &OElem, y: &OElem) -> OElem {
        let e = self.e;
        if e == 1 {
            return vec![self.a.mul(&x[0], &y[0])];
        }
        let mut c = vec![self.a.zero(); 2 * e - 1];
        for i in 0..e {
            if self.a.is_zero(&x[i]) {
                continue;
            }
            for j in 0..e {
                if self.a.is_zero(&y[j]) {
                    continue;
                }
                c[i + j] = self.a.add(&c[i + j], &self.a.mul(&x[i], &y[j]));
            }
        }
        self.o_reduce(c)
    }

    pub fn o_pow(&self, x: &OElem, mut k: u64) -> OElem {
        let mut r = self.o_one();
        let mut b = x.clone();
        while k > 0 {
            if k & 1 == 1 {
                r = self.o_mul(&r, &b);
            }
            k >>= 1;
            if k > 0 {
                b = self.o_mul(&b, &b);
            }
        }
        r
    }

    /// `π`-adic valuation, `cap` for zero.
    pub fn o_val(&self, x: &OElem) -> usize {
        x.iter()
            .enumerate()
            .map(|(i, c)| {
                let v = self.a.val(c);
                if v >= self.a.depth() {
                    self.cap
                } else {
                    self.e * v + i
                }
            })
            .min()
            .unwrap_or(self.cap)
            .min(self.cap)
    }

    /// `x · π^k`.
    pub fn o_mul_pi(&self, x: &OElem, k: usize) -> OElem {
        if k >= self.cap {
            return self.o_zero();
        }
        let (q, r) = (k / self.e, k % self.e);
        let mut y: OElem = x.iter().map(|c| self.a.mul_varpi(c, q)).collect();
        if q > 0 && self.e > 1 {
            y = self.o_mul(&y, &self.o_pow(&self.pi_e_over_varpi, q as u64));
        }
        if r > 0 {
            let mut c = vec![self.a.zero(); self.e + r];
            for (i, v) in y.into_iter().enumerate() {
                c[i + r] = v;
            }
            y = self.o_reduce(c);
        }
        y
    }

    /// `x / π` for `x` of positive valuation; exact modulo `π^{cap-1}`.
    pub fn o_div_pi(&self, x: &OElem) -> OElem {
        if self.e == 1 {
            return vec![self.a.div_varpi(&x[0], 1)];
        }
        let c0 = self.a.div_varpi(&x[0], 1);
        let mut y = self.o_scale(&c0, &self.varpi_over_pi);
        for i in 1..self.e {
            y[i - 1] = self.a.add(&y[i - 1], &x[i]);
        }
        y
    }

    pub fn o_div_pi_pow(&self, x: &OElem, k: usize) -> OElem {
        if self.e == 1 {
            return vec![self.a.div_varpi(&x[0], k)];
        }
        let mut y = x.clone();
        let (q, r) = (k / self.e, k % self.e);
        if q > 0 {
            // π^e = ϖ · (unit); divide by ϖ^q then correct by the unit power
            let ok = y.iter().all(|c| self.a.val(c) >= q || self.a.is_zero(c));
            if ok {
                y = y.iter().map(|c| self.a.div_varpi(c, q)).collect();
                let ratio = self.o_pow(&self.varpi_over_pi_e, q as u64);
                y = self.o_mul(&y, &ratio);
                for _ in 0..r {
                    y = self.o_div_pi(&y);
                }
                return y;
            }
        }
        for _ in 0..k {
            y = self.o_div_pi(&y);
        }
        y
    }

    /// Residue class of an integral element.
    pub fn o_residue(&self, x: &OElem) -> Fe {
        self.a.residue_of(&x[0])
    }

    pub fn o_teichmuller(&self, a: &Fe) -> OElem {
        self.o_from_a(&self.a.teichmuller(a))
    }

    /// Inverse of a unit.
    pub fn o_inv(&self, x: &OElem) -> Option<OElem> {
        let r = self.residue().inv(&self.o_residue(x))?;
        let mut y = self.o_teichmuller(&r);
        let two = self.o_from_a(&self.a.from_i64(2));
        let mut reach = 1;
        while reach < self.cap {
            y = self.o_mul(&y, &self.o_sub(&two, &self.o_mul(x, &y)));
            reach *= 2;
        }
        y = self.o_mul(&y, &self.o_sub(&two, &self.o_mul(x, &y)));
        Some(y)
    }

    /// First `n` Teichmüller digits of an integral element.
    pub fn o_digits(&self, x: &OElem, n: usize) -> Vec<Fe> {
        let mut out = Vec::with_capacity(n);
        let mut y = x.clone();
        for i in 0..n {
            let a = self.o_residue(&y);
            if i + 1 < n {
                y = self.o_div_pi(&self.o_sub(&y, &self.o_teichmuller(&a)));
            }
            out.push(a);
        }
        out
    }

    pub fn o_from_digits(&self, digits: &[Fe]) -> OElem {
        let mut acc = self.o_zero();
        for d in digits.iter().rev() {
            acc = self.o_add(&self.o_mul_pi(&acc, 1), &self.o_teichmuller(d));
        }
        acc
    }

    /// `x mod π^n` in canonical form.
    pub fn o_truncate(&self, x: &OElem, n: usize) -> OElem {
        if n >= self.cap {
            return x.clone();
        }
        self.o_from_digits(&self.o_digits(x, n))
    }

    /// Apply `Φ^k` (Frobenius lift on `A`, fixing `π`) coefficientwise.
    pub fn o_frobenius_coeffs(&self, x: &OElem, k: i64) -> OElem {
        x.iter().map(|c| self.a.frobenius(c, k)).collect()
    }

    /// Evaluate `Σ c_i X^i` (coefficients in `O`) at `z`.
    pub fn o_eval(&self, poly: &[OElem], z: &OElem) -> OElem {
        let mut acc = self.o_zero();
        for c in poly.iter().rev() {
            acc = self.o_add(&self.o_mul(&acc, z), c);
        }
        acc
    }
}

/// Image of the generator of `small` under the standard embedding into
/// `big`: the identity when the fields agree, otherwise the first root of the
/// defining polynomial in index order.
pub fn residue_embedding_root(small: &Fq, big: &Fq) -> Result<Fe> {
    if small.same_as(big) {
        return Ok(if small.degree() == 1 {
            small.zero()
        } else {
            small.basis(1)
        });
    }
    let emb = small.embeddings_into(big);
    match emb.first() {
        Some(e) => Ok(e.image_of_generator.clone()),
        None => Err(Error::Structural(format!("{small:?} does not embed into {big:?}"))),
    }
}

/// Field embedding `src -> dst` determined by the image of `y` in the
/// coefficient ring of `dst` and the image of `π_src`.
#[derive(Clone, Debug)]
pub struct FieldEmbedding {
    pub src: Field,
    pub dst: Field,
    pub y_image: AElem,
    pub pi_image: LocalFieldElem,
    /// `v_dst(π_src)`
    pub ram: usize,
}

impl FieldEmbedding {
    /// Image of a coefficient-ring element.
    pub fn apply_coeff(&self, c: &AElem) -> AElem {
        self.dst.a.embed_from(&self.src.a, c, &self.y_image)
    }

    /// Image of an integral element (known modulo `π_src^{cap}`) in `O_dst`.
    pub fn apply_integral(&self, x: &OElem) -> OElem {
        let d = &self.dst;
        let pi_img = self.pi_image.to_integral().expect("π maps to an integral element");
        let mut acc = d.o_zero();
        for c in x.iter().rev() {
            acc = d.o_add(&d.o_mul(&acc, &pi_img), &d.o_from_a(&self.apply_coeff(c)));
        }
        acc
    }

    pub fn apply(&self, x: &LocalFieldElem) -> LocalFieldElem {
        let d = &self.dst;
        match x.unit_body() {
            None => LocalFieldElem::zero_to(d, x.precision().saturating_mul(self.ram as i64)),
            Some(b) => {
                let rel = (x.relative_precision() as usize).saturating_mul(self.ram);
                let u = LocalFieldElem::from_parts(d, 0, self.apply_integral(b), rel);
                let s = x.valuation().finite().unwrap_or(0);
                u.mul(&self.pi_image.pow(s).expect("π image is nonzero"))
            }
        }
    }
}

impl FieldEmbedding {
    /// Preimage under an unramified embedding (`π_src -> π_dst`), read off
    /// the Teichmüller digits.
    pub fn preimage(&self, x: &LocalFieldElem) -> Result<LocalFieldElem> {
        if self.ram != 1 {
            return Err(Error::Unsupported("preimage only for unramified embeddings".into()));
        }
        let (ks, kd) = (self.src.residue(), self.dst.residue());
        let emb = crate::ffield::Embedding {
            image_of_generator: self.dst.a.residue_of(&self.y_image),
        };
        let mut back = std::collections::HashMap::new();
        for a in ks.elements() {
            back.insert(kd.index(&emb.apply(ks, kd, &a)), a);
        }
        let Some(v) = x.valuation().finite() else {
            return Ok(LocalFieldElem::zero_to(&self.src, x.precision()));
        };
        let digits = x
            .digits()
            .iter()
            .map(|d| back.get(&kd.index(d)).cloned())
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| Error::Structural(format!("{x} is not in the image of {:?}", self.src)))?;
        Ok(LocalFieldElem::from_digits(&self.src, v, &digits, x.precision()))
    }
}

impl LocalField {
    /// Unramified base change: the same Eisenstein polynomial over the
    /// coefficient ring with residue field `big`, together with the
    /// embedding lifting the first residue embedding.
    pub fn base_change(self: &Arc<Self>, big: &Fq) -> Result<(Field, FieldEmbedding)> {
        let root = residue_embedding_root(self.residue(), big)?;
        let src = self.clone();
        let dst = LocalField::eisenstein_with(self.kind(), big.clone(), self.precision, |a| {
            if src.e == 1 {
                return Ok(Vec::new());
            }
            let y = a.embedding_image(&src.a, &root);
            Ok(src.eis.iter().map(|c| a.embed_from(&src.a, c, &y)).collect())
        })?;
        let y_image = dst.a.embedding_image(&self.a, &root);
        let pi_image = LocalFieldElem::pi(&dst);
        let e = FieldEmbedding {
            src: self.clone(),
            dst: dst.clone(),
            y_image,
            pi_image,
            ram: 1,
        };
        Ok((dst, e))
    }

    /// Identity embedding.
    pub fn identity_embedding(self: &Arc<Self>) -> FieldEmbedding {
        let y_image = self.a.lift(&if self.residue().degree() == 1 {
            self.residue().zero()
        } else {
            self.residue().basis(1)
        });
        FieldEmbedding {
            src: self.clone(),
            dst: self.clone(),
            y_image,
            pi_image: LocalFieldElem::pi(self),
            ram: 1,
        }
    }
}

#[cfg(test)]
mod tests;
