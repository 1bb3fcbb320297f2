use num_bigint::BigInt;

use super::{Field, LocalFieldElem};
use crate::abgroup::FinAbGroup;
use crate::error::{Error, Result};

/// `U/U^n` with explicit generators `ω(g)` and `1 + ω(b_j) π^i`.
#[derive(Clone, Debug)]
pub struct UnitQuotient {
    pub field: Field,
    pub level: usize,
    pub group: FinAbGroup,
    /// Presentation generators: `ω(g)` first, then `1 + ω(y^j) π^i` by level.
    pub gens: Vec<LocalFieldElem>,
}

/// `U_K / U_K^n` as a finite abelian group with maps in both directions.
pub fn unit_group_quotient(field: &Field, n: usize) -> Result<UnitQuotient> {
    if n == 0 {
        return Err(Error::Validation("unit filtration level must be at least 1".into()));
    }
    if n > field.precision() {
        return Err(Error::PrecisionLoss {
            what: format!("U/U^{n}"),
            required: n as i64,
            available: field.precision() as i64,
        });
    }
    let k = field.residue();
    let m = k.degree();
    let prec = n as i64;
    let mut gens = vec![LocalFieldElem::teichmuller(field, k.primitive_element()).with_precision(prec)];
    let one = LocalFieldElem::one(field).with_precision(prec);
    let pi = LocalFieldElem::pi(field);
    for i in 1..n {
        let pii = pi.pow(i as i64)?;
        for j in 0..m {
            let g = one.add(&LocalFieldElem::teichmuller(field, &k.basis(j)).mul(&pii));
            gens.push(g.with_precision(prec));
        }
    }
    let mut uq = UnitQuotient {
        field: field.clone(),
        level: n,
        group: FinAbGroup::trivial(),
        gens,
    };
    let count = uq.gens.len();
    let mut rels = Vec::with_capacity(count);
    let mut r0 = vec![BigInt::from(0); count];
    r0[0] = BigInt::from(k.order() - 1);
    rels.push(r0);
    let p = field.p() as i64;
    for idx in 1..count {
        let gp = uq.gens[idx].pow(p)?;
        let mut r: Vec<BigInt> = uq.raw_coords(&gp)?.into_iter().map(|v| -v).collect();
        r[idx] += p;
        rels.push(r);
    }
    uq.group = FinAbGroup::from_relations(count, &rels);
    Ok(uq)
}

/// Alias used by callers that think of the quotient as `U/U^n`.
pub fn units_mod_level(field: &Field, n: usize) -> Result<UnitQuotient> {
    unit_group_quotient(field, n)
}

impl UnitQuotient {
    /// Coordinates on the presentation generators (not reduced).
    pub fn raw_coords(&self, u: &LocalFieldElem) -> Result<Vec<BigInt>> {
        let n = self.level;
        if u.precision() < n as i64 {
            return Err(Error::PrecisionLoss {
                what: format!("class in U/U^{n}"),
                required: n as i64,
                available: u.precision(),
            });
        }
        match u.valuation().finite() {
            Some(0) => {}
            _ => return Err(Error::Structural(format!("{u} is not a unit"))),
        }
        let f = &self.field;
        let k = f.residue();
        let m = k.degree();
        let mut out = vec![BigInt::from(0); self.gens.len()];
        let a0 = u.residue().expect("unit has a residue");
        let l = k.log(&a0).expect("nonzero residue");
        out[0] = BigInt::from(l);
        let mut w = u
            .with_precision(n as i64)
            .mul(&LocalFieldElem::teichmuller(f, &a0).inv()?);
        let one = LocalFieldElem::one(f);
        for i in 1..n {
            let d = w.sub(&one);
            let c = match d.valuation() {
                crate::localfield::Valuation::AtLeast(_) => break,
                crate::localfield::Valuation::Finite(v) if v as usize > i => continue,
                crate::localfield::Valuation::Finite(v) => {
                    debug_assert_eq!(v as usize, i);
                    d.unit_decompose()?.1.residue().unwrap()
                }
            };
            let mut corr = LocalFieldElem::one(f).with_precision(n as i64);
            for j in 0..m {
                let dj = c.0[j];
                out[1 + (i - 1) * m + j] = BigInt::from(dj);
                if dj != 0 {
                    corr = corr.mul(&self.gens[1 + (i - 1) * m + j].pow(dj as i64)?);
                }
            }
            w = w.div(&corr)?;
        }
        Ok(out)
    }

    /// Canonical coordinates of the class of `u`.
    pub fn to_group(&self, u: &LocalFieldElem) -> Result<Vec<BigInt>> {
        Ok(self.group.classify(&self.raw_coords(u)?))
    }

    /// Unit representing canonical coordinates `c`, modulo `π^level`.
    pub fn from_group(&self, c: &[BigInt]) -> LocalFieldElem {
        let raw = self.group.lift(&self.group.reduce_canonical(c.to_vec()));
        self.from_raw(&raw)
    }

    /// Product of generator powers for presentation coordinates.
    pub fn from_raw(&self, raw: &[BigInt]) -> LocalFieldElem {
        self.product(raw, self.level as i64)
    }

    /// The same product carried at the full precision of the field: a
    /// specific element of the class rather than the class itself.
    pub fn from_raw_full(&self, raw: &[BigInt]) -> LocalFieldElem {
        self.product(raw, self.field.precision() as i64)
    }

    /// Generator `idx` at the full precision of the field.
    fn full_generator(&self, idx: usize) -> LocalFieldElem {
        let f = &self.field;
        let k = f.residue();
        if idx == 0 {
            return LocalFieldElem::teichmuller(f, k.primitive_element());
        }
        let (i, j) = ((idx - 1) / k.degree() + 1, (idx - 1) % k.degree());
        let pii = LocalFieldElem::pi(f).pow(i as i64).expect("nonzero");
        LocalFieldElem::one(f).add(&LocalFieldElem::teichmuller(f, &k.basis(j)).mul(&pii))
    }

    fn product(&self, raw: &[BigInt], prec: i64) -> LocalFieldElem {
        let mut acc = LocalFieldElem::one(&self.field).with_precision(prec);
        let k = self.field.residue();
        let full = prec > self.level as i64;
        for (i, e) in raw.iter().enumerate() {
            let g = if full {
                self.full_generator(i)
            } else {
                self.gens[i].clone()
            };
            let modulus = if i == 0 {
                BigInt::from(k.order() - 1)
            } else {
                BigInt::from(self.field.p()).pow(self.level as u32)
            };
            let e = ((e % &modulus) + &modulus) % &modulus;
            let e: i64 = e.try_into().expect("small exponent");
            if e != 0 {
                acc = acc.mul(&g.pow(e).expect("unit"));
            }
        }
        acc
    }
}
