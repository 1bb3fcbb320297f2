use std::fmt;

use serde::{Deserialize, Serialize};

use super::{Field, OElem};
use crate::error::{Error, Result};
use crate::ffield::Fe;

/// Valuation of an element known to finite precision.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Valuation {
    Finite(i64),
    /// Zero to the stated absolute precision.
    AtLeast(i64),
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::AtLeast(_) => None,
        }
    }
}

/// Element `π^shift · body + O(π^prec)` with `body` a unit, or zero modulo
/// `π^prec`.
#[derive(Clone)]
pub struct LocalFieldElem {
    field: Field,
    shift: i64,
    body: Option<OElem>,
    prec: i64,
}

impl LocalFieldElem {
    /// Integral element `x` known modulo `π^prec`.
    pub fn from_integral(field: &Field, x: OElem, prec: i64) -> LocalFieldElem {
        Self::normalize(field, 0, x, prec)
    }

    /// `π^shift · x` with `x` integral and known to relative precision `rel`.
    pub fn from_parts(field: &Field, shift: i64, x: OElem, rel: usize) -> LocalFieldElem {
        Self::normalize(field, shift, x, shift + rel.min(field.cap()) as i64)
    }

    fn normalize(field: &Field, shift: i64, x: OElem, prec: i64) -> LocalFieldElem {
        let rel = prec - shift;
        let cap = field.cap() as i64;
        debug_assert!(rel <= cap);
        if rel <= 0 {
            return Self::zero_to(field, prec);
        }
        let v = field.o_val(&x) as i64;
        if v >= rel {
            return Self::zero_to(field, prec);
        }
        let body = if v == 0 { x } else { field.o_div_pi_pow(&x, v as usize) };
        LocalFieldElem {
            field: field.clone(),
            shift: shift + v,
            body: Some(body),
            prec,
        }
    }

    /// Zero modulo `π^prec`.
    pub fn zero_to(field: &Field, prec: i64) -> LocalFieldElem {
        LocalFieldElem {
            field: field.clone(),
            shift: prec,
            body: None,
            prec,
        }
    }

    /// Zero at the default precision.
    pub fn zero(field: &Field) -> LocalFieldElem {
        Self::zero_to(field, field.precision() as i64)
    }

    fn exact(field: &Field, x: OElem) -> LocalFieldElem {
        Self::from_parts(field, 0, x, field.precision())
    }

    pub fn one(field: &Field) -> LocalFieldElem {
        Self::exact(field, field.o_one())
    }

    /// The distinguished prime `π`.
    pub fn pi(field: &Field) -> LocalFieldElem {
        LocalFieldElem {
            field: field.clone(),
            shift: 1,
            body: Some(field.o_one()),
            prec: 1 + field.precision() as i64,
        }
    }

    pub fn from_i64(field: &Field, n: i64) -> LocalFieldElem {
        Self::exact(field, field.o_from_a(&field.coeff_ring().from_i64(n)))
    }

    /// Teichmüller lift of a residue element.
    pub fn teichmuller(field: &Field, a: &Fe) -> LocalFieldElem {
        Self::exact(field, field.o_teichmuller(a))
    }

    /// `Σ ω(d_i) π^{lead + i} + O(π^prec)`.
    pub fn from_digits(field: &Field, lead: i64, digits: &[Fe], prec: i64) -> LocalFieldElem {
        let n = ((prec - lead).max(0) as usize).min(digits.len()).min(field.cap());
        let x = field.o_from_digits(&digits[..n]);
        let rel = (prec - lead).clamp(0, field.cap() as i64);
        Self::normalize(field, lead, x, lead + rel)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    /// Absolute precision: the element is known modulo `π^precision`.
    pub fn precision(&self) -> i64 {
        self.prec
    }

    pub fn relative_precision(&self) -> i64 {
        self.prec - self.shift
    }

    pub fn is_zero(&self) -> bool {
        self.body.is_none()
    }

    pub fn valuation(&self) -> Valuation {
        match self.body {
            Some(_) => Valuation::Finite(self.shift),
            None => Valuation::AtLeast(self.prec),
        }
    }

    /// Unit part as an integral ring element (valid modulo `π^{rel}`).
    pub fn unit_body(&self) -> Option<&OElem> {
        self.body.as_ref()
    }

    /// Integral representative `x ∈ O/π^cap` for `v(x) >= 0`.
    pub fn to_integral(&self) -> Option<OElem> {
        match &self.body {
            None if self.prec >= 0 => Some(self.field.o_zero()),
            None => None,
            Some(_) if self.shift < 0 => None,
            Some(b) => Some(self.field.o_mul_pi(b, self.shift as usize)),
        }
    }

    /// Residue class of an integral element.
    pub fn residue(&self) -> Option<Fe> {
        let x = self.to_integral()?;
        if self.prec <= 0 {
            return None;
        }
        Some(self.field.o_residue(&x))
    }

    /// Digit expansion `(a_0, ..., a_{m-1})` of the unit part, `m` = relative precision.
    pub fn digits(&self) -> Vec<Fe> {
        match &self.body {
            None => Vec::new(),
            Some(b) => self.field.o_digits(b, self.relative_precision() as usize),
        }
    }

    /// Reduce to a lower absolute precision.
    pub fn with_precision(&self, prec: i64) -> LocalFieldElem {
        if prec >= self.prec {
            return self.clone();
        }
        match &self.body {
            None => Self::zero_to(&self.field, prec),
            Some(b) => {
                if prec <= self.shift {
                    Self::zero_to(&self.field, prec)
                } else {
                    LocalFieldElem {
                        field: self.field.clone(),
                        shift: self.shift,
                        body: Some(b.clone()),
                        prec,
                    }
                }
            }
        }
    }

    fn check(&self, o: &LocalFieldElem) {
        assert!(
            self.field.same_as(&o.field),
            "operands from different fields: {:?} vs {:?}",
            self.field,
            o.field
        );
    }

    pub fn add(&self, o: &LocalFieldElem) -> LocalFieldElem {
        self.check(o);
        let prec = self.prec.min(o.prec);
        let (a, b) = match (&self.body, &o.body) {
            (None, _) => return o.with_precision(prec),
            (_, None) => return self.with_precision(prec),
            (Some(a), Some(b)) => (a, b),
        };
        let s = self.shift.min(o.shift);
        if prec <= s {
            return Self::zero_to(&self.field, prec);
        }
        let f = &self.field;
        let x = f.o_add(
            &f.o_mul_pi(a, (self.shift - s) as usize),
            &f.o_mul_pi(b, (o.shift - s) as usize),
        );
        Self::normalize(f, s, x, prec)
    }

    pub fn neg(&self) -> LocalFieldElem {
        LocalFieldElem {
            field: self.field.clone(),
            shift: self.shift,
            body: self.body.as_ref().map(|b| self.field.o_neg(b)),
            prec: self.prec,
        }
    }

    pub fn sub(&self, o: &LocalFieldElem) -> LocalFieldElem {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &LocalFieldElem) -> LocalFieldElem {
        self.check(o);
        match (&self.body, &o.body) {
            (Some(a), Some(b)) => {
                let rel = self.relative_precision().min(o.relative_precision());
                let shift = self.shift + o.shift;
                LocalFieldElem {
                    field: self.field.clone(),
                    shift,
                    body: Some(self.field.o_mul(a, b)),
                    prec: shift + rel,
                }
            }
            (None, None) => Self::zero_to(&self.field, self.prec + o.prec),
            (None, Some(_)) => Self::zero_to(&self.field, self.prec + o.shift),
            (Some(_), None) => Self::zero_to(&self.field, o.prec + self.shift),
        }
    }

    pub fn inv(&self) -> Result<LocalFieldElem> {
        match &self.body {
            None => Err(Error::PrecisionLoss {
                what: "inverse of an element that is zero to precision".into(),
                required: self.prec + 1,
                available: self.prec,
            }),
            Some(b) => {
                let inv = self.field.o_inv(b).expect("body is a unit");
                let rel = self.relative_precision();
                Ok(LocalFieldElem {
                    field: self.field.clone(),
                    shift: -self.shift,
                    body: Some(inv),
                    prec: rel - self.shift,
                })
            }
        }
    }

    pub fn div(&self, o: &LocalFieldElem) -> Result<LocalFieldElem> {
        Ok(self.mul(&o.inv()?))
    }

    pub fn pow(&self, k: i64) -> Result<LocalFieldElem> {
        let base = if k < 0 { self.inv()? } else { self.clone() };
        let mut r = Self::one(&self.field);
        let mut b = base;
        let mut k = k.unsigned_abs();
        if k == 0 {
            return Ok(r);
        }
        while k > 0 {
            if k & 1 == 1 {
                r = r.mul(&b);
            }
            k >>= 1;
            if k > 0 {
                b = b.mul(&b);
            }
        }
        Ok(r)
    }

    /// `x = π^n · u` with `v(u) = 0`.
    pub fn unit_decompose(&self) -> Result<(i64, LocalFieldElem)> {
        match &self.body {
            None => Err(Error::PrecisionLoss {
                what: "unit decomposition of an element that is zero to precision".into(),
                required: self.prec + 1,
                available: self.prec,
            }),
            Some(b) => Ok((
                self.shift,
                LocalFieldElem {
                    field: self.field.clone(),
                    shift: 0,
                    body: Some(b.clone()),
                    prec: self.relative_precision(),
                },
            )),
        }
    }

    /// Agreement to the smaller of the two precisions.
    pub fn approx_eq(&self, o: &LocalFieldElem) -> bool {
        self.sub(o).is_zero()
    }

    /// Agreement modulo `π^n` (requires both to be known that far).
    pub fn eq_mod(&self, o: &LocalFieldElem, n: i64) -> bool {
        self.sub(o).with_precision(n).is_zero()
    }
}

impl PartialEq for LocalFieldElem {
    fn eq(&self, o: &LocalFieldElem) -> bool {
        self.field.same_as(&o.field)
            && self.prec == o.prec
            && self.shift == o.shift
            && self.body.is_some() == o.body.is_some()
            && self.digits() == o.digits()
    }
}

impl fmt::Debug for LocalFieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for LocalFieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.body {
            None => write!(f, "O(π^{})", self.prec),
            Some(_) => {
                let d: Vec<String> = self
                    .digits()
                    .iter()
                    .map(|x| {
                        if x.0.len() == 1 {
                            x.0[0].to_string()
                        } else {
                            format!("{:?}", x.0)
                        }
                    })
                    .collect();
                write!(f, "π^{}·({}) + O(π^{})", self.shift, d.join(" "), self.prec)
            }
        }
    }
}
