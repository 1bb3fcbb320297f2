//! Ramification groups of a Galois extension: `i_G`, the lower filtration,
//! exact Herbrand functions, upper numbering and the norm filtration.

mod norm;

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::extension::{galois_group, Extension, GaloisElem, GaloisGroup};
use crate::localfield::{LocalFieldElem, Valuation};
use crate::Rational;

pub(crate) use norm::unit_filtration_gens;
pub use norm::{
    graded_norm_check, graded_norm_check_with, norm_filtration_check, GradedNormReport, NormFiltrationReport,
};

/// `i_G(σ)`; `Infinite` for the identity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum IG {
    Finite(i64),
    Infinite,
}

impl IG {
    /// `i_G(σ) ≥ k`
    pub fn at_least(self, k: i64) -> bool {
        match self {
            IG::Finite(v) => v >= k,
            IG::Infinite => true,
        }
    }
}

impl fmt::Display for IG {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IG::Finite(v) => write!(f, "{v}"),
            IG::Infinite => write!(f, "∞"),
        }
    }
}

/// `i_G(σ) = v_L(σ(π_L) - π_L)` when `σ` is trivial on the residue field,
/// and `0` otherwise.
pub fn i_g(ext: &Extension, s: &GaloisElem) -> Result<IG> {
    if !s.frob.is_multiple_of(ext.f) {
        return Ok(IG::Finite(0));
    }
    let pi = LocalFieldElem::pi(&ext.top);
    let prec = s.pi_image.precision();
    match s.pi_image.sub(&pi).valuation() {
        Valuation::Finite(v) if v < prec - 1 => Ok(IG::Finite(v)),
        Valuation::AtLeast(_) if ext.e == 1 => Ok(IG::Infinite),
        Valuation::Finite(v) | Valuation::AtLeast(v) => {
            if s.pi_image.eq_mod(&pi, prec - 1) && prec - 1 > different_valuation(ext)? {
                Ok(IG::Infinite)
            } else {
                Err(Error::PrecisionLoss {
                    what: "i_G of an automorphism".into(),
                    required: v + 2,
                    available: prec,
                })
            }
        }
    }
}

/// `v_L(E'(π_L))`, the valuation of the different of `L/M`.
pub fn different_valuation(ext: &Extension) -> Result<i64> {
    let l = &ext.top;
    let e = ext.e;
    if e == 1 {
        return Ok(0);
    }
    let a = l.coeff_ring();
    // E'(X) = e X^{e-1} + Σ i a_i X^{i-1}
    let mut coeffs: Vec<_> = (1..e)
        .map(|i| l.o_from_a(&a.scale(i as i64, &l.eisenstein()[i])))
        .collect();
    coeffs.push(l.o_from_a(&a.from_i64(e as i64)));
    let v = l.o_eval(&coeffs, &l.o_pi());
    let val = l.o_val(&v);
    if val >= l.cap() {
        return Err(Error::PrecisionLoss {
            what: "different".into(),
            required: val as i64 + 1,
            available: l.cap() as i64,
        });
    }
    Ok(val as i64)
}

/// Lower ramification data and the Herbrand functions.
#[derive(Clone, Debug)]
pub struct RamData {
    pub group: GaloisGroup,
    pub i_values: Vec<IG>,
    /// `(u, G_u)` for `u = 0, 1, ..., last`, `G_last` trivial.
    pub lower: Vec<(i64, Vec<usize>)>,
}

/// Lower numbering filtration `G_u = {σ : i_G(σ) ≥ u + 1}`.
pub fn lower_filtration(ext: &Extension) -> Result<RamData> {
    let group = galois_group(ext)?;
    lower_filtration_of(ext, group)
}

pub fn lower_filtration_of(ext: &Extension, group: GaloisGroup) -> Result<RamData> {
    let i_values = group.elements.iter().map(|s| i_g(ext, s)).collect::<Result<Vec<_>>>()?;
    if i_values[group.identity] != IG::Infinite
        || i_values
            .iter()
            .enumerate()
            .any(|(k, v)| k != group.identity && *v == IG::Infinite)
    {
        return Err(Error::Structural(
            "identity is not the only automorphism with i_G = ∞".into(),
        ));
    }
    let top = i_values
        .iter()
        .filter_map(|v| if let IG::Finite(x) = v { Some(*x) } else { None })
        .max()
        .unwrap_or(0);
    let lower = (0..=top)
        .map(|u| (u, (0..group.order()).filter(|&k| i_values[k].at_least(u + 1)).collect()))
        .collect();
    Ok(RamData { group, i_values, lower })
}

fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

fn ceil_i64(x: &Rational) -> i64 {
    x.ceil().to_integer().to_i64().expect("small")
}

impl RamData {
    /// `G_u` for real `u ≥ -1` (`G_u = G_{⌈u⌉}`).
    pub fn lower_group(&self, u: &Rational) -> Vec<usize> {
        let k = ceil_i64(u);
        if k < 0 {
            return (0..self.group.order()).collect();
        }
        (0..self.group.order())
            .filter(|&s| self.i_values[s].at_least(k + 1))
            .collect()
    }

    pub fn g0(&self) -> usize {
        self.lower_group(&rat(0)).len()
    }

    /// Lower breaks: integers `u ≥ 0` with `G_u ≠ G_{u+1}`.
    pub fn lower_breaks(&self) -> Vec<i64> {
        let last = self.lower.last().map(|x| x.0).unwrap_or(0);
        (0..=last)
            .filter(|&u| self.lower_group(&rat(u)).len() != self.lower_group(&rat(u + 1)).len())
            .collect()
    }

    /// `φ(u) = ∫_0^u dt / [G_0 : G_t]`.
    pub fn herbrand_phi(&self, u: &Rational) -> Rational {
        if !u.is_positive() {
            return u.clone();
        }
        let g0 = rat(self.g0() as i64);
        let mut acc = Rational::zero();
        let mut k = 1i64;
        loop {
            let lo = rat(k - 1);
            if &lo >= u {
                break;
            }
            let hi = if rat(k) < *u { rat(k) } else { u.clone() };
            let gk = rat(self.lower_group(&rat(k)).len() as i64);
            acc += (hi - lo) * gk / &g0;
            k += 1;
        }
        acc
    }

    /// `ψ = φ^{-1}`.
    pub fn herbrand_psi(&self, v: &Rational) -> Rational {
        if !v.is_positive() {
            return v.clone();
        }
        let g0 = rat(self.g0() as i64);
        let mut phi_lo = Rational::zero();
        let mut k = 1i64;
        loop {
            let gk = rat(self.lower_group(&rat(k)).len() as i64);
            let slope = &gk / &g0;
            let phi_hi = &phi_lo + &slope;
            if &phi_hi >= v {
                return rat(k - 1) + (v - &phi_lo) / slope;
            }
            phi_lo = phi_hi;
            k += 1;
        }
    }

    /// `G^v = G_{ψ(v)}`.
    pub fn upper_group(&self, v: &Rational) -> Vec<usize> {
        self.lower_group(&self.herbrand_psi(v))
    }

    /// Upper breaks `φ(u)` for the lower breaks `u`.
    pub fn upper_breaks(&self) -> Vec<Rational> {
        self.lower_breaks()
            .iter()
            .map(|&u| self.herbrand_phi(&rat(u)))
            .collect()
    }

    /// Breakpoints `(u, φ(u))` of the Herbrand function.
    pub fn herbrand_breakpoints(&self) -> Vec<(Rational, Rational)> {
        self.lower_breaks()
            .iter()
            .map(|&u| (rat(u), self.herbrand_phi(&rat(u))))
            .collect()
    }

    /// `Σ_{σ≠1} i_G(σ)`.
    pub fn i_sum(&self) -> i64 {
        self.i_values
            .iter()
            .filter_map(|v| if let IG::Finite(x) = v { Some(*x) } else { None })
            .sum()
    }
}

/// Whether every upper break is an integer.
pub fn upper_breaks_integral(d: &RamData) -> bool {
    d.upper_breaks().iter().all(|b| b.denom().is_one())
}
