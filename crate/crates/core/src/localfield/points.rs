use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{Field, LocalFieldElem, Valuation};
use crate::error::{Error, Result};
use crate::witt::PerfRing;

/// Point of `K^×` over a finite perfect ring: one element per component of
/// `R`, each in the unramified base change of `K` to that component.
#[derive(Clone, Debug)]
pub struct RingPoint {
    pub fields: Vec<Field>,
    pub coords: Vec<LocalFieldElem>,
}

impl RingPoint {
    /// Valuation vector in `Z(R) = Z^{#components}`.
    pub fn valuation_vector(&self) -> Vec<Valuation> {
        self.coords.iter().map(|x| x.valuation()).collect()
    }

    pub fn mul(&self, o: &RingPoint) -> RingPoint {
        RingPoint {
            fields: self.fields.clone(),
            coords: self.coords.iter().zip(&o.coords).map(|(a, b)| a.mul(b)).collect(),
        }
    }
}

/// Base change of `K` to every component of `R`.
pub fn component_fields(k: &Field, r: &PerfRing) -> Result<Vec<Field>> {
    r.components()
        .iter()
        .map(|c| {
            if c.same_as(k.residue()) {
                Ok(k.clone())
            } else {
                Ok(k.base_change(c)?.0)
            }
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitReport {
    pub components: usize,
    pub z_rank: usize,
    pub samples: usize,
    pub failures: Vec<String>,
}

impl SplitReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn random_elem(f: &Field, rng: &mut ChaCha8Rng, unit: bool) -> LocalFieldElem {
    let k = f.residue();
    let rel = f.precision();
    let mut digits: Vec<_> = (0..rel).map(|_| k.random(rng)).collect();
    while k.is_zero(&digits[0]) {
        digits[0] = k.random(rng);
    }
    let lead = if unit { 0 } else { rng.gen_range(-3..=3) };
    LocalFieldElem::from_digits(f, lead, &digits, lead + rel as i64)
}

/// Check `0 -> U_K(R) -> K^×(R) -> Z(R) -> 0` and its splitting by `π_K` on
/// random points.
pub fn points_split_check(k: &Field, r: &PerfRing, samples: usize, seed: u64) -> Result<SplitReport> {
    if r.characteristic() != k.p() {
        return Err(Error::Structural("test ring has the wrong characteristic".into()));
    }
    let fields = component_fields(k, r)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = Vec::new();
    let finite = |x: &LocalFieldElem| x.valuation().finite();
    for s in 0..samples {
        let x = RingPoint {
            fields: fields.clone(),
            coords: fields.iter().map(|f| random_elem(f, &mut rng, false)).collect(),
        };
        let y = RingPoint {
            fields: fields.clone(),
            coords: fields.iter().map(|f| random_elem(f, &mut rng, false)).collect(),
        };
        let vx: Vec<_> = x.coords.iter().map(finite).collect();
        let vy: Vec<_> = y.coords.iter().map(finite).collect();
        let vxy: Vec<_> = x.mul(&y).coords.iter().map(finite).collect();
        if vx.iter().chain(&vy).any(|v| v.is_none()) {
            failures.push(format!("sample {s}: valuation not defined"));
            continue;
        }
        let sum: Vec<_> = vx.iter().zip(&vy).map(|(a, b)| Some(a.unwrap() + b.unwrap())).collect();
        if vxy != sum {
            failures.push(format!("sample {s}: v(xy) = {vxy:?}, v(x)+v(y) = {sum:?}"));
        }
        for (i, f) in fields.iter().enumerate() {
            let (n, u) = x.coords[i].unit_decompose()?;
            // section: v(π^n) = n and x = π^n u with u a unit
            let pin = LocalFieldElem::pi(f).pow(n)?;
            if pin.valuation() != Valuation::Finite(n) {
                failures.push(format!("sample {s}: section fails on component {i}"));
            }
            if u.valuation() != Valuation::Finite(0) || !pin.mul(&u).approx_eq(&x.coords[i]) {
                failures.push(format!("sample {s}: decomposition fails on component {i}"));
            }
            // kernel of the valuation consists of units
            let w = random_elem(f, &mut rng, true);
            match w.inv() {
                Ok(wi) if wi.valuation() == Valuation::Finite(0) && wi.mul(&w).approx_eq(&LocalFieldElem::one(f)) => {}
                _ => failures.push(format!(
                    "sample {s}: valuation-0 element is not a unit on component {i}"
                )),
            }
        }
    }
    Ok(SplitReport {
        components: fields.len(),
        z_rank: fields.len(),
        samples,
        failures,
    })
}
