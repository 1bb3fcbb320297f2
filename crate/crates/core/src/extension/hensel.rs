use crate::error::{Error, Result};
use crate::localfield::{Field, LocalFieldElem, OElem};

/// Coefficients of `g(X + r)` from those of `g` (lowest first).
fn taylor_shift(f: &Field, g: &[OElem], r: &OElem) -> Vec<OElem> {
    let mut c = g.to_vec();
    let n = c.len();
    for i in 0..n {
        for j in (i..n - 1).rev() {
            let t = f.o_mul(&c[j + 1], r);
            c[j] = f.o_add(&c[j], &t);
        }
    }
    c
}

/// A root `r` of `g` together with the number of `π`-adic digits known.
#[derive(Clone, Debug)]
pub struct ApproxRoot {
    pub root: OElem,
    pub digits: usize,
}

/// All integral roots of `g` (integral coefficients known modulo `π^work`,
/// unit leading coefficient), each to as many digits as `work` allows.
pub(crate) fn roots_integral(f: &Field, g: &[OElem], work: usize) -> Result<Vec<ApproxRoot>> {
    let deg = g.len() - 1;
    if f.o_val(&g[deg]) != 0 {
        return Err(Error::Unsupported("leading coefficient must be a unit".into()));
    }
    let k = f.residue();
    let mut out = Vec::new();
    let mut stack = vec![(f.o_zero(), 0usize)];
    let limit = 64 * deg.max(1);
    while let Some((r, j)) = stack.pop() {
        if stack.len() > limit {
            return Err(Error::Unsupported(
                "root search does not separate (inseparable reduction)".into(),
            ));
        }
        let sh = taylor_shift(f, g, &r);
        // g(r + π^j z) = Σ sh_k π^{jk} z^k
        let vals: Vec<usize> = sh
            .iter()
            .enumerate()
            .map(|(i, c)| (f.o_val(c) + j * i).min(usize::MAX / 2))
            .collect();
        let c = *vals.iter().min().unwrap();
        if c >= work || j >= work {
            out.push(ApproxRoot { root: r, digits: j });
            continue;
        }
        // reduced polynomial over the residue field
        let red: Vec<_> = sh
            .iter()
            .enumerate()
            .map(|(i, coef)| {
                if vals[i] == c {
                    let v = f.o_val(coef);
                    f.o_residue(&f.o_div_pi_pow(coef, v))
                } else {
                    k.zero()
                }
            })
            .collect();
        let mut found: Vec<_> = k.roots(&red);
        found.reverse();
        for a in found {
            let next = f.o_add(&r, &f.o_mul_pi(&f.o_teichmuller(&a), j));
            stack.push((next, j + 1));
        }
    }
    out.sort_by(|a, b| {
        f.o_digits(&a.root, a.digits.min(8))
            .cmp(&f.o_digits(&b.root, b.digits.min(8)))
    });
    Ok(out)
}

/// Roots in `f` of `Σ poly[i] X^i` to absolute precision `prec`.
pub fn hensel_roots(f: &Field, poly: &[LocalFieldElem], prec: i64) -> Result<Vec<LocalFieldElem>> {
    if poly.len() < 2 {
        return Ok(Vec::new());
    }
    let work = poly.iter().map(|c| c.precision()).min().unwrap().max(0) as usize;
    let g = poly
        .iter()
        .map(|c| c.to_integral())
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| Error::Unsupported("coefficients must be integral".into()))?;
    let roots = roots_integral(f, &g, work.min(f.cap()))?;
    let mut out = Vec::new();
    for r in roots {
        if (r.digits as i64) < prec {
            return Err(Error::PrecisionLoss {
                what: "Hensel root".into(),
                required: prec,
                available: r.digits as i64,
            });
        }
        out.push(LocalFieldElem::from_integral(f, r.root, prec));
    }
    Ok(out)
}
