use std::time::Instant;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::config::{JobSpec, Suite};
use super::report::{CheckReport, NamedGroup, Provenance};
use crate::abgroup::{from_moduli, FinAbGroup, GroupShape};
use crate::error::{Error, Result};
use crate::extension::{galois_group, Extension, GaloisGroup};
use crate::lcft::{
    artin_symbol, base_change_check, h_minus_one_stabilized, hilbert90_check, norm_coset_group, unit_gmodule,
    vanishing_approx, Bounds, NormCosetGroup, Verdict,
};
use crate::localfield::{unit_group_quotient, Field, LocalFieldElem};
use crate::ramify::{different_valuation, graded_norm_check_with, lower_filtration_of, norm_filtration_check, RamData};
use crate::tatecoh::{tate_cohomology, tate_cohomology_general, GModule};
use crate::Rational;

/// Outcome of a check body: groups, pass flag, detail line.
type Body = Result<(Vec<NamedGroup>, bool, String)>;

fn named(name: impl Into<String>, g: &FinAbGroup) -> NamedGroup {
    NamedGroup {
        name: name.into(),
        invariants: g.shape(),
    }
}

pub(crate) struct Runner<'a> {
    pub job: &'a JobSpec,
    pub ext: &'a Extension,
    pub bounds: Bounds,
    pub checks: Vec<CheckReport>,
    pub skipped: Vec<(String, String)>,
    galois: Option<GaloisGroup>,
    ram: Option<RamData>,
}

struct Spec<'s> {
    name: String,
    suite: Suite,
    anchor: &'s str,
    expected: String,
    provenance: Provenance,
    inputs: Vec<(String, String)>,
}

impl<'a> Runner<'a> {
    pub fn new(job: &'a JobSpec, ext: &'a Extension) -> Runner<'a> {
        let mut r = Runner {
            job,
            ext,
            bounds: job.bounds(),
            checks: Vec::new(),
            skipped: Vec::new(),
            galois: None,
            ram: None,
        };
        match galois_group(ext) {
            Ok(g) => {
                r.ram = lower_filtration_of(ext, g.clone()).ok();
                r.galois = Some(g);
            }
            Err(e) => r.skipped.push(("galois".into(), e.to_string())),
        }
        r
    }

    pub fn galois_order(&self) -> usize {
        self.galois.as_ref().map_or(0, |g| g.order())
    }

    fn run(&mut self, s: Spec<'_>, body: impl FnOnce() -> Body) {
        let t = Instant::now();
        let (groups, verdict, detail) = match body() {
            Ok((g, ok, d)) => (g, Verdict::from_bool(ok), d),
            Err(e @ (Error::Inconclusive(_) | Error::PrecisionLoss { .. })) => {
                (Vec::new(), Verdict::Inconclusive, e.to_string())
            }
            Err(e) => (Vec::new(), Verdict::Fail, e.to_string()),
        };
        self.checks.push(CheckReport {
            name: s.name,
            suite: s.suite.to_string(),
            anchor: s.anchor.into(),
            inputs: s.inputs,
            groups,
            expected: s.expected,
            provenance: s.provenance,
            verdict,
            detail,
            elapsed_us: t.elapsed().as_micros().min(u64::MAX as u128) as u64,
        });
    }

    fn skip(&mut self, name: &str, why: &str) {
        self.skipped.push((name.into(), why.into()));
    }

    fn rng(&self) -> Option<ChaCha8Rng> {
        self.job.seed.map(ChaCha8Rng::seed_from_u64)
    }

    pub fn all(&mut self) {
        let s = self.job.suite;
        if s.includes(Suite::UnitGroups) {
            self.unit_groups();
        }
        if s.includes(Suite::Ramification) {
            self.ramification();
        }
        if s.includes(Suite::Tate) {
            self.tate();
        }
        if s.includes(Suite::Lcft) {
            self.lcft();
        }
    }

    fn unit_group_order(&mut self, which: &str, field: Field, n: usize) {
        let q = BigInt::from(field.residue().order());
        let expected = (&q - 1u32) * q.pow(n as u32 - 1);
        self.run(
            Spec {
                name: format!("unit_group_order {which} n={n}"),
                suite: Suite::UnitGroups,
                anchor: "U/U^n has order (q-1) q^(n-1)",
                expected: expected.to_string(),
                provenance: Provenance::Oracle,
                inputs: vec![("n".into(), n.to_string()), ("q".into(), q.to_string())],
            },
            || {
                let uq = unit_group_quotient(&field, n)?;
                let ok = uq.group.order() == Some(expected.clone());
                Ok((
                    vec![named(format!("U_{which}/U_{which}^{n}"), &uq.group)],
                    ok,
                    String::new(),
                ))
            },
        );
    }

    fn unit_groups(&mut self) {
        let ext = self.ext;
        for n in 1..=4.min(self.job.precision) {
            self.unit_group_order("K", ext.base.clone(), n);
        }
        for n in 1..=4.min(ext.top.precision()) {
            self.unit_group_order("L", ext.top.clone(), n);
        }
        if self.galois.is_none() {
            self.skip("unit_gmodule", "extension is not Galois");
            return;
        }
        let n = 4.min(ext.top.precision());
        self.run(
            Spec {
                name: format!("unit_gmodule n={n}"),
                suite: Suite::UnitGroups,
                anchor: "U_L/U_L^n and L^×/U_L^n are G-modules",
                expected: "action matrices satisfy the group table; L^× part has Z-rank 1".into(),
                provenance: Provenance::Consistency,
                inputs: vec![("n".into(), n.to_string()), ("r".into(), "1".into())],
            },
            || {
                let m = unit_gmodule(ext, n, 1)?;
                let rank = m.multiplicative.moduli().iter().filter(|d| d.is_zero()).count();
                Ok((
                    vec![
                        named("U_L/U_L^n", &m.unit_group()),
                        named("L^×/U_L^n", &m.multiplicative.module()),
                    ],
                    rank == 1,
                    String::new(),
                ))
            },
        );
        if ext.f != 1 || ext.e == 1 {
            self.skip("norm_filtration", "needs a nontrivial totally ramified extension");
            return;
        }
        let top = self.ram.as_ref().map_or(1, |rd| conductor(rd) + 1).max(1);
        for m in 1..=top as usize {
            self.run(
                Spec {
                    name: format!("norm_filtration m={m}"),
                    suite: Suite::UnitGroups,
                    anchor: "the norm maps U_L^(ψ(m-1)+1) into U_K^m",
                    expected: "image contained in U_K^m".into(),
                    provenance: Provenance::Theorem,
                    inputs: vec![("m".into(), m.to_string()), ("r".into(), "1".into())],
                },
                || {
                    let rep = norm_filtration_check(ext, m, None, 1)?;
                    let detail = if rep.exact {
                        "equality modulo the window".to_string()
                    } else {
                        format!("U_K^m / image ≅ {} at r = 1", rep.defect)
                    };
                    Ok((Vec::new(), rep.contained, detail))
                },
            );
        }
    }

    fn ramification(&mut self) {
        let ext = self.ext;
        let (Some(g), Some(rd)) = (self.galois.clone(), self.ram.clone()) else {
            self.skip("ramification", "extension is not Galois");
            return;
        };
        let rd2 = rd.clone();
        self.run(
            Spec {
                name: "different".into(),
                suite: Suite::Ramification,
                anchor: "v_L(different) = Σ_{σ≠1} i_G(σ)",
                expected: format!("{}", rd.i_sum()),
                provenance: Provenance::Theorem,
                inputs: Vec::new(),
            },
            || {
                let d = different_valuation(ext)?;
                let detail = format!(
                    "lower breaks {:?}, upper breaks {}",
                    rd2.lower_breaks(),
                    fmt_rationals(&rd2.upper_breaks())
                );
                Ok((Vec::new(), d == rd2.i_sum(), detail))
            },
        );
        let rd3 = rd.clone();
        self.run(
            Spec {
                name: "herbrand".into(),
                suite: Suite::Ramification,
                anchor: "φ and ψ are inverse bijections",
                expected: "φ(ψ(v)) = v and ψ(φ(u)) = u at every breakpoint and integer".into(),
                provenance: Provenance::Consistency,
                inputs: Vec::new(),
            },
            || {
                let mut pts: Vec<Rational> = (0..=rd3.lower_breaks().last().copied().unwrap_or(0) + 2)
                    .map(|k| Rational::from_integer(k.into()))
                    .collect();
                pts.extend(rd3.herbrand_breakpoints().into_iter().map(|(u, _)| u));
                let ok = pts.iter().all(|u| {
                    rd3.herbrand_psi(&rd3.herbrand_phi(u)) == *u && rd3.herbrand_phi(&rd3.herbrand_psi(u)) == *u
                });
                let bp: Vec<String> = rd3
                    .herbrand_breakpoints()
                    .iter()
                    .map(|(u, v)| format!("({u}, {v})"))
                    .collect();
                Ok((Vec::new(), ok, format!("breakpoints {}", bp.join(" "))))
            },
        );
        if g.is_abelian() {
            let rd4 = rd.clone();
            self.run(
                Spec {
                    name: "hasse_arf".into(),
                    suite: Suite::Ramification,
                    anchor: "upper breaks of an abelian extension are integers",
                    expected: "integral upper breaks".into(),
                    provenance: Provenance::Theorem,
                    inputs: Vec::new(),
                },
                || {
                    Ok((
                        Vec::new(),
                        crate::ramify::upper_breaks_integral(&rd4),
                        fmt_rationals(&rd4.upper_breaks()),
                    ))
                },
            );
        } else {
            self.skip("hasse_arf", "Galois group is not abelian");
        }
        if ext.f != 1 || !g.is_abelian() {
            self.skip("graded_norm", "needs an abelian totally ramified extension");
            return;
        }
        let top = (conductor(&rd) + 2).max(1) as usize;
        for m in 1..=top {
            let rd5 = rd.clone();
            self.run(
                Spec {
                    name: format!("graded_norm m={m}"),
                    suite: Suite::Ramification,
                    anchor: "|U_K^(m-1) / U_K^m N U_L^ψ(m-1)| = |G^(m-1) / G^m|",
                    expected: "equal orders".into(),
                    provenance: Provenance::Theorem,
                    inputs: vec![("m".into(), m.to_string())],
                },
                || {
                    let r = graded_norm_check_with(ext, &rd5, m)?;
                    Ok((
                        Vec::new(),
                        r.passed,
                        format!("unit side {}, group side {}", r.unit_index, r.group_index),
                    ))
                },
            );
        }
    }

    fn tate(&mut self) {
        let ext = self.ext;
        let Some(g) = self.galois.clone() else {
            self.skip("tate", "extension is not Galois");
            return;
        };
        let fg = g.finite_group();
        let gab = fg.abelianization();
        let z = GModule::trivial(fg.clone(), &[0]);
        for i in -2i64..=2 {
            let expected = match i {
                -2 | 2 => gab.shape(),
                0 => from_moduli(&[BigInt::from(g.order())]).shape(),
                _ => GroupShape(Vec::new()),
            };
            let z = z.clone();
            self.run(
                Spec {
                    name: format!("tate_Z i={i}"),
                    suite: Suite::Tate,
                    anchor: "Ĥ^i(G, Z): G^ab, 0, Z/|G|, 0, G^ab for i = -2..2",
                    expected: expected.to_string(),
                    provenance: Provenance::Theorem,
                    inputs: vec![("i".into(), i.to_string())],
                },
                || {
                    let h = tate_cohomology(&z, i)?;
                    Ok((
                        vec![named(format!("Ĥ^{i}(G, Z)"), &h)],
                        h.shape() == expected,
                        String::new(),
                    ))
                },
            );
        }
        let bounds = self.bounds;
        let mut cert = None;
        let gab_order = gab.order().unwrap_or_default();
        self.run(
            Spec {
                name: "hilbert90".into(),
                suite: Suite::Tate,
                anchor: "Ĥ^1(G, L^×) = 0, seen on L^×/U_L^n at two levels",
                expected: format!("Ĥ^1 = 0; |Ĥ^0| = |G^ab| = {gab_order}"),
                provenance: Provenance::Theorem,
                inputs: Vec::new(),
            },
            || {
                let h = hilbert90_check(ext, None, bounds)?;
                let Some((a, b)) = h.certificate else {
                    return Err(Error::Inconclusive(format!(
                        "Ĥ^1 nonzero at every level pair up to n = {} with window {}",
                        bounds.n_max, h.window
                    )));
                };
                cert = Some(a);
                let mut groups = Vec::new();
                let mut h0_ok = true;
                for (n, h0, h1, h2) in h.levels.iter().filter(|l| l.0 == a || l.0 == b) {
                    for (i, s) in [(0, h0), (1, h1), (2, h2)] {
                        groups.push(NamedGroup {
                            name: format!("Ĥ^{i}(G, L^×/U^{n})"),
                            invariants: s.clone(),
                        });
                    }
                    h0_ok &= shape_order(h0) == gab_order;
                }
                Ok((groups, h0_ok, format!("certificate at levels {a} and {b}")))
            },
        );
        if fg.cyclic_generator().is_none() {
            self.skip("periodicity", "Galois group is not cyclic");
            return;
        }
        let n = self.job.level.or(cert).unwrap_or(2).min(ext.top.precision());
        self.run(
            Spec {
                name: format!("periodicity n={n}"),
                suite: Suite::Tate,
                anchor: "cyclic groups have 2-periodic Tate cohomology and Herbrand quotient 1 on finite modules",
                expected: "Ĥ^-1 ≅ Ĥ^1, Ĥ^0 ≅ Ĥ^2, |Ĥ^0(U/U^n)| = |Ĥ^1(U/U^n)|".into(),
                provenance: Provenance::Theorem,
                inputs: vec![("n".into(), n.to_string())],
            },
            || {
                let m = unit_gmodule(ext, n, 1)?;
                let x = &m.multiplicative;
                let hs: Vec<FinAbGroup> = (-1..=2).map(|i| tate_cohomology_general(x, i)).collect::<Result<_>>()?;
                let u0 = tate_cohomology_general(&m.units, 0)?;
                let u1 = tate_cohomology_general(&m.units, 1)?;
                let ok = hs[0].shape() == hs[2].shape() && hs[1].shape() == hs[3].shape() && u0.order() == u1.order();
                let mut groups: Vec<NamedGroup> = hs
                    .iter()
                    .zip(-1..=2)
                    .map(|(h, i)| named(format!("Ĥ^{i}(G, L^×/U^{n})"), h))
                    .collect();
                groups.push(named(format!("Ĥ^0(G, U/U^{n})"), &u0));
                groups.push(named(format!("Ĥ^1(G, U/U^{n})"), &u1));
                Ok((groups, ok, String::new()))
            },
        );
    }

    fn lcft(&mut self) {
        let ext = self.ext;
        let bounds = self.bounds;
        let Some(g) = self.galois.clone() else {
            self.skip("lcft", "extension is not Galois");
            return;
        };
        if !g.is_abelian() {
            self.skip("lcft", "Galois group is not abelian");
            return;
        }
        let degree = ext.degree();
        let mut cosets: Option<NormCosetGroup> = None;
        self.run(
            Spec {
                name: "norm_cosets".into(),
                suite: Suite::Lcft,
                anchor: "K^×/N L^× ≅ Gal(L/K) for abelian L/K",
                expected: format!("order {degree}, isomorphic to G"),
                provenance: Provenance::Theorem,
                inputs: Vec::new(),
            },
            || {
                let c = norm_coset_group(ext)?;
                let ok = c.group.order() == Some(BigInt::from(degree)) && c.iso_to_galois;
                let detail = format!("stable between levels {} and {}", c.levels.0, c.levels.1);
                let groups = vec![named("K^×/N L^×", &c.group)];
                cosets = Some(c);
                Ok((groups, ok, detail))
            },
        );
        if ext.e > 1 {
            let r = (2usize.max(ext.f)).div_ceil(ext.f) * ext.f;
            if r <= bounds.r_max {
                let e = ext.e;
                self.run(
                    Spec {
                        name: format!("h_minus_one r={r}"),
                        suite: Suite::Lcft,
                        anchor: "Ĥ^-1(Gal(L_r/K_r), U) ≅ inertia, generated by the classes of σ(π)/π",
                        expected: format!("order {e}, σ ↦ σ(π)/π onto"),
                        provenance: Provenance::Theorem,
                        inputs: vec![("r".into(), r.to_string())],
                    },
                    || {
                        let h = h_minus_one_stabilized(ext, r, bounds)?;
                        let ok = h.group().order() == Some(BigInt::from(e)) && h.hom_onto;
                        Ok((
                            vec![named("Ĥ^-1", h.group())],
                            ok,
                            format!("stable between levels {} and {}", h.levels.0, h.levels.1),
                        ))
                    },
                );
            }
        }
        let Some(c) = cosets else {
            self.skip("symbol", "norm coset group unavailable");
            return;
        };
        let reps = c.representatives();
        let mut sym: Vec<Option<usize>> = Vec::new();
        self.run(
            Spec {
                name: "symbol_kernel".into(),
                suite: Suite::Lcft,
                anchor: "the reciprocity symbol vanishes exactly on norms",
                expected: "symbol trivial iff the coset is trivial, for every coset".into(),
                provenance: Provenance::Theorem,
                inputs: vec![("cosets".into(), reps.len().to_string())],
            },
            || {
                let mut ok = true;
                for x in &reps {
                    let s = artin_symbol(ext, x, bounds)?.index;
                    let trivial = c.classify(x)?.iter().all(|v| v.is_zero());
                    ok &= trivial == (s == g.identity);
                    sym.push(Some(s));
                }
                let images: Vec<String> = sym.iter().flatten().map(|s| format!("σ{s}")).collect();
                Ok((
                    Vec::new(),
                    ok,
                    format!("symbols of the coset representatives: {}", images.join(" ")),
                ))
            },
        );
        let mut samples: Vec<LocalFieldElem> = reps.clone();
        if let Some(mut rng) = self.rng() {
            if let Ok(uq) = unit_group_quotient(&ext.base, 4.min(self.job.precision)) {
                for _ in 0..4 {
                    let coords: Vec<BigInt> = uq
                        .group
                        .invariant_factors()
                        .iter()
                        .map(|d| BigInt::from(rng.gen_range(0..d.to_u64().unwrap_or(1).max(1))))
                        .collect();
                    let v = rng.gen_range(0..3i64);
                    let x = uq
                        .from_group(&coords)
                        .mul(&LocalFieldElem::pi(&ext.base).pow(v).expect("nonzero"));
                    samples.push(x.with_precision(ext.base.precision() as i64));
                }
            }
        }
        let gg = g.clone();
        self.run(
            Spec {
                name: "symbol_homomorphism".into(),
                suite: Suite::Lcft,
                anchor: "the reciprocity symbol is a homomorphism",
                expected: "symbol(xy) = symbol(x) symbol(y)".into(),
                provenance: Provenance::Theorem,
                inputs: vec![
                    ("samples".into(), samples.len().to_string()),
                    ("seed".into(), format!("{:?}", self.job.seed)),
                ],
            },
            || {
                let s: Vec<usize> = samples
                    .iter()
                    .map(|x| artin_symbol(ext, x, bounds).map(|v| v.index))
                    .collect::<Result<_>>()?;
                let mut ok = true;
                for i in 0..samples.len() {
                    for j in i..samples.len() {
                        let xy = artin_symbol(ext, &samples[i].mul(&samples[j]), bounds)?.index;
                        ok &= xy == gg.compose(s[i], s[j]);
                    }
                }
                Ok((Vec::new(), ok, String::new()))
            },
        );
        if ext.f > 1 {
            let f = ext.f;
            self.run(
                Spec {
                    name: "symbol_uniformizer".into(),
                    suite: Suite::Lcft,
                    anchor: "a prime element maps to the inverse Frobenius on the unramified part",
                    expected: format!("Frobenius exponent {} mod {f}", f - 1),
                    provenance: Provenance::Theorem,
                    inputs: Vec::new(),
                },
                || {
                    let s = artin_symbol(ext, &LocalFieldElem::pi(&ext.base), bounds)?;
                    Ok((Vec::new(), s.frob == f - 1, format!("σ{}", s.index)))
                },
            );
        }
        if ext.f == 1 && ext.e > 1 {
            let m = 4.min(self.job.precision);
            let units: Vec<LocalFieldElem> = samples
                .iter()
                .filter_map(|x| x.unit_decompose().ok().map(|(_, u)| u))
                .collect();
            self.run(
                Spec {
                    name: format!("vanishing m={m}"),
                    suite: Suite::Lcft,
                    anchor: "every unit becomes a norm modulo U^m after a finite unramified enlargement",
                    expected: format!("some r ≤ {} for every sample", bounds.r_max),
                    provenance: Provenance::Theorem,
                    inputs: vec![("m".into(), m.to_string()), ("samples".into(), units.len().to_string())],
                },
                || {
                    let rs: Vec<usize> = units
                        .iter()
                        .map(|u| vanishing_approx(ext, u, m, bounds).map(|w| w.r))
                        .collect::<Result<_>>()?;
                    Ok((Vec::new(), true, format!("enlargement degrees {rs:?}")))
                },
            );
        }
        let over_e = if ext.f > 1 && ext.e > 1 {
            Extension::new(&ext.mid, 1, &ext.eisenstein).map(|e| ("E = maximal unramified subextension", e))
        } else {
            Ok(("E = K", ext.clone()))
        };
        let (label, oe) = match over_e {
            Ok(x) => x,
            Err(e) => {
                self.skip("base_change", &e.to_string());
                return;
            }
        };
        self.run(
            Spec {
                name: "base_change".into(),
                suite: Suite::Lcft,
                anchor: "symbol over K of N_{E/K}(x) equals the symbol over E of x",
                expected: "agreement on every coset of E^×/N L^×, symbols over E onto Gal(L/E)".into(),
                provenance: Provenance::Theorem,
                inputs: vec![("tower".into(), label.into())],
            },
            || {
                let r = base_change_check(ext, &oe, bounds)?;
                Ok((
                    Vec::new(),
                    r.passed,
                    format!("{} of {} cosets agree", r.matches, r.samples),
                ))
            },
        );
    }
}

fn conductor(rd: &RamData) -> i64 {
    rd.upper_breaks()
        .iter()
        .map(|b| b.ceil().to_integer().to_i64().unwrap_or(0))
        .max()
        .unwrap_or(-1)
}

fn fmt_rationals(v: &[Rational]) -> String {
    let s: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("[{}]", s.join(", "))
}

fn shape_order(s: &GroupShape) -> BigInt {
    s.0.iter().map(|d| d.parse::<BigInt>().unwrap_or_default()).product()
}
