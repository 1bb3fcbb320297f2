use std::collections::HashSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use proptest::prelude::*;

use super::*;
use crate::abgroup::{iso_check, FinAbGroup, Matrix};
use crate::IntMatrix;

fn z_triv(g: &FiniteGroup) -> GModule {
    GModule::trivial(g.clone(), &[0])
}

fn big_rows(rows: &[&[i64]]) -> IntMatrix {
    Matrix::from_i64_rows(rows)
}

/// All elements of a finite module, as reduced coordinate vectors.
fn elements(m: &GModule) -> Vec<Vec<BigInt>> {
    let mut out = vec![Vec::new()];
    for d in m.moduli() {
        let d = d.to_i64().unwrap();
        assert!(d > 0);
        out = out
            .into_iter()
            .flat_map(|p| {
                (0..d).map(move |v| {
                    let mut q = p.clone();
                    q.push(BigInt::from(v));
                    q
                })
            })
            .collect();
    }
    out
}

fn subgroup_size(m: &GModule, gens: &[Vec<BigInt>]) -> usize {
    let mut seen: HashSet<Vec<BigInt>> = HashSet::from([m.reduce(vec![BigInt::zero(); m.rank()])]);
    let mut frontier: Vec<Vec<BigInt>> = seen.iter().cloned().collect();
    while let Some(x) = frontier.pop() {
        for g in gens {
            let y = m.reduce(x.iter().zip(g).map(|(a, b)| a + b).collect());
            if seen.insert(y.clone()) {
                frontier.push(y);
            }
        }
    }
    seen.len()
}

/// `(|Ĥ^0|, |Ĥ^{-1}|)` by enumerating a finite module.
fn brute_h0_hm1(m: &GModule) -> (usize, usize) {
    let g = m.group();
    let els = elements(m);
    let norm = |x: &Vec<BigInt>| {
        let mut s = vec![BigInt::zero(); m.rank()];
        for h in 0..g.order() {
            for (a, b) in s.iter_mut().zip(m.act(h, x)) {
                *a += b;
            }
        }
        m.reduce(s)
    };
    let fixed = els
        .iter()
        .filter(|x| (0..g.order()).all(|h| &m.act(h, x) == *x))
        .count();
    let norms: Vec<Vec<BigInt>> = els.iter().map(norm).collect();
    let zero = m.reduce(vec![BigInt::zero(); m.rank()]);
    let kern = norms.iter().filter(|n| **n == zero).count();
    let n_image = subgroup_size(m, &norms);
    let aug: Vec<Vec<BigInt>> = els
        .iter()
        .flat_map(|x| (0..g.order()).map(move |h| m.reduce(m.act(h, x).iter().zip(x).map(|(a, b)| a - b).collect())))
        .collect();
    let aug_size = subgroup_size(m, &aug);
    (fixed / n_image, kern / aug_size)
}

fn order(g: &FinAbGroup) -> u64 {
    g.order_u64().expect("finite")
}

#[test]
fn cyclic_integer_pattern() {
    for n in 1..=6usize {
        let g = FiniteGroup::cyclic(n);
        let m = z_triv(&g);
        for i in -4..=4 {
            let h = tate_cohomology(&m, i).unwrap();
            let want = if i % 2 == 0 {
                FinAbGroup::cyclic(n as i64)
            } else {
                FinAbGroup::trivial()
            };
            assert!(iso_check(&h, &want), "n={n} i={i}: {h}");
        }
    }
}

#[test]
fn general_path_matches_cyclic_path_small() {
    for n in 1..=4usize {
        let g = FiniteGroup::cyclic(n);
        for m in [
            z_triv(&g),
            GModule::trivial(g.clone(), &[4, 2]),
            GModule::regular(g.clone()),
        ] {
            for i in -3..=3 {
                let a = tate_cohomology_general(&m, i).unwrap();
                let b = tate_cohomology_cyclic(&m, i).unwrap();
                assert!(iso_check(&a, &b), "n={n} i={i}: {a} vs {b}");
            }
        }
    }
}

#[test]
fn h_minus_two_is_abelianization() {
    let groups = [
        FiniteGroup::cyclic(4),
        FiniteGroup::cyclic(2).product(&FiniteGroup::cyclic(2)),
        FiniteGroup::symmetric(3),
    ];
    for g in groups {
        let h = tate_cohomology_general(&z_triv(&g), -2).unwrap();
        assert!(iso_check(&h, &g.abelianization()), "{g:?}: {h}");
    }
    assert!(iso_check(
        &FiniteGroup::symmetric(3).abelianization(),
        &FinAbGroup::cyclic(2)
    ));
}

#[test]
fn spec_examples_low_degree() {
    let g = FiniteGroup::cyclic(5);
    assert!(iso_check(
        &tate_cohomology(&z_triv(&g), 0).unwrap(),
        &FinAbGroup::cyclic(5)
    ));
    assert!(tate_cohomology(&z_triv(&g), -1).unwrap().is_trivial());
    let s3 = FiniteGroup::symmetric(3);
    assert!(iso_check(
        &tate_cohomology(&z_triv(&s3), -2).unwrap(),
        &FinAbGroup::cyclic(2)
    ));
}

#[test]
fn differential_squares_to_zero() {
    let s3 = FiniteGroup::symmetric(3);
    let sign: Vec<IntMatrix> = (0..6)
        .map(|g| {
            let perm = s3.labels()[g].clone();
            // parity from the permutation label
            let p: Vec<usize> = perm
                .trim_matches(|c| c == '[' || c == ']')
                .split(", ")
                .map(|x| x.parse().unwrap())
                .collect();
            let inv = (0..3)
                .flat_map(|i| (i + 1..3).map(move |j| (i, j)))
                .filter(|&(i, j)| p[i] > p[j])
                .count();
            big_rows(&[&[if inv % 2 == 0 { 1 } else { -1 }]])
        })
        .collect();
    let m = GModule::new(s3, vec![BigInt::zero()], sign).unwrap();
    for j in -3..=3 {
        check_complex(&m, j).unwrap();
        let d1 = complete_differential(&m, j - 1);
        let d2 = complete_differential(&m, j);
        assert!(d2.try_mul(&d1).unwrap().is_zero());
    }
}

#[test]
fn trivial_group_vanishes() {
    let g = FiniteGroup::trivial();
    for m in [z_triv(&g), GModule::trivial(g.clone(), &[6, 0])] {
        for i in -4..=4 {
            assert!(tate_cohomology_general(&m, i).unwrap().is_trivial());
        }
    }
}

#[test]
fn non_action_is_rejected() {
    let g = FiniteGroup::cyclic(2);
    let bad = GModule::cyclic(g, vec![BigInt::zero()], 1, big_rows(&[&[2]]));
    assert!(bad.is_err());
}

#[test]
fn shapiro_examples() {
    let z4 = FiniteGroup::cyclic(4);
    let h = z4.subgroup(&[0, 2]).unwrap();
    let m = GModule::trivial(h.group.clone(), &[0]);
    let r = shapiro_check(&z4, &h, &m, 0).unwrap();
    assert!(r.isomorphic);
    assert_eq!(r.restricted.0, vec!["2".to_string()]);
    // H = G: induction is the module itself
    let whole = z4.subgroup(&[0, 1, 2, 3]).unwrap();
    let zm = GModule::trivial(whole.group.clone(), &[0]);
    for i in -2..=2 {
        assert!(shapiro_check(&z4, &whole, &zm, i).unwrap().isomorphic);
    }
    let zero = GModule::trivial(h.group.clone(), &[]);
    let r = shapiro_check(&z4, &h, &zero, 1).unwrap();
    assert!(r.isomorphic && r.induced.0.is_empty());
}

#[test]
fn long_exact_multiplication_by_n() {
    // 0 -> Z -n-> Z -> Z/n -> 0 with G = Z/m acting trivially
    for (m_ord, n) in [(2usize, 2i64), (2, 3), (3, 3), (2, 4)] {
        let g = FiniteGroup::cyclic(m_ord);
        let a = GModule::trivial(g.clone(), &[0]);
        let b = GModule::trivial(g.clone(), &[0]);
        let c = GModule::trivial(g.clone(), &[n]);
        let r = long_exact_check(&a, &b, &c, &big_rows(&[&[n]]), &big_rows(&[&[1]]), -2, 2).unwrap();
        assert!(r.passed(), "{r:?}");
    }
}

#[test]
fn long_exact_split_and_zero() {
    let g = FiniteGroup::cyclic(2);
    let a = GModule::trivial(g.clone(), &[2]);
    let c = GModule::regular(g.clone());
    let b = a.direct_sum(&c).unwrap();
    let f = big_rows(&[&[1], &[0], &[0]]);
    let p = big_rows(&[&[0, 1, 0], &[0, 0, 1]]);
    let r = long_exact_check(&a, &b, &c, &f, &p, -2, 2).unwrap();
    assert!(r.passed());
    assert_eq!(r.zero_connecting, vec![-2, -1, 0, 1, 2]);
    // A = 0
    let zero = GModule::trivial(g.clone(), &[]);
    let id = big_rows(&[&[1, 0], &[0, 1]]);
    let r = long_exact_check(&zero, &c, &c, &Matrix::zeros(2, 0), &id, -1, 1).unwrap();
    assert!(r.passed());
    for (_, _, hb, hc) in &r.groups {
        assert_eq!(hb, hc);
    }
    // non-equivariant map is rejected
    let twist = big_rows(&[&[1, 0], &[0, 0]]);
    assert!(long_exact_check(&zero, &c, &c, &Matrix::zeros(2, 0), &twist, 0, 0).is_err());
}

/// Random finite module with a cyclic action by a random automorphism.
fn random_cyclic_module(moduli: &[i64], entries: &[i64]) -> Option<GModule> {
    let c = moduli.len();
    let mb: Vec<BigInt> = moduli.iter().map(|&d| BigInt::from(d)).collect();
    let mut a: IntMatrix = Matrix::zeros(c, c);
    for i in 0..c {
        for j in 0..c {
            // force well-definedness: scale so that d_j * a_ij ≡ 0 mod d_i
            let di = moduli[i];
            let dj = moduli[j];
            let unit = di / di.gcd(&dj);
            a[(i, j)] = BigInt::from(entries[i * c + j] * unit);
        }
    }
    // automorphism: bijective on the finite module
    let g1 = GModule::trivial(FiniteGroup::trivial(), moduli);
    let els = elements(&g1);
    let imgs: HashSet<Vec<BigInt>> = els
        .iter()
        .map(|x| {
            let mut y = a.try_mul_vec(x).unwrap();
            for (v, d) in y.iter_mut().zip(&mb) {
                *v = v.mod_floor(d);
            }
            y
        })
        .collect();
    if imgs.len() != els.len() {
        return None;
    }
    // order of the automorphism
    let mut k = 1usize;
    let mut p = a.clone();
    while !els.iter().all(|x| {
        let mut y = p.try_mul_vec(x).unwrap();
        for (v, d) in y.iter_mut().zip(&mb) {
            *v = v.mod_floor(d);
        }
        &y == x
    }) {
        p = a.try_mul(&p).unwrap();
        k += 1;
    }
    GModule::cyclic(FiniteGroup::cyclic(k), mb, 1 % k, a).ok()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn cyclic_invariants_on_random_modules(
        shape in prop::sample::select(vec![vec![2i64], vec![4], vec![2, 2], vec![3, 3], vec![2, 4], vec![8, 2], vec![5], vec![2, 2, 2], vec![4, 4], vec![7], vec![6, 2], vec![3, 9]]),
        entries in prop::collection::vec(-3i64..4, 9),
    ) {
        prop_assume!(random_cyclic_module(&shape, &entries).is_some());
        let m = random_cyclic_module(&shape, &entries).unwrap();
        let n = m.group().order() as u64;
        let hs: Vec<FinAbGroup> = (-4..=4).map(|i| tate_cohomology(&m, i).unwrap()).collect();
        for i in 0..hs.len() - 2 {
            prop_assert!(iso_check(&hs[i], &hs[i + 2]));
        }
        // Herbrand quotient of a finite module is 1
        prop_assert_eq!(order(&hs[4]), order(&hs[3]));
        // |G| kills everything
        for h in &hs {
            for f in h.invariant_factors() {
                prop_assert_eq!(n % f.to_u64().unwrap(), 0);
            }
        }
        // enumeration oracle for degrees 0 and -1
        let (b0, bm1) = brute_h0_hm1(&m);
        prop_assert_eq!(order(&hs[4]) as usize, b0);
        prop_assert_eq!(order(&hs[3]) as usize, bm1);
        if n <= 4 {
            for i in -2..=2 {
                let gen = tate_cohomology_general(&m, i).unwrap();
                prop_assert!(iso_check(&gen, &hs[(i + 4) as usize]));
            }
        }
    }
}

#[test]
fn tate_group_classifies_cocycles() {
    let g = FiniteGroup::cyclic(3);
    let m = GModule::trivial(g, &[0]);
    let t = tate_group(&m, 2).unwrap();
    assert_eq!(t.group.order_u64(), Some(3));
    for c in t.group.elements() {
        let z = t.representative(&c);
        assert_eq!(t.classify(&z).unwrap(), c);
        let d = apply_differential(&m, 2, &z);
        assert!(d.iter().all(|x| x.is_zero()));
    }
    assert_eq!(cochain_blocks(&m, 2), 4);
    let z = map_cochain(&big_rows(&[&[3]]), &t.representative(&[BigInt::from(1)]));
    assert!(t.classify(&z).unwrap().iter().all(|x| x.is_zero()));
}

#[test]
fn shapiro_s3_over_z3() {
    let s3 = FiniteGroup::symmetric(3);
    let z3 = s3.generated(&[(0..6).find(|&g| s3.element_order(g) == 3).unwrap()]);
    assert_eq!(z3.group.order(), 3);
    let m = GModule::trivial(z3.group.clone(), &[0]);
    for i in -3..=3 {
        assert!(shapiro_check(&s3, &z3, &m, i).unwrap().isomorphic, "degree {i}");
    }
}
