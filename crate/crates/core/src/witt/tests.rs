use super::*;
use crate::abgroup::FinAbGroup;
use crate::ffield::FiniteField;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn fp_vec(ring: &Arc<PerfRing>, digits: &[u64]) -> WittVector {
    WittVector::new(ring.clone(), digits.iter().map(|&d| ring.from_u64(d)).collect()).unwrap()
}

fn digits_u64(w: &WittVector) -> Vec<u64> {
    w.digits().iter().map(|d| d.0[0].0[0]).collect()
}

fn pow_mod(a: u64, e: u64, m: u64) -> u64 {
    (0..e).fold(1 % m, |acc, _| acc * a % m)
}

/// Teichmüller representative of `a` in `Z/p^n`.
fn teich(a: u64, p: u64, n: u32) -> u64 {
    let m = p.pow(n);
    let mut x = a % m;
    for _ in 0..n {
        x = pow_mod(x, p, m);
    }
    x
}

fn ghost(x: &[u64], p: u64, i: usize) -> u64 {
    let n = x.len() as u32;
    let m = p.pow(i as u32 + 1);
    (0..=i).fold(0, |acc, j| {
        let t = teich(x[j], p, n);
        (acc + p.pow(j as u32) * pow_mod(t, p.pow((i - j) as u32), m)) % m
    })
}

/// Ghost oracle over integer Teichmüller lifts.
fn check_ghost(p: u64, n: usize, a: &[u64], b: &[u64]) {
    let ring = PerfRing::standard(p, 1).unwrap();
    let (wa, wb) = (fp_vec(&ring, a), fp_vec(&ring, b));
    let s = digits_u64(&witt_add(&wa, &wb).unwrap());
    let prod = digits_u64(&witt_mul(&wa, &wb).unwrap());
    for i in 0..n {
        let m = p.pow(i as u32 + 1);
        assert_eq!(
            ghost(&s, p, i),
            (ghost(a, p, i) + ghost(b, p, i)) % m,
            "add p={p} {a:?} {b:?} i={i}"
        );
        assert_eq!(
            ghost(&prod, p, i),
            ghost(a, p, i) * ghost(b, p, i) % m,
            "mul p={p} {a:?} {b:?} i={i}"
        );
    }
}

#[test]
fn ghost_compatibility() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for p in [2u64, 3, 5] {
        for n in 1..=4 {
            for _ in 0..40 {
                let a: Vec<u64> = (0..n).map(|_| rand::Rng::gen_range(&mut rng, 0..p)).collect();
                let b: Vec<u64> = (0..n).map(|_| rand::Rng::gen_range(&mut rng, 0..p)).collect();
                check_ghost(p, n, &a, &b);
            }
        }
    }
}

/// Value of a digit vector in `Z/p^n` by `sum p^i τ(a_i)`.
fn to_int_oracle(d: &[u64], p: u64) -> u64 {
    let n = d.len() as u32;
    let m = p.pow(n);
    d.iter()
        .enumerate()
        .fold(0, |acc, (i, &a)| (acc + p.pow(i as u32) * teich(a, p, n)) % m)
}

#[test]
fn prime_field_witt_is_integers_mod_pn() {
    for (p, n) in [
        (2u64, 1usize),
        (2, 2),
        (2, 3),
        (2, 4),
        (2, 5),
        (2, 6),
        (3, 1),
        (3, 2),
        (3, 3),
        (3, 4),
        (5, 1),
        (5, 2),
        (5, 3),
    ] {
        let ring = PerfRing::standard(p, 1).unwrap();
        let m = p.pow(n as u32);
        let vecs: Vec<Vec<u64>> = (0..m)
            .map(|k| (0..n).map(|i| k / p.pow(i as u32) % p).collect())
            .collect();
        let ints: Vec<u64> = vecs.iter().map(|d| to_int_oracle(d, p)).collect();
        let mut seen = ints.clone();
        seen.sort();
        seen.dedup();
        assert_eq!(seen.len() as u64, m, "bijection p={p} n={n}");
        let index: std::collections::HashMap<u64, usize> = ints.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        for (i, a) in vecs.iter().enumerate() {
            let wa = fp_vec(&ring, a);
            assert_eq!(big_to_u64(&wa.to_integer().unwrap()), ints[i]);
            for (j, b) in vecs.iter().enumerate() {
                let wb = fp_vec(&ring, b);
                let s = digits_u64(&witt_add(&wa, &wb).unwrap());
                let pr = digits_u64(&witt_mul(&wa, &wb).unwrap());
                assert_eq!(s, vecs[index[&((ints[i] + ints[j]) % m)]]);
                assert_eq!(pr, vecs[index[&(ints[i] * ints[j] % m)]]);
            }
        }
    }
}

/// `W_n(F_q)` against `Z[y]/(p^n, f)` through `sum p^i ω(a_i^{p^{-i}})`.
mod unramified_oracle {
    use super::*;

    fn mulmod(a: &[u64], b: &[u64], f: &[u64], m: u64) -> Vec<u64> {
        let d = f.len() - 1;
        let mut r = vec![0u64; 2 * d];
        for i in 0..d {
            for j in 0..d {
                r[i + j] = (r[i + j] + a[i] * b[j]) % m;
            }
        }
        for k in (d..2 * d).rev() {
            let c = r[k];
            for i in 0..=d {
                r[k - d + i] = (r[k - d + i] + m - c * f[i] % m) % m;
            }
        }
        r.truncate(d);
        r
    }

    fn to_ring(w: &WittVector, f: &FiniteField) -> Vec<u64> {
        let p = f.characteristic();
        let n = w.len() as u32;
        let m = p.pow(n);
        let q = f.order();
        let d = f.degree();
        let mut acc = vec![0u64; d];
        for (i, digit) in w.digits().iter().enumerate() {
            let a = f.frobenius_pow(&digit.0[0], -(i as i64));
            // ω(a) = lim lift(a)^{q^k}
            let mut t: Vec<u64> = a.0.clone();
            for _ in 0..n {
                let mut r = vec![0u64; d];
                r[0] = 1;
                for _ in 0..q {
                    r = mulmod(&r, &t, f.modulus(), m);
                }
                t = r;
            }
            for k in 0..d {
                acc[k] = (acc[k] + p.pow(i as u32) * t[k]) % m;
            }
        }
        acc
    }

    #[test]
    fn f4_and_f9() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for (p, deg, n) in [(2u64, 2usize, 3usize), (3, 2, 2), (2, 3, 2)] {
            let f = FiniteField::standard(p, deg).unwrap();
            let ring = PerfRing::field(f.clone());
            let m = p.pow(n as u32);
            for _ in 0..60 {
                let a = WittVector::new(ring.clone(), (0..n).map(|_| ring.random(&mut rng)).collect()).unwrap();
                let b = WittVector::new(ring.clone(), (0..n).map(|_| ring.random(&mut rng)).collect()).unwrap();
                let (ra, rb) = (to_ring(&a, &f), to_ring(&b, &f));
                let sum: Vec<u64> = ra.iter().zip(&rb).map(|(x, y)| (x + y) % m).collect();
                assert_eq!(to_ring(&witt_add(&a, &b).unwrap(), &f), sum);
                assert_eq!(
                    to_ring(&witt_mul(&a, &b).unwrap(), &f),
                    mulmod(&ra, &rb, f.modulus(), m)
                );
            }
        }
    }
}

#[test]
fn small_examples() {
    let f2 = PerfRing::standard(2, 1).unwrap();
    let one = fp_vec(&f2, &[1, 0]);
    assert_eq!(digits_u64(&witt_add(&one, &one).unwrap()), vec![0, 1]);
    let two = fp_vec(&f2, &[0, 1]);
    assert!(witt_mul(&two, &two).unwrap().is_zero());
    let x = fp_vec(&f2, &[1, 1]);
    assert_eq!(witt_mul(&x, &WittVector::one(&f2, 2)).unwrap(), x);
    assert!(witt_mul(&x, &WittVector::zero(&f2, 2)).unwrap().is_zero());
    assert_eq!(witt_add(&x, &WittVector::zero(&f2, 2)).unwrap(), x);

    let v = verschiebung(&fp_vec(&f2, &[1, 0, 0]));
    assert_eq!(digits_u64(&v), vec![0, 1, 0]);
    assert_eq!(big_to_u64(&v.to_integer().unwrap()), 2);

    for d in [[0, 0], [0, 1], [1, 0], [1, 1]] {
        let a = fp_vec(&f2, &d);
        assert_eq!(frobenius(&verschiebung(&a)), witt_add(&a, &a).unwrap());
    }

    let f5 = PerfRing::standard(5, 1).unwrap();
    let a = fp_vec(&f5, &[3]);
    let b = fp_vec(&f5, &[4]);
    assert_eq!(digits_u64(&witt_add(&a, &b).unwrap()), vec![2]);
}

#[test]
fn teichmuller_multiplicative_in_f4() {
    let f4 = FiniteField::standard(2, 2).unwrap();
    let ring = PerfRing::field(f4.clone());
    let g = f4.primitive_element().clone();
    let g2 = f4.mul(&g, &g);
    let lhs = witt_mul(
        &teichmuller(&ring, &RingElem(vec![g]), 2),
        &teichmuller(&ring, &RingElem(vec![g2]), 2),
    )
    .unwrap();
    assert_eq!(lhs, WittVector::one(&ring, 2));
    for x in ring.elements() {
        for y in ring.elements() {
            let l = witt_mul(&teichmuller(&ring, &x, 3), &teichmuller(&ring, &y, 3)).unwrap();
            assert_eq!(l, teichmuller(&ring, &ring.mul(&x, &y), 3));
        }
    }
}

#[test]
fn mismatched_operands() {
    let f2 = PerfRing::standard(2, 1).unwrap();
    let f3 = PerfRing::standard(3, 1).unwrap();
    assert!(matches!(
        witt_add(&fp_vec(&f2, &[1]), &fp_vec(&f2, &[1, 0])),
        Err(Error::Structural(_))
    ));
    assert!(matches!(
        witt_mul(&fp_vec(&f2, &[1]), &fp_vec(&f3, &[1])),
        Err(Error::Structural(_))
    ));
}

#[test]
fn greenberg_examples() {
    let f2 = FiniteField::prime(2).unwrap();
    let r = PerfRing::field(f2.clone());
    let m = ProfiniteModule::cyclic(f2.clone(), 2).unwrap();
    let g = greenberg_points(&m, &r).unwrap();
    assert!(crate::abgroup::iso_check(&g.group, &FinAbGroup::cyclic(4)));
    // classification matches the exhaustive W_2(F_2) table
    for (w, k) in integer_table(2, 2).unwrap() {
        let c = g.classify(std::slice::from_ref(&w)).unwrap();
        assert_eq!(c, g.group.classify_i64(&[k as i64]));
        assert_eq!(g.element(&[BigInt::from(k)]), vec![w]);
    }
    let rr = PerfRing::product(&r, &r).unwrap();
    let g2 = greenberg_points(&m, &rr).unwrap();
    assert!(crate::abgroup::iso_check(
        &g2.group,
        &FinAbGroup::from_invariants(&[4, 4])
    ));

    let f8 = FiniteField::standard(2, 3).unwrap();
    let r8 = PerfRing::field(f8);
    let k1 = ProfiniteModule::cyclic(f2.clone(), 1).unwrap();
    let g8 = greenberg_points(&k1, &r8).unwrap();
    assert!(crate::abgroup::iso_check(
        &g8.group,
        &FinAbGroup::from_invariants(&[2, 2, 2])
    ));

    let f4 = FiniteField::standard(2, 2).unwrap();
    let bad = ProfiniteModule::cyclic(f4, 1).unwrap();
    assert!(greenberg_points(&bad, &r8).is_err());
}

#[test]
fn greenberg_product_decomposes() {
    let f2 = FiniteField::prime(2).unwrap();
    let f4 = FiniteField::standard(2, 2).unwrap();
    let m = ProfiniteModule::new(f2, vec![2, 1]).unwrap();
    let r1 = PerfRing::field(f4.clone());
    let r2 = PerfRing::standard(2, 1).unwrap();
    let prod = PerfRing::product(&r1, &r2).unwrap();
    let a = greenberg_points(&m, &r1).unwrap().group;
    let b = greenberg_points(&m, &r2).unwrap().group;
    let c = greenberg_points(&m, &prod).unwrap().group;
    assert!(crate::abgroup::iso_check(&c, &a.direct_sum(&b)));

    let g = greenberg_points(&m, &prod).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..20 {
        let x: Vec<WittVector> = m
            .lengths()
            .iter()
            .map(|&l| WittVector::new(prod.clone(), (0..l).map(|_| prod.random(&mut rng)).collect()).unwrap())
            .collect();
        let c = g.classify(&x).unwrap();
        assert_eq!(g.element(&c), x);
    }
}

fn arb_vec(p: u64, n: usize) -> impl Strategy<Value = Vec<u64>> {
    proptest::collection::vec(0..p, n)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]
    #[test]
    fn ring_axioms(p in prop::sample::select(vec![2u64, 3, 5]), a in arb_vec(5, 3), b in arb_vec(5, 3), c in arb_vec(5, 3)) {
        let ring = PerfRing::standard(p, 1).unwrap();
        let r = |v: &Vec<u64>| fp_vec(&ring, &v.iter().map(|x| x % p).collect::<Vec<_>>());
        let (a, b, c) = (r(&a), r(&b), r(&c));
        let ab = witt_add(&a, &b).unwrap();
        prop_assert_eq!(witt_add(&ab, &c).unwrap(), witt_add(&a, &witt_add(&b, &c).unwrap()).unwrap());
        let mab = witt_mul(&a, &b).unwrap();
        prop_assert_eq!(witt_mul(&mab, &c).unwrap(), witt_mul(&a, &witt_mul(&b, &c).unwrap()).unwrap());
        prop_assert_eq!(witt_mul(&ab, &c).unwrap(), witt_add(&witt_mul(&a, &c).unwrap(), &witt_mul(&b, &c).unwrap()).unwrap());
        prop_assert!(witt_add(&a, &a.neg()).unwrap().is_zero());
        prop_assert_eq!(frobenius(&verschiebung(&a)), a.scale(p as i64));
    }
}
