use super::*;
use crate::abgroup::{iso_check, FinAbGroup};
use crate::witt::{PerfRing, WittVector};
use num_bigint::BigInt;
use proptest::prelude::*;

fn q2_i(prec: usize) -> Field {
    // E = x^2 - 2x + 2, root 1 + i
    parse_field_spec("mixed 2 2 eisenstein 2 -2", 1, 1)
        .unwrap()
        .build(prec)
        .unwrap()
}

fn artin_schreier(prec: usize) -> Field {
    parse_field_spec("equal 2 eisenstein [0 1] [0 1]", 1, 1)
        .unwrap()
        .build(prec)
        .unwrap()
}

fn digits_u64(x: &LocalFieldElem) -> Vec<u64> {
    x.digits().iter().map(|d| d.0[0]).collect()
}

#[test]
fn parse_errors_carry_positions() {
    match parse_field_spec("mixed 4 4", 3, 1) {
        Err(Error::Parse { line: 3, column: 7, .. }) => {}
        other => panic!("{other:?}"),
    }
    match parse_field_spec("mixed 2 6", 1, 1) {
        Err(Error::Parse { column: 9, .. }) => {}
        other => panic!("{other:?}"),
    }
    assert!(matches!(
        parse_field_spec("mixed 2 2 eisenstein [0 (1 1", 1, 1),
        Err(Error::Parse { .. })
    ));
    // unit constant term is rejected
    let bad = parse_field_spec("mixed 2 2 eisenstein 1 2", 1, 1).unwrap();
    assert!(matches!(bad.build(10), Err(Error::Validation(_))));
    let bad = parse_field_spec("mixed 2 2 eisenstein 2 1", 1, 1).unwrap();
    assert!(matches!(bad.build(10), Err(Error::Validation(_))));
    let f = parse_field_spec("mixed 3 9", 1, 1).unwrap();
    assert_eq!(f.degree, 2);
}

#[test]
fn basic_examples() {
    let q2 = LocalField::qp(2, 12).unwrap();
    let one = LocalFieldElem::one(&q2);
    let two = one.add(&one);
    assert_eq!(two.valuation(), Valuation::Finite(1));
    assert_eq!(digits_u64(&two)[0], 1);
    assert!(digits_u64(&two)[1..].iter().all(|&d| d == 0));

    let pi = LocalFieldElem::pi(&q2);
    let z = LocalFieldElem::zero(&q2);
    assert_eq!(pi.add(&z).valuation(), Valuation::Finite(1));
    let pinv = pi.inv().unwrap();
    assert_eq!(pinv.valuation(), Valuation::Finite(-1));
    assert_eq!(digits_u64(&pinv)[0], 1);
    assert!(matches!(z.inv(), Err(Error::PrecisionLoss { .. })));

    let (n, u) = LocalFieldElem::from_i64(&q2, 12).unit_decompose().unwrap();
    assert_eq!(n, 2);
    assert!(u.approx_eq(&LocalFieldElem::from_i64(&q2, 3)));
    let (n, u) = pi.mul(&pi).unit_decompose().unwrap();
    assert_eq!((n, digits_u64(&u)[0]), (2, 1));
    assert_eq!(LocalFieldElem::from_i64(&q2, 5).valuation(), Valuation::Finite(0));
    assert!(matches!(z.unit_decompose(), Err(Error::PrecisionLoss { .. })));
}

/// Teichmüller representative of `a` in `Z/p^n` by iterated `p`-th powers.
fn teich_int(a: u64, p: u64, n: u32) -> u64 {
    let m = p.pow(n);
    let mut x = a % m;
    for _ in 0..n {
        let mut y = 1;
        for _ in 0..p {
            y = y * x % m;
        }
        x = y;
    }
    x
}

#[test]
fn integers_match_teichmuller_expansion_and_witt_carries() {
    for p in [2u64, 3, 5] {
        let n = 4usize;
        let f = LocalField::qp(p, 8).unwrap();
        let ring = PerfRing::standard(p, 1).unwrap();
        let m = p.pow(8);
        for k in 1..p.pow(n as u32) as i64 {
            let x = LocalFieldElem::from_i64(&f, k);
            let (v, u) = x.unit_decompose().unwrap();
            // oracle digits from integer arithmetic
            let mut rest = (k as u64) / p.pow(v as u32);
            let mut expect = Vec::new();
            for _ in 0..8 - v as usize {
                let a = rest % p;
                expect.push(a);
                rest = ((rest + m - teich_int(a, p, 8)) % m) / p;
            }
            assert_eq!(
                digits_u64(&u)[..4 - (v as usize).min(4)],
                expect[..4 - (v as usize).min(4)],
                "p={p} k={k}"
            );
            // Witt route: digits of k in W_4(F_p)
            let w = WittVector::from_integer(&ring, n, &BigInt::from(k));
            let wd: Vec<u64> = w.digits().iter().map(|d| d.0[0].0[0]).collect();
            let mut full = vec![0u64; v as usize];
            full.extend(digits_u64(&u));
            assert_eq!(full[..n], wd[..], "p={p} k={k}");
        }
    }
}

#[test]
fn gaussian_oracle() {
    // a + bπ with π = 1 + i is (a + b) + b i in Z[i]
    let f = q2_i(16);
    let m: i64 = 1 << 8;
    let to_gauss = |a: i64, b: i64| ((a + b).rem_euclid(m), b.rem_euclid(m));
    let elem = |a: i64, b: i64| {
        let ring = f.coeff_ring();
        LocalFieldElem::from_integral(&f, vec![ring.from_i64(a), ring.from_i64(b)], 16)
    };
    for (a, b, c, d) in [(3, 5, 7, 1), (1, 1, 1, 1), (2, 3, 5, 9), (11, 4, 6, 13)] {
        let prod = elem(a, b).mul(&elem(c, d));
        let (x1, y1) = to_gauss(a, b);
        let (x2, y2) = to_gauss(c, d);
        let (x, y) = ((x1 * x2 - y1 * y2).rem_euclid(m), (x1 * y2 + x2 * y1).rem_euclid(m));
        // back to basis 1, π: b' = y, a' = x - y
        let expect = elem(x - y, y);
        assert!(prod.eq_mod(&expect, 16), "{prod} vs {expect}");
    }
    // N(1+i) = 2: (1+i)(1-i) with 1 - i = 2 - π
    let pi = LocalFieldElem::pi(&f);
    let conj = LocalFieldElem::from_i64(&f, 2).sub(&pi);
    assert!(pi.mul(&conj).approx_eq(&LocalFieldElem::from_i64(&f, 2)));
}

#[test]
fn unit_group_examples() {
    let q2 = LocalField::qp(2, 8).unwrap();
    let g = unit_group_quotient(&q2, 3).unwrap();
    assert!(iso_check(&g.group, &FinAbGroup::from_invariants(&[2, 2])));
    let q3 = LocalField::qp(3, 8).unwrap();
    let g = unit_group_quotient(&q3, 2).unwrap();
    assert!(iso_check(&g.group, &FinAbGroup::cyclic(6)));
    let ft = LocalField::unramified(Kind::Equal, crate::ffield::FiniteField::prime(2).unwrap(), 8).unwrap();
    let g = unit_group_quotient(&ft, 2).unwrap();
    assert!(iso_check(&g.group, &FinAbGroup::cyclic(2)));
    assert!(unit_group_quotient(&ft, 0).is_err());
}

/// Structure of `(Z/p^n)^×` by brute-force element orders.
fn brute_units(p: u64, n: u32) -> Vec<u64> {
    let m = p.pow(n);
    let units: Vec<u64> = (1..m).filter(|x| x % p != 0).collect();
    let mut orders: Vec<u64> = units
        .iter()
        .map(|&x| {
            let mut y = x;
            let mut k = 1;
            while y != 1 {
                y = y * x % m;
                k += 1;
            }
            k
        })
        .collect();
    orders.sort();
    orders
}

#[test]
fn unit_group_matches_enumeration_and_round_trips() {
    for (p, n) in [(2u64, 3usize), (2, 5), (3, 3), (5, 2)] {
        let f = LocalField::qp(p, 8).unwrap();
        let uq = unit_group_quotient(&f, n).unwrap();
        assert_eq!(uq.group.order_u64(), Some((p - 1) * p.pow(n as u32 - 1)));
        let mut orders: Vec<u64> = uq
            .group
            .elements()
            .iter()
            .map(|c| uq.group.element_order(c).unwrap().try_into().unwrap())
            .collect();
        orders.sort();
        assert_eq!(orders, brute_units(p, n as u32));
        for c in uq.group.elements() {
            let u = uq.from_group(&c);
            assert_eq!(uq.to_group(&u).unwrap(), c);
        }
        // integer units classify consistently with multiplication
        for x in [3i64, 5, 7] {
            if (x as u64).is_multiple_of(p) {
                continue;
            }
            let a = LocalFieldElem::from_i64(&f, x);
            let b = LocalFieldElem::from_i64(&f, x * x);
            let ca = uq.to_group(&a).unwrap();
            assert_eq!(uq.to_group(&b).unwrap(), uq.group.add(&ca, &ca));
        }
    }
}

#[test]
fn graded_pieces() {
    let fields = vec![
        q2_i(10),
        artin_schreier(10),
        LocalField::unramified(Kind::Mixed, crate::ffield::FiniteField::standard(3, 2).unwrap(), 6).unwrap(),
    ];
    for f in fields {
        let q = f.residue().order();
        let mut prev = None;
        for n in 1..=5 {
            let o = unit_group_quotient(&f, n).unwrap().group.order_u64().unwrap();
            match prev {
                None => assert_eq!(o, q - 1),
                Some(po) => assert_eq!(o, po * q),
            }
            prev = Some(o);
        }
    }
}

#[test]
fn base_change_embeds() {
    let q2 = LocalField::qp(2, 10).unwrap();
    let f4 = crate::ffield::FiniteField::standard(2, 2).unwrap();
    let (q4, emb) = q2.base_change(&f4).unwrap();
    assert_eq!(q4.residue().order(), 4);
    for k in [3i64, 6, -5, 12] {
        let x = LocalFieldElem::from_i64(&q2, k);
        assert!(emb.apply(&x).approx_eq(&LocalFieldElem::from_i64(&q4, k)));
    }
    let f = q2_i(10);
    let (f4i, emb) = f.base_change(&f4).unwrap();
    assert_eq!(f4i.e(), 2);
    let pi = LocalFieldElem::pi(&f);
    let x = pi.mul(&pi).add(&LocalFieldElem::from_i64(&f, 3));
    let y = emb.apply(&x);
    let pi4 = LocalFieldElem::pi(&f4i);
    assert!(y.approx_eq(&pi4.mul(&pi4).add(&LocalFieldElem::from_i64(&f4i, 3))));
}

#[test]
fn split_check_on_test_rings() {
    let q2 = LocalField::qp(2, 8).unwrap();
    let ft = LocalField::unramified(Kind::Equal, crate::ffield::FiniteField::prime(2).unwrap(), 8).unwrap();
    let f2 = PerfRing::standard(2, 1).unwrap();
    let f8 = PerfRing::standard(2, 3).unwrap();
    let r = PerfRing::product(&f2, &f8).unwrap();
    for k in [&q2, &ft] {
        let rep = points_split_check(k, &r, 5, 1).unwrap();
        assert!(rep.passed(), "{:?}", rep.failures);
        assert_eq!(rep.z_rank, 2);
    }
    let rr = PerfRing::product(&f2, &f2).unwrap();
    let fields = points::component_fields(&q2, &rr).unwrap();
    let pt = RingPoint {
        fields: fields.clone(),
        coords: vec![
            LocalFieldElem::pi(&fields[0]),
            LocalFieldElem::one(&fields[1]).add(&LocalFieldElem::pi(&fields[1])),
        ],
    };
    assert_eq!(pt.valuation_vector(), vec![Valuation::Finite(1), Valuation::Finite(0)]);
}

fn make_elem(f: &Field, raw: &[u64], lead: i64) -> LocalFieldElem {
    let k = f.residue();
    let prec = f.precision();
    let digits: Vec<_> = raw.iter().take(prec).map(|&i| k.from_index(i % k.order())).collect();
    LocalFieldElem::from_digits(f, lead, &digits, lead + prec as i64)
}

fn fields() -> Vec<Field> {
    vec![
        LocalField::qp(3, 10).unwrap(),
        q2_i(10),
        artin_schreier(10),
        LocalField::unramified(Kind::Mixed, crate::ffield::FiniteField::standard(2, 2).unwrap(), 8).unwrap(),
        q3_sqrt_minus3(10),
    ]
}

fn q3_sqrt_minus3(prec: usize) -> Field {
    let k = crate::ffield::FiniteField::prime(3).unwrap();
    LocalField::eisenstein_with(Kind::Mixed, k, prec, |a| Ok(vec![a.from_i64(3), a.zero()])).unwrap()
}

#[test]
fn sums_of_distant_powers() {
    let f = q3_sqrt_minus3(8);
    let one = LocalFieldElem::one(&f);
    let pi = LocalFieldElem::pi(&f);
    // π^2 = -3
    let s = one.add(&pi.pow(2).unwrap());
    assert!(s.approx_eq(&LocalFieldElem::from_i64(&f, -2)));
    assert_eq!(
        digits_u64(&s.sub(&one)),
        digits_u64(&pi.pow(2).unwrap().with_precision(s.precision()))
    );
    let t = one.add(&pi.pow(5).unwrap());
    assert!(t.sub(&one).approx_eq(&pi.pow(5).unwrap()));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]
    #[test]
    fn field_laws(
        idx in 0usize..5,
        raw in proptest::collection::vec(proptest::collection::vec(0u64..1000, 10), 3),
        leads in proptest::collection::vec(-3i64..4, 3),
    ) {
        let f = fields()[idx].clone();
        let x = make_elem(&f, &raw[0], leads[0]);
        let y = make_elem(&f, &raw[1], leads[1]);
        let z = make_elem(&f, &raw[2], leads[2]);
        // valuation is additive
        if let (Valuation::Finite(a), Valuation::Finite(b)) = (x.valuation(), y.valuation()) {
            prop_assert_eq!(x.mul(&y).valuation(), Valuation::Finite(a + b));
            // ultrametric inequality, with equality when valuations differ
            match x.add(&y).valuation() {
                Valuation::Finite(c) => {
                    prop_assert!(c >= a.min(b));
                    if a != b { prop_assert_eq!(c, a.min(b)); }
                }
                Valuation::AtLeast(c) => prop_assert!(c >= a.min(b) && a == b),
            }
            let xi = x.inv().unwrap();
            prop_assert!(x.mul(&xi).approx_eq(&LocalFieldElem::one(&f)));
        }
        prop_assert!(x.mul(&y.add(&z)).approx_eq(&x.mul(&y).add(&x.mul(&z))));
        prop_assert!(x.mul(&y).mul(&z).approx_eq(&x.mul(&y.mul(&z))));
        // digit expansion agrees with the sum of its monomials
        if let Valuation::Finite(v) = x.valuation() {
            let pi = LocalFieldElem::pi(&f);
            let mut acc = LocalFieldElem::zero_to(&f, x.precision());
            for (i, d) in x.digits().iter().enumerate() {
                let term = LocalFieldElem::teichmuller(&f, d).mul(&pi.pow(v + i as i64).unwrap());
                acc = acc.add(&term);
            }
            prop_assert!(acc.approx_eq(&x));
        }
        // digits round trip
        if let Valuation::Finite(v) = x.valuation() {
            let back = LocalFieldElem::from_digits(&f, v, &x.digits(), x.precision());
            prop_assert_eq!(back, x.clone());
        }
    }
}
