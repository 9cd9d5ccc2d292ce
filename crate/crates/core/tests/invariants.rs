use dlvar::chardual::{AbelianStructure, DEFAULT_GROUP_BUDGET};
use dlvar::cohom::{census, dims_table, maximal_count, predict_count, zeta};
use dlvar::cyclotomic::{cyclotomic_poly, Cyclotomic};
use dlvar::dlgroup::GroupParams;
use dlvar::witt::Backend;
use dlvar::xhvar::{count_points, XhVariety};
use num_bigint::{BigInt, BigUint};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

fn params(q: u64, n: usize, k: usize, h: usize, b: Backend) -> GroupParams {
    GroupParams::new(q, n, k, h, b).unwrap()
}

#[test]
fn counts_independent_of_k_and_backend() {
    for b in [Backend::EqualChar, Backend::PTypical] {
        assert_eq!(count_points(params(2, 3, 1, 2, b), 1).unwrap(), count_points(params(2, 3, 2, 2, b), 1).unwrap());
    }
    for (q, n, h, m) in [(2, 2, 2, 1), (2, 2, 2, 2), (2, 2, 3, 1), (3, 2, 2, 1)] {
        let e = count_points(params(q, n, 1, h, Backend::EqualChar), m).unwrap();
        let p = count_points(params(q, n, 1, h, Backend::PTypical), m).unwrap();
        assert_eq!(e, p, "q={q} n={n} h={h} m={m}");
    }
}

#[test]
fn counts_match_cohomology() {
    for (q, n, h, mmax) in [(2, 2, 2, 3), (2, 2, 3, 2), (3, 2, 2, 2), (2, 3, 2, 1)] {
        let p = params(q, n, 1, h, Backend::EqualChar);
        for m in 1..=mmax {
            let c = BigInt::from(count_points(p, m).unwrap());
            assert_eq!(c, predict_count(p, m).unwrap(), "q={q} n={n} h={h} m={m}");
        }
        let c1 = BigUint::from(count_points(p, 1).unwrap());
        assert_eq!(c1, maximal_count(&census(p).unwrap()).unwrap());
    }
}

#[test]
fn dims_and_zeta_small_case() {
    let p = params(2, 2, 1, 2, Backend::EqualChar);
    let d = dims_table(p).unwrap();
    assert_eq!(d.get(1), BigUint::from(4u32));
    assert_eq!(d.get(2), BigUint::from(2u32));
    assert_eq!(zeta(p).unwrap().to_string(), "(1+2t)^4 / (1-4t)^2");
}

#[test]
fn census_partitions_characters() {
    for (q, n, h) in [(2, 2, 2), (2, 2, 3), (3, 2, 2), (2, 3, 2)] {
        let p = params(q, n, 1, h, Backend::EqualChar);
        let s = AbelianStructure::new(p, DEFAULT_GROUP_BUDGET).unwrap();
        let c = census(p).unwrap();
        assert_eq!(c.rows.len() as u64, s.num_characters());
        assert_eq!(c.classes().values().sum::<u64>(), s.num_characters());
        // U^1 of 𝕎_h(F_{q^n}) has q^{n(h-1)} elements, and so does its dual.
        assert_eq!(s.order(), q.pow((n * (h - 1)) as u32));
    }
}

#[test]
fn characters_are_homomorphisms() {
    let p = params(2, 2, 1, 3, Backend::PTypical);
    let s = AbelianStructure::new(p, DEFAULT_GROUP_BUDGET).unwrap();
    let elems = s.elements();
    let nchar = s.num_characters();
    let e: u64 = s.invariants().iter().copied().max().unwrap_or(1);
    let idx = 0..elems.len();
    let mut runner = TestRunner::new(Config { cases: 500, ..Config::default() });
    runner
        .run(&(idx.clone(), idx, 0..nchar), |(a, b, c)| {
            let chi = s.character(c);
            let (x, y) = (&elems[a], &elems[b]);
            let xy = s.ring().mul(x, y);
            let lhs = s.eval(&chi, &xy).unwrap();
            prop_assert_eq!(lhs, (s.eval(&chi, x).unwrap() + s.eval(&chi, y).unwrap()) % e);
            let inv = s.inverse_character(&chi);
            prop_assert_eq!((s.eval(&chi, x).unwrap() + s.eval(&inv, x).unwrap()) % e, 0);
            Ok(())
        })
        .unwrap();
}

#[test]
fn cyclotomic_arithmetic() {
    for m in 1..40u64 {
        let phi = cyclotomic_poly(m);
        assert_eq!(phi.last().cloned(), Some(BigInt::from(1)));
    }
    let mut runner = TestRunner::new(Config { cases: 300, ..Config::default() });
    runner
        .run(&(1u64..24, -30i64..30, -30i64..30), |(m, a, b)| {
            let x = Cyclotomic::root(m, a);
            let y = Cyclotomic::root(m, b);
            prop_assert_eq!(x.mul(&y), Cyclotomic::root(m, a + b));
            let total = (0..m as i64).fold(Cyclotomic::zero(m), |acc, k| acc.add(&Cyclotomic::root(m, k)));
            prop_assert_eq!(total.as_integer(), Some(BigInt::from(if m == 1 { 1 } else { 0 })));
            prop_assert!(x.sub(&x).is_zero());
            Ok(())
        })
        .unwrap();
}

#[test]
fn budget_is_enforced() {
    let v = XhVariety::new(params(2, 2, 1, 3, Backend::EqualChar), 2).unwrap();
    assert!(matches!(v.count_points(10), Err(dlvar::Error::Budget { .. })));
}
