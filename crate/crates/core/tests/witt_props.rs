use dlvar::gfq::FieldCtx;
use dlvar::witt::{Backend, WittRing};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

fn axioms(backend: Backend, p: u32, e: u32, f: u32, h: usize) {
    let ring = WittRing::new(FieldCtx::get(p, e).unwrap(), backend, h, f).unwrap();
    let size = ring.field().size();
    let vec = prop::collection::vec(0..size, h);
    let mut runner = TestRunner::new(Config { cases: 10_000, ..Config::default() });
    runner
        .run(&(vec.clone(), vec.clone(), vec), |(a, b, c)| {
            let a = ring.from_coords(a).unwrap();
            let b = ring.from_coords(b).unwrap();
            let c = ring.from_coords(c).unwrap();
            prop_assert_eq!(ring.mul(&ring.mul(&a, &b), &c), ring.mul(&a, &ring.mul(&b, &c)));
            prop_assert_eq!(ring.mul(&a, &b), ring.mul(&b, &a));
            prop_assert_eq!(
                ring.mul(&a, &ring.add(&b, &c)),
                ring.add(&ring.mul(&a, &b), &ring.mul(&a, &c))
            );
            prop_assert_eq!(ring.add(&ring.add(&a, &b), &c), ring.add(&a, &ring.add(&b, &c)));
            prop_assert_eq!(ring.add(&a, &b), ring.add(&b, &a));
            prop_assert_eq!(ring.add(&a, &ring.neg(&a)), ring.zero());
            prop_assert_eq!(ring.mul(&a, &ring.one()), a.clone());
            if ring.is_unit(&a) {
                let inv = ring.unit_inverse(&a).unwrap();
                prop_assert!(ring.is_one(&ring.mul(&a, &inv)));
            }
            let fa = ring.frobenius_w(&ring.mul(&a, &b));
            prop_assert_eq!(fa, ring.mul(&ring.frobenius_w(&a), &ring.frobenius_w(&b)));
            prop_assert_eq!(ring.frobenius_w(&ring.verschiebung(&a)), ring.verschiebung(&ring.frobenius_w(&a)));
            Ok(())
        })
        .unwrap();
}

#[test]
fn equal_char_ring_axioms() {
    for (p, e, f, h) in [(2, 2, 1, 2), (2, 2, 1, 4), (3, 2, 1, 3), (2, 4, 2, 3), (2, 4, 2, 4)] {
        axioms(Backend::EqualChar, p, e, f, h);
    }
}

#[test]
fn ptypical_ring_axioms() {
    for (p, e, h) in [(2, 2, 2), (2, 2, 3), (2, 2, 4), (3, 2, 3), (3, 1, 4)] {
        axioms(Backend::PTypical, p, e, 1, h);
    }
}

#[test]
fn simplified_ring_axioms() {
    for (p, e, f, h) in [(2, 2, 1, 4), (3, 2, 1, 3), (2, 4, 2, 3), (2, 4, 2, 4)] {
        axioms(Backend::SimplifiedW, p, e, f, h);
    }
}

#[test]
fn major_contribution_agrees_on_monomials() {
    for (p, e, h) in [(2, 3, 4), (3, 2, 3), (2, 2, 3)] {
        let field = FieldCtx::get(p, e).unwrap();
        let pt = WittRing::new(field.clone(), Backend::PTypical, h, 1).unwrap();
        let sw = WittRing::new(field.clone(), Backend::SimplifiedW, h, 1).unwrap();
        for i in 0..h {
            for j in 0..h {
                for x in field.elements() {
                    for y in field.elements().step_by(2) {
                        let mut a = vec![0; h];
                        let mut b = vec![0; h];
                        a[i] = x;
                        b[j] = y;
                        let prod_pt = pt.mul(&pt.from_coords(a.clone()).unwrap(), &pt.from_coords(b.clone()).unwrap());
                        let prod_sw = sw.mul(&sw.from_coords(a).unwrap(), &sw.from_coords(b).unwrap());
                        assert_eq!(prod_pt.coords, prod_sw.coords, "V^{i}[{x}] * V^{j}[{y}]");
                    }
                }
            }
        }
    }
}
