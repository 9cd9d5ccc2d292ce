//! p-typical Witt vectors checked against Galois-ring arithmetic:
//! W_h(F_{p^e}) ≅ (Z/p^h)[x]/(lifted Conway polynomial), [a_i] ↦ Σ p^i T(a_i^{p^{-i}}).

use std::sync::Arc;

use dlvar::gfq::{Fe, FieldCtx};
use dlvar::witt::{Backend, WittRing, WittVec};
use proptest::prelude::*;

struct GaloisRing {
    field: Arc<FieldCtx>,
    modulus: i64,
    h: usize,
}

impl GaloisRing {
    fn new(field: Arc<FieldCtx>, h: usize) -> Self {
        let modulus = (field.p() as i64).pow(h as u32);
        GaloisRing { field, modulus, h }
    }

    fn e(&self) -> usize {
        self.field.degree() as usize
    }

    fn add(&self, a: &[i64], b: &[i64]) -> Vec<i64> {
        a.iter().zip(b).map(|(x, y)| (x + y).rem_euclid(self.modulus)).collect()
    }

    fn scale(&self, c: i64, a: &[i64]) -> Vec<i64> {
        a.iter().map(|x| (c * x).rem_euclid(self.modulus)).collect()
    }

    fn mul(&self, a: &[i64], b: &[i64]) -> Vec<i64> {
        let e = self.e();
        let f = self.field.modulus();
        let mut prod = vec![0i64; 2 * e];
        for i in 0..e {
            for j in 0..e {
                prod[i + j] = (prod[i + j] + a[i] * b[j]).rem_euclid(self.modulus);
            }
        }
        for k in (e..2 * e).rev() {
            let c = prod[k];
            for i in 0..e {
                prod[k - e + i] = (prod[k - e + i] - c * f[i] as i64).rem_euclid(self.modulus);
            }
            prod[k] = 0;
        }
        prod.truncate(e);
        prod
    }

    fn pow(&self, a: &[i64], mut n: u64) -> Vec<i64> {
        let mut r = vec![0; self.e()];
        r[0] = 1;
        let mut b = a.to_vec();
        while n > 0 {
            if n & 1 == 1 {
                r = self.mul(&r, &b);
            }
            b = self.mul(&b, &b);
            n >>= 1;
        }
        r
    }

    fn teichmuller(&self, x: Fe) -> Vec<i64> {
        let lift: Vec<i64> = self.field.coeffs(x).into_iter().map(|c| c as i64).collect();
        let q = (self.field.p() as u64).pow(self.field.degree());
        self.pow(&lift, q.pow(self.h as u32 - 1))
    }

    fn from_witt(&self, a: &WittVec) -> Vec<i64> {
        let e = self.field.degree() as i64;
        let mut acc = vec![0; self.e()];
        for (i, &c) in a.coords.iter().enumerate() {
            let root = self.field.frob(c, (-(i as i64)).rem_euclid(e) as u32);
            let t = self.teichmuller(root);
            acc = self.add(&acc, &self.scale((self.field.p() as i64).pow(i as u32), &t));
        }
        acc
    }
}

fn coords_strategy(size: u32, h: usize) -> impl Strategy<Value = Vec<u32>> {
    prop::collection::vec(0..size, h)
}

fn check_iso(p: u32, e: u32, h: usize, a: Vec<u32>, b: Vec<u32>) {
    let field = FieldCtx::get(p, e).unwrap();
    let w = WittRing::new(field.clone(), Backend::PTypical, h, 1).unwrap();
    let gr = GaloisRing::new(field, h);
    let a = w.from_coords(a).unwrap();
    let b = w.from_coords(b).unwrap();
    let (ia, ib) = (gr.from_witt(&a), gr.from_witt(&b));
    assert_eq!(gr.from_witt(&w.add(&a, &b)), gr.add(&ia, &ib));
    assert_eq!(gr.from_witt(&w.mul(&a, &b)), gr.mul(&ia, &ib));
    assert_eq!(gr.from_witt(&w.neg(&a)), gr.scale(-1, &ia));
    if w.is_unit(&a) {
        let inv = w.unit_inverse(&a).unwrap();
        let mut one = vec![0; e as usize];
        one[0] = 1;
        assert_eq!(gr.mul(&gr.from_witt(&inv), &ia), one);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn galois_ring_p2_e2_h3(a in coords_strategy(4, 3), b in coords_strategy(4, 3)) {
        check_iso(2, 2, 3, a, b);
    }

    #[test]
    fn galois_ring_p2_e3_h4(a in coords_strategy(8, 4), b in coords_strategy(8, 4)) {
        check_iso(2, 3, 4, a, b);
    }

    #[test]
    fn galois_ring_p3_e2_h3(a in coords_strategy(9, 3), b in coords_strategy(9, 3)) {
        check_iso(3, 2, 3, a, b);
    }

    #[test]
    fn galois_ring_p3_e1_h4(a in coords_strategy(3, 4), b in coords_strategy(3, 4)) {
        check_iso(3, 1, 4, a, b);
    }

    #[test]
    fn galois_ring_p5_e2_h2(a in coords_strategy(25, 2), b in coords_strategy(25, 2)) {
        check_iso(5, 2, 2, a, b);
    }

    #[test]
    fn galois_ring_p2_e1_h5(a in coords_strategy(2, 5), b in coords_strategy(2, 5)) {
        check_iso(2, 1, 5, a, b);
    }
}
