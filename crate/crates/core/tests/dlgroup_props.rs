use dlvar::dlgroup::{DlGroup, GroupElem, GroupParams};
use dlvar::witt::{Backend, WittVec};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

/// Entry coordinates for position (i, j) of an Iwahori-shaped matrix.
fn shaped(g: &DlGroup, i: usize, j: usize, raw: &[u32], unipotent: bool) -> WittVec {
    let h = g.ring.h();
    let mut c = raw[..h].to_vec();
    if i > j {
        c[0] = 0;
    } else if i < j {
        c[h - 1] = 0;
    } else if unipotent {
        c[0] = 1;
    } else if c[0] == 0 {
        c[0] = 1;
    }
    g.ring.from_coords(c).unwrap()
}

fn elem(g: &DlGroup, raw: &[Vec<u32>], unipotent: bool) -> GroupElem {
    let n = g.n();
    let entries = (0..n * n).map(|idx| shaped(g, idx / n + 1, idx % n + 1, &raw[idx], unipotent)).collect();
    g.from_entries(entries).unwrap()
}

fn group_axioms(params: GroupParams, cases: u32) {
    let g = DlGroup::new(params, 1).unwrap();
    let (n, h, size) = (params.n, params.h, g.ring.field().size());
    let mat = prop::collection::vec(prop::collection::vec(0..size, h), n * n);
    let mut runner = TestRunner::new(Config { cases, ..Config::default() });
    runner
        .run(&(mat.clone(), mat.clone(), mat), |(a, b, c)| {
            let (a, b, c) = (elem(&g, &a, false), elem(&g, &b, false), elem(&g, &c, false));
            let ab = g.mul(&a, &b).unwrap();
            prop_assert_eq!(g.mul(&ab, &c).unwrap(), g.mul(&a, &g.mul(&b, &c).unwrap()).unwrap());
            prop_assert_eq!(g.mul(&a, &g.identity()).unwrap(), a.clone());
            prop_assert_eq!(g.mul(&a, &g.inverse(&a).unwrap()).unwrap(), g.identity());
            let fab = g.twisted_frobenius(&ab).unwrap();
            let fa = g.twisted_frobenius(&a).unwrap();
            prop_assert_eq!(fab, g.mul(&fa, &g.twisted_frobenius(&b).unwrap()).unwrap());
            let r = &g.ring;
            prop_assert_eq!(g.det(&ab).unwrap(), r.mul(&g.det(&a).unwrap(), &g.det(&b).unwrap()));
            prop_assert_eq!(g.det(&fa).unwrap(), r.frobenius_w(&g.det(&a).unwrap()));
            Ok(())
        })
        .unwrap();
}

#[test]
fn group_axioms_equal_char() {
    for (q, n, k, h) in [(2, 2, 1, 2), (2, 2, 1, 3), (2, 3, 1, 2), (2, 3, 2, 3), (3, 2, 1, 2)] {
        group_axioms(GroupParams::new(q, n, k, h, Backend::EqualChar).unwrap(), 200);
    }
}

#[test]
fn group_axioms_mixed_char() {
    for (q, n, k, h) in [(2, 2, 1, 2), (2, 2, 1, 3), (3, 2, 1, 2), (2, 3, 1, 2)] {
        group_axioms(GroupParams::new(q, n, k, h, Backend::PTypical).unwrap(), 200);
    }
}

/// Counts F-fixed matrices of the given shape by exhaustive enumeration.
fn count_rational(params: GroupParams, diagonal_only: bool) -> u64 {
    let g = DlGroup::new(params, 1).unwrap();
    let (n, h, size) = (params.n, params.h, g.ring.field().size() as u64);
    let positions: Vec<(usize, usize)> =
        (1..=n).flat_map(|i| (1..=n).map(move |j| (i, j))).filter(|&(i, j)| !diagonal_only || i == j).collect();
    // Each position has h - 1 free coordinates: U^1 on the diagonal, π-divisible below, truncated above.
    let free = |_: usize, _: usize| h - 1;
    let total_free: usize = positions.iter().map(|&(i, j)| free(i, j)).sum();
    let total = size.pow(total_free as u32);
    let mut count = 0;
    for mut idx in 0..total {
        let mut entries = vec![g.ring.zero(); n * n];
        for &(i, j) in &positions {
            let mut c = vec![0u32; h];
            let digits: Vec<u32> = (0..free(i, j))
                .map(|_| {
                    let d = (idx % size) as u32;
                    idx /= size;
                    d
                })
                .collect();
            if i == j {
                c[0] = 1;
                c[1..].copy_from_slice(&digits);
            } else if i > j {
                c[1..].copy_from_slice(&digits);
            } else {
                c[..h - 1].copy_from_slice(&digits);
            }
            entries[(i - 1) * n + (j - 1)] = g.ring.from_coords(c).unwrap();
        }
        let m = g.from_entries(entries).unwrap();
        if g.is_rational(&m).unwrap() {
            count += 1;
        }
    }
    count
}

#[test]
fn rational_subgroup_orders() {
    for backend in [Backend::EqualChar, Backend::PTypical] {
        for (q, n, h) in [(2u64, 2usize, 2usize), (2, 2, 3), (3, 2, 2)] {
            let p = GroupParams::new(q, n, 1, h, backend).unwrap();
            let e = (h - 1) as u32;
            assert_eq!(count_rational(p, false), q.pow(n as u32 * n as u32 * e), "U {q} {n} {h} {backend:?}");
            assert_eq!(count_rational(p, true), q.pow(n as u32 * e), "T {q} {n} {h} {backend:?}");
        }
    }
}

#[test]
fn torus_embedding_is_rational() {
    for backend in [Backend::EqualChar, Backend::PTypical] {
        let p = GroupParams::new(2, 3, 2, 2, backend).unwrap();
        let g = DlGroup::new(p, 1).unwrap();
        let size = g.ring.field().size();
        for a in 1..size {
            for b in 0..size {
                let t = g.ring.from_coords(vec![a, b]).unwrap();
                assert!(g.is_rational(&g.torus_embed(&t)).unwrap());
            }
        }
    }
}
