//! Points of X_h over F_{q^{nm}}: standard forms from a free top row, the determinant
//! rationality condition, exhaustive counts and twisted fixed-point counts.

use std::sync::Arc;
use std::time::Instant;

use num_integer::Integer;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dlgroup::{DlGroup, GroupElem, GroupParams};
use crate::error::{input, param, Error, Result};
use crate::gfq::{Embedding, Fe, FieldCtx, MAX_FIELD_SIZE};
use crate::witt::{WittRing, WittVec};

pub const DEFAULT_BUDGET: u128 = 1 << 30;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct XhPoint {
    pub top_row: Vec<WittVec>,
}

/// The automorphism x ↦ ζ^{-1} t^{-1} x g ζ composed with Fr_{q^n}^m.
/// `zeta` lies in F_{q^n}^×; `t`, `g` are principal units of 𝕎_h(F_{q^n}).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AutomorphismSpec {
    pub zeta: Fe,
    pub t: WittVec,
    pub g: WittVec,
    pub m: u32,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct CountRecord {
    pub params: GroupParams,
    pub m: u32,
    pub count: u64,
    pub elapsed_ms: u64,
}

/// X_h with coefficients in F_{q^{nm}}.
#[derive(Debug, Clone)]
pub struct XhVariety {
    pub group: DlGroup,
    pub m: u32,
}

fn checked_pow(base: u128, exp: usize) -> Option<u128> {
    (0..exp).try_fold(1u128, |acc, _| acc.checked_mul(base))
}

impl XhVariety {
    pub fn new(params: GroupParams, m: u32) -> Result<XhVariety> {
        if m == 0 {
            return param("m must be positive");
        }
        Ok(XhVariety { group: DlGroup::new(params, m)?, m })
    }

    fn over_ring(params: GroupParams, ring: WittRing) -> Result<XhVariety> {
        Ok(XhVariety { group: DlGroup::with_ring(params, ring)?, m: 0 })
    }

    pub fn params(&self) -> GroupParams {
        self.group.params
    }

    pub fn ring(&self) -> &WittRing {
        &self.group.ring
    }

    pub fn field(&self) -> &Arc<FieldCtx> {
        self.group.ring.field()
    }

    /// Number of free coordinates (1, j, l).
    pub fn free_coords(&self) -> usize {
        let p = self.params();
        p.n * (p.h - 1)
    }

    /// Top row from free coordinates: a_1 = [1, c_0..c_{h-2}], then h-1 coordinates per entry.
    pub fn top_row_from_coords(&self, c: &[Fe]) -> Vec<WittVec> {
        let p = self.params();
        let hm = p.h - 1;
        let r = self.ring();
        let mut row = Vec::with_capacity(p.n);
        let mut first = vec![1];
        first.extend_from_slice(&c[..hm]);
        row.push(WittVec { backend: r.backend(), coords: first });
        for j in 1..p.n {
            let mut v = c[j * hm..(j + 1) * hm].to_vec();
            v.push(0);
            row.push(WittVec { backend: r.backend(), coords: v });
        }
        row
    }

    fn check_top_row(&self, top_row: &[WittVec]) -> Result<()> {
        let p = self.params();
        if top_row.len() != p.n {
            return input(format!("top row needs {} entries", p.n));
        }
        for v in top_row {
            self.ring().check(v).map_err(|e| Error::InvalidInput(e.to_string()))?;
        }
        if !self.ring().in_filtration(&top_row[0], 1) {
            return input("a_1 must be a principal unit");
        }
        Ok(())
    }

    pub fn assemble(&self, top_row: &[WittVec]) -> Result<GroupElem> {
        self.check_top_row(top_row)?;
        self.group.standard_form(top_row)
    }

    pub fn is_member(&self, top_row: &[WittVec]) -> Result<bool> {
        let g = self.assemble(top_row)?;
        let d = self.group.det(&g)?;
        Ok(self.ring().is_rational(&d))
    }

    fn member_coords(&self, c: &[Fe]) -> bool {
        let row = self.top_row_from_coords(c);
        let g = self.group.standard_form(&row).expect("standard form");
        let d = self.group.det(&g).expect("determinant");
        self.ring().is_rational(&d)
    }

    /// #X_h(F_{q^{nm}}) by exhaustive enumeration of the free coordinates.
    pub fn count_points(&self, budget: u128) -> Result<u64> {
        let size = self.field().size() as u128;
        let nc = self.free_coords();
        let total = checked_pow(size, nc).unwrap_or(u128::MAX);
        if total > budget {
            return Err(Error::Budget { required: total, budget });
        }
        let size = size as u64;
        let count = (0..total as u64)
            .into_par_iter()
            .filter(|&idx| {
                let mut c = vec![0; nc];
                let mut x = idx;
                for slot in c.iter_mut() {
                    *slot = (x % size) as Fe;
                    x /= size;
                }
                self.member_coords(&c)
            })
            .count();
        Ok(count as u64)
    }

    pub fn count_record(&self, budget: u128) -> Result<CountRecord> {
        let start = Instant::now();
        let count = self.count_points(budget)?;
        Ok(CountRecord { params: self.params(), m: self.m, count, elapsed_ms: start.elapsed().as_millis() as u64 })
    }

    fn validate_spec(&self, spec: &AutomorphismSpec, base: &WittRing) -> Result<()> {
        if spec.zeta == 0 || spec.zeta >= base.field().size() {
            return Err(Error::InvalidInput("ζ must be a nonzero element of F_{q^n}".into()));
        }
        for u in [&spec.t, &spec.g] {
            base.check(u)?;
            if !base.in_filtration(u, 1) {
                return Err(Error::InvalidInput("t and g must be principal units".into()));
            }
        }
        if spec.m == 0 {
            return param("m must be positive");
        }
        Ok(())
    }

    /// Order of the automorphism x ↦ ζ^{-1} t^{-1} x g ζ (an upper bound: lcm of element orders).
    pub fn automorphism_order(params: GroupParams, spec: &AutomorphismSpec) -> Result<u64> {
        let base = params.ring(1)?;
        let fd = base.field();
        let zord = (1..fd.size() as u64).find(|&d| fd.pow(spec.zeta, d as u128) == 1).unwrap_or(1);
        let unit_order = |u: &WittVec| {
            let mut o = 1u64;
            let mut x = u.clone();
            while !base.is_one(&x) {
                x = base.pow(&x, params.p() as u128);
                o *= params.p() as u64;
            }
            o
        };
        Ok(zord.lcm(&unit_order(&spec.t)).lcm(&unit_order(&spec.g)))
    }

    /// #{x ∈ X_h : α(Fr^m(x)) = x}. Each top-row entry satisfies x_{1j} = c_j Fr(x_{1j})
    /// in 𝕎_h (or 𝕎_{h-1}); solutions are found coordinate by coordinate over
    /// F_{q^{nmN}} and then filtered by the determinant condition.
    pub fn count_twisted_fixed_points(params: GroupParams, spec: &AutomorphismSpec, budget: u128) -> Result<u64> {
        let base = params.ring(1)?;
        let xv = XhVariety::new(params, 1)?;
        xv.validate_spec(spec, &base)?;
        let ord = Self::automorphism_order(params, spec)?;
        let deg = params.f() as u64 * params.n as u64 * spec.m as u64 * ord;
        if (params.p() as u64).checked_pow(deg as u32).map_or(true, |s| s > MAX_FIELD_SIZE) {
            return param(format!("fixed points need F_{{{}^{deg}}}, beyond the supported field size", params.p()));
        }
        let big = FieldCtx::get(params.p(), deg as u32)?;
        let ring = base.over(big.clone())?;
        let var = XhVariety::over_ring(params, ring.clone())?;
        let emb = Embedding::new(base.field().clone(), big.clone())?;
        let lift = |v: &WittVec| WittVec { backend: v.backend, coords: v.coords.iter().map(|&c| emb.apply(c)).collect() };
        let (n, h) = (params.n, params.h);
        let step = (params.n as u32 * spec.m) as i64;
        let tau = &var.group.perms.tau;
        let zeta_j = |j: usize| ring.teichmuller(big.frob(emb.apply(spec.zeta), params.f() * tau[j] as u32));
        let g_j = |j: usize| ring.frobenius_pow(&lift(&spec.g), tau[j] as i64);
        let lead = ring.unit_inverse(&ring.mul(&zeta_j(0), &lift(&spec.t)))?;
        let per_entry_cost = big.size() as u128 * (n * h) as u128;
        if per_entry_cost > budget {
            return Err(Error::Budget { required: per_entry_cost, budget });
        }
        let mut solutions: Vec<Vec<WittVec>> = Vec::with_capacity(n);
        for j in 0..n {
            let c = ring.mul(&ring.mul(&lead, &g_j(j)), &zeta_j(j));
            let len = if j == 0 { h } else { h - 1 };
            let start = if j == 0 { 1 } else { 0 };
            let mut seed = ring.zero();
            if j == 0 {
                seed.coords[0] = 1;
            }
            let mut partial = vec![seed];
            for pos in start..len {
                let next: Vec<WittVec> = partial
                    .par_iter()
                    .flat_map_iter(|x| {
                        let ring = &ring;
                        let c = &c;
                        big.elements().filter_map(move |v| {
                            let mut y = x.clone();
                            y.coords[pos] = v;
                            let fy = ring.frobenius_pow(&y, step);
                            (ring.mul(c, &fy).coords[pos] == v).then_some(y)
                        })
                    })
                    .collect();
                partial = next;
            }
            solutions.push(partial);
        }
        let combos = solutions.iter().try_fold(1u128, |acc, s| acc.checked_mul(s.len() as u128)).unwrap_or(u128::MAX);
        if combos > budget {
            return Err(Error::Budget { required: combos, budget });
        }
        let sizes: Vec<usize> = solutions.iter().map(Vec::len).collect();
        let count = (0..combos as u64)
            .into_par_iter()
            .filter(|&idx| {
                let mut x = idx;
                let row: Vec<WittVec> = sizes
                    .iter()
                    .zip(&solutions)
                    .map(|(&s, sol)| {
                        let v = sol[(x % s as u64) as usize].clone();
                        x /= s as u64;
                        v
                    })
                    .collect();
                let g = var.group.standard_form(&row).expect("standard form");
                let d = var.group.det(&g).expect("determinant");
                var.ring().is_rational(&d)
            })
            .count();
        Ok(count as u64)
    }

    /// The same count by brute force over all of X_h(F_{q^{nmN}}); only for tiny cases.
    pub fn count_twisted_fixed_points_naive(params: GroupParams, spec: &AutomorphismSpec, budget: u128) -> Result<u64> {
        let base = params.ring(1)?;
        let ord = Self::automorphism_order(params, spec)?;
        let mm = spec.m * ord as u32;
        let var = XhVariety::new(params, mm)?;
        var.validate_spec(spec, &base)?;
        let big = var.field().clone();
        let ring = var.ring().clone();
        let emb = Embedding::new(base.field().clone(), big.clone())?;
        let lift = |v: &WittVec| WittVec { backend: v.backend, coords: v.coords.iter().map(|&c| emb.apply(c)).collect() };
        let n = params.n;
        let tau = var.group.perms.tau.clone();
        let zeta_d: Vec<WittVec> =
            (0..n).map(|j| ring.teichmuller(big.frob(emb.apply(spec.zeta), params.f() * tau[j] as u32))).collect();
        let zinv: Vec<WittVec> = zeta_d.iter().map(|z| ring.unit_inverse(z).unwrap()).collect();
        let tl = var.group.torus_embed(&lift(&spec.t));
        let gl = var.group.torus_embed(&lift(&spec.g));
        let left = var.group.mul(&var.group.diag(&zinv), &var.group.inverse(&tl)?)?;
        let right = var.group.mul(&gl, &var.group.diag(&zeta_d))?;
        let size = big.size() as u128;
        let nc = var.free_coords();
        let total = checked_pow(size, nc).unwrap_or(u128::MAX);
        if total > budget {
            return Err(Error::Budget { required: total, budget });
        }
        let step = params.n as i64 * spec.m as i64;
        let count = (0..total as u64)
            .into_par_iter()
            .filter(|&idx| {
                let mut c = vec![0; nc];
                let mut x = idx;
                for slot in c.iter_mut() {
                    *slot = (x % size as u64) as Fe;
                    x /= size as u64;
                }
                if !var.member_coords(&c) {
                    return false;
                }
                let m = var.group.standard_form(&var.top_row_from_coords(&c)).unwrap();
                let fr = GroupElem { n, entries: m.entries.iter().map(|e| ring.frobenius_pow(e, step)).collect() };
                let moved = var.group.mul(&var.group.mul(&left, &fr).unwrap(), &right).unwrap();
                moved == m
            })
            .count();
        Ok(count as u64)
    }
}

pub fn assemble(top_row: &[WittVec], params: GroupParams, m: u32) -> Result<GroupElem> {
    XhVariety::new(params, m)?.assemble(top_row)
}

pub fn is_member(top_row: &[WittVec], params: GroupParams, m: u32) -> Result<bool> {
    XhVariety::new(params, m)?.is_member(top_row)
}

pub fn count_points(params: GroupParams, m: u32) -> Result<u64> {
    XhVariety::new(params, m)?.count_points(DEFAULT_BUDGET)
}

pub fn count_twisted_fixed_points(params: GroupParams, spec: &AutomorphismSpec) -> Result<u64> {
    XhVariety::count_twisted_fixed_points(params, spec, DEFAULT_BUDGET)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::witt::Backend;

    fn params(q: u64, n: usize, k: usize, h: usize) -> GroupParams {
        GroupParams::new(q, n, k, h, Backend::EqualChar).unwrap()
    }

    #[test]
    fn membership_examples() {
        let x = XhVariety::new(params(2, 2, 1, 2), 1).unwrap();
        let r = x.ring();
        let g = x.field().generator();
        assert!(x.is_member(&[r.one(), r.zero()]).unwrap());
        let top = [r.one(), r.teichmuller(g)];
        let d = x.group.det(&x.assemble(&top).unwrap()).unwrap();
        assert_eq!(d.coords, vec![1, 1]);
        assert!(x.is_member(&top).unwrap());
        let x2 = XhVariety::new(params(2, 2, 1, 2), 2).unwrap();
        let r2 = x2.ring();
        let g2 = x2.field().generator();
        assert!(!x2.is_member(&[r2.one(), r2.teichmuller(g2)]).unwrap());
        assert!(x.is_member(&[r.zero(), r.zero()]).is_err());
        assert!(x.is_member(&[r.one()]).is_err());
    }

    #[test]
    fn small_counts() {
        assert_eq!(count_points(params(2, 2, 1, 2), 1).unwrap(), 16);
        assert_eq!(count_points(params(2, 2, 1, 2), 2).unwrap(), 16);
        assert_eq!(count_points(params(2, 3, 1, 2), 1).unwrap(), 512);
    }

    #[test]
    fn budget_is_enforced() {
        let x = XhVariety::new(params(2, 2, 1, 3), 2).unwrap();
        match x.count_points(1000) {
            Err(Error::Budget { required, budget }) => assert_eq!((required, budget), (65536, 1000)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn trivial_twist_is_plain_count() {
        let p = params(2, 2, 1, 2);
        let r = p.ring(1).unwrap();
        for m in [1, 2] {
            let spec = AutomorphismSpec { zeta: 1, t: r.one(), g: r.one(), m };
            assert_eq!(count_twisted_fixed_points(p, &spec).unwrap(), count_points(p, m).unwrap());
        }
    }

    #[test]
    fn fast_and_naive_fixed_points_agree() {
        let p = params(2, 2, 1, 2);
        let r = p.ring(1).unwrap();
        let g = r.field().generator();
        let spec = AutomorphismSpec { zeta: g, t: r.one(), g: r.one(), m: 1 };
        let fast = XhVariety::count_twisted_fixed_points(p, &spec, DEFAULT_BUDGET).unwrap();
        let naive = XhVariety::count_twisted_fixed_points_naive(p, &spec, DEFAULT_BUDGET).unwrap();
        assert_eq!(fast, naive);
        assert_eq!(fast, 4);
    }
}
