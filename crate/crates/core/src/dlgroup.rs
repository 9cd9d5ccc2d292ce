//! Iwahori-shaped matrices over 𝕎_h and the twisted Frobenius g ↦ ϖ^{-k} φ(g) ϖ^k.
//!
//! Indices are 1-based in the public API (rows and columns 1..=n) and 0-based in storage.
//! Above-diagonal entries are kept modulo V^{h-1} (top coordinate zero); below-diagonal
//! entries are full length-h vectors with vanishing leading coordinate.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{param, Error, Result};
use crate::gfq::{prime_power, FieldCtx};
use crate::witt::{Backend, WittJson, WittRing, WittVec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroupParams {
    pub q: u64,
    pub n: usize,
    pub k: usize,
    pub h: usize,
    pub backend: Backend,
}

impl GroupParams {
    pub fn new(q: u64, n: usize, k: usize, h: usize, backend: Backend) -> Result<GroupParams> {
        let gp = GroupParams { q, n, k, h, backend };
        gp.validate()?;
        Ok(gp)
    }

    pub fn validate(&self) -> Result<()> {
        let (_, f) = prime_power(self.q).ok_or_else(|| Error::InvalidParameter(format!("{} is not a prime power", self.q)))?;
        if self.n == 0 || self.h == 0 {
            return param("n and h must be positive");
        }
        if self.k == 0 || self.k.gcd(&self.n) != 1 {
            return param(format!("k = {} must be positive and coprime to n = {}", self.k, self.n));
        }
        match self.backend {
            Backend::PTypical if f != 1 => param("the mixed-characteristic backend requires q prime"),
            Backend::SimplifiedW => param("the simplified ring is not a model of 𝕎_h"),
            _ => Ok(()),
        }
    }

    pub fn p(&self) -> u32 {
        prime_power(self.q).unwrap().0
    }

    /// log_p q.
    pub fn f(&self) -> u32 {
        prime_power(self.q).unwrap().1
    }

    /// The coefficient field F_{q^{nm}}.
    pub fn field(&self, m: u32) -> Result<Arc<FieldCtx>> {
        FieldCtx::get(self.p(), self.f() * self.n as u32 * m)
    }

    pub fn ring(&self, m: u32) -> Result<WittRing> {
        WittRing::new(self.field(m)?, self.backend, self.h, self.f())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwistPerms {
    /// sigma[i-1] = σ(i)
    pub sigma: Vec<usize>,
    /// tau[i-1] = τ(i)
    pub tau: Vec<usize>,
}

fn reduced_k(n: usize, k: usize) -> usize {
    k % n
}

/// Row/column image of index a under conjugation by ϖ^k, and the π-exponent of ϖ^k in row a.
fn shift(n: usize, k: usize, a: usize) -> (usize, i64) {
    let k = reduced_k(n, k);
    if a + k > n {
        (a + k - n, 1)
    } else {
        (a + k, 0)
    }
}

pub fn derive_perms(n: usize, k: usize) -> Result<TwistPerms> {
    static CACHE: OnceLock<Mutex<HashMap<(usize, usize), TwistPerms>>> = OnceLock::new();
    if n == 0 || k.gcd(&n) != 1 {
        return param(format!("k = {k} is not coprime to n = {n}"));
    }
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(t) = cache.lock().unwrap().get(&(n, k)) {
        return Ok(t.clone());
    }
    // F(diag(y)) has entry φ(y_a) at position shift(a), so σ(shift(a)) = a.
    let mut sigma = vec![0; n];
    for a in 1..=n {
        sigma[shift(n, k, a).0 - 1] = a;
    }
    let mut tau = vec![usize::MAX; n];
    let mut i = 1;
    for j in 0..n {
        if tau[i - 1] != usize::MAX {
            return Err(Error::Internal("σ is not an n-cycle".into()));
        }
        tau[i - 1] = (n - j) % n;
        i = sigma[i - 1];
    }
    let t = TwistPerms { sigma, tau };
    cache.lock().unwrap().insert((n, k), t.clone());
    Ok(t)
}

/// Checks τ(σ(i)) + 1 = σ′(τ(i) + 1) for all i, with σ′ the permutation for k = 1.
pub fn sigma_tau_identity(n: usize, k: usize) -> Result<bool> {
    let t = derive_perms(n, k)?;
    let sp = derive_perms(n, 1)?.sigma;
    Ok((1..=n).all(|i| {
        let lhs = t.tau[t.sigma[i - 1] - 1] + 1;
        let rhs = sp[t.tau[i - 1]];
        lhs == rhs && t.tau[0] == 0
    }))
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroupElem {
    pub n: usize,
    pub entries: Vec<WittVec>,
}

impl GroupElem {
    pub fn get(&self, i: usize, j: usize) -> &WittVec {
        &self.entries[(i - 1) * self.n + (j - 1)]
    }

    fn set(&mut self, i: usize, j: usize, v: WittVec) {
        self.entries[(i - 1) * self.n + (j - 1)] = v;
    }
}

/// The group G of Iwahori-shaped matrices over 𝕎_h(F), with its F_q-structure.
#[derive(Debug, Clone)]
pub struct DlGroup {
    pub params: GroupParams,
    pub ring: WittRing,
    pub perms: TwistPerms,
}

impl DlGroup {
    /// The group over the coefficient field F_{q^{nm}}.
    pub fn new(params: GroupParams, m: u32) -> Result<DlGroup> {
        params.validate()?;
        let ring = params.ring(m)?;
        Ok(DlGroup { params, ring, perms: derive_perms(params.n, params.k)? })
    }

    pub fn with_ring(params: GroupParams, ring: WittRing) -> Result<DlGroup> {
        params.validate()?;
        Ok(DlGroup { params, ring, perms: derive_perms(params.n, params.k)? })
    }

    pub fn n(&self) -> usize {
        self.params.n
    }

    fn h(&self) -> usize {
        self.params.h
    }

    pub fn identity(&self) -> GroupElem {
        self.diag(&vec![self.ring.one(); self.n()])
    }

    pub fn diag(&self, d: &[WittVec]) -> GroupElem {
        let n = self.n();
        let mut g = GroupElem { n, entries: vec![self.ring.zero(); n * n] };
        for (i, v) in d.iter().enumerate() {
            g.set(i + 1, i + 1, v.clone());
        }
        g
    }

    /// Builds a matrix from row-major entries, reducing above-diagonal entries and
    /// checking the shape.
    pub fn from_entries(&self, entries: Vec<WittVec>) -> Result<GroupElem> {
        let n = self.n();
        if entries.len() != n * n {
            return param(format!("expected {} entries", n * n));
        }
        for e in &entries {
            self.ring.check(e)?;
        }
        let mut g = GroupElem { n, entries };
        self.normalize(&mut g)?;
        Ok(g)
    }

    fn normalize(&self, g: &mut GroupElem) -> Result<()> {
        let n = self.n();
        let h = self.h();
        for i in 1..=n {
            for j in 1..=n {
                let e = g.get(i, j);
                if i < j {
                    let t = self.ring.truncate(e, h - 1);
                    g.set(i, j, t);
                } else if i > j {
                    if e.coords[0] != 0 {
                        return Err(Error::InvalidInput(format!("entry ({i},{j}) below the diagonal is not divisible by π")));
                    }
                } else if !self.ring.is_unit(e) {
                    return Err(Error::InvalidInput(format!("diagonal entry ({i},{i}) is not a unit")));
                }
            }
        }
        Ok(())
    }

    pub fn check_shape(&self, g: &GroupElem) -> Result<()> {
        let mut c = g.clone();
        self.normalize(&mut c)?;
        if &c != g {
            return Err(Error::InvalidInput("above-diagonal entries are not reduced".into()));
        }
        Ok(())
    }

    pub fn in_u(&self, g: &GroupElem) -> bool {
        (1..=self.n()).all(|i| self.ring.in_filtration(g.get(i, i), 1))
    }

    pub fn in_t(&self, g: &GroupElem) -> bool {
        let n = self.n();
        (1..=n).all(|i| (1..=n).all(|j| i == j || g.get(i, j).coords.iter().all(|&c| c == 0)))
    }

    fn raw_mul(&self, a: &GroupElem, b: &GroupElem) -> GroupElem {
        let n = self.n();
        let r = &self.ring;
        let mut out = GroupElem { n, entries: Vec::with_capacity(n * n) };
        for i in 1..=n {
            for j in 1..=n {
                let mut acc = r.zero();
                for l in 1..=n {
                    acc = r.add(&acc, &r.mul(a.get(i, l), b.get(l, j)));
                }
                out.entries.push(acc);
            }
        }
        out
    }

    pub fn mul(&self, a: &GroupElem, b: &GroupElem) -> Result<GroupElem> {
        let mut c = self.raw_mul(a, b);
        self.normalize(&mut c)?;
        Ok(c)
    }

    pub fn inverse(&self, a: &GroupElem) -> Result<GroupElem> {
        let n = self.n();
        let r = &self.ring;
        let mut m = a.clone();
        let mut inv = self.identity();
        for c in 1..=n {
            let piv = r.unit_inverse(m.get(c, c)).map_err(|_| Error::InvalidInput("pivot is not a unit".into()))?;
            for j in 1..=n {
                let x = r.mul(&piv, m.get(c, j));
                m.set(c, j, x);
                let y = r.mul(&piv, inv.get(c, j));
                inv.set(c, j, y);
            }
            for i in 1..=n {
                if i == c {
                    continue;
                }
                let factor = m.get(i, c).clone();
                for j in 1..=n {
                    let x = r.sub(m.get(i, j), &r.mul(&factor, m.get(c, j)));
                    m.set(i, j, x);
                    let y = r.sub(inv.get(i, j), &r.mul(&factor, inv.get(c, j)));
                    inv.set(i, j, y);
                }
            }
        }
        self.normalize(&mut inv)?;
        Ok(inv)
    }

    /// F(g) = ϖ^{-k} φ(g) ϖ^k, entrywise: F(g)_{c(a),c(b)} = π^{e_b - e_a} φ(g_{ab}).
    pub fn twisted_frobenius(&self, g: &GroupElem) -> Result<GroupElem> {
        let n = self.n();
        let (k, r) = (self.params.k, &self.ring);
        let mut out = GroupElem { n, entries: vec![r.zero(); n * n] };
        for a in 1..=n {
            let (ca, ea) = shift(n, k, a);
            for b in 1..=n {
                let (cb, eb) = shift(n, k, b);
                let v = r.frobenius_w(g.get(a, b));
                let v = match eb - ea {
                    0 => v,
                    1 => r.pi_mul(&v),
                    _ => r.pi_div(&v)?,
                };
                out.set(ca, cb, v);
            }
        }
        self.normalize(&mut out)?;
        Ok(out)
    }

    pub fn is_rational(&self, g: &GroupElem) -> Result<bool> {
        Ok(&self.twisted_frobenius(g)? == g)
    }

    pub fn lang_map(&self, g: &GroupElem) -> Result<GroupElem> {
        let fg = self.twisted_frobenius(g)?;
        self.mul(&fg, &self.inverse(g)?)
    }

    /// Determinant in 𝕎_h; permutation expansion for n ≤ 5, elimination beyond.
    pub fn det(&self, g: &GroupElem) -> Result<WittVec> {
        let n = self.n();
        let r = &self.ring;
        if n <= 5 {
            let mut acc = r.zero();
            for (perm, sign) in permutations(n) {
                let mut t = g.get(1, perm[0] + 1).clone();
                for i in 2..=n {
                    t = r.mul(&t, g.get(i, perm[i - 1] + 1));
                }
                acc = if sign > 0 { r.add(&acc, &t) } else { r.sub(&acc, &t) };
            }
            return Ok(acc);
        }
        let mut m = g.clone();
        let mut det = r.one();
        for c in 1..=n {
            let piv = m.get(c, c).clone();
            let pinv = r.unit_inverse(&piv).map_err(|_| Error::InvalidInput("pivot is not a unit".into()))?;
            det = r.mul(&det, &piv);
            for i in c + 1..=n {
                let factor = r.mul(m.get(i, c), &pinv);
                for j in c..=n {
                    let x = r.sub(m.get(i, j), &r.mul(&factor, m.get(c, j)));
                    m.set(i, j, x);
                }
            }
        }
        Ok(det)
    }

    /// The standard-form matrix with the given first row: row c(a) is obtained from row a
    /// by the twisted Frobenius rule, walking the n-cycle from row 1.
    pub fn standard_form(&self, top_row: &[WittVec]) -> Result<GroupElem> {
        let n = self.n();
        if top_row.len() != n {
            return param(format!("top row must have {n} entries"));
        }
        let (k, r) = (self.params.k, &self.ring);
        let mut g = GroupElem { n, entries: vec![r.zero(); n * n] };
        for (j, v) in top_row.iter().enumerate() {
            r.check(v)?;
            let v = if j > 0 { r.truncate(v, self.h() - 1) } else { v.clone() };
            g.set(1, j + 1, v);
        }
        let mut a = 1;
        for _ in 1..n {
            let (ca, ea) = shift(n, k, a);
            for b in 1..=n {
                let (cb, eb) = shift(n, k, b);
                let v = r.frobenius_w(g.get(a, b));
                let v = match eb - ea {
                    0 => v,
                    1 => r.pi_mul(&v),
                    _ => r.pi_div(&v).map_err(|_| Error::Internal("negative π-exponent in standard form".into()))?,
                };
                g.set(ca, cb, v);
            }
            a = ca;
        }
        for i in 1..n {
            for j in i + 1..=n {
                let t = r.truncate(g.get(i, j), self.h() - 1);
                g.set(i, j, t);
            }
        }
        Ok(g)
    }

    /// The image of t ∈ 𝕎_h(F_{q^n}) in T: diag(φ^{τ(i)}(t)).
    pub fn torus_embed(&self, t: &WittVec) -> GroupElem {
        let d: Vec<WittVec> = self.perms.tau.iter().map(|&e| self.ring.frobenius_pow(t, e as i64)).collect();
        self.diag(&d)
    }

    pub fn to_json(&self, g: &GroupElem) -> Vec<Vec<WittJson>> {
        (1..=self.n()).map(|i| (1..=self.n()).map(|j| self.ring.to_json(g.get(i, j))).collect()).collect()
    }
}

/// All permutations of 0..n with their signs.
pub fn permutations(n: usize) -> Vec<(Vec<usize>, i32)> {
    fn rec(cur: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                cur.push(i);
                rec(cur, used, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out.into_iter()
        .map(|p| {
            let inv = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).filter(|&(i, j)| p[i] > p[j]).count();
            let s = if inv % 2 == 0 { 1 } else { -1 };
            (p, s)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn group(q: u64, n: usize, k: usize, h: usize, b: Backend, m: u32) -> DlGroup {
        DlGroup::new(GroupParams::new(q, n, k, h, b).unwrap(), m).unwrap()
    }

    #[test]
    fn perms_examples() {
        let t = derive_perms(2, 1).unwrap();
        assert_eq!(t.sigma, vec![2, 1]);
        assert_eq!(t.tau, vec![0, 1]);
        let t = derive_perms(3, 1).unwrap();
        assert_eq!(t.sigma, vec![3, 1, 2]);
        assert_eq!(t.tau, vec![0, 1, 2]);
        let t = derive_perms(1, 1).unwrap();
        assert_eq!((t.sigma, t.tau), (vec![1], vec![0]));
        assert!(derive_perms(4, 2).is_err());
    }

    #[test]
    fn sigma_tau_identity_small() {
        for n in 1..=8 {
            for k in 1..=2 * n {
                if k.gcd(&n) == 1 {
                    assert!(sigma_tau_identity(n, k).unwrap(), "n={n} k={k}");
                }
            }
        }
    }

    #[test]
    fn unipotent_product_example() {
        let g = group(2, 2, 1, 2, Backend::EqualChar, 1);
        let r = &g.ring;
        for b in 0..4 {
            for b2 in 0..4 {
                let x = g.from_entries(vec![r.one(), r.teichmuller(b), r.zero(), r.one()]).unwrap();
                let y = g.from_entries(vec![r.one(), r.teichmuller(b2), r.zero(), r.one()]).unwrap();
                let z = g.from_entries(vec![r.one(), r.teichmuller(b ^ b2), r.zero(), r.one()]).unwrap();
                assert_eq!(g.mul(&x, &y).unwrap(), z);
            }
        }
    }

    #[test]
    fn frobenius_of_diagonal() {
        let g = group(2, 3, 1, 2, Backend::EqualChar, 1);
        let r = &g.ring;
        let ys: Vec<WittVec> = (0..3).map(|i| r.from_coords(vec![1 + i, 5]).unwrap()).collect();
        let f = g.twisted_frobenius(&g.diag(&ys)).unwrap();
        for i in 1..=3 {
            let s = g.perms.sigma[i - 1];
            assert_eq!(f.get(i, i), &r.frobenius_w(&ys[s - 1]));
        }
        assert_eq!(g.twisted_frobenius(&g.identity()).unwrap(), g.identity());
        assert_eq!(g.lang_map(&g.identity()).unwrap(), g.identity());
        assert_eq!(g.det(&g.identity()).unwrap(), r.one());
    }

    #[test]
    fn standard_form_n2() {
        for b in [Backend::EqualChar, Backend::PTypical] {
            let g = group(2, 2, 1, 2, b, 1);
            let r = &g.ring;
            let a = r.from_coords(vec![1, 2]).unwrap();
            let bb = r.from_coords(vec![3, 0]).unwrap();
            let m = g.standard_form(&[a.clone(), bb.clone()]).unwrap();
            assert_eq!(m.get(1, 1), &a);
            assert_eq!(m.get(1, 2), &bb);
            assert_eq!(m.get(2, 1), &r.pi_mul(&r.frobenius_w(&bb)));
            assert_eq!(m.get(2, 2), &r.frobenius_w(&a));
        }
    }

    #[test]
    fn identity_top_row_gives_identity() {
        let g = group(3, 3, 2, 3, Backend::EqualChar, 1);
        let r = &g.ring;
        let top = vec![r.one(), r.zero(), r.zero()];
        assert_eq!(g.standard_form(&top).unwrap(), g.identity());
    }

    #[test]
    fn shape_violations_are_rejected() {
        let g = group(2, 2, 1, 2, Backend::EqualChar, 1);
        let r = &g.ring;
        assert!(g.from_entries(vec![r.one(), r.zero(), r.one(), r.one()]).is_err());
        assert!(g.from_entries(vec![r.zero(), r.zero(), r.zero(), r.one()]).is_err());
        assert!(g.from_entries(vec![r.one()]).is_err());
    }
}
