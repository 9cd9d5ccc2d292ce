//! Truncated rings 𝕎_h over a finite field.
//!
//! Three backends share one coordinate representation `[a_0, ..., a_{h-1}]`:
//! power series `Σ a_i π^i` in equal characteristic, p-typical Witt vectors
//! (q = p only), and the simplified ring with coordinatewise addition.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{param, Error, Result};
use crate::gfq::{Fe, FieldCtx};

/// Largest p^{h-1} for which p-typical addition and multiplication polynomials are generated.
pub const MAX_PTYPICAL_DEGREE: u64 = 27;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Backend {
    EqualChar,
    PTypical,
    SimplifiedW,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WittVec {
    pub backend: Backend,
    pub coords: Vec<Fe>,
}

impl WittVec {
    pub fn h(&self) -> usize {
        self.coords.len()
    }
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct WittJson {
    pub backend: Backend,
    pub h: usize,
    pub coords: Vec<Vec<u32>>,
}

/// A polynomial over F_p in the variables X_0..X_{h-1}, Y_0..Y_{h-1}.
#[derive(Debug, Clone)]
struct ModPoly {
    terms: Vec<(u32, Vec<(usize, u64)>)>,
}

#[derive(Debug)]
struct WittPolys {
    sum: Vec<ModPoly>,
    prod: Vec<ModPoly>,
}

type Exps = Vec<u64>;
type ZPoly = BTreeMap<Exps, BigInt>;

fn zp_add(a: &ZPoly, b: &ZPoly, sign: i32) -> ZPoly {
    let mut r = a.clone();
    for (k, v) in b {
        let e = r.entry(k.clone()).or_insert_with(BigInt::zero);
        if sign >= 0 {
            *e += v;
        } else {
            *e -= v;
        }
    }
    r.retain(|_, v| !v.is_zero());
    r
}

fn zp_mul(a: &ZPoly, b: &ZPoly) -> ZPoly {
    let mut r = ZPoly::new();
    for (ka, va) in a {
        for (kb, vb) in b {
            let k: Exps = ka.iter().zip(kb).map(|(x, y)| x + y).collect();
            *r.entry(k).or_insert_with(BigInt::zero) += va * vb;
        }
    }
    r.retain(|_, v| !v.is_zero());
    r
}

fn zp_pow(a: &ZPoly, mut n: u64, nvars: usize) -> ZPoly {
    let mut r = ZPoly::new();
    r.insert(vec![0; nvars], BigInt::one());
    let mut b = a.clone();
    while n > 0 {
        if n & 1 == 1 {
            r = zp_mul(&r, &b);
        }
        n >>= 1;
        if n > 0 {
            b = zp_mul(&b, &b);
        }
    }
    r
}

fn zp_scale(a: &ZPoly, c: &BigInt) -> ZPoly {
    a.iter().map(|(k, v)| (k.clone(), v * c)).collect()
}

fn zp_div_exact(a: &ZPoly, c: &BigInt) -> ZPoly {
    a.iter()
        .map(|(k, v)| {
            let (q, r) = v.div_rem(c);
            assert!(r.is_zero(), "Witt polynomial division is not exact");
            (k.clone(), q)
        })
        .collect()
}

fn zp_var(nvars: usize, i: usize) -> ZPoly {
    let mut k = vec![0; nvars];
    k[i] = 1;
    ZPoly::from([(k, BigInt::one())])
}

fn ghost(p: u64, n: usize, offset: usize, nvars: usize) -> ZPoly {
    let mut w = ZPoly::new();
    for i in 0..=n {
        let term = zp_pow(&zp_var(nvars, offset + i), p.pow((n - i) as u32), nvars);
        w = zp_add(&w, &zp_scale(&term, &BigInt::from(p).pow(i as u32)), 1);
    }
    w
}

fn reduce_mod_p(a: &ZPoly, p: u64) -> ModPoly {
    let pb = BigInt::from(p);
    let mut terms = Vec::new();
    for (k, v) in a {
        let c = v.mod_floor(&pb).to_u32().unwrap();
        if c != 0 {
            let sparse = k.iter().enumerate().filter(|(_, &e)| e > 0).map(|(i, &e)| (i, e)).collect();
            terms.push((c, sparse));
        }
    }
    ModPoly { terms }
}

fn generate_polys(p: u64, h: usize) -> WittPolys {
    let nvars = 2 * h;
    let mut s: Vec<ZPoly> = Vec::new();
    let mut m: Vec<ZPoly> = Vec::new();
    for n in 0..h {
        let wx = ghost(p, n, 0, nvars);
        let wy = ghost(p, n, h, nvars);
        let mut rs = zp_add(&wx, &wy, 1);
        let mut rm = zp_mul(&wx, &wy);
        for i in 0..n {
            let c = BigInt::from(p).pow(i as u32);
            let e = p.pow((n - i) as u32);
            rs = zp_add(&rs, &zp_scale(&zp_pow(&s[i], e, nvars), &c), -1);
            rm = zp_add(&rm, &zp_scale(&zp_pow(&m[i], e, nvars), &c), -1);
        }
        let d = BigInt::from(p).pow(n as u32);
        s.push(zp_div_exact(&rs, &d));
        m.push(zp_div_exact(&rm, &d));
    }
    WittPolys {
        sum: s.iter().map(|f| reduce_mod_p(f, p)).collect(),
        prod: m.iter().map(|f| reduce_mod_p(f, p)).collect(),
    }
}

fn witt_polys(p: u32, h: usize) -> Result<Arc<WittPolys>> {
    static CACHE: OnceLock<Mutex<HashMap<(u32, usize), Arc<WittPolys>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if (p as u64).pow(h.saturating_sub(1) as u32) > MAX_PTYPICAL_DEGREE {
        return param(format!("p-typical Witt polynomials for p = {p}, h = {h} exceed the supported degree"));
    }
    let mut guard = cache.lock().unwrap();
    let polys = guard.entry((p, h)).or_insert_with(|| Arc::new(generate_polys(p as u64, h)));
    Ok(polys.clone())
}

/// The ring 𝕎_h over a field F_{p^e}, with Frobenius φ = (x ↦ x^q), q = p^f.
#[derive(Debug, Clone)]
pub struct WittRing {
    field: Arc<FieldCtx>,
    backend: Backend,
    h: usize,
    f: u32,
    polys: Option<Arc<WittPolys>>,
}

impl WittRing {
    pub fn new(field: Arc<FieldCtx>, backend: Backend, h: usize, f: u32) -> Result<WittRing> {
        if h == 0 {
            return param("truncation length must be positive");
        }
        if f == 0 || field.degree() % f != 0 {
            return param(format!("q = p^{f} is not a subfield order of F_p^{}", field.degree()));
        }
        let polys = match backend {
            Backend::PTypical => {
                if f != 1 {
                    return param("the p-typical backend requires q = p");
                }
                Some(witt_polys(field.p(), h)?)
            }
            _ => None,
        };
        Ok(WittRing { field, backend, h, f, polys })
    }

    pub fn field(&self) -> &Arc<FieldCtx> {
        &self.field
    }

    pub fn backend(&self) -> Backend {
        self.backend
    }

    pub fn h(&self) -> usize {
        self.h
    }

    /// log_p q.
    pub fn q_exp(&self) -> u32 {
        self.f
    }

    /// The same ring over another field.
    pub fn over(&self, field: Arc<FieldCtx>) -> Result<WittRing> {
        WittRing::new(field, self.backend, self.h, self.f)
    }

    /// The same ring truncated at a different length.
    pub fn with_h(&self, h: usize) -> Result<WittRing> {
        WittRing::new(self.field.clone(), self.backend, h, self.f)
    }

    pub fn zero(&self) -> WittVec {
        WittVec { backend: self.backend, coords: vec![0; self.h] }
    }

    pub fn one(&self) -> WittVec {
        self.teichmuller(1)
    }

    pub fn teichmuller(&self, x: Fe) -> WittVec {
        let mut v = self.zero();
        v.coords[0] = x;
        v
    }

    pub fn from_coords(&self, coords: Vec<Fe>) -> Result<WittVec> {
        if coords.len() != self.h {
            return param(format!("expected {} coordinates, got {}", self.h, coords.len()));
        }
        if coords.iter().any(|&c| c >= self.field.size()) {
            return Err(Error::InvalidInput("coordinate outside the field".into()));
        }
        Ok(WittVec { backend: self.backend, coords })
    }

    pub fn check(&self, a: &WittVec) -> Result<()> {
        if a.backend != self.backend {
            return param(format!("backend mismatch: {:?} vs {:?}", a.backend, self.backend));
        }
        if a.coords.len() != self.h {
            return param(format!("length mismatch: {} vs {}", a.coords.len(), self.h));
        }
        Ok(())
    }

    pub fn try_add(&self, a: &WittVec, b: &WittVec) -> Result<WittVec> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.add(a, b))
    }

    pub fn try_mul(&self, a: &WittVec, b: &WittVec) -> Result<WittVec> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.mul(a, b))
    }

    fn eval(&self, poly: &ModPoly, a: &[Fe], b: &[Fe]) -> Fe {
        let fd = &*self.field;
        let mut acc = 0;
        for (c, vars) in &poly.terms {
            let mut t = *c;
            for &(v, e) in vars {
                let x = if v < self.h { a[v] } else { b[v - self.h] };
                t = fd.mul(t, fd.pow(x, e as u128));
                if t == 0 {
                    break;
                }
            }
            acc = fd.add(acc, t);
        }
        acc
    }

    pub fn add(&self, a: &WittVec, b: &WittVec) -> WittVec {
        let fd = &*self.field;
        let coords = match &self.polys {
            Some(pp) => (0..self.h).map(|i| self.eval(&pp.sum[i], &a.coords, &b.coords)).collect(),
            None => a.coords.iter().zip(&b.coords).map(|(&x, &y)| fd.add(x, y)).collect(),
        };
        WittVec { backend: self.backend, coords }
    }

    pub fn neg(&self, a: &WittVec) -> WittVec {
        let fd = &*self.field;
        match &self.polys {
            Some(pp) => {
                let mut b = self.zero();
                for i in 0..self.h {
                    let s = self.eval(&pp.sum[i], &a.coords, &b.coords);
                    b.coords[i] = fd.neg(s);
                }
                b
            }
            None => WittVec { backend: self.backend, coords: a.coords.iter().map(|&x| fd.neg(x)).collect() },
        }
    }

    pub fn sub(&self, a: &WittVec, b: &WittVec) -> WittVec {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &WittVec, b: &WittVec) -> WittVec {
        let fd = &*self.field;
        let h = self.h;
        let coords = match self.backend {
            Backend::EqualChar => (0..h)
                .map(|i| (0..=i).fold(0, |acc, j| fd.add(acc, fd.mul(a.coords[j], b.coords[i - j]))))
                .collect(),
            Backend::SimplifiedW => (0..h)
                .map(|i| {
                    (0..=i).fold(0, |acc, j| {
                        let x = fd.frob(a.coords[j], self.f * (i - j) as u32);
                        let y = fd.frob(b.coords[i - j], self.f * j as u32);
                        fd.add(acc, fd.mul(x, y))
                    })
                })
                .collect(),
            Backend::PTypical => {
                let pp = self.polys.as_ref().unwrap();
                (0..h).map(|i| self.eval(&pp.prod[i], &a.coords, &b.coords)).collect()
            }
        };
        WittVec { backend: self.backend, coords }
    }

    /// Multiplication by an integer.
    pub fn mul_int(&self, c: i64, a: &WittVec) -> WittVec {
        match self.backend {
            Backend::EqualChar | Backend::SimplifiedW => WittVec {
                backend: self.backend,
                coords: a.coords.iter().map(|&x| self.field.scale(c, x)).collect(),
            },
            Backend::PTypical => {
                let mut acc = self.zero();
                let base = if c < 0 { self.neg(a) } else { a.clone() };
                for _ in 0..c.unsigned_abs() {
                    acc = self.add(&acc, &base);
                }
                acc
            }
        }
    }

    pub fn pow(&self, a: &WittVec, mut n: u128) -> WittVec {
        let mut r = self.one();
        let mut b = a.clone();
        while n > 0 {
            if n & 1 == 1 {
                r = self.mul(&r, &b);
            }
            n >>= 1;
            if n > 0 {
                b = self.mul(&b, &b);
            }
        }
        r
    }

    /// φ^k, with negative k meaning the inverse Frobenius.
    pub fn frobenius_pow(&self, a: &WittVec, k: i64) -> WittVec {
        let e = self.field.degree() as i64;
        let s = (k * self.f as i64).rem_euclid(e) as u32;
        WittVec { backend: self.backend, coords: a.coords.iter().map(|&x| self.field.frob(x, s)).collect() }
    }

    pub fn frobenius_w(&self, a: &WittVec) -> WittVec {
        self.frobenius_pow(a, 1)
    }

    pub fn verschiebung(&self, a: &WittVec) -> WittVec {
        let mut coords = vec![0; self.h];
        coords[1..].copy_from_slice(&a.coords[..self.h - 1]);
        WittVec { backend: self.backend, coords }
    }

    pub fn pi_mul(&self, a: &WittVec) -> WittVec {
        match self.backend {
            Backend::EqualChar => self.verschiebung(a),
            _ => self.verschiebung(&self.frobenius_w(a)),
        }
    }

    pub fn pi_pow_mul(&self, a: &WittVec, k: usize) -> WittVec {
        (0..k).fold(a.clone(), |acc, _| self.pi_mul(&acc))
    }

    /// Division by π of an element with vanishing leading coordinate; the top coordinate
    /// of the quotient is set to 0.
    pub fn pi_div(&self, a: &WittVec) -> Result<WittVec> {
        if a.coords[0] != 0 {
            return Err(Error::Domain("element is not divisible by π".into()));
        }
        let mut coords = vec![0; self.h];
        coords[..self.h - 1].copy_from_slice(&a.coords[1..]);
        let v = WittVec { backend: self.backend, coords };
        Ok(match self.backend {
            Backend::EqualChar => v,
            _ => self.frobenius_pow(&v, -1),
        })
    }

    /// Zero the coordinates from index `len` on (reduction modulo V^len).
    pub fn truncate(&self, a: &WittVec, len: usize) -> WittVec {
        let mut v = a.clone();
        for c in v.coords.iter_mut().skip(len) {
            *c = 0;
        }
        v
    }

    pub fn is_unit(&self, a: &WittVec) -> bool {
        a.coords[0] != 0
    }

    pub fn is_one(&self, a: &WittVec) -> bool {
        a.coords[0] == 1 && a.coords[1..].iter().all(|&c| c == 0)
    }

    /// Membership in 𝕎_h^{(r)} = 1 + V^r 𝕎_{h-r}.
    pub fn in_filtration(&self, a: &WittVec, r: usize) -> bool {
        a.coords[0] == 1 && a.coords[1..r.min(self.h)].iter().all(|&c| c == 0)
    }

    /// True iff every coordinate lies in F_q.
    pub fn is_rational(&self, a: &WittVec) -> bool {
        a.coords.iter().all(|&c| self.field.frob(c, self.f) == c)
    }

    pub fn unit_inverse(&self, u: &WittVec) -> Result<WittVec> {
        let inv0 = self.field.inv(u.coords[0]).ok_or_else(|| Error::Domain("element is not a unit".into()))?;
        let two = self.add(&self.one(), &self.one());
        let mut v = self.teichmuller(inv0);
        for _ in 0..=self.h {
            let uv = self.mul(u, &v);
            if self.is_one(&uv) {
                return Ok(v);
            }
            v = self.mul(&v, &self.sub(&two, &uv));
        }
        if self.is_one(&self.mul(u, &v)) {
            Ok(v)
        } else {
            Err(Error::Internal("Newton iteration for the inverse did not converge".into()))
        }
    }

    pub fn to_json(&self, a: &WittVec) -> WittJson {
        WittJson { backend: a.backend, h: a.h(), coords: a.coords.iter().map(|&c| self.field.coeffs(c)).collect() }
    }

    pub fn from_json(&self, j: &WittJson) -> Result<WittVec> {
        if j.backend != self.backend || j.h != self.h {
            return param("serialized Witt vector does not match the ring");
        }
        let coords = j.coords.iter().map(|c| self.field.from_coeffs(c)).collect::<Result<Vec<_>>>()?;
        self.from_coords(coords)
    }
}
