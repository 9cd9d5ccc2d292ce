//! Finite fields F_{p^e} defined by Conway polynomials.
//!
//! Elements are packed integers: the coefficient of x^i is the i-th base-p digit.
//! Fields up to 2^16 elements carry discrete log tables.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{param, Error, Result};

pub type Fe = u32;

pub const MAX_FIELD_SIZE: u64 = 1 << 24;
const TABLE_LIMIT: u64 = 1 << 16;

/// Published Conway polynomials (coefficients from x^0 upward), used as a cross-check
/// for the search in [`conway_polynomial`].
pub const KNOWN_CONWAY: &[(u32, u32, &[u32])] = &[
    (2, 1, &[1, 1]),
    (2, 2, &[1, 1, 1]),
    (2, 3, &[1, 1, 0, 1]),
    (2, 4, &[1, 1, 0, 0, 1]),
    (2, 5, &[1, 0, 1, 0, 0, 1]),
    (2, 6, &[1, 1, 0, 1, 1, 0, 1]),
    (2, 7, &[1, 1, 0, 0, 0, 0, 0, 1]),
    (2, 8, &[1, 0, 1, 1, 1, 0, 0, 0, 1]),
    (3, 1, &[1, 1]),
    (3, 2, &[2, 2, 1]),
    (3, 3, &[1, 2, 0, 1]),
    (3, 4, &[2, 0, 0, 2, 1]),
    (5, 1, &[3, 1]),
    (5, 2, &[2, 4, 1]),
    (7, 1, &[4, 1]),
    (7, 2, &[3, 6, 1]),
];

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub fn divisors(n: u32) -> Vec<u32> {
    (1..=n).filter(|d| n % d == 0).collect()
}

/// Returns k with q = p^k, if q is a power of p.
pub fn log_p(q: u64, p: u32) -> Option<u32> {
    if q == 0 {
        return None;
    }
    let (mut q, mut k) = (q, 0);
    while q % p as u64 == 0 {
        q /= p as u64;
        k += 1;
    }
    (q == 1).then_some(k)
}

/// Splits a prime power q into (p, f) with q = p^f.
pub fn prime_power(q: u64) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q % d == 0)?;
    log_p(q, p as u32).map(|f| (p as u32, f))
}

fn mod_pow(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

fn least_primitive_root(p: u32) -> u32 {
    if p == 2 {
        return 1;
    }
    let fs = prime_factors(p as u64 - 1);
    (2..p)
        .find(|&g| fs.iter().all(|&r| mod_pow(g as u64, (p as u64 - 1) / r, p as u64) != 1))
        .unwrap()
}

/// Dense polynomial arithmetic in F_p[x]/(f) for monic f.
struct PolyMod<'a> {
    p: u32,
    f: &'a [u32],
}

impl PolyMod<'_> {
    fn deg(&self) -> usize {
        self.f.len() - 1
    }

    fn mul(&self, a: &[u32], b: &[u32]) -> Vec<u32> {
        let e = self.deg();
        let p = self.p as u64;
        let mut prod = vec![0u64; 2 * e];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p;
            }
        }
        for k in (e..2 * e).rev() {
            let c = prod[k] % p;
            if c == 0 {
                continue;
            }
            for i in 0..e {
                prod[k - e + i] = (prod[k - e + i] + (p - c) * self.f[i] as u64) % p;
            }
            prod[k] = 0;
        }
        prod.truncate(e);
        prod.into_iter().map(|c| c as u32).collect()
    }

    fn one(&self) -> Vec<u32> {
        let mut v = vec![0; self.deg()];
        v[0] = 1;
        v
    }

    fn x(&self) -> Vec<u32> {
        let mut v = vec![0; self.deg()];
        if self.deg() == 1 {
            v[0] = (self.p - self.f[0]) % self.p;
        } else {
            v[1] = 1;
        }
        v
    }

    fn pow(&self, a: &[u32], mut n: u64) -> Vec<u32> {
        let mut r = self.one();
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

    fn eval(&self, poly: &[u32], at: &[u32]) -> Vec<u32> {
        let mut acc = vec![0; self.deg()];
        for &c in poly.iter().rev() {
            acc = self.mul(&acc, at);
            acc[0] = (acc[0] + c) % self.p;
        }
        acc
    }
}

fn conway_cache() -> &'static Mutex<HashMap<(u32, u32), Vec<u32>>> {
    static CACHE: OnceLock<Mutex<HashMap<(u32, u32), Vec<u32>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// The Conway polynomial of degree e over F_p: the least primitive polynomial, in the
/// alternating-sign lexicographic order, compatible with all lower-degree ones.
pub fn conway_polynomial(p: u32, e: u32) -> Result<Vec<u32>> {
    if !is_prime(p as u64) {
        return param(format!("{p} is not prime"));
    }
    if e == 0 || (p as u64).checked_pow(e).map_or(true, |s| s > MAX_FIELD_SIZE) {
        return param(format!("field of order {p}^{e} is out of range"));
    }
    if let Some(f) = conway_cache().lock().unwrap().get(&(p, e)) {
        return Ok(f.clone());
    }
    let f = conway_search(p, e)?;
    conway_cache().lock().unwrap().insert((p, e), f.clone());
    Ok(f)
}

fn conway_search(p: u32, e: u32) -> Result<Vec<u32>> {
    let g0 = least_primitive_root(p);
    if e == 1 {
        return Ok(vec![(p - g0) % p, 1]);
    }
    let order = (p as u64).pow(e) - 1;
    let order_primes = prime_factors(order);
    let mut subs = Vec::new();
    for r in prime_factors(e as u64) {
        let d = e / r as u32;
        subs.push((d, conway_polynomial(p, d)?));
    }
    let eu = e as usize;
    let sign = |i: usize, k: u32| if (eu - i) % 2 == 0 { k } else { (p - k) % p };
    let candidates = (p as u64).pow(e - 1);
    let mut f = vec![0u32; eu + 1];
    f[eu] = 1;
    f[0] = sign(0, g0);
    for key in 0..candidates {
        let mut rest = key;
        // the digit for x^{e-1} is the most significant one of key
        for i in 1..eu {
            f[i] = sign(i, (rest % p as u64) as u32);
            rest /= p as u64;
        }
        let ring = PolyMod { p, f: &f };
        let x = ring.x();
        if ring.pow(&x, order) != ring.one() {
            continue;
        }
        if order_primes.iter().any(|&r| ring.pow(&x, order / r) == ring.one()) {
            continue;
        }
        let compatible = subs.iter().all(|(d, c)| {
            let y = ring.pow(&x, order / ((p as u64).pow(*d) - 1));
            ring.eval(c, &y).iter().all(|&v| v == 0)
        });
        if compatible {
            return Ok(f);
        }
    }
    Err(Error::Internal(format!("no Conway polynomial found for {p}^{e}")))
}

/// The field F_{p^e} = F_p[x]/(C_{p,e}), generated by the class of x.
#[derive(Debug)]
pub struct FieldCtx {
    p: u32,
    e: u32,
    size: u32,
    modulus: Vec<u32>,
    pw: Vec<u32>,
    gen: Fe,
    exp: Vec<Fe>,
    log: Vec<u32>,
}

fn field_cache() -> &'static Mutex<HashMap<(u32, u32), Arc<FieldCtx>>> {
    static CACHE: OnceLock<Mutex<HashMap<(u32, u32), Arc<FieldCtx>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

impl FieldCtx {
    /// Shared context for F_{p^e}; contexts are built once and cached.
    pub fn get(p: u32, e: u32) -> Result<Arc<FieldCtx>> {
        if let Some(f) = field_cache().lock().unwrap().get(&(p, e)) {
            return Ok(f.clone());
        }
        let ctx = Arc::new(FieldCtx::build(p, e)?);
        Ok(field_cache().lock().unwrap().entry((p, e)).or_insert(ctx).clone())
    }

    fn build(p: u32, e: u32) -> Result<FieldCtx> {
        let modulus = conway_polynomial(p, e)?;
        let pw: Vec<u32> = (0..=e).map(|i| p.pow(i)).collect();
        let size = pw[e as usize];
        let gen = if e == 1 { (p - modulus[0]) % p } else { p };
        let mut ctx = FieldCtx { p, e, size, modulus, pw, gen, exp: Vec::new(), log: Vec::new() };
        if size as u64 <= TABLE_LIMIT {
            let n = size as usize - 1;
            let mut exp = Vec::with_capacity(2 * n);
            let mut log = vec![0u32; size as usize];
            let mut x: Fe = 1;
            for i in 0..n {
                exp.push(x);
                log[x as usize] = i as u32;
                x = ctx.mul_slow(x, gen);
            }
            if x != 1 {
                return Err(Error::Internal(format!("generator of {p}^{e} is not primitive")));
            }
            for i in 0..n {
                exp.push(exp[i]);
            }
            ctx.exp = exp;
            ctx.log = log;
        }
        Ok(ctx)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.e
    }

    pub fn size(&self) -> u32 {
        self.size
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn generator(&self) -> Fe {
        self.gen
    }

    pub fn has_tables(&self) -> bool {
        !self.exp.is_empty()
    }

    pub fn elements(&self) -> std::ops::Range<Fe> {
        0..self.size
    }

    /// Coefficients of x^0, x^1, ... over F_p.
    pub fn coeffs(&self, x: Fe) -> Vec<u32> {
        let mut v = Vec::with_capacity(self.e as usize);
        let mut r = x;
        for _ in 0..self.e {
            v.push(r % self.p);
            r /= self.p;
        }
        v
    }

    pub fn from_coeffs(&self, c: &[u32]) -> Result<Fe> {
        if c.len() > self.e as usize || c.iter().any(|&d| d >= self.p) {
            return Err(Error::InvalidInput(format!("bad coefficient vector {c:?} for F_{}^{}", self.p, self.e)));
        }
        Ok(c.iter().rev().fold(0, |acc, &d| acc * self.p + d))
    }

    pub fn from_int(&self, n: i64) -> Fe {
        n.rem_euclid(self.p as i64) as Fe
    }

    #[inline]
    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        if self.p == 2 {
            return a ^ b;
        }
        let (mut a, mut b, mut r) = (a, b, 0);
        for i in 0..self.e as usize {
            let d = (a % self.p + b % self.p) % self.p;
            r += d * self.pw[i];
            a /= self.p;
            b /= self.p;
        }
        r
    }

    #[inline]
    pub fn neg(&self, a: Fe) -> Fe {
        if self.p == 2 {
            return a;
        }
        let (mut a, mut r) = (a, 0);
        for i in 0..self.e as usize {
            r += ((self.p - a % self.p) % self.p) * self.pw[i];
            a /= self.p;
        }
        r
    }

    #[inline]
    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        self.add(a, self.neg(b))
    }

    /// Multiplication by an integer.
    pub fn scale(&self, c: i64, a: Fe) -> Fe {
        let c = c.rem_euclid(self.p as i64) as u32;
        if c == 0 {
            return 0;
        }
        let (mut a, mut r) = (a, 0);
        for i in 0..self.e as usize {
            r += (a % self.p * c % self.p) * self.pw[i];
            a /= self.p;
        }
        r
    }

    #[inline]
    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        if a == 0 || b == 0 {
            return 0;
        }
        if self.exp.is_empty() {
            return self.mul_slow(a, b);
        }
        self.exp[(self.log[a as usize] + self.log[b as usize]) as usize]
    }

    fn mul_slow(&self, a: Fe, b: Fe) -> Fe {
        let e = self.e as usize;
        if self.p == 2 {
            let (a, b) = (a as u64, b as u64);
            let mut prod = 0u64;
            for i in 0..e {
                if (b >> i) & 1 == 1 {
                    prod ^= a << i;
                }
            }
            let red: u64 = self.modulus.iter().enumerate().map(|(i, &c)| (c as u64) << i).sum();
            for k in (e..2 * e).rev() {
                if (prod >> k) & 1 == 1 {
                    prod ^= red << (k - e);
                }
            }
            return prod as Fe;
        }
        let ring = PolyMod { p: self.p, f: &self.modulus };
        let r = ring.mul(&self.coeffs(a), &self.coeffs(b));
        r.iter().rev().fold(0, |acc, &d| acc * self.p + d)
    }

    pub fn pow(&self, a: Fe, n: u128) -> Fe {
        if n == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        if !self.exp.is_empty() {
            let ord = self.size as u128 - 1;
            let k = (self.log[a as usize] as u128 * (n % ord)) % ord;
            return self.exp[k as usize];
        }
        let (mut r, mut b, mut n) = (1, a, n);
        while n > 0 {
            if n & 1 == 1 {
                r = self.mul(r, b);
            }
            b = self.mul(b, b);
            n >>= 1;
        }
        r
    }

    pub fn inv(&self, a: Fe) -> Option<Fe> {
        if a == 0 {
            return None;
        }
        if !self.exp.is_empty() {
            let ord = self.size - 1;
            return Some(self.exp[((ord - self.log[a as usize]) % ord) as usize]);
        }
        Some(self.pow(a, self.size as u128 - 2))
    }

    /// x^{p^k}.
    #[inline]
    pub fn frob(&self, a: Fe, k: u32) -> Fe {
        let k = k % self.e;
        if k == 0 || a == 0 {
            return a;
        }
        if !self.exp.is_empty() {
            let ord = self.size as u64 - 1;
            let m = (self.log[a as usize] as u64 * self.pw[k as usize] as u64) % ord;
            return self.exp[m as usize];
        }
        self.pow(a, self.pw[k as usize] as u128)
    }

    /// x^q for a power q of p.
    pub fn frobenius(&self, a: Fe, q: u64) -> Result<Fe> {
        match log_p(q, self.p) {
            Some(k) => Ok(self.frob(a, k % self.e)),
            None => param(format!("{q} is not a power of {}", self.p)),
        }
    }

    fn check_sub(&self, m: u32) -> Result<()> {
        if m == 0 || self.e % m != 0 {
            return param(format!("{m} does not divide the degree {}", self.e));
        }
        Ok(())
    }

    /// Trace to the subfield F_{p^m}.
    pub fn trace_to(&self, a: Fe, m: u32) -> Result<Fe> {
        self.check_sub(m)?;
        Ok((0..self.e / m).fold(0, |acc, i| self.add(acc, self.frob(a, m * i))))
    }

    /// Norm to the subfield F_{p^m}.
    pub fn norm_to(&self, a: Fe, m: u32) -> Result<Fe> {
        self.check_sub(m)?;
        Ok((0..self.e / m).fold(1, |acc, i| self.mul(acc, self.frob(a, m * i))))
    }

    /// True iff a lies in the subfield F_{p^m}.
    pub fn in_subfield(&self, a: Fe, m: u32) -> bool {
        self.frob(a, m) == a
    }

    /// Discrete logarithm to the base of the generator (table-backed fields only).
    pub fn log(&self, a: Fe) -> Option<u32> {
        if a == 0 || self.exp.is_empty() {
            return None;
        }
        Some(self.log[a as usize])
    }

    /// Generator raised to the n-th power.
    pub fn gen_pow(&self, n: u128) -> Fe {
        self.pow(self.gen, n)
    }

    /// Image of a subfield element under the Conway embedding.
    pub fn embed(&self, sub: &FieldCtx, a: Fe) -> Result<Fe> {
        if sub.p != self.p || self.e % sub.e != 0 {
            return param(format!("F_{}^{} is not a subfield of F_{}^{}", sub.p, sub.e, self.p, self.e));
        }
        if sub.e == 1 {
            return Ok(a);
        }
        let img = self.gen_pow((self.size as u128 - 1) / (sub.size as u128 - 1));
        Ok(sub.coeffs(a).iter().rev().fold(0, |acc, &c| self.add(self.mul(acc, img), c)))
    }

    /// Additive-character conductor. `psi[x]` is the exponent of the p-th root of unity
    /// ψ(x), for every element x of this field viewed as F_{q^n} with q = p^f.
    pub fn additive_char_conductor(&self, psi: &[u32], f: u32, n: u32) -> Result<u32> {
        if f * n != self.e {
            return param(format!("degree {} is not {f}*{n}", self.e));
        }
        if psi.len() != self.size as usize || psi.iter().any(|&v| v >= self.p) {
            return Err(Error::InvalidInput("character table has wrong size or values".into()));
        }
        for x in self.elements() {
            let lin = self
                .coeffs(x)
                .iter()
                .zip(&self.pw)
                .fold(0u64, |acc, (&c, &b)| acc + c as u64 * psi[b as usize] as u64);
            if lin % self.p as u64 != psi[x as usize] as u64 {
                return Err(Error::InvalidInput("character is not additive".into()));
            }
        }
        for m in divisors(n) {
            if self.elements().all(|x| psi[self.frob(x, f * m) as usize] == psi[x as usize]) {
                return Ok(m);
            }
        }
        unreachable!("psi is fixed by the full Frobenius power")
    }
}

/// An embedding F_{p^d} → F_{p^e} tabulated in both directions.
#[derive(Debug, Clone)]
pub struct Embedding {
    pub sub: Arc<FieldCtx>,
    pub sup: Arc<FieldCtx>,
    fwd: Vec<Fe>,
    back: HashMap<Fe, Fe>,
}

impl Embedding {
    pub fn new(sub: Arc<FieldCtx>, sup: Arc<FieldCtx>) -> Result<Embedding> {
        let fwd: Vec<Fe> = sub.elements().map(|a| sup.embed(&sub, a)).collect::<Result<_>>()?;
        let back = fwd.iter().enumerate().map(|(i, &y)| (y, i as Fe)).collect();
        Ok(Embedding { sub, sup, fwd, back })
    }

    pub fn apply(&self, a: Fe) -> Fe {
        self.fwd[a as usize]
    }

    pub fn restrict(&self, a: Fe) -> Option<Fe> {
        self.back.get(&a).copied()
    }
}
